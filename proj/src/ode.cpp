#include "wlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wlab/error.hpp"

namespace wlab::ode {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (error weights).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

State lin(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [coef, k] : terms) {
    out[0] += h * coef * (*k)[0];
    out[1] += h * coef * (*k)[1];
  }
  return out;
}

}  // namespace

DormandPrince::DormandPrince(Rhs rhs, Options opts) : rhs_(std::move(rhs)), opts_(opts) {}

void DormandPrince::advance(double t0, double t1, State& y) {
  if (!(t1 > t0)) return;
  double t = t0;
  double h = h_ > 0.0 ? std::min(h_, t1 - t0) : 1e-3 * (t1 - t0);
  State k1 = rhs_(t, y);
  while (t < t1) {
    if (++steps_ > opts_.max_steps) {
      std::ostringstream msg;
      msg << "ODE step budget exhausted at t = " << t;
      throw ConvergenceError(msg.str());
    }
    bool last = false;
    if (t + h >= t1 || t + 1.0000001 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    const State k2 = rhs_(t + c2 * h, lin(y, h, {{a21, &k1}}));
    const State k3 = rhs_(t + c3 * h, lin(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs_(t + c4 * h, lin(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 =
        rhs_(t + c5 * h, lin(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs_(t + h, lin(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y5 = lin(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs_(t + h, y5);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double ei =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(ei) / sc);
    }
    if (!std::isfinite(err)) {
      h *= 0.25;
    } else if (err <= 1.0) {
      t = last ? t1 : t + h;
      y = y5;
      k1 = k7;
      const double fac = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
      if (!last) h *= std::max(0.2, fac);
      else h_ = h * std::max(0.2, fac);
      if (!last) h_ = h;
      continue;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
    if (h < 1e-14 * std::abs(t) || h == 0.0) {
      std::ostringstream msg;
      msg << "ODE step size underflow at t = " << t;
      throw ConvergenceError(msg.str());
    }
  }
}

}  // namespace wlab::ode
