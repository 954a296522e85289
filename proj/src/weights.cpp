#include "wlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wlab {

std::string_view to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::Constant: return "constant";
    case WeightFamily::LinearDecreasing: return "linear-decreasing";
    case WeightFamily::ExponentialDecay: return "exponential-decay";
    case WeightFamily::TabulatedSpline: return "tabulated-spline";
  }
  return "unknown";
}

std::optional<WeightFamily> parse_weight_family(std::string_view name) {
  for (auto f : {WeightFamily::Constant, WeightFamily::LinearDecreasing,
                 WeightFamily::ExponentialDecay, WeightFamily::TabulatedSpline}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// C^1 piecewise quadratic through the knots. Each interval gets one or two
// quadratic pieces; the split point is chosen so that the slope is monotone
// across the interval whenever the secant lies between the end slopes.
std::vector<WeightFunction::Piece> build_spline(const std::vector<double>& t,
                                                const std::vector<double>& p) {
  const std::size_t knots = t.size();
  const std::size_t intervals = knots - 1;
  std::vector<double> h(intervals), delta(intervals), s(knots);
  for (std::size_t i = 0; i < intervals; ++i) {
    h[i] = t[i + 1] - t[i];
    delta[i] = (p[i + 1] - p[i]) / h[i];
  }
  if (intervals == 1) {
    s[0] = s[1] = delta[0];
  } else {
    for (std::size_t i = 1; i < intervals; ++i)
      s[i] = (h[i] * delta[i - 1] + h[i - 1] * delta[i]) / (h[i - 1] + h[i]);
    s[0] = 2.0 * delta[0] - s[1];
    s[intervals] = 2.0 * delta[intervals - 1] - s[intervals - 1];
    if (delta[0] <= 0.0) s[0] = std::min(s[0], delta[0]);
    if (delta[intervals - 1] <= 0.0)
      s[intervals] = std::clamp(s[intervals], delta[intervals - 1], 0.0);
  }

  std::vector<WeightFunction::Piece> pieces;
  for (std::size_t i = 0; i < intervals; ++i) {
    const double a = t[i], b = t[i + 1], hi = h[i], d = delta[i];
    const double sl = s[i], sr = s[i + 1];
    const double scale = std::max({std::abs(sl), std::abs(sr), std::abs(d), 1e-300});
    const auto linear = [&]() { pieces.push_back({a, b, p[i], d, 0.0}); };
    if (std::abs(sl + sr - 2.0 * d) <= 1e-14 * scale) {
      pieces.push_back({a, b, p[i], sl, (sr - sl) / (2.0 * hi)});
      continue;
    }
    double u = 0.5;
    const bool between = (sl <= d && d <= sr) || (sr <= d && d <= sl);
    if (between && sl != sr) {
      u = (sr - d) / (sr - sl);
      if (u <= 1e-12 || u >= 1.0 - 1e-12) {
        // End slope equals the secant: a kink at the knot keeps the sign of
        // the curvature.
        linear();
        continue;
      }
    }
    const double xi = a + u * hi;
    const double sbar = (2.0 * d * hi - sl * (xi - a) - sr * (b - xi)) / hi;
    const double c1 = (sbar - sl) / (2.0 * (xi - a));
    pieces.push_back({a, xi, p[i], sl, c1});
    const double pxi = p[i] + sl * (xi - a) + c1 * (xi - a) * (xi - a);
    const double c2 = (sr - sbar) / (2.0 * (b - xi));
    pieces.push_back({xi, b, pxi, sbar, c2});
  }
  return pieces;
}

}  // namespace

WeightFunction make_weight(WeightFamily family, std::vector<double> params, double domain_cap) {
  require(domain_cap > 0.0 && std::isfinite(domain_cap), "weight domain_cap must be positive");
  for (double v : params) require(std::isfinite(v), "weight parameters must be finite");
  WeightFunction w;
  w.family_ = family;
  w.domain_cap_ = domain_cap;
  switch (family) {
    case WeightFamily::Constant:
      require(params.size() == 1, "constant weight takes [c]");
      break;
    case WeightFamily::LinearDecreasing:
      require(params.size() == 2, "linear-decreasing weight takes [c, a]");
      require(params[1] >= 0.0, "linear-decreasing slope a must be >= 0");
      break;
    case WeightFamily::ExponentialDecay:
      require(params.size() == 3, "exponential-decay weight takes [c, b, lambda]");
      require(params[1] >= 0.0, "exponential-decay amplitude b must be >= 0");
      require(params[2] > 0.0, "exponential-decay rate lambda must be > 0");
      break;
    case WeightFamily::TabulatedSpline: {
      require(params.size() >= 4 && params.size() % 2 == 0,
              "tabulated-spline weight takes [t0, phi0, t1, phi1, ...] with at least two knots");
      std::vector<double> t, p;
      for (std::size_t i = 0; i < params.size(); i += 2) {
        t.push_back(params[i]);
        p.push_back(params[i + 1]);
      }
      for (std::size_t i = 1; i < t.size(); ++i)
        require(t[i] > t[i - 1], "tabulated-spline knot abscissae must be strictly increasing");
      require(t.front() <= 0.0, "tabulated-spline must start at t <= 0");
      require(t.back() >= domain_cap, "tabulated-spline must cover [0, domain_cap]");
      w.pieces_ = build_spline(t, p);
      break;
    }
  }
  w.params_ = std::move(params);
  return w;
}

const WeightFunction::Piece& WeightFunction::piece_at(double t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double x, const Piece& pc) { return x < pc.t0; });
  if (it == pieces_.begin()) return pieces_.front();
  return *(it - 1);
}

double WeightFunction::value(double t) const {
  switch (family_) {
    case WeightFamily::Constant: return params_[0] + offset_;
    case WeightFamily::LinearDecreasing: return params_[0] - params_[1] * t + offset_;
    case WeightFamily::ExponentialDecay:
      return params_[0] + params_[1] * std::exp(-params_[2] * t) + offset_;
    case WeightFamily::TabulatedSpline: {
      const Piece& pc = piece_at(t);
      const double x = std::min(t, pc.t1) - pc.t0;
      double v = pc.a + pc.b * x + pc.c * x * x;
      if (t > pc.t1) v += (pc.b + 2.0 * pc.c * (pc.t1 - pc.t0)) * (t - pc.t1);
      return v + offset_;
    }
  }
  return 0.0;
}

double WeightFunction::d1(double t) const {
  switch (family_) {
    case WeightFamily::Constant: return 0.0;
    case WeightFamily::LinearDecreasing: return -params_[1];
    case WeightFamily::ExponentialDecay:
      return -params_[1] * params_[2] * std::exp(-params_[2] * t);
    case WeightFamily::TabulatedSpline: {
      const Piece& pc = piece_at(t);
      return pc.b + 2.0 * pc.c * (std::min(t, pc.t1) - pc.t0);
    }
  }
  return 0.0;
}

double WeightFunction::d2(double t) const {
  switch (family_) {
    case WeightFamily::Constant:
    case WeightFamily::LinearDecreasing: return 0.0;
    case WeightFamily::ExponentialDecay:
      return params_[1] * params_[2] * params_[2] * std::exp(-params_[2] * t);
    case WeightFamily::TabulatedSpline: {
      const Piece& pc = piece_at(t);
      return t > pc.t1 ? 0.0 : 2.0 * pc.c;
    }
  }
  return 0.0;
}

double WeightFunction::density(double t) const { return std::exp(-value(t)); }

WeightFunction WeightFunction::shifted(double c) const {
  WeightFunction w = *this;
  w.offset_ += c;
  return w;
}

std::string WeightFunction::tag() const {
  std::ostringstream out;
  out << to_string(family_);
  if (family_ == WeightFamily::TabulatedSpline) {
    out << "(" << params_.size() / 2 << " knots)";
  } else {
    out << "(";
    for (std::size_t i = 0; i < params_.size(); ++i) out << (i ? "," : "") << params_[i];
    out << ")";
  }
  if (offset_ != 0.0) out << "+" << offset_;
  return out.str();
}

double WeightFunction::max_abs_slope(double t_max) const {
  double worst = 0.0;
  constexpr int samples = 512;
  for (int i = 0; i <= samples; ++i)
    worst = std::max(worst, std::abs(d1(t_max * i / samples)));
  return worst;
}

std::string CertificationReport::summary() const {
  std::ostringstream out;
  out << std::setprecision(10);
  if (passed) {
    out << "Property I certified on [0, " << domain_cap << "] with " << grid_points
        << " grid points (tol " << tolerance << "): max phi' = " << max_slope
        << ", min phi'' = " << min_curvature;
  } else {
    out << "Property I violated: " << first_violation << " at grid point t = "
        << first_violation_at.value_or(0.0) << " (max phi' = " << max_slope << " at t = "
        << max_slope_at << ", min phi'' = " << min_curvature << " at t = " << min_curvature_at
        << ")";
  }
  out << "; " << note;
  return out.str();
}

CertificationReport property_I_certify(WeightFunction& phi, int grid_points, double tol) {
  if (grid_points < 100) throw std::invalid_argument("certification grid needs at least 100 points");
  CertificationReport rep;
  rep.grid_points = grid_points;
  rep.tolerance = tol;
  rep.domain_cap = phi.domain_cap();
  rep.max_slope = -std::numeric_limits<double>::infinity();
  rep.min_curvature = std::numeric_limits<double>::infinity();
  rep.note = "checked on [0, domain_cap] only, a finite surrogate for [0, infinity)";
  for (int i = 0; i < grid_points; ++i) {
    const double t = phi.domain_cap() * i / (grid_points - 1);
    const double g = phi.d1(t);
    const double c = phi.d2(t);
    if (g > rep.max_slope) {
      rep.max_slope = g;
      rep.max_slope_at = t;
    }
    if (c < rep.min_curvature) {
      rep.min_curvature = c;
      rep.min_curvature_at = t;
    }
    if (!rep.first_violation_at && (g > tol || c < -tol)) {
      rep.first_violation_at = t;
      rep.first_violation = g > tol ? "phi' > tol" : "phi'' < -tol";
    }
  }
  rep.passed = !rep.first_violation_at.has_value();
  phi.certified_ = rep.passed;
  return rep;
}

}  // namespace wlab
