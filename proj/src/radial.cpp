#include "wlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "wlab/error.hpp"
#include "wlab/ode.hpp"
#include "wlab/quadrature.hpp"
#include "wlab/roots.hpp"

namespace wlab {
namespace {

struct Mode {
  int n;
  int l;
  SpaceForm space;
  const WeightFunction& phi;
  double inner;
  double outer;
  ShootingOptions opts;

  double angular() const { return static_cast<double>(l) * (l + n - 2); }
  bool regular_origin() const { return inner == 0.0; }
  double t_start() const { return regular_origin() ? opts.t_min_factor * outer : inner; }

  ode::State rhs(double t, const ode::State& y, double mu) const {
    const double s = s_kappa(t, space);
    const double drift = (n - 1) * c_kappa(t, space) / s - phi.d1(t);
    return {y[1], -drift * y[1] - (mu - angular() / (s * s)) * y[0]};
  }

  // Start values divided by t0^l, so the integrated T is O(1) at t0.
  ode::State start(double mu) const {
    if (!regular_origin()) return {1.0, 0.0};
    const double t = t_start();
    const double p1 = phi.d1(0.0);
    const double p2 = phi.d2(0.0);
    const double s = space.is_hyperbolic() ? 1.0 : 0.0;
    const double ld = l, nd = n;
    const double c1 = ld * p1 / (2.0 * ld + nd - 1.0);
    const double c2 =
        (-2.0 * ld * ld * ld * s - 5.0 * ld * ld * nd * s + 3.0 * ld * ld * p1 * p1 +
         6.0 * ld * ld * p2 + 7.0 * ld * ld * s - 6.0 * ld * mu - 2.0 * ld * nd * nd * s +
         3.0 * ld * nd * p2 + 5.0 * ld * nd * s + 3.0 * ld * p1 * p1 - 3.0 * ld * p2 -
         3.0 * ld * s - 3.0 * mu * nd + 3.0 * mu) /
        (6.0 * (2.0 * ld + nd) * (2.0 * ld + nd - 1.0));
    const double u = 1.0 + c1 * t + c2 * t * t;
    const double du = (ld + (ld + 1.0) * c1 * t + (ld + 2.0) * c2 * t * t) / t;
    return {u, l == 0 ? c1 + 2.0 * c2 * t : du};
  }

  double start_scale() const { return regular_origin() ? std::pow(t_start(), l) : 1.0; }

  ode::Options ode_options() const { return {opts.abs_tol, opts.rel_tol, 400000}; }

  double end_slope(double mu) const {
    ode::State y = start(mu);
    ode::DormandPrince dp([&](double t, const ode::State& s) { return rhs(t, s, mu); },
                          ode_options());
    dp.set_initial_step(1e-2 * t_start());
    dp.advance(t_start(), outer, y);
    return y[1];
  }

  std::vector<ProfileSample> sample(double mu) const {
    const int count = std::max(opts.profile_samples, 16);
    const double t0 = t_start();
    std::vector<ProfileSample> out;
    out.reserve(count);
    ode::State y = start(mu);
    ode::DormandPrince dp([&](double t, const ode::State& s) { return rhs(t, s, mu); },
                          ode_options());
    dp.set_initial_step(1e-2 * t0);
    const double scale = start_scale();
    double prev = t0;
    for (int k = 0; k < count; ++k) {
      double t = t0 + 0.5 * (outer - t0) * (1.0 - std::cos(std::numbers::pi * k / (count - 1)));
      if (k == count - 1) t = outer;
      dp.advance(prev, t, y);
      prev = t;
      const ode::State d = rhs(t, y, mu);
      out.push_back({t, scale * y[0], scale * y[1], scale * d[1]});
    }
    return out;
  }

  int expected_zeros(int which) const { return l == 0 ? which : which - 1; }
};

int count_sign_changes(const std::vector<ProfileSample>& prof) {
  double ref = 0.0;
  for (const auto& s : prof) ref = std::max(ref, std::abs(s.value));
  int changes = 0;
  int sign = 0;
  for (const auto& s : prof) {
    if (std::abs(s.value) <= 1e-10 * ref) continue;
    const int sg = s.value > 0 ? 1 : -1;
    if (sign != 0 && sg != sign) ++changes;
    sign = sg;
  }
  return changes;
}

double default_mu_cap(const Mode& m, int which) {
  const double width = m.outer - m.inner;
  double est = std::pow((std::numbers::pi * which + m.l + 0.5 * m.n) / width, 2);
  if (m.inner > 0.0) est += m.angular() / std::pow(s_kappa(m.inner, m.space), 2);
  if (m.space.is_hyperbolic()) est += 0.25 * (m.n - 1) * (m.n - 1);
  return 4.0 * est * (1.0 + m.phi.max_abs_slope(m.outer) * m.outer);
}

RadialSolution solve_mode(const Mode& m, int which, const BallSpec& ball) {
  if (which < 1) throw std::invalid_argument("eigenvalue index must be >= 1");
  if (m.l < 0) throw std::invalid_argument("mode degree must be >= 0");
  if (!(m.outer > m.inner) || m.inner < 0.0)
    throw std::invalid_argument("need 0 <= inner_radius < outer_radius");
  if (!m.phi.certified()) throw std::invalid_argument("radial solve needs a certified weight");

  const double cap = m.opts.mu_cap > 0.0 ? m.opts.mu_cap : default_mu_cap(m, which);
  const auto g = [&](double mu) { return m.end_slope(mu); };

  int points = std::max(m.opts.scan_points, 8);
  for (int attempt = 0; attempt < 3; ++attempt, points *= 4) {
    // Uniform in sqrt(mu): eigenvalues are roughly evenly spaced there.
    std::vector<double> grid;
    grid.reserve(points + 1);
    grid.push_back(1e-6 * cap / points);
    for (int k = 1; k <= points; ++k) grid.push_back(cap * std::pow(double(k) / points, 2));
    double prev_mu = grid[0];
    double prev_g = g(prev_mu);
    int found = 0;
    std::optional<std::pair<double, double>> bracket;
    for (std::size_t k = 1; k < grid.size() && !bracket; ++k) {
      const double gk = g(grid[k]);
      if ((gk > 0.0) != (prev_g > 0.0) || gk == 0.0) {
        if (++found == which) bracket = {prev_mu, grid[k]};
      }
      prev_mu = grid[k];
      prev_g = gk;
    }
    if (!bracket) {
      std::ostringstream msg;
      msg << "no eigenvalue #" << which << " of mode l=" << m.l << " in (0, " << cap
          << "]; only " << found << " sign changes of T'(R)";
      throw BracketError(msg.str());
    }
    const auto root = roots::brent(g, bracket->first, bracket->second, 0.0, m.opts.mu_tol);
    RadialSolution sol;
    sol.mu = root.root;
    sol.profile = m.sample(sol.mu);
    sol.mode_degree = m.l;
    sol.which = which;
    sol.inner_radius = m.inner;
    sol.ball = ball;
    sol.phi = m.phi;
    if (count_sign_changes(sol.profile) != m.expected_zeros(which)) continue;

    double max_slope = 0.0;
    for (const auto& s : sol.profile) max_slope = std::max(max_slope, std::abs(s.deriv));
    sol.residual = max_slope > 0.0 ? std::abs(sol.profile.back().deriv) / max_slope : 0.0;
    if (m.l == 1 && which == 1 && m.regular_origin()) {
      for (std::size_t k = 0; k + 1 < sol.profile.size(); ++k) {
        if (!(sol.profile[k].deriv > 0.0)) {
          std::ostringstream msg;
          msg << "T' vanishes at t = " << sol.profile[k].t << " before the boundary";
          sol.warnings.push_back(msg.str());
          break;
        }
      }
    }
    return sol;
  }
  throw ConvergenceError("eigenvalue scan could not isolate mode l=" + std::to_string(m.l) +
                         " #" + std::to_string(which) + " (node count mismatch)");
}

// Quintic Hermite on one sample interval; returns (value, derivative).
std::pair<double, double> hermite5(const ProfileSample& a, const ProfileSample& b, double t) {
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double H2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
  const double H3 = 0.5 * (s3 - 2 * s4 + s5);
  const double H4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double H5 = 10 * s3 - 15 * s4 + 6 * s5;
  const double D0 = -30 * s2 + 60 * s3 - 30 * s4;
  const double D1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  const double D2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
  const double D3 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
  const double D4 = -12 * s2 + 28 * s3 - 15 * s4;
  const double D5 = 30 * s2 - 60 * s3 + 30 * s4;
  const double v = a.value * H0 + h * a.deriv * H1 + h * h * a.deriv2 * H2 +
                   h * h * b.deriv2 * H3 + h * b.deriv * H4 + b.value * H5;
  const double d = (a.value * D0 + h * a.deriv * D1 + h * h * a.deriv2 * D2 +
                    h * h * b.deriv2 * D3 + h * b.deriv * D4 + b.value * D5) /
                   h;
  return {v, d};
}

std::pair<double, double> interpolate(const std::vector<ProfileSample>& prof, double t) {
  if (t <= prof.front().t) {
    // Below the regularized start the profile is continued linearly from 0.
    const auto& s = prof.front();
    return {s.value * t / s.t, s.value / s.t};
  }
  if (t >= prof.back().t) return {prof.back().value, prof.back().deriv};
  auto it = std::upper_bound(prof.begin(), prof.end(), t,
                             [](double x, const ProfileSample& s) { return x < s.t; });
  return hermite5(*(it - 1), *it, t);
}

}  // namespace

double RadialSolution::value_at(double t) const { return interpolate(profile, t).first; }
double RadialSolution::deriv_at(double t) const { return interpolate(profile, t).second; }

RadialSolution shoot_first_mode(const BallSpec& ball, const WeightFunction& phi,
                                const ShootingOptions& opts) {
  return shoot_general_mode(1, 0.0, ball, phi, 1, opts);
}

RadialSolution shoot_general_mode(int l, double inner_radius, const BallSpec& outer,
                                  const WeightFunction& phi, int which,
                                  const ShootingOptions& opts) {
  outer.validate();
  const Mode m{outer.dimension, l, outer.space, phi, inner_radius, outer.radius, opts};
  return solve_mode(m, which, outer);
}

ExtendedProfile::ExtendedProfile(RadialSolution base) : base_(std::move(base)) {}

double ExtendedProfile::f(double t) const {
  if (t >= radius()) return base_.profile.back().value;
  return interpolate(base_.profile, t).first;
}

double ExtendedProfile::df(double t) const {
  if (t > radius()) return 0.0;
  return interpolate(base_.profile, t).second;
}

ExtendedProfile extend_profile(const RadialSolution& sol) {
  if (sol.mode_degree != 1 || sol.inner_radius != 0.0 || sol.which != 1)
    throw std::invalid_argument("extend_profile needs the first l = 1 mode on a ball");
  return ExtendedProfile(sol);
}

std::string MonotonicityReport::summary() const {
  std::ostringstream out;
  out << (passed ? "monotone" : "NOT monotone") << ": max increase of f/S = "
      << worst_ratio_increase << " on [" << worst_ratio_lo << ", " << worst_ratio_hi
      << "], min f' on [0,R] = " << min_slope << " at t = " << min_slope_at
      << " (tol " << tolerance << ", grid " << grid << ")";
  return out.str();
}

MonotonicityReport check_radial_monotonicity(const ExtendedProfile& ext, int grid,
                                             std::optional<double> domain_cap) {
  if (grid < 1000) throw std::invalid_argument("monotonicity grid needs at least 1000 points");
  const auto& sol = ext.base();
  const double cap = domain_cap.value_or(sol.phi.domain_cap());
  const double R = ext.radius();
  MonotonicityReport rep;
  rep.grid = grid;
  rep.domain_cap = cap;

  double max_f = 0.0;
  for (const auto& s : sol.profile) max_f = std::max(max_f, std::abs(s.value));
  rep.tolerance = 1e-8 * max_f;
  rep.worst_ratio_increase = -std::numeric_limits<double>::infinity();
  rep.min_slope = std::numeric_limits<double>::infinity();

  double prev_t = cap / grid;
  double prev_ratio = ext.f(prev_t) / s_kappa(prev_t, sol.ball.space);
  for (int i = 2; i <= grid; ++i) {
    const double t = cap * i / grid;
    const double ratio = ext.f(t) / s_kappa(t, sol.ball.space);
    if (ratio - prev_ratio > rep.worst_ratio_increase) {
      rep.worst_ratio_increase = ratio - prev_ratio;
      rep.worst_ratio_lo = prev_t;
      rep.worst_ratio_hi = t;
    }
    prev_t = t;
    prev_ratio = ratio;
  }
  const auto slope_probe = [&](double t) {
    const double d = ext.df(t);
    if (d < rep.min_slope) {
      rep.min_slope = d;
      rep.min_slope_at = t;
    }
  };
  for (int i = 0; i <= grid; ++i) slope_probe(R * i / grid);
  for (const auto& s : sol.profile) slope_probe(s.t);
  rep.passed = rep.worst_ratio_increase <= rep.tolerance && rep.min_slope >= -rep.tolerance;
  return rep;
}

RayleighIntegrals ball_rayleigh_integrals(const ExtendedProfile& ext, double lower,
                                          double upper) {
  if (lower < 0.0 || upper < lower) throw std::invalid_argument("need 0 <= lower <= upper");
  RayleighIntegrals out;
  if (upper == lower) return out;
  const auto& sol = ext.base();
  const int n = sol.ball.dimension;
  const SpaceForm space = sol.ball.space;
  const double R = ext.radius();
  const double factor = unit_sphere_area(n) / n;

  const auto grad_density = [&](double t, double f, double df) {
    const double s = s_kappa(t, space);
    return (df * df + (n - 1) * f * f / (s * s)) * std::pow(s, n - 1) * sol.phi.density(t);
  };
  const auto mass_density = [&](double t, double f) {
    return f * f * std::pow(s_kappa(t, space), n - 1) * sol.phi.density(t);
  };

  // Inside the ball: composite Gauss-Legendre on the sample intervals, where
  // the interpolant is a polynomial.
  const auto gl_piece = [&](double a, double b) {
    if (b <= a) return;
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int q = 0; q < 8; ++q) {
      const double t = c + hw * quad::GaussLegendre8::nodes[q];
      const double w = hw * quad::GaussLegendre8::weights[q];
      const auto [f, df] = interpolate(sol.profile, t);
      out.gradient += w * grad_density(t, f, df);
      out.mass += w * mass_density(t, f);
    }
  };
  const double in_hi = std::min(upper, R);
  if (lower < in_hi) {
    const auto& prof = sol.profile;
    gl_piece(lower, std::min(in_hi, prof.front().t));
    for (std::size_t k = 0; k + 1 < prof.size(); ++k) {
      const double a = std::max(lower, prof[k].t), b = std::min(in_hi, prof[k + 1].t);
      gl_piece(a, b);
    }
  }
  // Outside: f is frozen at T(R) and f' = 0.
  const double out_lo = std::max(lower, R);
  if (out_lo < upper) {
    const double fR = ext.f(R);
    quad::Options opts;
    opts.rel_tol = 1e-12;
    out.gradient += quad::integrate([&](double t) { return grad_density(t, fR, 0.0); },
                                    out_lo, upper, opts).value;
    out.mass += quad::integrate([&](double t) { return mass_density(t, fR); }, out_lo, upper,
                                opts).value;
  }
  out.gradient *= factor;
  out.mass *= factor;
  return out;
}

long spherical_harmonic_multiplicity(int l, int n) {
  if (l < 0 || n < 2) return 0;
  const auto binom = [](long a, long b) -> long {
    if (a < 0 || b < 0 || b > a) return 0;
    long r = 1;
    for (long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  return binom(l + n - 1, n - 1) - binom(l + n - 3, n - 1);
}

}  // namespace wlab
