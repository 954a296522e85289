#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlab/spaceform.hpp"
#include "wlab/weights.hpp"

namespace wlab {

/// One sample of the radial profile.
struct ProfileSample {
  double t;
  double value;   // T(t)
  double deriv;   // T'(t)
  double deriv2;  // T''(t), from the ODE
};

/// Eigenvalue and sampled radial factor of a separated mode
///   T'' + ((n-1) C/S - phi') T' + (mu - l(l+n-2)/S^2) T = 0.
/// The profile is normalized so that T(t) ~ t^l near a regular origin, or
/// T(inner) = 1 on a shell.
struct RadialSolution {
  double mu = 0.0;
  std::vector<ProfileSample> profile;  // Chebyshev-spaced on [t_start, outer]
  int mode_degree = 1;
  int which = 1;
  double inner_radius = 0.0;
  BallSpec ball;  // outer radius, dimension, space
  WeightFunction phi;
  double residual = 0.0;  // |T'(outer)| / max |T'|
  std::vector<std::string> warnings;

  double outer_radius() const { return ball.radius; }
  /// Quintic Hermite interpolation of T on the sample grid.
  double value_at(double t) const;
  double deriv_at(double t) const;
};

struct ShootingOptions {
  double t_min_factor = 1e-6;  // regularized start at t_min_factor * outer
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double mu_tol = 1e-12;       // relative tolerance of the Brent solve
  int profile_samples = 2048;
  int scan_points = 160;
  /// Upper end of the eigenvalue search window; 0 selects the default
  /// heuristic 4 * estimate * (1 + sup|phi'| * R).
  double mu_cap = 0.0;
};

/// Smallest positive eigenvalue of the l = 1 mode on B_R(o), i.e.
/// mu_{1,phi}(B_R(o)). Throws BracketError or ConvergenceError.
RadialSolution shoot_first_mode(const BallSpec& ball, const WeightFunction& phi,
                                const ShootingOptions& opts = {});

/// which-th positive eigenvalue of degree-l separated mode on the shell
/// inner <= t <= outer (a ball when inner == 0) with Neumann conditions.
RadialSolution shoot_general_mode(int l, double inner_radius, const BallSpec& outer,
                                  const WeightFunction& phi, int which,
                                  const ShootingOptions& opts = {});

/// The extension f = T on [0, R], f = T(R) beyond.
class ExtendedProfile {
 public:
  explicit ExtendedProfile(RadialSolution base);

  const RadialSolution& base() const { return base_; }
  double radius() const { return base_.outer_radius(); }
  double f(double t) const;
  double df(double t) const;

 private:
  RadialSolution base_;
};

/// Requires an l = 1 ball solution; throws std::invalid_argument otherwise.
ExtendedProfile extend_profile(const RadialSolution& sol);

struct MonotonicityReport {
  bool passed = false;
  int grid = 0;
  double tolerance = 0.0;
  double domain_cap = 0.0;
  /// Worst increase of f/S_kappa between consecutive grid points.
  double worst_ratio_increase = 0.0;
  double worst_ratio_lo = 0.0, worst_ratio_hi = 0.0;
  /// Most negative f' on [0, R].
  double min_slope = 0.0;
  double min_slope_at = 0.0;
  std::string summary() const;
};

/// f/S_kappa non-increasing on (0, domain_cap] and f' >= -tol on [0, R],
/// tol = 1e-8 * max|f|. grid must be at least 1000. domain_cap defaults to
/// the weight's domain cap.
MonotonicityReport check_radial_monotonicity(const ExtendedProfile& ext, int grid = 4000,
                                             std::optional<double> domain_cap = {});

struct RayleighIntegrals {
  double gradient = 0.0;  // sigma/n int [(f')^2 + (n-1) f^2/S^2] S^{n-1} e^{-phi}
  double mass = 0.0;      // sigma/n int f^2 S^{n-1} e^{-phi}
};

/// Integrals of the trial function f(t) x_i/t over lower <= t <= upper.
RayleighIntegrals ball_rayleigh_integrals(const ExtendedProfile& ext, double lower,
                                          double upper);

/// Dimension of degree-l spherical harmonics on S^{n-1}.
long spherical_harmonic_multiplicity(int l, int n);

}  // namespace wlab
