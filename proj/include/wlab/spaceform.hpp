#pragma once

#include <Eigen/Core>

namespace wlab {

class WeightFunction;

/// Ambient space form: Euclidean (curvature 0) or hyperbolic of curvature -1.
class SpaceForm {
 public:
  enum class Kind { Euclidean, Hyperbolic };

  constexpr SpaceForm() = default;
  constexpr explicit SpaceForm(Kind kind) : kind_(kind) {}

  /// Accepts 0 or -1; +1 (the sphere) and anything else throw.
  static SpaceForm from_curvature(int curvature);
  static constexpr SpaceForm euclidean() { return SpaceForm(Kind::Euclidean); }
  static constexpr SpaceForm hyperbolic() { return SpaceForm(Kind::Hyperbolic); }

  constexpr Kind kind() const { return kind_; }
  constexpr int curvature() const { return kind_ == Kind::Euclidean ? 0 : -1; }
  constexpr bool is_hyperbolic() const { return kind_ == Kind::Hyperbolic; }

  friend constexpr bool operator==(SpaceForm, SpaceForm) = default;

 private:
  Kind kind_ = Kind::Euclidean;
};

/// Geodesic ball B_R(o) about the origin.
struct BallSpec {
  double radius = 1.0;
  int dimension = 2;
  SpaceForm space{};

  /// Throws std::invalid_argument unless radius > 0 and dimension >= 2.
  void validate() const;
};

/// S_kappa(t): t in R^n, sinh t in H^n.
double s_kappa(double t, SpaceForm space);
/// C_kappa(t) = S_kappa'(t): 1 in R^n, cosh t in H^n.
double c_kappa(double t, SpaceForm space);

/// Hyperbolic distance from the center of the Poincare disk, 2 artanh|x|.
/// Throws std::domain_error for |x| >= 1.
double geodesic_distance_poincare(const Eigen::Vector2d& x);

/// Poincare-disk conformal factor 2 / (1 - |x|^2).
double poincare_conformal_factor(const Eigen::Vector2d& x);

/// Euclidean radius in the Poincare disk of the geodesic ball of radius t.
double poincare_radius_of(double geodesic_radius);

/// Surface measure of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

/// sigma_{n-1} * int_lo^hi S_kappa(t)^{n-1} exp(-phi(t)) dt.
/// Requires a certified weight. Relative quadrature tolerance 1e-10 unless
/// overridden.
double weighted_shell_volume(double lo, double hi, int n, SpaceForm space,
                             const WeightFunction& phi, double rel_tol = 1e-10);

/// Weighted volume |B_R(o)|_phi of a geodesic ball.
double weighted_ball_volume(const BallSpec& ball, const WeightFunction& phi,
                            double rel_tol = 1e-10);

}  // namespace wlab
