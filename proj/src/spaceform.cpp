#include "wlab/spaceform.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wlab/quadrature.hpp"
#include "wlab/weights.hpp"

namespace wlab {

SpaceForm SpaceForm::from_curvature(int curvature) {
  if (curvature == 0) return euclidean();
  if (curvature == -1) return hyperbolic();
  throw std::invalid_argument("unsupported curvature " + std::to_string(curvature) +
                              " (only 0 and -1)");
}

void BallSpec::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ball radius must be positive");
  if (dimension < 2) throw std::invalid_argument("dimension must be at least 2");
}

double s_kappa(double t, SpaceForm space) {
  return space.is_hyperbolic() ? std::sinh(t) : t;
}

double c_kappa(double t, SpaceForm space) {
  return space.is_hyperbolic() ? std::cosh(t) : 1.0;
}

double geodesic_distance_poincare(const Eigen::Vector2d& x) {
  const double r = x.norm();
  if (!(r < 1.0)) {
    std::ostringstream msg;
    msg << "point (" << x.x() << ", " << x.y() << ") is outside the open Poincare disk";
    throw std::domain_error(msg.str());
  }
  return 2.0 * std::atanh(r);
}

double poincare_conformal_factor(const Eigen::Vector2d& x) {
  return 2.0 / (1.0 - x.squaredNorm());
}

double poincare_radius_of(double geodesic_radius) { return std::tanh(0.5 * geodesic_radius); }

double unit_sphere_area(int n) {
  const double half = 0.5 * n;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double weighted_shell_volume(double lo, double hi, int n, SpaceForm space,
                             const WeightFunction& phi, double rel_tol) {
  if (!phi.certified()) throw std::invalid_argument("weighted volume needs a certified weight");
  if (hi <= lo) return 0.0;
  const auto integrand = [&](double t) {
    return std::pow(s_kappa(t, space), n - 1) * phi.density(t);
  };
  quad::Options opts;
  opts.rel_tol = rel_tol;
  return unit_sphere_area(n) * quad::integrate(integrand, lo, hi, opts).value;
}

double weighted_ball_volume(const BallSpec& ball, const WeightFunction& phi, double rel_tol) {
  ball.validate();
  return weighted_shell_volume(0.0, ball.radius, ball.dimension, ball.space, phi, rel_tol);
}

}  // namespace wlab
