#include <cmath>
#include <stdexcept>
#include <numbers>

#include <doctest.h>

#include "oracles/geometry.hpp"
#include "wlab/spaceform.hpp"
#include "wlab/weights.hpp"

using namespace wlab;

namespace {

WeightFunction certified(WeightFamily family, std::vector<double> params, double cap) {
  auto w = make_weight(family, std::move(params), cap);
  REQUIRE(property_I_certify(w).passed);
  return w;
}

}  // namespace

TEST_CASE("curvature tags") {
  CHECK(SpaceForm::from_curvature(0) == SpaceForm::euclidean());
  CHECK(SpaceForm::from_curvature(-1).is_hyperbolic());
  CHECK_THROWS_AS(SpaceForm::from_curvature(1), std::invalid_argument);
  CHECK_THROWS_AS(SpaceForm::from_curvature(-2), std::invalid_argument);
  CHECK_THROWS_AS((BallSpec{0.0, 2, {}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((BallSpec{1.0, 1, {}}).validate(), std::invalid_argument);
}

TEST_CASE("s_kappa and c_kappa") {
  const auto E = SpaceForm::euclidean(), H = SpaceForm::hyperbolic();
  CHECK(s_kappa(1.0, E) == 1.0);
  CHECK(s_kappa(0.0, H) == 0.0);
  CHECK(s_kappa(1.0, H) == doctest::Approx(1.1752011936438014).epsilon(1e-14));
  for (double t = 0.0; t <= 10.0; t += 0.37) CHECK(s_kappa(t, E) == t);
  for (double t = 0.05; t <= 10.0; t += 0.25) {
    for (auto sp : {E, H}) {
      const double h = 1e-5 * std::max(1.0, t);
      const double fd = (s_kappa(t + h, sp) - s_kappa(t - h, sp)) / (2 * h);
      CHECK(std::abs(fd - c_kappa(t, sp)) <= 1e-6 * c_kappa(t, sp));
    }
  }
}

TEST_CASE("Poincare disk distance") {
  CHECK(geodesic_distance_poincare({0.0, 0.0}) == 0.0);
  CHECK(geodesic_distance_poincare({0.5, 0.0}) == doctest::Approx(1.0986122886681098).epsilon(1e-14));
  CHECK(geodesic_distance_poincare({0.0, 0.46211715726000974}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(poincare_radius_of(1.0) == doctest::Approx(0.46211715726000974).epsilon(1e-14));
  CHECK_THROWS_AS(geodesic_distance_poincare({1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(geodesic_distance_poincare({0.8, 0.7}), std::domain_error);
  CHECK(poincare_conformal_factor({0.0, 0.0}) == 2.0);
}

TEST_CASE("unit sphere areas") {
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-14));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-14));
  CHECK(unit_sphere_area(4) == doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-13));
  CHECK(unit_sphere_area(5) == doctest::Approx(8.0 / 3.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("weighted ball volume") {
  const auto zero = certified(WeightFamily::Constant, {0.0}, 10.0);
  const auto E = SpaceForm::euclidean(), H = SpaceForm::hyperbolic();
  CHECK(weighted_ball_volume({1.0, 2, E}, zero) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(weighted_ball_volume({2.0, 3, E}, zero) == doctest::Approx(32.0 / 3.0 * std::numbers::pi).epsilon(1e-12));
  CHECK(weighted_ball_volume({1.0, 2, H}, zero) == doctest::Approx(oracle::hyperbolic_disk_area(1.0)).epsilon(1e-11));

  const auto lin = certified(WeightFamily::LinearDecreasing, {0.0, 0.5}, 10.0);
  CHECK(weighted_ball_volume({1.3, 2, E}, lin) ==
        doctest::Approx(oracle::disk_volume_exp_slope(1.3, 0.5)).epsilon(1e-11));

  auto raw = make_weight(WeightFamily::Constant, {0.0}, 10.0);
  CHECK_THROWS_AS(weighted_ball_volume({1.0, 2, E}, raw), std::invalid_argument);
}

TEST_CASE("weighted ball volume is increasing and scales under shifts") {
  const auto dec = certified(WeightFamily::ExponentialDecay, {0.0, 1.0, 1.0}, 10.0);
  for (auto sp : {SpaceForm::euclidean(), SpaceForm::hyperbolic()}) {
    for (int n : {2, 3, 5}) {
      double prev = 0.0;
      for (double R = 0.1; R <= 4.0; R += 0.1) {
        const double v = weighted_ball_volume({R, n, sp}, dec);
        CHECK(v > prev);
        prev = v;
      }
      const double base = weighted_ball_volume({1.7, n, sp}, dec);
      const double moved = weighted_ball_volume({1.7, n, sp}, dec.shifted(0.8));
      CHECK(std::abs(moved - std::exp(-0.8) * base) <= 1e-12 * base);
    }
  }
}
