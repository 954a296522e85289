#include <cmath>
#include <stdexcept>
#include <functional>
#include <string>

#include <doctest.h>

#include "wlab/weights.hpp"

using namespace wlab;

namespace {

std::vector<double> knots(const std::function<double(double)>& f, double cap, int count) {
  std::vector<double> p;
  for (int i = 0; i < count; ++i) {
    const double t = cap * i / (count - 1);
    p.push_back(t);
    p.push_back(f(t));
  }
  return p;
}

// First t where phi increases or bends down, located from values alone on a
// grid much finer than the certification grid.
double first_violation_from_values(const WeightFunction& w, int fine) {
  const double cap = w.domain_cap();
  const double h = cap / fine;
  for (int i = 1; i + 1 <= fine; ++i) {
    const double a = w.value((i - 1) * h), b = w.value(i * h), c = w.value(std::min(cap, (i + 1) * h));
    if (c - b > 1e-12 || (a - 2 * b + c) < -1e-12) return i * h;
  }
  return -1.0;
}

}  // namespace

TEST_CASE("family names round trip") {
  for (auto f : {WeightFamily::Constant, WeightFamily::LinearDecreasing, WeightFamily::ExponentialDecay,
                 WeightFamily::TabulatedSpline})
    CHECK(parse_weight_family(to_string(f)) == f);
  CHECK_FALSE(parse_weight_family("gaussian").has_value());
}

TEST_CASE("built-in families evaluate analytically") {
  const auto c = make_weight(WeightFamily::Constant, {0.0}, 10.0);
  CHECK(c.value(3.0) == 0.0);
  CHECK(c.d1(3.0) == 0.0);

  const auto lin = make_weight(WeightFamily::LinearDecreasing, {1.0, 0.5}, 10.0);
  CHECK(lin.value(2.0) == doctest::Approx(0.0));
  CHECK(lin.d1(2.0) == -0.5);
  CHECK(lin.d2(2.0) == 0.0);

  const auto dec = make_weight(WeightFamily::ExponentialDecay, {0.0, 1.0, 1.0}, 10.0);
  CHECK(dec.value(1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(dec.d1(1.0) == doctest::Approx(-0.36787944117144233).epsilon(1e-15));
  CHECK(dec.d2(1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(dec.density(1.0) == doctest::Approx(std::exp(-0.36787944117144233)).epsilon(1e-15));
  CHECK_FALSE(dec.certified());
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(make_weight(WeightFamily::Constant, {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_weight(WeightFamily::LinearDecreasing, {0.0, -1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_weight(WeightFamily::ExponentialDecay, {0.0, 1.0, 0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_weight(WeightFamily::ExponentialDecay, {0.0, -1.0, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_weight(WeightFamily::Constant, {0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_weight(WeightFamily::TabulatedSpline, {0.0, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_weight(WeightFamily::TabulatedSpline, {0.0, 1.0, 0.0, 0.5, 1.0, 0.2}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_weight(WeightFamily::TabulatedSpline, {0.0, 1.0, 0.5, 0.5}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("certification of built-in families") {
  for (auto [fam, params] : std::vector<std::pair<WeightFamily, std::vector<double>>>{
           {WeightFamily::Constant, {0.0}},
           {WeightFamily::Constant, {-3.0}},
           {WeightFamily::LinearDecreasing, {0.0, 0.0}},
           {WeightFamily::LinearDecreasing, {2.0, 1.5}},
           {WeightFamily::ExponentialDecay, {0.0, 1.0, 1.0}},
           {WeightFamily::ExponentialDecay, {1.0, 3.0, 0.2}}}) {
    auto w = make_weight(fam, params, 8.0);
    const auto rep = property_I_certify(w);
    CHECK(rep.passed);
    CHECK(w.certified());
    CHECK(rep.grid_points == 10000);
    CHECK(rep.note.find("domain_cap") != std::string::npos);
  }
  auto w = make_weight(WeightFamily::Constant, {0.0}, 1.0);
  CHECK_THROWS_AS(property_I_certify(w, 50), std::invalid_argument);
}

TEST_CASE("convex decreasing spline fits certify") {
  auto w = make_weight(WeightFamily::TabulatedSpline, knots([](double t) { return std::exp(-t) + 0.1 * (3 - t) * (t < 3); }, 6.0, 13), 6.0);
  CHECK(property_I_certify(w).passed);
  CHECK(w.value(1.5) == doctest::Approx(std::exp(-1.5) + 0.15).epsilon(1e-12));
}

TEST_CASE("concave spline fixture is rejected") {
  auto w = make_weight(WeightFamily::TabulatedSpline, knots([](double t) { return -t * t; }, 3.0, 16), 3.0);
  const auto rep = property_I_certify(w);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(w.certified());
  CHECK(rep.first_violation == "phi'' < -tol");
  CHECK(rep.min_curvature == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(rep.summary().find("Property I violated") != std::string::npos);
}

TEST_CASE("violations are located within one grid cell") {
  // Decreasing then rising: the interpolant turns up between 3 and 4.
  auto rising = make_weight(WeightFamily::TabulatedSpline, {0, 1.0, 1, 0.5, 2, 0.2, 3, 0.1, 4, 0.3, 5, 0.6}, 5.0);
  // Decreasing throughout but with a kink that bends down after t = 2.
  auto bent = make_weight(WeightFamily::TabulatedSpline, {0, 2.0, 1, 1.5, 2, 1.2, 3, 0.5, 4, -0.3}, 4.0);
  for (WeightFunction* w : {&rising, &bent}) {
    const int grid = 2000;
    const auto rep = property_I_certify(*w, grid);
    REQUIRE_FALSE(rep.passed);
    const double truth = first_violation_from_values(*w, 200000);
    REQUIRE(truth > 0.0);
    CHECK(std::abs(*rep.first_violation_at - truth) <= w->domain_cap() / (grid - 1) + 1e-9);
  }
}

TEST_CASE("derivatives match finite differences") {
  std::vector<WeightFunction> ws = {
      make_weight(WeightFamily::LinearDecreasing, {1.0, 0.7}, 5.0),
      make_weight(WeightFamily::ExponentialDecay, {0.5, 2.0, 1.3}, 5.0),
      make_weight(WeightFamily::TabulatedSpline, knots([](double t) { return 1.0 / (1.0 + t); }, 5.0, 21), 5.0)};
  for (const auto& w : ws) {
    for (double t = 0.01; t <= 4.99; t += 0.0731) {
      const double h = 1e-6;
      const double fd = (w.value(t + h) - w.value(t - h)) / (2 * h);
      CHECK(std::abs(fd - w.d1(t)) <= 1e-6 * std::max(1.0, std::abs(w.d1(t))));
      const double fd2 = (w.d1(t + h) - w.d1(t - h)) / (2 * h);
      if (w.family() != WeightFamily::TabulatedSpline)
        CHECK(std::abs(fd2 - w.d2(t)) <= 1e-5 * std::max(1.0, std::abs(w.d2(t))));
    }
  }
}

TEST_CASE("shifted weights keep derivatives and certification") {
  auto w = make_weight(WeightFamily::ExponentialDecay, {0.0, 1.0, 2.0}, 4.0);
  property_I_certify(w);
  const auto s = w.shifted(2.5);
  CHECK(s.certified());
  for (double t = 0.0; t <= 4.0; t += 0.5) {
    CHECK(s.value(t) == doctest::Approx(w.value(t) + 2.5).epsilon(1e-15));
    CHECK(s.d1(t) == w.d1(t));
    CHECK(s.d2(t) == w.d2(t));
  }
}
