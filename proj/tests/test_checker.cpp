#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "oracles/bessel.hpp"
#include "oracles/geometry.hpp"
#include "oracles/sturm_liouville.hpp"
#include "wlab/checker.hpp"

using namespace wlab;

namespace {

WeightFunction certified(WeightFamily family, std::vector<double> params, double cap = 10.0) {
  auto w = make_weight(family, std::move(params), cap);
  REQUIRE(property_I_certify(w).passed);
  return w;
}

const WeightFunction& zero() {
  static const WeightFunction w = certified(WeightFamily::Constant, {0.0});
  return w;
}

DomainSpec disk(double R, Vec2 center = Vec2::Zero(), double h = 0.1) {
  DomainSpec s;
  s.shape = center.isZero() ? Shape::Disk : Shape::TranslatedDisk;
  s.radius = R;
  s.center = center;
  s.h = h;
  return s;
}

DomainSpec ellipse(double a, double b, Vec2 center = Vec2::Zero()) {
  DomainSpec s;
  s.shape = Shape::Ellipse;
  s.semi_a = a;
  s.semi_b = b;
  s.center = center;
  s.h = 0.1;
  return s;
}

Problem problem(Domain d, const WeightFunction& w, int n = 2, SpaceForm sp = {}) {
  Problem p;
  p.id = "t";
  p.domain = std::move(d);
  p.phi = w;
  p.dimension = n;
  p.space = sp;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Lens area of two unit disks whose centers are d apart.
double lens_area(double d) { return 2.0 * std::acos(d / 2.0) - d / 2.0 * std::sqrt(4.0 - d * d); }

}  // namespace

TEST_CASE("ball radius matching") {
  CHECK(match_ball_radius(std::numbers::pi, 2, SpaceForm::euclidean(), zero()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(match_ball_radius(oracle::hyperbolic_disk_area(1.0), 2, SpaceForm::hyperbolic(), zero()) ==
        doctest::Approx(1.0).epsilon(1e-10));
  auto lin = certified(WeightFamily::LinearDecreasing, {0.0, 0.5});
  const double R = match_ball_radius(std::numbers::pi, 2, SpaceForm::euclidean(), lin);
  // Independent inversion of the closed-form volume by bisection.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::disk_volume_exp_slope(mid, 0.5) < std::numbers::pi ? lo : hi) = mid;
  }
  CHECK(R < 1.0);
  CHECK(rel(R, 0.5 * (lo + hi)) < 1e-10);
  CHECK(rel(R, 0.863730474065606) < 1e-10);
  CHECK_THROWS_AS(match_ball_radius(1e6, 2, SpaceForm::euclidean(), zero()), std::invalid_argument);
  CHECK_THROWS_AS(match_ball_radius(-1.0, 2, SpaceForm::euclidean(), zero()), std::invalid_argument);
}

TEST_CASE("problem validation") {
  auto raw = make_weight(WeightFamily::Constant, {0.0}, 10.0);
  CHECK_THROWS_AS(problem(disk(1.0), raw).validate(), std::invalid_argument);
  CHECK_THROWS_AS(problem(disk(1.0), zero(), 3).validate(), std::invalid_argument);
  CHECK_THROWS_AS(problem(disk(1.0), zero(), 2, SpaceForm::hyperbolic()).validate(), std::invalid_argument);
  auto small = certified(WeightFamily::Constant, {0.0}, 0.5);
  CHECK_THROWS_AS(problem(disk(1.0), small).validate(), std::invalid_argument);
  CHECK_THROWS_AS(problem(ShellSpec{0.5, 0.4}, zero(), 3).validate(), std::invalid_argument);
  CHECK_NOTHROW(problem(ShellSpec{0.5, 1.0}, zero(), 4).validate());
}

TEST_CASE("the disk gives equality") {
  for (const auto* w : {&zero()}) {
    const auto rep = check_theorem_sharper(problem(disk(1.0), *w));
    REQUIRE(rep.verdict == "pass");
    CHECK(std::abs(rep.main->gap) <= rep.main->tol_budget);
    CHECK(rep.main->equality_ratio == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.radius == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.sharper->r1 == doctest::Approx(rep.radius).epsilon(1e-3));
    CHECK(rep.sharper->r2 == doctest::Approx(rep.radius).epsilon(1e-3));
    CHECK(std::abs(rep.sharper->sharper_rhs) <= rep.sharper->rhs_tol);
    CHECK(std::abs(rep.sharper->sharper_gap) <= rep.sharper->gap_tol);
  }
}

TEST_CASE("ellipse without weight is strictly below the disk") {
  const auto rep = check_theorem_main(problem(ellipse(1.2, 1.0 / 1.2), zero()));
  CHECK(rep.verdict == "pass");
  CHECK(rep.main->gap > 10 * rep.main->tol_budget);
  CHECK(rep.main->corollary_holds);
  CHECK(rep.eigenvalues[0] < rep.ball_mu);
}

TEST_CASE("shells in dimension three") {
  // Outer radius with |shell| = |B_1|: outer^3 = 1 + 0.6^3.
  const double outer = std::cbrt(1.0 + 0.216);
  const auto rep = check_theorem_main(problem(ShellSpec{0.6, outer}, zero(), 3));
  CHECK(rep.path == "radial");
  CHECK(rep.radius == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.ball_mu == doctest::Approx(oracle::ball_mu1(3)).epsilon(1e-9));
  CHECK(rep.main->gap > 0.0);
  CHECK(rep.verdict == "pass");
  // mu_1 of the shell is the l = 1 mode with multiplicity 3.
  oracle::RadialProblem p{3, 1, false, 0.6, outer};
  const double mu = oracle::radial_eigenvalue(p, 0);
  CHECK(rel(rep.eigenvalues[0], mu) < 1e-5);
  CHECK(rel(rep.eigenvalues[1], mu) < 1e-5);
  CHECK(rel(rep.main->lhs, 2.0 / mu) < 1e-5);
}

TEST_CASE("translated disk in the ambient frame") {
  const auto rep = check_theorem_sharper(problem(disk(1.0, {0.3, 0.0}), zero()));
  REQUIRE(rep.sharper.has_value());
  const auto& s = *rep.sharper;
  CHECK(rep.radius == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rel(s.inside_volume, lens_area(0.3)) < 2e-3);
  const double mc = oracle::monte_carlo([](double x, double y) {
    return (x - 0.3) * (x - 0.3) + y * y < 1.0 && x * x + y * y < 1.0;
  }, [](double, double) { return 1.0; }, -1.0, 1.0, -1.0, 1.0, 400000, 7);
  CHECK(rel(s.inside_volume, mc) < 1e-2);
  CHECK(s.sharper_rhs > s.rhs_tol);
  CHECK(s.rhs_nonnegative);
  // Same spectrum as the centered disk, so the main inequality is an equality
  // and the sharper one falls short by exactly the positive integral term.
  CHECK(std::abs(rep.main->gap) <= rep.main->tol_budget);
  CHECK(s.sharper_gap == doctest::Approx(-s.sharper_rhs).epsilon(0.02));
  CHECK_FALSE(s.passed);
}

TEST_CASE("translated disk in the trial-center frame") {
  auto p = problem(disk(1.0, {0.3, 0.0}), zero());
  p.settings.frame = Frame::TrialCenter;
  const auto rep = check_theorem_sharper(p);
  CHECK(rep.verdict == "pass");
  CHECK(rep.frame == "trial-center");
  CHECK(rep.frame_shift.x() == doctest::Approx(-0.3).epsilon(1e-6));
  CHECK(std::abs(rep.frame_shift.y()) < 1e-8);
  CHECK(std::abs(rep.sharper->sharper_rhs) <= rep.sharper->rhs_tol);
}

TEST_CASE("sharper check is Euclidean only") {
  CHECK_THROWS_AS(check_theorem_sharper(problem(disk(poincare_radius_of(0.8)), zero(), 2, SpaceForm::hyperbolic())),
                  std::invalid_argument);
}

TEST_CASE("conjecture explorer") {
  DomainSpec sq;
  sq.shape = Shape::Polygon;
  sq.vertices = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
  sq.h = 0.1;
  const auto rep = check_conjectures(problem(sq, zero()));
  REQUIRE(rep.conjecture.has_value());
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(rel(rep.conjecture->lhs, 2.0 / pi2) < 5e-3);
  CHECK(rel(rep.conjecture->rhs, 2.0 / (std::numbers::pi * oracle::ball_mu1(2))) < 5e-3);
  CHECK(rep.conjecture->verdict == "conjecture-consistent");
  CHECK(rep.verdict == "pass");

  const auto ball = check_conjectures(problem(disk(1.0), zero()));
  CHECK(std::abs(ball.conjecture->margin) <= ball.conjecture->tol);
}

TEST_CASE("pointwise bound") {
  const auto eq = check_pointwise_bound({1, 1, 1}, {0.6, 0.8, 0.0});
  CHECK(eq.holds);
  CHECK(std::abs(eq.slack) < 1e-15);
  CHECK(eq.lhs == doctest::Approx(2.0));

  const auto en = check_pointwise_bound({1, 2, 5}, {0, 0, 1});
  CHECK(en.holds);
  CHECK(en.lhs == doctest::Approx(1.5));

  CHECK_THROWS_AS(check_pointwise_bound({2, 1}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(check_pointwise_bound({0, 1}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(check_pointwise_bound({1, 2}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(check_pointwise_bound({1, 2}, {1, 0, 0}), std::invalid_argument);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.01, 10.0);
  int violations = 0;
  for (int i = 0; i < 20000; ++i) {
    const int n = 2 + i % 5;
    std::vector<double> mu(n), xi(n);
    for (auto& m : mu) m = u(rng);
    std::sort(mu.begin(), mu.end());
    double norm = 0.0;
    for (auto& x : xi) norm += (x = g(rng)) * x;
    for (auto& x : xi) x /= std::sqrt(norm);
    if (!check_pointwise_bound(mu, xi).holds) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("trial centers") {
  CaseAnalysis centered(problem(ellipse(1.3, 0.7), certified(WeightFamily::LinearDecreasing, {0.0, 0.4})));
  const auto c0 = centered.trial_center();
  CHECK(c0.converged);
  CHECK(c0.center.norm() < 1e-8);

  CaseAnalysis moved(problem(disk(0.9, {0.25, -0.1}), zero()));
  const auto c1 = moved.trial_center();
  CHECK(c1.converged);
  CHECK((c1.center - Vec2(0.25, -0.1)).norm() < 1e-6);
}

TEST_CASE("trial center of an offset ellipse matches a grid search") {
  const auto lin = certified(WeightFamily::LinearDecreasing, {0.0, 0.3});
  const Vec2 c(0.4, 0.2);
  const double a = 1.2, b = 0.8;
  CaseAnalysis an(problem(ellipse(a, b, c), lin));
  const auto found = an.trial_center();
  REQUIRE(found.converged);
  const auto& ext = an.extended_profile();

  // V(o) by a midpoint rule on the analytic ellipse.
  const int N = 240;
  std::vector<Vec2> pts;
  std::vector<double> wts;
  const double dx = 2 * a / N, dy = 2 * b / N;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const Vec2 x(c.x() - a + (i + 0.5) * dx, c.y() - b + (j + 0.5) * dy);
      const double u = (x.x() - c.x()) / a, v = (x.y() - c.y()) / b;
      if (u * u + v * v >= 1.0) continue;
      pts.push_back(x);
      wts.push_back(std::exp(-lin.value(x.norm())) * dx * dy);
    }
  const auto field = [&](const Vec2& o) {
    Vec2 V = Vec2::Zero();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Vec2 d = pts[k] - o;
      const double r = d.norm();
      if (r > 0) V += wts[k] * ext.f(r) / r * d;
    }
    return V.norm();
  };
  Vec2 best = c;
  double best_val = field(c);
  for (double step : {0.04, 0.01, 0.0025}) {
    const Vec2 start = best;
    for (int i = -6; i <= 6; ++i)
      for (int j = -6; j <= 6; ++j) {
        const Vec2 o = start + step * Vec2(i, j);
        const double val = field(o);
        if (val < best_val) {
          best_val = val;
          best = o;
        }
      }
  }
  CHECK((found.center - best).norm() < 0.01);
  CHECK(found.inside_hull);
}
