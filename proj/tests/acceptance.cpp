// Acceptance battery: one line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/bessel.hpp"
#include "oracles/geometry.hpp"
#include "oracles/sturm_liouville.hpp"
#include "wlab/checker.hpp"
#include "wlab/fem.hpp"

using namespace wlab;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

WeightFunction certified(WeightFamily family, std::vector<double> params, double cap) {
  auto w = make_weight(family, std::move(params), cap);
  if (!property_I_certify(w).passed) throw std::runtime_error("weight failed certification: " + w.tag());
  return w;
}

WeightFunction zero(double cap = 10.0) { return certified(WeightFamily::Constant, {0.0}, cap); }

// Convex decreasing spline through 1/(1+t).
WeightFunction spline(double cap) {
  std::vector<double> p;
  const int knots = 17;
  for (int i = 0; i < knots; ++i) {
    const double t = cap * i / (knots - 1);
    p.push_back(t);
    p.push_back(1.0 / (1.0 + t));
  }
  return certified(WeightFamily::TabulatedSpline, p, cap);
}

std::vector<WeightFunction> nonconstant_weights(double cap) {
  return {certified(WeightFamily::LinearDecreasing, {0.0, 0.5}, cap),
          certified(WeightFamily::ExponentialDecay, {0.0, 1.0, 1.0}, cap), spline(cap)};
}

DomainSpec disk(double R, Vec2 center = Vec2::Zero()) {
  DomainSpec s;
  s.shape = center.isZero() ? Shape::Disk : Shape::TranslatedDisk;
  s.radius = R;
  s.center = center;
  return s;
}

DomainSpec ellipse(double a, double b) {
  DomainSpec s;
  s.shape = Shape::Ellipse;
  s.semi_a = a;
  s.semi_b = b;
  return s;
}

DomainSpec polygon(std::vector<Vec2> v) {
  DomainSpec s;
  s.shape = Shape::Polygon;
  s.vertices = std::move(v);
  return s;
}

DomainSpec perturbed(double R, int k, double amp, double phase = 0.0) {
  DomainSpec s;
  s.shape = Shape::PerturbedDisk;
  s.radius = R;
  s.perturbation = {{k, amp, phase}};
  return s;
}

DomainSpec square(double side) {
  const double h = side / 2;
  return polygon({{-h, -h}, {h, -h}, {h, h}, {-h, h}});
}

struct Named {
  std::string name;
  Domain domain;
  int n = 2;
  Frame frame = Frame::Ambient;
  bool ball = false;
  double h = 0.1;
};

Problem make_problem(const Named& c, const WeightFunction& w, SpaceForm space) {
  Problem p;
  p.id = c.name + "/" + w.tag();
  p.domain = c.domain;
  if (auto* d = std::get_if<DomainSpec>(&p.domain)) d->h = c.h;
  p.phi = w;
  p.space = space;
  p.dimension = c.n;
  p.settings.frame = c.frame;
  return p;
}

Mesh mesh_of(DomainSpec s, double h, int refinements) {
  s.h = h;
  auto m = generate_mesh(s);
  for (int i = 0; i < refinements; ++i) m = refine(m);
  return m;
}

std::vector<double> fem_nonzero(const Mesh& m, const WeightFunction& w, SpaceForm sp, int k) {
  const auto a = assemble(m, w, sp);
  return solve_lowest(k, a.stiffness, a.mass).nonzero();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << " first failure: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

// Monotonicity of f/S for every first-mode solve touched by the suites.
struct MonotonicityLedger {
  int runs = 0;
  int failures = 0;
  double worst = 0.0;
  void add(const MonotonicityReport& r) {
    ++runs;
    if (!r.passed) ++failures;
    worst = std::max(worst, r.worst_ratio_increase / std::max(r.tolerance, 1e-300));
  }
} monotonicity_ledger;

// Runs main (and optionally sharper) on one problem and records the
// monotonicity check of its ball profile.
struct CaseResult {
  MainResult main;
  std::optional<SharperResult> sharper;
  std::string error;
};

CaseResult run_case(const Problem& p, bool sharper) {
  CaseResult out;
  try {
    CaseAnalysis a(p);
    out.main = a.main();
    if (sharper) out.sharper = a.sharper();
    monotonicity_ledger.add(a.monotonicity());
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

void disk_constant(Outcome& o) {
  const double mu = oracle::ball_mu1(2);
  const auto w = zero();
  std::vector<double> levels;
  for (int r = 0; r <= 3; ++r) levels.push_back(fem_nonzero(mesh_of(disk(1.0), 0.1, r), w, {}, 2)[0]);
  const double ext = (4.0 * levels[3] - levels[2]) / 3.0;
  const double shoot = shoot_first_mode({1.0, 2, SpaceForm::euclidean()}, w).mu;
  o.detail << "oracle " << mu << ", FEM extrapolated " << ext << " (rel " << rel(ext, mu) << "), shooting rel "
           << rel(shoot, mu);
  o.require(rel(ext, mu) < 1e-3, "FEM");
  o.require(rel(shoot, mu) < 1e-6, "shooting");
}

void square_spectrum(Outcome& o) {
  const auto ref = oracle::square_spectrum(5);
  const auto mu = fem_nonzero(mesh_of(polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 0.1, 2), zero(), {}, 5);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) worst = std::max(worst, rel(mu[i], ref[i]));
  o.detail << "first 5 nonzero eigenvalues, worst rel error " << worst;
  o.require(worst < 0.01, "square spectrum");
}

void cross_solver(Outcome& o) {
  struct Combo {
    int n;
    bool hyp;
    double R;
    WeightFunction w;
  };
  const std::vector<Combo> combos = {
      {2, false, 1.0, zero()},
      {2, false, 1.0, certified(WeightFamily::LinearDecreasing, {0.0, 0.5}, 10.0)},
      {2, false, 0.7, certified(WeightFamily::ExponentialDecay, {0.0, 1.0, 1.0}, 10.0)},
      {2, false, 1.5, spline(10.0)},
      {2, true, 1.0, zero()},
      {2, true, 0.8, certified(WeightFamily::LinearDecreasing, {0.0, 0.3}, 10.0)},
      {3, false, 1.0, certified(WeightFamily::LinearDecreasing, {0.0, 0.5}, 10.0)},
      {3, true, 1.0, certified(WeightFamily::ExponentialDecay, {0.0, 1.0, 1.0}, 10.0)},
      {4, false, 0.8, spline(10.0)},
      {4, true, 0.6, certified(WeightFamily::LinearDecreasing, {0.0, 1.0}, 10.0)},
      {5, false, 1.2, certified(WeightFamily::ExponentialDecay, {0.0, 2.0, 0.5}, 10.0)},
      {3, false, 2.0, zero()},
  };
  double worst_sl = 0.0, worst_fem = 0.0;
  int fem_runs = 0;
  for (const auto& c : combos) {
    const SpaceForm sp = c.hyp ? SpaceForm::hyperbolic() : SpaceForm::euclidean();
    const double shoot = shoot_first_mode({c.R, c.n, sp}, c.w).mu;
    monotonicity_ledger.add(check_radial_monotonicity(extend_profile(shoot_first_mode({c.R, c.n, sp}, c.w))));
    oracle::RadialProblem p{c.n, 1, c.hyp, 0.0, c.R, [&w = c.w](double t) { return w.value(t); }};
    const double sl = oracle::radial_eigenvalue(p, 0);
    worst_sl = std::max(worst_sl, rel(shoot, sl));
    o.require(rel(shoot, sl) < 1e-5, "1D oracle n=" + std::to_string(c.n) + " " + c.w.tag());
    if (c.n == 2) {
      const double radius = c.hyp ? poincare_radius_of(c.R) : c.R;
      const double fem = fem_nonzero(mesh_of(disk(radius), 0.05 * radius, 1), c.w, sp, 2)[0];
      worst_fem = std::max(worst_fem, rel(fem, shoot));
      ++fem_runs;
      o.require(rel(fem, shoot) < 5e-3, "FEM " + c.w.tag());
    }
  }
  o.detail << combos.size() << " combinations, worst rel vs 1D oracle " << worst_sl << ", worst rel vs FEM "
           << worst_fem << " (" << fem_runs << " disks)";
}

void inequality_suite(Outcome& o, const std::vector<Named>& corpus, SpaceForm space, double cap,
                      bool sharper) {
  int runs = 0, ball_runs = 0;
  double min_ratio = 1e300, worst_ball = 0.0, min_sharper = 1e300, min_rhs = 1e300;
  for (const auto& c : corpus) {
    for (const auto& w : nonconstant_weights(cap)) {
      const auto p = make_problem(c, w, space);
      const auto r = run_case(p, sharper);
      ++runs;
      if (!r.error.empty()) {
        o.require(false, p.id + " errored: " + r.error);
        continue;
      }
      const auto& m = r.main;
      min_ratio = std::min(min_ratio, m.gap / m.tol_budget);
      o.require(m.gap >= -m.tol_budget, p.id + " gap " + std::to_string(m.gap));
      if (c.ball) {
        ++ball_runs;
        worst_ball = std::max(worst_ball, std::abs(m.gap) / m.tol_budget);
        o.require(std::abs(m.gap) <= m.tol_budget, p.id + " ball gap " + std::to_string(m.gap));
      }
      if (r.sharper) {
        const auto& s = *r.sharper;
        min_rhs = std::min(min_rhs, s.sharper_rhs / s.rhs_tol);
        min_sharper = std::min(min_sharper, s.sharper_gap / s.gap_tol);
        o.require(s.sharper_rhs >= -s.rhs_tol, p.id + " sharper rhs " + std::to_string(s.sharper_rhs));
        o.require(s.sharper_gap >= -s.gap_tol, p.id + " sharper gap " + std::to_string(s.sharper_gap));
        if (c.ball) {
          o.require(std::abs(s.sharper_rhs) <= s.rhs_tol, p.id + " ball sharper rhs");
          o.require(std::abs(s.sharper_gap) <= s.gap_tol, p.id + " ball sharper gap");
        }
      }
    }
  }
  o.detail << corpus.size() << " domains x 3 weights = " << runs << " runs, min gap/tol " << min_ratio
           << ", ball |gap|/tol <= " << worst_ball << " (" << ball_runs << " runs)";
  if (sharper) o.detail << ", min sharper_rhs/tol " << min_rhs << ", min sharper_gap/tol " << min_sharper;
}

std::vector<Named> euclidean_corpus() {
  const double shell3 = std::cbrt(1.0 + 0.6 * 0.6 * 0.6);
  return {
      {"disk", disk(1.0), 2, Frame::Ambient, true},
      {"ellipse-1.2", ellipse(1.2, 1.0 / 1.2)},
      {"ellipse-2.5", ellipse(1.5, 0.6)},
      {"square", square(std::sqrt(std::numbers::pi))},
      {"perturbed-c3", perturbed(1.0, 3, 0.1)},
      {"perturbed-c5", perturbed(1.0, 5, 0.08, 0.4)},
      {"translated-disk", disk(0.9, {0.3, -0.1}), 2, Frame::TrialCenter},
      {"translated-disk-far", disk(0.7, {0.6, 0.2}), 2, Frame::TrialCenter},
      {"shell-3", ShellSpec{0.6, shell3}, 3},
      {"ball-3", ShellSpec{0.0, 1.0}, 3, Frame::Ambient, true},
      {"shell-4", ShellSpec{0.4, 1.0}, 4},
  };
}

void euclidean_suite(Outcome& o) { inequality_suite(o, euclidean_corpus(), SpaceForm::euclidean(), 4.0, false); }

void hyperbolic_suite(Outcome& o) {
  const double r = poincare_radius_of(1.0);
  const std::vector<Named> corpus = {
      {"geodesic-disk", disk(r), 2, Frame::Ambient, true, 0.05},
      {"poincare-ellipse", ellipse(0.5, 0.35), 2, Frame::Ambient, false, 0.05},
      {"poincare-square", square(0.7), 2, Frame::Ambient, false, 0.05},
      {"poincare-perturbed", perturbed(0.45, 3, 0.1), 2, Frame::Ambient, false, 0.05},
      {"shell-3", ShellSpec{0.5, 1.2}, 3},
      {"ball-3", ShellSpec{0.0, 1.0}, 3, Frame::Ambient, true},
      {"shell-4", ShellSpec{0.3, 0.9}, 4},
  };
  inequality_suite(o, corpus, SpaceForm::hyperbolic(), 4.0, false);
}

void sharper_suite(Outcome& o) {
  const std::vector<Named> corpus = {
      {"disk", disk(1.0), 2, Frame::Ambient, true},
      {"ellipse-1.2", ellipse(1.2, 1.0 / 1.2)},
      {"square", square(std::sqrt(std::numbers::pi))},
      {"perturbed-c3", perturbed(1.0, 3, 0.1)},
      {"translated-disk", disk(0.9, {0.3, -0.1}), 2, Frame::TrialCenter},
      {"shell-3", ShellSpec{0.6, std::cbrt(1.216)}, 3},
      {"ball-4", ShellSpec{0.0, 0.8}, 4, Frame::Ambient, true},
  };
  inequality_suite(o, corpus, SpaceForm::euclidean(), 4.0, true);
}

void monotonicity_suite(Outcome& o) {
  // Extra hyperbolic and high-dimensional solves on top of the suites above.
  for (auto sp : {SpaceForm::euclidean(), SpaceForm::hyperbolic()})
    for (int n : {2, 3, 5})
      for (const auto& w : nonconstant_weights(5.0))
        monotonicity_ledger.add(check_radial_monotonicity(extend_profile(shoot_first_mode({1.3, n, sp}, w))));
  o.detail << monotonicity_ledger.runs << " first-mode solves, " << monotonicity_ledger.failures
           << " violations, worst increase/tol " << monotonicity_ledger.worst;
  o.require(monotonicity_ledger.failures == 0, "monotonicity violated");
  o.require(monotonicity_ledger.runs > 50, "too few solves");
}

void pointwise_suite(Outcome& o) {
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> logmu(-3.0, 3.0);
  std::bernoulli_distribution tie(0.2);
  int violations = 0;
  double min_slack = 1e300;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const int n = 2 + i % 5;
    std::vector<double> mu(n), xi(n);
    for (int k = 0; k < n; ++k) mu[k] = (k > 0 && tie(rng)) ? mu[k - 1] : std::exp(logmu(rng));
    std::sort(mu.begin(), mu.end());
    double norm = 0.0;
    for (auto& x : xi) norm += (x = g(rng)) * x;
    for (auto& x : xi) x /= std::sqrt(norm);
    const auto r = check_pointwise_bound(mu, xi);
    if (!r.holds) ++violations;
    min_slack = std::min(min_slack, r.slack);
  }
  o.detail << draws << " draws in n = 2..6, " << violations << " violations, min slack " << min_slack;
  o.require(violations == 0, "violations");
}

void invariance_suite(Outcome& o) {
  double worst_shift = 0.0, worst_scale = 0.0, worst_rowsum = 0.0, worst_const = 0.0;
  const auto dec = certified(WeightFamily::ExponentialDecay, {0.0, 1.0, 1.0}, 10.0);
  const auto lin = certified(WeightFamily::LinearDecreasing, {0.0, 0.7}, 10.0);
  for (const auto* w : {&dec, &lin}) {
    for (double c : {-2.0, 0.5, 3.0}) {
      const auto moved = w->shifted(c);
      for (auto sp : {SpaceForm::euclidean(), SpaceForm::hyperbolic()})
        for (int n : {2, 3, 4})
          for (int l : {0, 1, 2}) {
            const BallSpec b{1.1, n, sp};
            worst_shift = std::max(worst_shift, rel(shoot_general_mode(l, 0.0, b, moved, 1).mu,
                                                    shoot_general_mode(l, 0.0, b, *w, 1).mu));
          }
      const auto m = mesh_of(ellipse(1.3, 0.8), 0.1, 1);
      const auto a = fem_nonzero(m, *w, {}, 4), b = fem_nonzero(m, moved, {}, 4);
      for (std::size_t i = 0; i < a.size(); ++i) worst_shift = std::max(worst_shift, rel(b[i], a[i]));
    }
  }
  const auto w0 = zero();
  for (int n : {2, 3, 4}) {
    const double mu1 = shoot_first_mode({1.0, n, SpaceForm::euclidean()}, w0).mu;
    for (double R : {0.5, 1.0, 2.0})
      worst_scale = std::max(worst_scale, rel(shoot_first_mode({R, n, SpaceForm::euclidean()}, w0).mu, mu1 / (R * R)));
  }
  for (const auto& spec : {ellipse(1.3, 0.8), square(1.0), perturbed(1.0, 3, 0.1)}) {
    for (const auto* w : {&dec, &lin}) {
      const auto m = mesh_of(spec, 0.1, 1);
      const auto a = assemble(m, *w, SpaceForm::euclidean());
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(a.stiffness.dimension());
      worst_rowsum = std::max(worst_rowsum, (a.stiffness * ones).cwiseAbs().maxCoeff());
      const auto s = solve_lowest(3, a.stiffness, a.mass);
      o.require(s.zero_mode_detected, "zero mode not detected");
      worst_const = std::max(worst_const, s.zero_mode_spread);
    }
  }
  o.detail << "shift " << worst_shift << ", scaling " << worst_scale << ", K row sums " << worst_rowsum
           << ", zero-mode spread " << worst_const;
  o.require(worst_shift <= 1e-10, "shift invariance");
  o.require(worst_scale <= 1e-8, "scaling law");
  o.require(worst_rowsum <= 1e-12, "row sums");
  o.require(worst_const <= 1e-12, "zero-mode constancy");
}

void conjecture_suite(Outcome& o) {
  const double pi = std::numbers::pi;
  Problem sq = make_problem({"square", square(1.0)}, zero(), SpaceForm::euclidean());
  const auto c = CaseAnalysis(sq).conjectures();
  const double lhs_ref = 2.0 / (pi * pi), rhs_ref = 2.0 / (pi * oracle::ball_mu1(2));
  o.detail << "square LHS " << c.lhs << " (oracle " << lhs_ref << "), RHS " << c.rhs << " (oracle " << rhs_ref
           << ")";
  o.require(rel(c.lhs, lhs_ref) < 5e-3, "square LHS");
  o.require(rel(c.rhs, rhs_ref) < 5e-3, "square RHS");

  // Aspect sweep at fixed area pi.
  std::vector<double> margins, tols;
  int candidates = 0;
  for (int k = 0; k <= 10; ++k) {
    const double aspect = 1.0 + 0.1 * k;
    const auto p = make_problem({"aspect", ellipse(std::sqrt(aspect), 1.0 / std::sqrt(aspect))}, zero(),
                                SpaceForm::euclidean());
    const auto r = CaseAnalysis(p).conjectures();
    if (r.verdict != "conjecture-consistent") ++candidates;
    margins.push_back(r.margin);
    tols.push_back(r.tol);
  }
  const auto argmin = std::min_element(margins.begin(), margins.end()) - margins.begin();
  const bool at_ball = argmin == 0 || margins[0] <= margins[argmin] + tols[0] + tols[argmin];
  o.detail << "; aspect sweep 11 members, min margin at aspect " << 1.0 + 0.1 * argmin << ", margin(1) "
           << margins[0] << " +- " << tols[0];
  o.require(at_ball, "aspect sweep minimum away from the disk");

  // Slope sweep on a fixed ellipse.
  std::vector<double> slope_margins;
  for (int k = 0; k <= 5; ++k) {
    const auto w = certified(WeightFamily::LinearDecreasing, {0.0, 0.2 * k}, 4.0);
    const auto p = make_problem({"slope", ellipse(1.3, 0.8)}, w, SpaceForm::euclidean());
    const auto r = CaseAnalysis(p).conjectures();
    if (r.verdict != "conjecture-consistent") ++candidates;
    slope_margins.push_back(r.margin);
  }
  o.detail << "; slope sweep 6 members, margins " << slope_margins.front() << " .. " << slope_margins.back()
           << "; counterexample candidates " << candidates;
  o.require(candidates == 0, "counterexample candidates");
}

// Not a criterion: the ambient-origin reading of the comparison for
// off-center domains, reported for the record.
void ambient_frame_findings() {
  const auto w = certified(WeightFamily::LinearDecreasing, {0.0, 0.5}, 4.0);
  for (const auto& [name, spec] : std::vector<std::pair<std::string, DomainSpec>>{
           {"translated disk (0.3, 0)", disk(1.0, {0.3, 0.0})}, {"translated disk (0.3, -0.1)", disk(0.9, {0.3, -0.1})}}) {
    const auto p = make_problem({name, spec}, w, SpaceForm::euclidean());
    CaseAnalysis a(p);
    const auto m = a.main();
    std::printf("note  ambient frame, %s, %s: gap %.3e, tol %.3e\n", name.c_str(), w.tag().c_str(), m.gap,
                m.tol_budget);
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"disk constant (FEM and shooting vs Bessel roots)", disk_constant},
      {"unit square spectrum", square_spectrum},
      {"cross-solver agreement", cross_solver},
      {"Euclidean weighted inequality corpus", euclidean_suite},
      {"hyperbolic weighted inequality corpus", hyperbolic_suite},
      {"sharper estimate corpus", sharper_suite},
      {"radial monotonicity of f/S", monotonicity_suite},
      {"pointwise eigenvalue bound", pointwise_suite},
      {"invariance batteries", invariance_suite},
      {"conjecture explorer", conjecture_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s  %2zu %s [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, dt,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  ambient_frame_findings();
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
