#pragma once

#include <array>
#include <functional>

namespace wlab::ode {

using State = std::array<double, 2>;
using Rhs = std::function<State(double, const State&)>;

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_steps = 200000;
};

/// Adaptive Dormand-Prince 5(4) integrator for a two-component system.
/// Keeps the last accepted step size between calls so a trajectory can be
/// advanced segment by segment.
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, Options opts = {});

  /// Advance y from t0 to t1 (t1 > t0). Throws ConvergenceError when the
  /// step size underflows or the step budget is exhausted.
  void advance(double t0, double t1, State& y);

  void set_initial_step(double h) { h_ = h; }
  int steps_taken() const { return steps_; }

 private:
  Rhs rhs_;
  Options opts_;
  double h_ = 0.0;
  int steps_ = 0;
};

}  // namespace wlab::ode
