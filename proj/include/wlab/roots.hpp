#pragma once

#include <functional>

namespace wlab::roots {

struct BrentResult {
  double root = 0.0;
  double f_root = 0.0;
  int iterations = 0;
};

/// Brent's method on a bracket [a, b] with f(a)*f(b) <= 0.
/// Stops when the bracket width falls below 2*(eps*|x| + x_tol).
/// Throws BracketError if the endpoints do not bracket a root.
BrentResult brent(const std::function<double(double)>& f, double a, double b,
                  double x_tol = 0.0, double rel_tol = 1e-14,
                  int max_iter = 200);

}  // namespace wlab::roots
