#pragma once

#include <array>
#include <functional>

namespace wlab::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
/// Throws ConvergenceError when the interval budget is exhausted.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

/// Fixed 8-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre8 {
  static constexpr std::array<double, 8> nodes = {
      -0.96028985649753623168, -0.79666647741362673959,
      -0.52553240991632898582, -0.18343464249564980494,
      0.18343464249564980494,  0.52553240991632898582,
      0.79666647741362673959,  0.96028985649753623168};
  static constexpr std::array<double, 8> weights = {
      0.10122853629037625915, 0.22238103445337447054,
      0.31370664587788728734, 0.36268378337836198297,
      0.36268378337836198297, 0.31370664587788728734,
      0.22238103445337447054, 0.10122853629037625915};
};

/// Symmetric 6-point triangle rule, exact for polynomials of degree 4.
/// Barycentric coordinates; weights sum to one (multiply by the area).
struct Triangle6 {
  static constexpr int size = 6;
  static constexpr double a1 = 0.44594849091596488632;
  static constexpr double b1 = 1.0 - 2.0 * a1;
  static constexpr double a2 = 0.09157621350977074346;
  static constexpr double b2 = 1.0 - 2.0 * a2;
  static constexpr double w1 = 0.22338158967801146570;
  static constexpr double w2 = 0.10995174365532186764;
  static constexpr std::array<std::array<double, 3>, 6> bary = {{
      {a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1},
      {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2},
  }};
  static constexpr std::array<double, 6> weights = {w1, w1, w1, w2, w2, w2};
};

}  // namespace wlab::quad
