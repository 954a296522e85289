#pragma once

// Closed forms and sampling oracles for areas, volumes and centers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline double hyperbolic_disk_area(double R) { return 2.0 * std::numbers::pi * (std::cosh(R) - 1.0); }

// 2 pi int_0^R t e^{a t} dt
inline double disk_volume_exp_slope(double R, double a) {
  const auto F = [a](double t) { return std::exp(a * t) * (t / a - 1.0 / (a * a)); };
  return 2.0 * std::numbers::pi * (F(R) - F(0.0));
}

// Monte Carlo estimate of int_{region} density(x) dx over a bounding box.
inline double monte_carlo(const std::function<bool(double, double)>& inside,
                          const std::function<double(double, double)>& density, double x0,
                          double x1, double y0, double y1, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = ux(rng), y = uy(rng);
    if (inside(x, y)) sum += density(x, y);
  }
  return sum / samples * (x1 - x0) * (y1 - y0);
}

// Unit-square Neumann spectrum pi^2 (p^2 + q^2), nonzero, ascending.
inline std::vector<double> square_spectrum(int count) {
  std::vector<double> out;
  for (int p = 0; p < 12; ++p)
    for (int q = 0; q < 12; ++q)
      if (p + q > 0) out.push_back(std::numbers::pi * std::numbers::pi * (p * p + q * q));
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

}  // namespace oracle
