// Shared scalar element kernel; included by both kernel translation units so
// the AVX2 variant can finish remainders with the same arithmetic.

#include "wlab/quadrature.hpp"

namespace wlab::kernels::detail {

inline void p1_element_range(const ElementBatch& b, std::size_t begin, std::size_t end) {
  using Rule = quad::Triangle6;
  const std::size_t n = b.count;
  for (std::size_t e = begin; e < end; ++e) {
    const double ex0 = b.x1[e] - b.x2[e], ey0 = b.y1[e] - b.y2[e];
    const double ex1 = b.x2[e] - b.x0[e], ey1 = b.y2[e] - b.y0[e];
    const double ex2 = b.x0[e] - b.x1[e], ey2 = b.y0[e] - b.y1[e];
    const double twice_area = ex1 * ey2 - ey1 * ex2;
    const double area = 0.5 * twice_area;

    double rs = 0.0;
    for (int q = 0; q < Rule::size; ++q) rs += Rule::weights[q] * b.rho_stiffness[q * n + e];
    // grad(lambda_i) . grad(lambda_j) = (e_i . e_j) / (2A)^2
    const double ks = rs * area / (twice_area * twice_area);
    b.stiffness[0 * n + e] = ks * (ex0 * ex0 + ey0 * ey0);
    b.stiffness[1 * n + e] = ks * (ex0 * ex1 + ey0 * ey1);
    b.stiffness[2 * n + e] = ks * (ex0 * ex2 + ey0 * ey2);
    b.stiffness[3 * n + e] = ks * (ex1 * ex1 + ey1 * ey1);
    b.stiffness[4 * n + e] = ks * (ex1 * ex2 + ey1 * ey2);
    b.stiffness[5 * n + e] = ks * (ex2 * ex2 + ey2 * ey2);

    double m[6] = {0, 0, 0, 0, 0, 0};
    for (int q = 0; q < Rule::size; ++q) {
      const auto& l = Rule::bary[q];
      const double w = Rule::weights[q] * b.rho_mass[q * n + e];
      m[0] += w * l[0] * l[0];
      m[1] += w * l[0] * l[1];
      m[2] += w * l[0] * l[2];
      m[3] += w * l[1] * l[1];
      m[4] += w * l[1] * l[2];
      m[5] += w * l[2] * l[2];
    }
    for (int k = 0; k < 6; ++k) b.mass[k * n + e] = area * m[k];
  }
}

}  // namespace wlab::kernels::detail
