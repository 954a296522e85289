// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "wlab/kernels.hpp"
#include "kernels_scalar.inl"

namespace wlab::kernels::detail {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void spmv_avx2(std::size_t rows, const int* outer, const int* inner, const double* values,
               const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    int k = outer[r];
    const int end = outer[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(inner + k));
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(values + k), _mm256_i32gather_pd(x, idx, 8), acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += values[k] * x[inner[k]];
    y[r] = s;
  }
}

void p1_elements_avx2(const ElementBatch& b) {
  using Rule = quad::Triangle6;
  const std::size_t n = b.count;
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t e = 0;
  for (; e + 4 <= n; e += 4) {
    const __m256d x0 = _mm256_loadu_pd(b.x0 + e), y0 = _mm256_loadu_pd(b.y0 + e);
    const __m256d x1 = _mm256_loadu_pd(b.x1 + e), y1 = _mm256_loadu_pd(b.y1 + e);
    const __m256d x2 = _mm256_loadu_pd(b.x2 + e), y2 = _mm256_loadu_pd(b.y2 + e);
    const __m256d ex0 = _mm256_sub_pd(x1, x2), ey0 = _mm256_sub_pd(y1, y2);
    const __m256d ex1 = _mm256_sub_pd(x2, x0), ey1 = _mm256_sub_pd(y2, y0);
    const __m256d ex2 = _mm256_sub_pd(x0, x1), ey2 = _mm256_sub_pd(y0, y1);
    const __m256d twice_area = _mm256_fmsub_pd(ex1, ey2, _mm256_mul_pd(ey1, ex2));
    const __m256d area = _mm256_mul_pd(half, twice_area);

    __m256d rs = _mm256_setzero_pd();
    for (int q = 0; q < Rule::size; ++q)
      rs = _mm256_fmadd_pd(_mm256_set1_pd(Rule::weights[q]), _mm256_loadu_pd(b.rho_stiffness + q * n + e), rs);
    const __m256d ks = _mm256_div_pd(_mm256_mul_pd(rs, area), _mm256_mul_pd(twice_area, twice_area));
    const auto edge_dot = [](__m256d ax, __m256d ay, __m256d bx, __m256d by) {
      return _mm256_fmadd_pd(ax, bx, _mm256_mul_pd(ay, by));
    };
    _mm256_storeu_pd(b.stiffness + 0 * n + e, _mm256_mul_pd(ks, edge_dot(ex0, ey0, ex0, ey0)));
    _mm256_storeu_pd(b.stiffness + 1 * n + e, _mm256_mul_pd(ks, edge_dot(ex0, ey0, ex1, ey1)));
    _mm256_storeu_pd(b.stiffness + 2 * n + e, _mm256_mul_pd(ks, edge_dot(ex0, ey0, ex2, ey2)));
    _mm256_storeu_pd(b.stiffness + 3 * n + e, _mm256_mul_pd(ks, edge_dot(ex1, ey1, ex1, ey1)));
    _mm256_storeu_pd(b.stiffness + 4 * n + e, _mm256_mul_pd(ks, edge_dot(ex1, ey1, ex2, ey2)));
    _mm256_storeu_pd(b.stiffness + 5 * n + e, _mm256_mul_pd(ks, edge_dot(ex2, ey2, ex2, ey2)));

    __m256d m[6];
    for (auto& v : m) v = _mm256_setzero_pd();
    for (int q = 0; q < Rule::size; ++q) {
      const auto& l = Rule::bary[q];
      const __m256d w = _mm256_mul_pd(_mm256_set1_pd(Rule::weights[q]), _mm256_loadu_pd(b.rho_mass + q * n + e));
      m[0] = _mm256_fmadd_pd(w, _mm256_set1_pd(l[0] * l[0]), m[0]);
      m[1] = _mm256_fmadd_pd(w, _mm256_set1_pd(l[0] * l[1]), m[1]);
      m[2] = _mm256_fmadd_pd(w, _mm256_set1_pd(l[0] * l[2]), m[2]);
      m[3] = _mm256_fmadd_pd(w, _mm256_set1_pd(l[1] * l[1]), m[3]);
      m[4] = _mm256_fmadd_pd(w, _mm256_set1_pd(l[1] * l[2]), m[4]);
      m[5] = _mm256_fmadd_pd(w, _mm256_set1_pd(l[2] * l[2]), m[5]);
    }
    for (int k = 0; k < 6; ++k) _mm256_storeu_pd(b.mass + k * n + e, _mm256_mul_pd(area, m[k]));
  }
  p1_element_range(b, e, n);
}

}  // namespace

const Table& avx2_table() {
  static const Table table{"avx2", dot_avx2, axpy_avx2, spmv_avx2, p1_elements_avx2};
  return table;
}

}  // namespace wlab::kernels::detail
