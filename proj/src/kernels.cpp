#include "wlab/kernels.hpp"

#include <cassert>

#include "kernels_scalar.inl"

namespace wlab::kernels {

namespace detail {
#ifdef WLAB_HAVE_AVX2
const Table& avx2_table();
#endif
}  // namespace detail

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void spmv_scalar(std::size_t rows, const int* outer, const int* inner, const double* values,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = outer[r]; k < outer[r + 1]; ++k) s += values[k] * x[inner[k]];
    y[r] = s;
  }
}

void p1_elements_scalar(const ElementBatch& batch) {
  detail::p1_element_range(batch, 0, batch.count);
}

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace

const Table& scalar() {
  static const Table table{"scalar", dot_scalar, axpy_scalar, spmv_scalar, p1_elements_scalar};
  return table;
}

const Table* avx2() {
#ifdef WLAB_HAVE_AVX2
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table& table = avx2() ? *avx2() : scalar();
  return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace wlab::kernels
