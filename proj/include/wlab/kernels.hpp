#pragma once

// Data-parallel inner loops of the FEM assembly and the eigensolver.
// Every kernel has a scalar reference implementation; an AVX2/FMA variant is
// compiled separately and selected at runtime when the CPU supports it.

#include <cstddef>
#include <span>
#include <string_view>

namespace wlab::kernels {

/// Structure-of-arrays batch of P1 triangles. Quadrature densities are laid
/// out point-major: rho[q * count + e] for the six points of quad::Triangle6.
/// Outputs hold the upper triangle (00, 01, 02, 11, 12, 22) entry-major:
/// out[entry * count + e].
struct ElementBatch {
  std::size_t count = 0;
  const double* x0 = nullptr;
  const double* y0 = nullptr;
  const double* x1 = nullptr;
  const double* y1 = nullptr;
  const double* x2 = nullptr;
  const double* y2 = nullptr;
  const double* rho_stiffness = nullptr;
  const double* rho_mass = nullptr;
  double* stiffness = nullptr;
  double* mass = nullptr;
};

struct Table {
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y = A x for compressed rows (or, for a symmetric matrix, columns).
  void (*spmv)(std::size_t rows, const int* outer, const int* inner,
               const double* values, const double* x, double* y);
  void (*p1_elements)(const ElementBatch& batch);
};

const Table& scalar();
/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2/FMA.
const Table* avx2();
/// The fastest supported table; fixed for the lifetime of the process.
const Table& active();

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace wlab::kernels
