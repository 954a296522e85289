#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wlab/mesh.hpp"
#include "wlab/spaceform.hpp"
#include "wlab/weights.hpp"

namespace wlab {

/// Symmetric sparse matrix with both triangles stored (compressed columns).
class SparseSymmetric {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  SparseSymmetric() = default;
  explicit SparseSymmetric(Storage m) : m_(std::move(m)) {}

  Eigen::Index dimension() const { return m_.rows(); }
  const Storage& matrix() const { return m_; }

  /// y = A x through the runtime-selected kernel.
  void multiply(const double* x, double* y) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  double trace() const;
  /// max |A_ij - A_ji|, zero for assembled matrices.
  double asymmetry() const;

 private:
  Storage m_;
};

struct Assembly {
  SparseSymmetric stiffness;
  SparseSymmetric mass;
};

/// P1 weighted stiffness and mass. In the hyperbolic case the mesh lives in
/// the Poincare disk: stiffness keeps its coordinate form (the 2D Dirichlet
/// integral is conformally invariant) and the mass picks up lambda(x)^2.
/// Throws std::invalid_argument for an uncertified weight, a node outside the
/// Poincare disk, or nodes beyond the weight's domain cap.
Assembly assemble(const Mesh& mesh, const WeightFunction& phi, SpaceForm space);

/// Weighted area of the mesh, sum of the mass matrix entries.
double mesh_weighted_area(const Mesh& mesh, const WeightFunction& phi, SpaceForm space);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending, mu_0 first
  Eigen::MatrixXd eigenvectors;     // M-orthonormal columns
  std::vector<double> residuals;    // ||K x - mu M x|| / scale
  double zero_mode_tolerance = 0.0;
  bool zero_mode_detected = false;
  double zero_mode_spread = 0.0;    // max |x_i - mean| / |mean| of mode 0
  double shift = 0.0;
  int lanczos_dimension = 0;

  /// Nonzero eigenvalues mu_1, mu_2, ... (zero mode excluded).
  std::vector<double> nonzero() const;
};

struct EigenOptions {
  double residual_tol = 1e-8;
  int max_restarts = 6;
  int dense_threshold = 240;  // dense solver below this dimension
};

/// The k+1 lowest eigenpairs of K x = mu M x by shift-invert Lanczos with full
/// M-reorthogonalization (sparse LDL^T inner solve). Throws
/// std::invalid_argument when k > dim - 1, ConvergenceError on
/// non-convergence or an indefinite mass matrix.
SpectrumResult solve_lowest(int k, const SparseSymmetric& K, const SparseSymmetric& M,
                            const EigenOptions& opts = {});

}  // namespace wlab
