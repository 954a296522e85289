#include "wlab/fem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "wlab/error.hpp"
#include "wlab/kernels.hpp"
#include "wlab/quadrature.hpp"

namespace wlab {

namespace {

using Rule = quad::Triangle6;
constexpr std::size_t kBatch = 4096;

double radial_coordinate(const Vec2& x, SpaceForm space) {
  return space.is_hyperbolic() ? geodesic_distance_poincare(x) : x.norm();
}

void validate_inputs(const Mesh& mesh, const WeightFunction& phi, SpaceForm space) {
  if (!phi.certified())
    throw std::invalid_argument("weight " + phi.tag() + " has not passed Property I certification");
  if (mesh.triangles.empty()) throw std::invalid_argument("mesh has no triangles");
  for (const auto& p : mesh.nodes) {
    if (space.is_hyperbolic() && !(p.norm() < 1.0)) {
      std::ostringstream msg;
      msg << "mesh node (" << p.x() << ", " << p.y() << ") lies outside the Poincare disk";
      throw std::invalid_argument(msg.str());
    }
    const double r = radial_coordinate(p, space);
    if (r > phi.domain_cap() * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "mesh node at distance " << r << " exceeds the weight's certified domain cap "
          << phi.domain_cap();
      throw std::invalid_argument(msg.str());
    }
  }
}

// Visits the triangles in batches with quadrature densities filled in.
template <class Visit>
void for_each_batch(const Mesh& mesh, const WeightFunction& phi, SpaceForm space, Visit&& visit) {
  const std::size_t total = mesh.triangles.size();
  std::vector<double> coords(6 * kBatch), rho_s(Rule::size * kBatch), rho_m(Rule::size * kBatch);
  for (std::size_t begin = 0; begin < total; begin += kBatch) {
    const std::size_t n = std::min(kBatch, total - begin);
    double* x0 = coords.data();
    double* y0 = x0 + n;
    double* x1 = y0 + n;
    double* y1 = x1 + n;
    double* x2 = y1 + n;
    double* y2 = x2 + n;
    for (std::size_t e = 0; e < n; ++e) {
      const auto& t = mesh.triangles[begin + e];
      const Vec2 &a = mesh.nodes[t[0]], &b = mesh.nodes[t[1]], &c = mesh.nodes[t[2]];
      x0[e] = a.x(); y0[e] = a.y();
      x1[e] = b.x(); y1[e] = b.y();
      x2[e] = c.x(); y2[e] = c.y();
      for (int q = 0; q < Rule::size; ++q) {
        const auto& l = Rule::bary[q];
        const Vec2 p = l[0] * a + l[1] * b + l[2] * c;
        const double rho = phi.density(radial_coordinate(p, space));
        rho_s[q * n + e] = rho;
        if (space.is_hyperbolic()) {
          const double lambda = poincare_conformal_factor(p);
          rho_m[q * n + e] = rho * lambda * lambda;
        } else {
          rho_m[q * n + e] = rho;
        }
      }
    }
    kernels::ElementBatch batch;
    batch.count = n;
    batch.x0 = x0; batch.y0 = y0;
    batch.x1 = x1; batch.y1 = y1;
    batch.x2 = x2; batch.y2 = y2;
    batch.rho_stiffness = rho_s.data();
    batch.rho_mass = rho_m.data();
    visit(begin, batch);
  }
}

}  // namespace

void SparseSymmetric::multiply(const double* x, double* y) const {
  kernels::active().spmv(static_cast<std::size_t>(m_.outerSize()), m_.outerIndexPtr(),
                         m_.innerIndexPtr(), m_.valuePtr(), x, y);
}

Eigen::VectorXd SparseSymmetric::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(m_.rows());
  multiply(x.data(), y.data());
  return y;
}

double SparseSymmetric::trace() const { return m_.diagonal().sum(); }

double SparseSymmetric::asymmetry() const {
  const Storage t = m_.transpose();
  const Storage d = m_ - t;
  double worst = 0.0;
  for (int k = 0; k < d.nonZeros(); ++k) worst = std::max(worst, std::abs(d.valuePtr()[k]));
  return worst;
}

Assembly assemble(const Mesh& mesh, const WeightFunction& phi, SpaceForm space) {
  validate_inputs(mesh, phi, space);
  using Triplet = Eigen::Triplet<double, int>;
  std::vector<Triplet> ks, ms;
  ks.reserve(9 * mesh.triangles.size());
  ms.reserve(9 * mesh.triangles.size());
  std::vector<double> kout(6 * kBatch), mout(6 * kBatch);
  constexpr int row[6] = {0, 0, 0, 1, 1, 2};
  constexpr int col[6] = {0, 1, 2, 1, 2, 2};
  for_each_batch(mesh, phi, space, [&](std::size_t begin, kernels::ElementBatch& batch) {
    batch.stiffness = kout.data();
    batch.mass = mout.data();
    kernels::active().p1_elements(batch);
    const std::size_t n = batch.count;
    for (std::size_t e = 0; e < n; ++e) {
      const auto& t = mesh.triangles[begin + e];
      for (int k = 0; k < 6; ++k) {
        const int i = t[row[k]], j = t[col[k]];
        ks.emplace_back(i, j, kout[k * n + e]);
        ms.emplace_back(i, j, mout[k * n + e]);
        if (i != j) {
          ks.emplace_back(j, i, kout[k * n + e]);
          ms.emplace_back(j, i, mout[k * n + e]);
        }
      }
    }
  });
  const int dim = static_cast<int>(mesh.nodes.size());
  SparseSymmetric::Storage K(dim, dim), M(dim, dim);
  K.setFromTriplets(ks.begin(), ks.end());
  M.setFromTriplets(ms.begin(), ms.end());
  K.makeCompressed();
  M.makeCompressed();
  return {SparseSymmetric(std::move(K)), SparseSymmetric(std::move(M))};
}

double mesh_weighted_area(const Mesh& mesh, const WeightFunction& phi, SpaceForm space) {
  validate_inputs(mesh, phi, space);
  double total = 0.0;
  for_each_batch(mesh, phi, space, [&](std::size_t, const kernels::ElementBatch& b) {
    for (std::size_t e = 0; e < b.count; ++e) {
      const double area = 0.5 * ((b.x1[e] - b.x0[e]) * (b.y2[e] - b.y0[e]) -
                                 (b.x2[e] - b.x0[e]) * (b.y1[e] - b.y0[e]));
      double s = 0.0;
      for (int q = 0; q < Rule::size; ++q) s += Rule::weights[q] * b.rho_mass[q * b.count + e];
      total += area * s;
    }
  });
  return total;
}

std::vector<double> SpectrumResult::nonzero() const {
  if (eigenvalues.empty()) return {};
  return {eigenvalues.begin() + 1, eigenvalues.end()};
}

namespace {

double vdot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return kernels::active().dot(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

void vaxpy(double alpha, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  kernels::active().axpy(alpha, x.data(), y.data(), static_cast<std::size_t>(x.size()));
}

struct RitzPair {
  double mu;
  Eigen::VectorXd x;
  double residual;
  bool converged;
};

// M-orthonormal vectors with their images under M.
struct Basis {
  std::vector<Eigen::VectorXd> v, mv;

  // Two passes of classical Gram-Schmidt in the M inner product.
  void orthogonalize(Eigen::VectorXd& w) const {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double c = vdot(mv[i], w);
        vaxpy(-c, v[i], w);
      }
  }
};

class ShiftInvertLanczos {
 public:
  ShiftInvertLanczos(const SparseSymmetric& K, const SparseSymmetric& M, double shift)
      : K_(K), M_(M), shift_(shift) {
    const SparseSymmetric::Storage A = K.matrix() - shift * M.matrix();
    solver_.compute(A);
    if (solver_.info() != Eigen::Success)
      throw ConvergenceError("factorization of the shifted stiffness matrix failed");
    const double k_scale = K.trace() / M.trace();
    mu_floor_ = k_scale / static_cast<double>(K.dimension());
  }

  // One Lanczos run of at most m steps, orthogonal to the locked vectors.
  std::vector<RitzPair> run(int m, const Basis& locked, std::mt19937_64& rng, double tol) const {
    const Eigen::Index dim = K_.dimension();
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd w(dim);
    for (Eigen::Index i = 0; i < dim; ++i) w[i] = uniform(rng);

    Basis basis;
    std::vector<double> alpha, beta;
    locked.orthogonalize(w);
    Eigen::VectorXd mw = M_ * w;
    double norm = std::sqrt(vdot(w, mw));
    for (int j = 0; j < m; ++j) {
      if (!(norm > 0.0)) break;
      basis.v.push_back(w / norm);
      basis.mv.push_back(mw / norm);
      if (j > 0) beta.push_back(norm);
      w = solver_.solve(basis.mv.back());
      const double a = vdot(basis.mv.back(), w);
      alpha.push_back(a);
      locked.orthogonalize(w);
      basis.orthogonalize(w);
      mw = M_ * w;
      const double next = std::sqrt(std::max(0.0, vdot(w, mw)));
      // An invariant subspace has been reached.
      if (next <= 1e-13 * std::abs(a)) break;
      norm = next;
    }
    const int size = static_cast<int>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), size);
    Eigen::VectorXd sub(std::max(0, size - 1));
    for (int i = 0; i + 1 < size; ++i) sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

    std::vector<RitzPair> out;
    for (int i = size - 1; i >= 0; --i) {
      const double theta = tri.eigenvalues()[i];
      if (!(theta > 0.0)) continue;
      RitzPair p;
      p.mu = shift_ + 1.0 / theta;
      p.x = Eigen::VectorXd::Zero(dim);
      for (int j = 0; j < size; ++j) vaxpy(tri.eigenvectors()(j, i), basis.v[j], p.x);
      const Eigen::VectorXd mx = M_ * p.x;
      p.x /= std::sqrt(vdot(p.x, mx));
      p.residual = relative_residual(p.x, p.mu);
      p.converged = p.residual <= tol;
      out.push_back(std::move(p));
    }
    return out;
  }

  double relative_residual(const Eigen::VectorXd& x, double mu) const {
    const Eigen::VectorXd kx = K_ * x;
    const Eigen::VectorXd mx = M_ * x;
    const double scale = std::max(kx.norm(), std::max(std::abs(mu), mu_floor_) * mx.norm());
    return (kx - mu * mx).norm() / scale;
  }

 private:
  const SparseSymmetric& K_;
  const SparseSymmetric& M_;
  double shift_;
  double mu_floor_ = 0.0;
  Eigen::SimplicialLDLT<SparseSymmetric::Storage> solver_;
};

void fix_sign(Eigen::Ref<Eigen::VectorXd> x) {
  Eigen::Index at = 0;
  x.cwiseAbs().maxCoeff(&at);
  if (x[at] < 0) x = -x;
}

void finish(SpectrumResult& out, const SparseSymmetric& M) {
  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) fix_sign(out.eigenvectors.col(c));
  const double mu1 = out.eigenvalues.size() > 1 ? out.eigenvalues[1] : 1.0;
  out.zero_mode_tolerance = 1e-6 * std::abs(mu1);
  out.zero_mode_detected = std::abs(out.eigenvalues[0]) <= out.zero_mode_tolerance;
  const Eigen::VectorXd x0 = out.eigenvectors.col(0);
  const double mean = x0.mean();
  out.zero_mode_spread = mean != 0.0 ? (x0.array() - mean).abs().maxCoeff() / std::abs(mean) : 1.0;
  (void)M;
}

}  // namespace

SpectrumResult solve_lowest(int k, const SparseSymmetric& K, const SparseSymmetric& M,
                            const EigenOptions& opts) {
  const Eigen::Index dim = K.dimension();
  if (M.dimension() != dim) throw std::invalid_argument("stiffness and mass sizes differ");
  if (k < 0 || k > dim - 1) {
    std::ostringstream msg;
    msg << "requested " << k << " nonzero eigenvalues but the problem has dimension " << dim;
    throw std::invalid_argument(msg.str());
  }
  {
    Eigen::SimplicialLLT<SparseSymmetric::Storage> chol(M.matrix());
    if (chol.info() != Eigen::Success) throw ConvergenceError("mass matrix is not positive definite");
  }

  SpectrumResult out;
  const int want = k + 1;
  if (dim <= opts.dense_threshold) {
    const Eigen::MatrixXd Kd = K.matrix();
    const Eigen::MatrixXd Md = M.matrix();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kd, Md);
    if (ges.info() != Eigen::Success) throw ConvergenceError("dense generalized eigensolver failed");
    out.eigenvectors = ges.eigenvectors().leftCols(want);
    for (int i = 0; i < want; ++i) out.eigenvalues.push_back(ges.eigenvalues()[i]);
    out.lanczos_dimension = static_cast<int>(dim);
    ShiftInvertLanczos probe(K, M, -1e-8 * K.trace() / static_cast<double>(dim));
    for (int i = 0; i < want; ++i)
      out.residuals.push_back(probe.relative_residual(out.eigenvectors.col(i), out.eigenvalues[i]));
    finish(out, M);
    return out;
  }

  out.shift = -1e-8 * K.trace() / static_cast<double>(dim);
  ShiftInvertLanczos lanczos(K, M, out.shift);
  std::mt19937_64 rng(0x5eedULL);
  int m = static_cast<int>(std::min<Eigen::Index>(dim, std::max(2 * want + 20, 40)));
  Basis locked;
  std::vector<RitzPair> found;
  int restarts = 0;
  for (int round = 0;; ++round) {
    if (round > 4 * want + 4 * opts.max_restarts)
      throw ConvergenceError("shift-invert Lanczos did not settle on the lowest eigenvalues");
    const int room = static_cast<int>(dim) - static_cast<int>(locked.v.size());
    if (room <= 0) break;
    auto ritz = lanczos.run(std::min(m, room), locked, rng, opts.residual_tol);
    out.lanczos_dimension = std::max(out.lanczos_dimension, std::min(m, room));
    if (ritz.empty() || !ritz.front().converged) {
      if (++restarts > opts.max_restarts) {
        std::ostringstream msg;
        msg << "shift-invert Lanczos failed to converge after " << opts.max_restarts
            << " enlargements (basis " << m << ")";
        throw ConvergenceError(msg.str());
      }
      m = static_cast<int>(std::min<Eigen::Index>(dim, 2 * m));
      continue;
    }
    std::vector<double> sorted;
    for (const auto& p : found) sorted.push_back(p.mu);
    std::sort(sorted.begin(), sorted.end());
    if (static_cast<int>(sorted.size()) >= want) {
      const double cutoff = sorted[want - 1];
      if (ritz.front().mu >= cutoff - 1e-9 * std::max(1.0, std::abs(cutoff))) break;
    }
    for (auto& p : ritz) {
      if (!p.converged) break;
      locked.v.push_back(p.x);
      locked.mv.push_back(M * p.x);
      found.push_back(std::move(p));
    }
  }
  std::sort(found.begin(), found.end(), [](const RitzPair& a, const RitzPair& b) { return a.mu < b.mu; });
  if (static_cast<int>(found.size()) < want)
    throw ConvergenceError("shift-invert Lanczos exhausted the space before converging");
  out.eigenvectors.resize(dim, want);
  for (int i = 0; i < want; ++i) {
    out.eigenvalues.push_back(found[i].mu);
    out.eigenvectors.col(i) = found[i].x;
    out.residuals.push_back(found[i].residual);
  }
  finish(out, M);
  return out;
}

}  // namespace wlab
