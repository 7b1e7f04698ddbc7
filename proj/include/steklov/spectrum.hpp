#ifndef STEKLOV_SPECTRUM_HPP
#define STEKLOV_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "steklov/error.hpp"
#include "steklov/graph.hpp"
#include "steklov/laplacian.hpp"

namespace steklov {

namespace spectrum_tolerance {
inline constexpr int kDenseInteriorLimit = 4096;
inline constexpr double kInteriorSolve = 1e-12;   // relative residual of the interior solve
inline constexpr double kEigenResidual = 1e-9;    // relative to max(1, lambda_max)
inline constexpr double kClampZero = 1e-9;        // |lambda_1| below this * lambda_max is set to 0
inline constexpr double kVectorCentroid = 1e-6;   // relative centroid size accepted by vector_rayleigh_bound
}  // namespace spectrum_tolerance

/// Dirichlet-to-Neumann operator on the boundary. Row/column i belongs to
/// boundary vertex `boundary[i]`.
struct DtNMatrix {
  Eigen::MatrixXd matrix;
  std::vector<Vertex> boundary;
};

/// Eigenpairs of the DtN operator. Column k of `eigenfunctions` is the
/// harmonic extension of the k-th boundary eigenvector to every vertex;
/// restricted to the boundary the columns are orthonormal.
struct SteklovSpectrum {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenfunctions;
  std::vector<Vertex> boundary;
};

namespace detail {

/// Splits V into boundary and interior and eliminates the interior block of
/// the Laplacian. L_II is an M-matrix and is positive definite exactly when
/// every interior component touches the boundary.
class InteriorElimination {
 public:
  explicit InteriorElimination(const BoundaryGraph& g) : g_(g), boundary_(g.boundary()), interior_(g.interior()) {
    const int n = g.n();
    local_.assign(n, -1);
    for (std::size_t i = 0; i < boundary_.size(); ++i) local_[boundary_[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < interior_.size(); ++i) local_[interior_[i]] = static_cast<int>(i);
    check_interior_attached();
    if (!interior_.empty()) extension_ = solve_interior(coupling());
  }

  const std::vector<Vertex>& boundary() const noexcept { return boundary_; }
  const std::vector<Vertex>& interior() const noexcept { return interior_; }

  /// X = -L_II^{-1} L_IB, so f_I = X f_B is the harmonic extension.
  const Eigen::MatrixXd& extension() const noexcept { return extension_; }

  Eigen::MatrixXd schur_complement() const {
    const auto nb = static_cast<Eigen::Index>(boundary_.size());
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nb, nb);
    for (Eigen::Index i = 0; i < nb; ++i) {
      const Vertex x = boundary_[i];
      s(i, i) = g_.degree(x);
      for (Vertex y : g_.neighbors(x)) {
        if (g_.is_boundary(y)) s(i, local_[y]) -= 1.0;
      }
    }
    if (!interior_.empty()) {
      // L_BI X: row i collects -X(j, .) over interior neighbors j.
      for (Eigen::Index i = 0; i < nb; ++i) {
        for (Vertex y : g_.neighbors(boundary_[i])) {
          if (!g_.is_boundary(y)) s.row(i) -= extension_.row(local_[y]) * 1.0;
        }
      }
    }
    return 0.5 * (s + s.transpose());
  }

  Eigen::MatrixXd extend(const Eigen::MatrixXd& boundary_values) const {
    const int n = g_.n();
    Eigen::MatrixXd full(n, boundary_values.cols());
    for (std::size_t i = 0; i < boundary_.size(); ++i) full.row(boundary_[i]) = boundary_values.row(i);
    if (!interior_.empty()) {
      Eigen::MatrixXd inner = extension_ * boundary_values;
      for (std::size_t i = 0; i < interior_.size(); ++i) full.row(interior_[i]) = inner.row(i);
    }
    return full;
  }

 private:
  void check_interior_attached() const {
    std::vector<int> seen(g_.n(), 0);
    std::vector<Vertex> stack;
    for (Vertex s : interior_) {
      if (seen[s]) continue;
      bool attached = false;
      seen[s] = 1;
      stack.push_back(s);
      while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        for (Vertex y : g_.neighbors(x)) {
          if (g_.is_boundary(y)) {
            attached = true;
          } else if (!seen[y]) {
            seen[y] = 1;
            stack.push_back(y);
          }
        }
      }
      if (!attached) {
        throw Error(ErrorCode::SingularInterior,
                    "interior component containing vertex " + std::to_string(s) + " has no boundary vertex");
      }
    }
  }

  /// -L_IB as a dense |I| x |B| right-hand side.
  Eigen::MatrixXd coupling() const {
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(interior_.size(), boundary_.size());
    for (std::size_t i = 0; i < interior_.size(); ++i) {
      for (Vertex y : g_.neighbors(interior_[i])) {
        if (g_.is_boundary(y)) rhs(i, local_[y]) += 1.0;
      }
    }
    return rhs;
  }

  Eigen::MatrixXd solve_interior(const Eigen::MatrixXd& rhs) const {
    const auto ni = static_cast<Eigen::Index>(interior_.size());
    if (ni <= spectrum_tolerance::kDenseInteriorLimit) {
      Eigen::MatrixXd lii = Eigen::MatrixXd::Zero(ni, ni);
      for (Eigen::Index i = 0; i < ni; ++i) {
        lii(i, i) = g_.degree(interior_[i]);
        for (Vertex y : g_.neighbors(interior_[i])) {
          if (!g_.is_boundary(y)) lii(i, local_[y]) = -1.0;
        }
      }
      Eigen::LLT<Eigen::MatrixXd> llt(lii);
      if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularInterior, "interior block is not positive definite");
      return llt.solve(rhs);
    }
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index i = 0; i < ni; ++i) {
      triplets.emplace_back(i, i, g_.degree(interior_[i]));
      for (Vertex y : g_.neighbors(interior_[i])) {
        if (!g_.is_boundary(y)) triplets.emplace_back(i, local_[y], -1.0);
      }
    }
    Eigen::SparseMatrix<double> lii(ni, ni);
    lii.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(spectrum_tolerance::kInteriorSolve);
    cg.setMaxIterations(10 * ni);
    cg.compute(lii);
    Eigen::MatrixXd out(ni, rhs.cols());
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
      out.col(c) = cg.solve(rhs.col(c));
      if (cg.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "interior conjugate gradient stalled at residual " +
                                                       std::to_string(cg.error()));
      }
    }
    return out;
  }

  const BoundaryGraph& g_;
  std::vector<Vertex> boundary_;
  std::vector<Vertex> interior_;
  std::vector<int> local_;
  Eigen::MatrixXd extension_;
};

}  // namespace detail

/// Schur complement of the Laplacian onto the boundary. Equals L when every
/// vertex is a boundary vertex.
inline DtNMatrix dtn_matrix(const BoundaryGraph& g) {
  detail::InteriorElimination elim(g);
  return {elim.schur_complement(), elim.boundary()};
}

inline SteklovSpectrum steklov_spectrum(const BoundaryGraph& g) {
  detail::InteriorElimination elim(g);
  const Eigen::MatrixXd s = elim.schur_complement();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver failed");

  Eigen::VectorXd values = solver.eigenvalues();
  Eigen::MatrixXd vectors = solver.eigenvectors();
  const double lambda_max = std::max(std::abs(values.maxCoeff()), std::abs(values.minCoeff()));
  const double scale = std::max(1.0, lambda_max);
  const double residual = (s * vectors - vectors * values.asDiagonal()).colwise().norm().maxCoeff();
  if (residual > spectrum_tolerance::kEigenResidual * scale) {
    throw Error(ErrorCode::ConvergenceFailure, "eigen residual " + std::to_string(residual));
  }
  if (std::abs(values[0]) < spectrum_tolerance::kClampZero * lambda_max) values[0] = 0.0;

  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    Eigen::Index pivot = 0;
    vectors.col(k).cwiseAbs().maxCoeff(&pivot);
    if (vectors(pivot, k) < 0) vectors.col(k) *= -1.0;
  }

  SteklovSpectrum out;
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  out.eigenfunctions = elim.extend(vectors);
  out.boundary = elim.boundary();
  return out;
}

/// k-th smallest Steklov eigenvalue, 1-based.
inline double lambda_k(const BoundaryGraph& g, int k) {
  const int nb = static_cast<int>(g.boundary().size());
  if (k < 1 || k > nb) {
    throw Error(ErrorCode::IndexOutOfRange, "k=" + std::to_string(k) + " outside 1.." + std::to_string(nb));
  }
  return steklov_spectrum(g).eigenvalues[k - 1];
}

inline double lambda2(const BoundaryGraph& g) { return lambda_k(g, 2); }

/// Sum over edges of (f(x)-f(y))^2 divided by the boundary mass of f.
inline double rayleigh_quotient(const BoundaryGraph& g, std::span<const double> f) {
  if (static_cast<int>(f.size()) != g.n()) throw Error(ErrorCode::IndexOutOfRange, "function length differs from n");
  double mass = 0.0;
  for (Vertex b : g.boundary()) mass += f[b] * f[b];
  if (!(mass > 0.0)) throw Error(ErrorCode::ZeroBoundaryNorm, "f vanishes on the boundary");
  double energy = 0.0;
  for (const Edge& e : g.edges()) {
    const double d = f[e.u] - f[e.v];
    energy += d * d;
  }
  return energy / mass;
}

/// Vector-valued Rayleigh quotient. Requires the boundary values to sum to
/// zero, in which case the result bounds lambda_2 from above.
inline double vector_rayleigh_bound(const BoundaryGraph& g, std::span<const Eigen::Vector3d> v,
                                    double centroid_tolerance = spectrum_tolerance::kVectorCentroid) {
  if (static_cast<int>(v.size()) != g.n()) throw Error(ErrorCode::IndexOutOfRange, "vector field length differs from n");
  double mass = 0.0;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (Vertex b : g.boundary()) {
    mass += v[b].squaredNorm();
    sum += v[b];
  }
  if (!(mass > 0.0)) throw Error(ErrorCode::ZeroBoundaryNorm, "vector field vanishes on the boundary");
  const double allowed = centroid_tolerance * std::sqrt(static_cast<double>(g.boundary().size()) * mass);
  if (sum.norm() > allowed) {
    throw Error(ErrorCode::CentroidNotZero, "boundary sum has norm " + std::to_string(sum.norm()));
  }
  double energy = 0.0;
  for (const Edge& e : g.edges()) energy += (v[e.u] - v[e.v]).squaredNorm();
  return energy / mass;
}

}  // namespace steklov

#endif  // STEKLOV_SPECTRUM_HPP
