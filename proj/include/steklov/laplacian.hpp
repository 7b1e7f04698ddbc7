#ifndef STEKLOV_LAPLACIAN_HPP
#define STEKLOV_LAPLACIAN_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "steklov/graph.hpp"

namespace steklov {

/// Combinatorial Laplacian L = D - A of a BoundaryGraph.
///
/// Held as a dense matrix up to kDenseLimit vertices and as sorted adjacency
/// above it. Entry access, products and conversions behave the same in both
/// representations.
class LaplacianMatrix {
 public:
  static constexpr int kDenseLimit = 4096;

  explicit LaplacianMatrix(const BoundaryGraph& g) : n_(g.n()), adjacency_(g.n()) {
    for (Vertex v = 0; v < n_; ++v) {
      auto nbrs = g.neighbors(v);
      adjacency_[v].assign(nbrs.begin(), nbrs.end());
    }
    if (n_ <= kDenseLimit) dense_ = assemble_dense();
  }

  int n() const noexcept { return n_; }
  bool is_dense() const noexcept { return dense_.has_value(); }

  double operator()(Vertex x, Vertex y) const {
    if (dense_) return (*dense_)(x, y);
    if (x == y) return static_cast<double>(adjacency_[x].size());
    const auto& nbrs = adjacency_[x];
    return std::binary_search(nbrs.begin(), nbrs.end(), y) ? -1.0 : 0.0;
  }

  /// (L f)(x) = sum over neighbors y of f(x) - f(y). Exact for integer T.
  template <typename T>
  std::vector<T> apply(std::span<const T> f) const {
    std::vector<T> out(n_, T{});
    for (Vertex x = 0; x < n_; ++x) {
      T acc{};
      for (Vertex y : adjacency_[x]) acc += f[x] - f[y];
      out[x] = acc;
    }
    return out;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const {
    Eigen::VectorXd out(n_);
    for (Vertex x = 0; x < n_; ++x) {
      double acc = 0.0;
      for (Vertex y : adjacency_[x]) acc += f[x] - f[y];
      out[x] = acc;
    }
    return out;
  }

  Eigen::MatrixXd to_dense() const { return dense_ ? *dense_ : assemble_dense(); }

  Eigen::SparseMatrix<double> to_sparse() const {
    std::vector<Eigen::Triplet<double>> triplets;
    for (Vertex x = 0; x < n_; ++x) {
      triplets.emplace_back(x, x, static_cast<double>(adjacency_[x].size()));
      for (Vertex y : adjacency_[x]) triplets.emplace_back(x, y, -1.0);
    }
    Eigen::SparseMatrix<double> m(n_, n_);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
  }

 private:
  Eigen::MatrixXd assemble_dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (Vertex x = 0; x < n_; ++x) {
      m(x, x) = static_cast<double>(adjacency_[x].size());
      for (Vertex y : adjacency_[x]) m(x, y) = -1.0;
    }
    return m;
  }

  int n_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::optional<Eigen::MatrixXd> dense_;
};

inline LaplacianMatrix laplacian(const BoundaryGraph& g) { return LaplacianMatrix(g); }

}  // namespace steklov

#endif  // STEKLOV_LAPLACIAN_HPP
