#ifndef STEKLOV_RESISTANCE_HPP
#define STEKLOV_RESISTANCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "steklov/embedding.hpp"
#include "steklov/error.hpp"
#include "steklov/graph.hpp"
#include "steklov/laplacian.hpp"
#include "steklov/rng.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

inline constexpr double kResistanceAgreement = 1e-9;

struct ResistanceResult {
  Vertex u = 0;
  Vertex v = 0;
  double r_steklov = 0.0;  // 2 / lambda_2(G, {u, v})
  double r_pinv = 0.0;     // (e_u - e_v)^T L^+ (e_u - e_v)
  double discrepancy = 0.0;
};

/// Solves L x = b for b orthogonal to the constant vector, by conjugate
/// gradient kept in the complement of the constants.
inline Eigen::VectorXd solve_laplacian_projected(const LaplacianMatrix& lap, const Eigen::VectorXd& b, double tol = 1e-12) {
  const Eigen::Index n = b.size();
  auto project = [n](Eigen::VectorXd& x) { x.array() -= x.sum() / static_cast<double>(n); };
  Eigen::VectorXd rhs = b;
  project(rhs);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  const double target = tol * tol * rhs.squaredNorm();
  for (Eigen::Index it = 0; it < 10 * n + 100 && rr > target; ++it) {
    Eigen::VectorXd ap = lap.apply(p);
    project(ap);
    const double alpha = rr / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    project(r);
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  if (rr > target) throw Error(ErrorCode::ConvergenceFailure, "projected conjugate gradient did not converge");
  project(x);
  return x;
}

/// Effective resistance between u and v in the unit network on g (its own
/// boundary set is ignored), computed twice: from the Steklov eigenvalue with
/// boundary {u, v} and from the Laplacian pseudoinverse.
inline ResistanceResult effective_resistance(const BoundaryGraph& g, Vertex u, Vertex v) {
  if (u < 0 || u >= g.n() || v < 0 || v >= g.n()) throw Error(ErrorCode::IndexOutOfRange, "vertex out of range");
  if (u == v) throw Error(ErrorCode::SameVertex, "resistance needs two distinct vertices");
  if (!g.is_connected()) throw Error(ErrorCode::Disconnected, "resistance needs a connected network");

  ResistanceResult res{u, v, 0.0, 0.0, 0.0};
  res.r_steklov = 2.0 / lambda2(g.with_boundary({u, v}));

  Eigen::VectorXd b = Eigen::VectorXd::Zero(g.n());
  b[u] = 1.0;
  b[v] = -1.0;
  const Eigen::VectorXd x = solve_laplacian_projected(LaplacianMatrix(g), b);
  res.r_pinv = x[u] - x[v];
  res.discrepancy = std::abs(res.r_steklov - res.r_pinv);
  return res;
}

struct ResistanceFloorReport {
  int genus = 0;
  std::size_t pairs_sampled = 0;
  ResistanceResult minimum;
  double empirical_constant = 0.0;  // min R * (g + 1)
  double max_discrepancy = 0.0;
};

/// Smallest effective resistance over vertex pairs of an embedded network,
/// scaled by (g + 1). Every pair is used when there are at most
/// `max_pairs`; otherwise `max_pairs` distinct pairs are drawn from the seed.
inline ResistanceFloorReport resistance_genus_floor(const RotationGraph& rg, std::size_t max_pairs = 2000, std::uint64_t seed = 1) {
  const BoundaryGraph& g = rg.base();
  ResistanceFloorReport rep;
  rep.genus = genus(rg);
  const auto n = static_cast<std::size_t>(g.n());
  if (n < 2) throw Error(ErrorCode::TooSmall, "need at least two vertices");

  std::vector<std::pair<Vertex, Vertex>> pairs;
  const std::size_t total = n * (n - 1) / 2;
  if (total <= max_pairs) {
    for (Vertex a = 0; a < g.n(); ++a) {
      for (Vertex b = a + 1; b < g.n(); ++b) pairs.emplace_back(a, b);
    }
  } else {
    CounterRng rng(seed);
    // Adjacent pairs first: the minimum is attained there in practice.
    for (const Edge& e : g.edges()) {
      if (pairs.size() >= max_pairs / 2) break;
      pairs.emplace_back(e.u, e.v);
    }
    while (pairs.size() < max_pairs) {
      Vertex a = static_cast<Vertex>(rng.uniform_index(n));
      Vertex b = static_cast<Vertex>(rng.uniform_index(n));
      if (a == b) continue;
      pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  }

  rep.minimum.r_steklov = std::numeric_limits<double>::infinity();
  for (auto [a, b] : pairs) {
    ResistanceResult r = effective_resistance(g, a, b);
    rep.max_discrepancy = std::max(rep.max_discrepancy, r.discrepancy);
    if (r.r_steklov < rep.minimum.r_steklov) rep.minimum = r;
  }
  rep.pairs_sampled = pairs.size();
  rep.empirical_constant = rep.minimum.r_steklov * (rep.genus + 1);
  return rep;
}

}  // namespace steklov

#endif  // STEKLOV_RESISTANCE_HPP
