#ifndef STEKLOV_GRAPH_HPP
#define STEKLOV_GRAPH_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "steklov/error.hpp"

namespace steklov {

using Vertex = int;

/// Undirected edge, stored with u < v once normalized.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge normalized() const { return u <= v ? Edge{u, v} : Edge{v, u}; }
  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph on vertices 0..n-1 with a non-empty boundary set.
///
/// Edges are kept sorted (smaller endpoint first) and adjacency lists are
/// sorted, so two graphs built from the same edge set compare equal no
/// matter the input order. Immutable after construction.
class BoundaryGraph {
 public:
  BoundaryGraph(int n, std::vector<Edge> edges, std::vector<Vertex> boundary)
      : n_(n) {
    if (n_ <= 0) {
      throw Error(ErrorCode::IndexOutOfRange, "vertex count must be positive, got " + std::to_string(n));
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "edge " + std::to_string(i) + " {" + std::to_string(e.u) + "," +
                        std::to_string(e.v) + "} outside 0.." + std::to_string(n_ - 1));
      }
      if (e.u == e.v) {
        throw Error(ErrorCode::SelfLoop, "edge " + std::to_string(i) + " is a loop at " + std::to_string(e.u));
      }
      edges[i] = e.normalized();
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i] == edges[i - 1]) {
        throw Error(ErrorCode::DuplicateEdge,
                    "edge {" + std::to_string(edges[i].u) + "," + std::to_string(edges[i].v) + "} listed twice");
      }
    }
    edges_ = std::move(edges);

    if (boundary.empty()) throw Error(ErrorCode::EmptyBoundary, "boundary set is empty");
    for (Vertex b : boundary) {
      if (b < 0 || b >= n_) {
        throw Error(ErrorCode::IndexOutOfRange, "boundary vertex " + std::to_string(b) + " out of range");
      }
    }
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    boundary_ = std::move(boundary);

    adjacency_.assign(n_, {});
    for (const Edge& e : edges_) {
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

    is_boundary_.assign(n_, false);
    for (Vertex b : boundary_) is_boundary_[b] = true;
  }

  int n() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Vertex>& boundary() const noexcept { return boundary_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }
  bool is_boundary(Vertex v) const { return is_boundary_[v]; }

  int max_degree() const {
    int d = 0;
    for (const auto& nbrs : adjacency_) d = std::max(d, static_cast<int>(nbrs.size()));
    return d;
  }

  bool has_edge(Vertex u, Vertex v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) return false;
    const auto& nbrs = adjacency_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
  }

  std::vector<Vertex> interior() const {
    std::vector<Vertex> out;
    out.reserve(n_ - boundary_.size());
    for (Vertex v = 0; v < n_; ++v) {
      if (!is_boundary_[v]) out.push_back(v);
    }
    return out;
  }

  /// Component id per vertex, ids assigned in order of smallest member.
  std::vector<int> component_labels() const {
    std::vector<int> label(n_, -1);
    int next = 0;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n_; ++s) {
      if (label[s] >= 0) continue;
      label[s] = next;
      stack.push_back(s);
      while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        for (Vertex y : adjacency_[x]) {
          if (label[y] < 0) {
            label[y] = next;
            stack.push_back(y);
          }
        }
      }
      ++next;
    }
    return label;
  }

  int num_components() const {
    auto labels = component_labels();
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  }

  bool is_connected() const { return num_components() == 1; }

  BoundaryGraph with_boundary(std::vector<Vertex> boundary) const {
    return BoundaryGraph(n_, edges_, std::move(boundary));
  }

  BoundaryGraph with_edge(Vertex u, Vertex v) const {
    auto edges = edges_;
    edges.push_back({u, v});
    return BoundaryGraph(n_, std::move(edges), boundary_);
  }

  bool operator==(const BoundaryGraph& other) const {
    return n_ == other.n_ && edges_ == other.edges_ && boundary_ == other.boundary_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<Vertex> boundary_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<bool> is_boundary_;
};

inline BoundaryGraph build_boundary_graph(int n, std::vector<Edge> edges, std::vector<Vertex> boundary) {
  return BoundaryGraph(n, std::move(edges), std::move(boundary));
}

/// Graph with every vertex on the boundary.
inline BoundaryGraph full_boundary_graph(int n, std::vector<Edge> edges) {
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), 0);
  return BoundaryGraph(n, std::move(edges), std::move(all));
}

}  // namespace steklov

#endif  // STEKLOV_GRAPH_HPP
