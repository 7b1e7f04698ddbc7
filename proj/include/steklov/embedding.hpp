#ifndef STEKLOV_EMBEDDING_HPP
#define STEKLOV_EMBEDDING_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "steklov/error.hpp"
#include "steklov/graph.hpp"

namespace steklov {

using Face = std::vector<Vertex>;

/// BoundaryGraph plus a rotation system: for each vertex, its neighbors in
/// cyclic order. Each cycle is stored starting at its smallest neighbor.
///
/// Faces follow the combinatorial-map convention: the dart after u->v is
/// v->w, where w follows u in the rotation at v.
class RotationGraph {
 public:
  RotationGraph(BoundaryGraph base, std::vector<std::vector<Vertex>> rotation)
      : base_(std::move(base)), rotation_(std::move(rotation)) {
    const int n = base_.n();
    if (static_cast<int>(rotation_.size()) != n) {
      throw Error(ErrorCode::MalformedRotation,
                  "rotation has " + std::to_string(rotation_.size()) + " entries for " + std::to_string(n) + " vertices");
    }
    position_.resize(n);
    for (Vertex v = 0; v < n; ++v) {
      auto& cyc = rotation_[v];
      std::vector<Vertex> sorted = cyc;
      std::sort(sorted.begin(), sorted.end());
      auto nbrs = base_.neighbors(v);
      if (!std::equal(sorted.begin(), sorted.end(), nbrs.begin(), nbrs.end())) {
        throw Error(ErrorCode::MalformedRotation,
                    "rotation at vertex " + std::to_string(v) + " is not a permutation of its neighbors");
      }
      if (!cyc.empty()) std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
      for (std::size_t i = 0; i < cyc.size(); ++i) position_[v].emplace_back(cyc[i], static_cast<int>(i));
      std::sort(position_[v].begin(), position_[v].end());
    }
  }

  /// Builds the embedding whose faces are exactly `faces`.
  ///
  /// Each face is a closed walk f0 f1 ... f(k-1); consecutive pairs become
  /// edges. Every dart must occur in exactly one face and the corners at
  /// each vertex must close up into a single cycle (a closed surface).
  static RotationGraph from_faces(int n, std::span<const Face> faces, std::vector<Vertex> boundary) {
    if (n <= 0) throw Error(ErrorCode::IndexOutOfRange, "vertex count must be positive");
    std::vector<std::map<Vertex, Vertex>> succ(n);
    std::map<std::pair<Vertex, Vertex>, int> dart_face;
    std::vector<Edge> edges;
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
      const Face& f = faces[fi];
      const std::size_t k = f.size();
      if (k < 3) throw Error(ErrorCode::MalformedRotation, "face " + std::to_string(fi) + " has fewer than 3 corners");
      for (std::size_t i = 0; i < k; ++i) {
        Vertex a = f[i], b = f[(i + 1) % k], prev = f[(i + k - 1) % k];
        if (a < 0 || a >= n) throw Error(ErrorCode::IndexOutOfRange, "face " + std::to_string(fi) + " vertex out of range");
        if (a == b) throw Error(ErrorCode::SelfLoop, "face " + std::to_string(fi) + " repeats a vertex consecutively");
        if (!dart_face.emplace(std::pair{a, b}, static_cast<int>(fi)).second) {
          throw Error(ErrorCode::MalformedRotation,
                      "dart " + std::to_string(a) + "->" + std::to_string(b) + " appears in two faces");
        }
        if (a < b) edges.push_back({a, b});
        if (!succ[a].emplace(prev, b).second) {
          throw Error(ErrorCode::MalformedRotation, "conflicting corners at vertex " + std::to_string(a));
        }
      }
    }
    for (const auto& [dart, fi] : dart_face) {
      if (!dart_face.contains({dart.second, dart.first})) {
        throw Error(ErrorCode::MalformedRotation, "edge {" + std::to_string(dart.first) + "," +
                                                      std::to_string(dart.second) + "} borders only one face");
      }
    }
    BoundaryGraph base(n, std::move(edges), std::move(boundary));
    std::vector<std::vector<Vertex>> rotation(n);
    for (Vertex v = 0; v < n; ++v) {
      auto nbrs = base.neighbors(v);
      if (nbrs.empty()) continue;
      Vertex cur = nbrs.front();
      for (std::size_t step = 0; step < nbrs.size(); ++step) {
        rotation[v].push_back(cur);
        auto it = succ[v].find(cur);
        if (it == succ[v].end()) throw Error(ErrorCode::MalformedRotation, "open corner at vertex " + std::to_string(v));
        cur = it->second;
      }
      if (cur != nbrs.front() || succ[v].size() != nbrs.size()) {
        throw Error(ErrorCode::MalformedRotation, "corners at vertex " + std::to_string(v) + " do not form one cycle");
      }
    }
    return RotationGraph(std::move(base), std::move(rotation));
  }

  const BoundaryGraph& base() const noexcept { return base_; }
  int n() const noexcept { return base_.n(); }
  std::span<const Vertex> rotation(Vertex v) const { return rotation_[v]; }
  const std::vector<std::vector<Vertex>>& rotations() const noexcept { return rotation_; }

  /// Index of neighbor u in the rotation at v.
  int position(Vertex v, Vertex u) const {
    const auto& pos = position_[v];
    auto it = std::lower_bound(pos.begin(), pos.end(), std::pair{u, -1});
    if (it == pos.end() || it->first != u) {
      throw Error(ErrorCode::MalformedRotation, std::to_string(u) + " is not a neighbor of " + std::to_string(v));
    }
    return it->second;
  }

  /// Neighbor following u in the rotation at v.
  Vertex successor(Vertex v, Vertex u) const {
    const auto& cyc = rotation_[v];
    return cyc[(position(v, u) + 1) % cyc.size()];
  }

  RotationGraph with_boundary(std::vector<Vertex> boundary) const {
    return RotationGraph(base_.with_boundary(std::move(boundary)), rotation_);
  }

  bool operator==(const RotationGraph& other) const {
    return base_ == other.base_ && rotation_ == other.rotation_;
  }

 private:
  BoundaryGraph base_;
  std::vector<std::vector<Vertex>> rotation_;
  std::vector<std::vector<std::pair<Vertex, int>>> position_;
};

/// Result of face tracing. dart_face[u][i] is the face containing the dart
/// u -> rotation(u)[i].
struct FaceTrace {
  std::vector<Face> faces;
  std::vector<std::vector<int>> dart_face;
};

inline FaceTrace trace_faces_detailed(const RotationGraph& rg) {
  const int n = rg.n();
  FaceTrace out;
  out.dart_face.resize(n);
  for (Vertex v = 0; v < n; ++v) out.dart_face[v].assign(rg.rotation(v).size(), -1);

  for (Vertex u0 = 0; u0 < n; ++u0) {
    auto rot = rg.rotation(u0);
    for (std::size_t i0 = 0; i0 < rot.size(); ++i0) {
      if (out.dart_face[u0][i0] >= 0) continue;
      const int fi = static_cast<int>(out.faces.size());
      Face face;
      Vertex u = u0, v = rot[i0];
      int idx = static_cast<int>(i0);
      const std::size_t limit = 2 * rg.base().num_edges() + 1;
      while (true) {
        if (out.dart_face[u][idx] >= 0) {
          if (u == u0 && idx == static_cast<int>(i0)) break;
          throw Error(ErrorCode::MalformedRotation, "face tracing reached a dart twice");
        }
        out.dart_face[u][idx] = fi;
        face.push_back(u);
        if (face.size() > limit) throw Error(ErrorCode::MalformedRotation, "face tracing did not terminate");
        Vertex w = rg.successor(v, u);
        idx = rg.position(v, w);
        u = v;
        v = w;
      }
      out.faces.push_back(std::move(face));
    }
  }
  return out;
}

/// Faces as vertex cycles; every dart lies on exactly one face.
inline std::vector<Face> trace_faces(const RotationGraph& rg) { return trace_faces_detailed(rg).faces; }

/// V - E + F of the embedding. An edgeless single vertex counts one face.
inline int euler_characteristic(const RotationGraph& rg) {
  const int v = rg.n();
  const int e = static_cast<int>(rg.base().num_edges());
  const int f = e == 0 ? 1 : static_cast<int>(trace_faces(rg).size());
  return v - e + f;
}

/// Genus of the supplied embedding: g = (2 - V + E - F) / 2.
inline int genus(const RotationGraph& rg) {
  if (!rg.base().is_connected()) throw Error(ErrorCode::Disconnected, "genus requires a connected graph");
  const int chi = euler_characteristic(rg);
  if (chi > 2 || (2 - chi) % 2 != 0) {
    throw Error(ErrorCode::MalformedRotation, "Euler characteristic " + std::to_string(chi) + " is not orientable");
  }
  return (2 - chi) / 2;
}

inline bool is_fully_triangulated(const RotationGraph& rg) {
  if (rg.base().num_edges() == 0) return false;
  auto faces = trace_faces(rg);
  return std::all_of(faces.begin(), faces.end(), [](const Face& f) { return f.size() == 3; });
}

/// Same embedding with vertex v renamed to perm[v].
inline RotationGraph relabel(const RotationGraph& rg, std::span<const Vertex> perm) {
  const int n = rg.n();
  std::vector<Edge> edges;
  for (const Edge& e : rg.base().edges()) edges.push_back({perm[e.u], perm[e.v]});
  std::vector<Vertex> boundary;
  for (Vertex b : rg.base().boundary()) boundary.push_back(perm[b]);
  std::vector<std::vector<Vertex>> rotation(n);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex u : rg.rotation(v)) rotation[perm[v]].push_back(perm[u]);
  }
  return RotationGraph(BoundaryGraph(n, std::move(edges), std::move(boundary)), std::move(rotation));
}

}  // namespace steklov

#endif  // STEKLOV_EMBEDDING_HPP
