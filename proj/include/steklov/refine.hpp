#ifndef STEKLOV_REFINE_HPP
#define STEKLOV_REFINE_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "steklov/embedding.hpp"
#include "steklov/error.hpp"
#include "steklov/graph.hpp"

namespace steklov {

namespace detail {

using EdgeSet = std::set<std::pair<Vertex, Vertex>>;

inline std::pair<Vertex, Vertex> key(Vertex a, Vertex b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

/// Zig-zag triangulation of the polygon p0 p1 ... ps along the path
/// p0 ps p1 p(s-1) p2 ... Empty when a chord would duplicate an existing edge.
inline std::vector<Face> zigzag(const Face& poly, const EdgeSet& edges) {
  const int s = static_cast<int>(poly.size()) - 1;
  std::vector<Face> tris{{poly[0], poly[1], poly[s]}};
  int lo = 1, hi = s;
  bool advance_low = false;
  while (hi - lo > 1) {
    if (advance_low) {
      tris.push_back({poly[lo], poly[lo + 1], poly[hi]});
      ++lo;
    } else {
      tris.push_back({poly[lo], poly[hi - 1], poly[hi]});
      --hi;
    }
    advance_low = !advance_low;
  }
  EdgeSet sides;
  for (std::size_t i = 0; i < poly.size(); ++i) sides.insert(key(poly[i], poly[(i + 1) % poly.size()]));
  for (const Face& t : tris) {
    for (std::size_t i = 0; i < 3; ++i) {
      auto e = key(t[i], t[(i + 1) % 3]);
      if (!sides.contains(e) && edges.contains(e)) return {};
    }
  }
  return tris;
}

/// Ear clipping that only cuts ears whose closing chord is a new edge
/// between distinct vertices. Handles faces whose walk revisits a vertex.
inline std::vector<Face> clip_ears(Face poly, const EdgeSet& edges, std::size_t face_index) {
  EdgeSet added;
  std::vector<Face> tris;
  while (poly.size() > 3) {
    const std::size_t k = poly.size();
    bool cut = false;
    for (std::size_t i = 0; i < k && !cut; ++i) {
      Vertex a = poly[(i + k - 1) % k], b = poly[i], c = poly[(i + 1) % k];
      if (a == c || a == b || b == c) continue;
      auto chord = key(a, c);
      if (edges.contains(chord) || added.contains(chord)) continue;
      tris.push_back({a, b, c});
      added.insert(chord);
      poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
      cut = true;
    }
    if (!cut) break;
  }
  if (poly.size() != 3 || poly[0] == poly[1] || poly[1] == poly[2] || poly[0] == poly[2]) {
    throw Error(ErrorCode::NonCycleFace, "face " + std::to_string(face_index) + " cannot be triangulated with new chords");
  }
  tris.push_back(poly);
  return tris;
}

}  // namespace detail

/// Adds chords inside every non-triangular face so the result is a
/// triangulation of the same surface containing the input as a spanning
/// subgraph. Cycle faces get the zig-zag path v1 vs v2 v(s-1) ...; faces
/// whose walk revisits a vertex fall back to chord-checked ear clipping.
inline RotationGraph fully_triangulate(const RotationGraph& rg) {
  auto faces = trace_faces(rg);
  detail::EdgeSet edges;
  for (const Edge& e : rg.base().edges()) edges.insert({e.u, e.v});

  std::vector<Face> out;
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const Face& f = faces[fi];
    if (f.size() == 3) {
      out.push_back(f);
      continue;
    }
    if (f.size() < 3) throw Error(ErrorCode::NonCycleFace, "face " + std::to_string(fi) + " has length " + std::to_string(f.size()));
    std::vector<Face> tris;
    std::set<Vertex> distinct(f.begin(), f.end());
    if (distinct.size() == f.size()) {
      for (std::size_t start = 0; start < f.size() && tris.empty(); ++start) {
        Face rotated(f.begin() + static_cast<std::ptrdiff_t>(start), f.end());
        rotated.insert(rotated.end(), f.begin(), f.begin() + static_cast<std::ptrdiff_t>(start));
        tris = detail::zigzag(rotated, edges);
      }
    }
    if (tris.empty()) tris = detail::clip_ears(f, edges, fi);
    for (const Face& t : tris) {
      for (std::size_t i = 0; i < 3; ++i) edges.insert(detail::key(t[i], t[(i + 1) % 3]));
      out.push_back(t);
    }
  }
  return RotationGraph::from_faces(rg.n(), out, rg.base().boundary());
}

namespace detail {

struct Subdivision {
  RotationGraph graph;
  int parent_vertices;
  std::vector<Edge> parent_edges;  // sorted; midpoint of parent_edges[i] is parent_vertices + i

  Vertex midpoint(Vertex a, Vertex b) const {
    Edge e = Edge{a, b}.normalized();
    auto it = std::lower_bound(parent_edges.begin(), parent_edges.end(), e);
    if (it == parent_edges.end() || *it != e) {
      throw Error(ErrorCode::MalformedRotation, "no edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
    }
    return parent_vertices + static_cast<Vertex>(it - parent_edges.begin());
  }
};

inline Subdivision subdivide_once(const RotationGraph& rg) {
  auto faces = trace_faces(rg);
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    if (faces[fi].size() != 3) {
      throw Error(ErrorCode::NotTriangulated, "face " + std::to_string(fi) + " has " + std::to_string(faces[fi].size()) + " sides");
    }
  }
  Subdivision sub{rg, rg.n(), rg.base().edges()};
  std::vector<Face> out;
  out.reserve(4 * faces.size());
  for (const Face& f : faces) {
    const Vertex a = f[0], b = f[1], c = f[2];
    const Vertex ab = sub.midpoint(a, b), bc = sub.midpoint(b, c), ca = sub.midpoint(c, a);
    out.push_back({a, ab, ca});
    out.push_back({b, bc, ab});
    out.push_back({c, ca, bc});
    out.push_back({ab, bc, ca});
  }
  const int n = rg.n() + static_cast<int>(rg.base().num_edges());
  sub.graph = RotationGraph::from_faces(n, out, rg.base().boundary());
  return sub;
}

}  // namespace detail

/// One hexagon subdivision: every triangle becomes four, midpoints of the
/// parent edges are appended in sorted edge order. V' = V + E,
/// E' = 2E + 3F, F' = 4F; the boundary set is carried over unchanged.
inline RotationGraph hex_subdivide(const RotationGraph& rg) { return detail::subdivide_once(rg).graph; }

/// Lattice points of one original face inside G^(k). Point (i, j) with
/// i + j <= r sits at a + (i/r)(b - a) + (j/r)(c - a), where (a, b, c) is
/// the traced orientation of the face.
struct FaceLattice {
  std::array<Vertex, 3> corners{};
  int resolution = 1;
  std::vector<Vertex> points;  // (resolution + 1)^2 slots; -1 outside the triangle

  Vertex at(int i, int j) const { return points[static_cast<std::size_t>(i) * (resolution + 1) + j]; }
  Vertex& at(int i, int j) { return points[static_cast<std::size_t>(i) * (resolution + 1) + j]; }
};

struct RefinedGraph {
  RotationGraph original;                 // G with its boundary
  RotationGraph rg;                       // G^(k); boundary is the inherited boundary
  int level = 0;
  std::vector<Vertex> parent_map;         // nearest original vertex, ties to the smaller index
  std::vector<Vertex> inherited_boundary;
  std::vector<Face> original_faces;
  std::vector<FaceLattice> lattices;      // one per original face

  int resolution() const { return 1 << level; }

  std::vector<std::vector<Vertex>> cells() const {
    std::vector<std::vector<Vertex>> out(original.n());
    for (Vertex v = 0; v < static_cast<Vertex>(parent_map.size()); ++v) out[parent_map[v]].push_back(v);
    return out;
  }
};

namespace detail {

inline std::vector<FaceLattice> refine_lattices(const std::vector<FaceLattice>& coarse, const Subdivision& sub) {
  std::vector<FaceLattice> fine;
  fine.reserve(coarse.size());
  for (const FaceLattice& lat : coarse) {
    const int r = lat.resolution;
    FaceLattice next;
    next.corners = lat.corners;
    next.resolution = 2 * r;
    next.points.assign(static_cast<std::size_t>(2 * r + 1) * (2 * r + 1), -1);
    for (int i = 0; i <= 2 * r; ++i) {
      for (int j = 0; i + j <= 2 * r; ++j) {
        Vertex v;
        if (i % 2 == 0 && j % 2 == 0) {
          v = lat.at(i / 2, j / 2);
        } else if (i % 2 == 1 && j % 2 == 0) {
          v = sub.midpoint(lat.at((i - 1) / 2, j / 2), lat.at((i + 1) / 2, j / 2));
        } else if (i % 2 == 0) {
          v = sub.midpoint(lat.at(i / 2, (j - 1) / 2), lat.at(i / 2, (j + 1) / 2));
        } else {
          v = sub.midpoint(lat.at((i - 1) / 2, (j + 1) / 2), lat.at((i + 1) / 2, (j - 1) / 2));
        }
        next.at(i, j) = v;
      }
    }
    fine.push_back(std::move(next));
  }
  return fine;
}

/// Nearest source by BFS distance; among equidistant sources the smallest
/// index wins. Sources are vertices 0..num_sources-1.
inline std::vector<Vertex> nearest_source(const BoundaryGraph& g, int num_sources) {
  const int n = g.n();
  std::vector<int> dist(n, -1);
  std::vector<Vertex> owner(n, -1);
  std::deque<Vertex> queue;
  for (Vertex s = 0; s < num_sources; ++s) {
    dist[s] = 0;
    owner[s] = s;
    queue.push_back(s);
  }
  std::vector<Vertex> order;
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop_front();
    order.push_back(x);
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  for (Vertex x : order) {
    if (dist[x] == 0) continue;
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] == dist[x] - 1 && (owner[x] < 0 || owner[y] < owner[x])) owner[x] = owner[y];
    }
  }
  return owner;
}

}  // namespace detail

/// k hexagon subdivisions of a triangulation, with the nearest-vertex
/// partition of V(G^(k)) and the boundary inherited from `boundary`.
inline RefinedGraph refine(const RotationGraph& rg, std::vector<Vertex> boundary, int k) {
  if (k < 0) throw Error(ErrorCode::IndexOutOfRange, "refinement level must be non-negative");
  RefinedGraph out{rg.with_boundary(std::move(boundary)), rg, k, {}, {}, {}, {}};
  out.original_faces = trace_faces(out.original);
  for (std::size_t fi = 0; fi < out.original_faces.size(); ++fi) {
    const Face& f = out.original_faces[fi];
    if (f.size() != 3) throw Error(ErrorCode::NotTriangulated, "face " + std::to_string(fi) + " is not a triangle");
    FaceLattice lat;
    lat.corners = {f[0], f[1], f[2]};
    lat.resolution = 1;
    lat.points = {f[0], f[2], f[1], -1};
    out.lattices.push_back(std::move(lat));
  }

  RotationGraph current = out.original;
  for (int level = 0; level < k; ++level) {
    auto sub = detail::subdivide_once(current);
    out.lattices = detail::refine_lattices(out.lattices, sub);
    current = std::move(sub.graph);
  }

  out.parent_map = detail::nearest_source(current.base(), rg.n());
  for (Vertex v = 0; v < current.n(); ++v) {
    if (out.original.base().is_boundary(out.parent_map[v])) out.inherited_boundary.push_back(v);
  }
  out.rg = current.with_boundary(out.inherited_boundary);
  return out;
}

/// |boundary of G^(k)| / (4^k |boundary of G|).
inline double boundary_growth(const RefinedGraph& refined) {
  const double scale = static_cast<double>(1ULL << (2 * refined.level));
  return static_cast<double>(refined.inherited_boundary.size()) /
         (scale * static_cast<double>(refined.original.base().boundary().size()));
}

}  // namespace steklov

#endif  // STEKLOV_REFINE_HPP
