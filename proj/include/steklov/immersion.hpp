#ifndef STEKLOV_IMMERSION_HPP
#define STEKLOV_IMMERSION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "steklov/embedding.hpp"
#include "steklov/error.hpp"
#include "steklov/graph.hpp"
#include "steklov/refine.hpp"
#include "steklov/rng.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

using Path = std::vector<Vertex>;

/// Source graph G realized inside host H: each edge source.edges()[i] =
/// {u, v} becomes paths[i], a walk in H from vertex_map[u] to vertex_map[v].
/// xi is the largest number of paths through one host edge, ell the
/// longest path.
struct Immersion {
  BoundaryGraph source;
  BoundaryGraph host;
  std::vector<Vertex> vertex_map;
  std::vector<Path> paths;
  int xi = 0;
  int ell = 0;
  std::vector<Vertex> host_origin;  // host vertex -> vertex of the graph it was cut from, when any
  std::uint64_t seed = 0;
};

struct ImmersionMeasure {
  int xi = 0;
  int ell = 0;
};

/// Recomputes (xi, ell) from the paths and checks every structural rule.
inline ImmersionMeasure verify_immersion(const Immersion& imm) {
  const BoundaryGraph& g = imm.source;
  const BoundaryGraph& h = imm.host;
  if (static_cast<int>(imm.vertex_map.size()) != g.n()) {
    throw Error(ErrorCode::EndpointMismatch, "vertex map covers " + std::to_string(imm.vertex_map.size()) + " of " + std::to_string(g.n()) + " vertices");
  }
  std::vector<char> used(h.n(), 0);
  for (Vertex v = 0; v < g.n(); ++v) {
    const Vertex hv = imm.vertex_map[v];
    if (hv < 0 || hv >= h.n()) throw Error(ErrorCode::EndpointMismatch, "vertex " + std::to_string(v) + " maps outside the host");
    if (used[hv]) throw Error(ErrorCode::EndpointMismatch, "vertex map is not injective at host vertex " + std::to_string(hv));
    used[hv] = 1;
  }
  std::vector<Vertex> image;
  for (Vertex b : g.boundary()) image.push_back(imm.vertex_map[b]);
  std::sort(image.begin(), image.end());
  if (image != h.boundary()) throw Error(ErrorCode::BoundaryMismatch, "vertex map does not carry the boundary onto the host boundary");
  if (imm.paths.size() != g.num_edges()) {
    throw Error(ErrorCode::BrokenPath, std::to_string(imm.paths.size()) + " paths for " + std::to_string(g.num_edges()) + " edges");
  }

  const auto& host_edges = h.edges();
  std::vector<int> load(host_edges.size(), 0);
  ImmersionMeasure out;
  for (std::size_t i = 0; i < imm.paths.size(); ++i) {
    const Path& p = imm.paths[i];
    const Edge e = g.edges()[i];
    if (p.size() < 2) throw Error(ErrorCode::BrokenPath, "path " + std::to_string(i) + " has no edges");
    const Vertex a = imm.vertex_map[e.u], b = imm.vertex_map[e.v];
    const bool forward = p.front() == a && p.back() == b;
    const bool backward = p.front() == b && p.back() == a;
    if (!forward && !backward) throw Error(ErrorCode::EndpointMismatch, "path " + std::to_string(i) + " does not join its edge's endpoints");
    std::vector<std::size_t> seen;
    for (std::size_t s = 0; s + 1 < p.size(); ++s) {
      const Edge step = Edge{p[s], p[s + 1]}.normalized();
      auto it = std::lower_bound(host_edges.begin(), host_edges.end(), step);
      if (it == host_edges.end() || *it != step) {
        throw Error(ErrorCode::BrokenPath, "path " + std::to_string(i) + " steps along a non-edge {" + std::to_string(step.u) + "," + std::to_string(step.v) + "}");
      }
      const auto idx = static_cast<std::size_t>(it - host_edges.begin());
      if (std::find(seen.begin(), seen.end(), idx) != seen.end()) {
        throw Error(ErrorCode::BrokenPath, "path " + std::to_string(i) + " repeats a host edge");
      }
      seen.push_back(idx);
      out.xi = std::max(out.xi, ++load[idx]);
    }
    out.ell = std::max(out.ell, static_cast<int>(p.size()) - 1);
  }
  return out;
}

/// Fills in xi and ell after verification.
inline Immersion make_immersion(BoundaryGraph source, BoundaryGraph host, std::vector<Vertex> vertex_map, std::vector<Path> paths) {
  Immersion imm{std::move(source), std::move(host), std::move(vertex_map), std::move(paths), 0, 0, {}, 0};
  auto m = verify_immersion(imm);
  imm.xi = m.xi;
  imm.ell = m.ell;
  return imm;
}

inline Immersion identity_immersion(const BoundaryGraph& g) {
  std::vector<Vertex> id(g.n());
  for (Vertex v = 0; v < g.n(); ++v) id[v] = v;
  std::vector<Path> paths;
  for (const Edge& e : g.edges()) paths.push_back({e.u, e.v});
  return make_immersion(g, g, std::move(id), std::move(paths));
}

struct Comparison {
  double lhs = 0.0;  // lambda_k of the source
  double rhs = 0.0;  // xi * ell * lambda_k of the host
};

/// Both sides of lambda_k(G) <= xi * ell * lambda_k(H).
inline Comparison comparison_bound(const Immersion& imm, int k) {
  auto m = verify_immersion(imm);
  const double lg = lambda_k(imm.source, k);
  const double lh = lambda_k(imm.host, k);
  return {lg, static_cast<double>(m.xi) * static_cast<double>(m.ell) * lh};
}

namespace detail {

/// Removes cycles from a walk in the order they close, leaving a simple path
/// with the same endpoints.
inline Path erase_loops(const Path& walk) {
  Path out;
  std::unordered_map<Vertex, std::size_t> where;
  for (Vertex v : walk) {
    auto it = where.find(v);
    if (it != where.end()) {
      for (std::size_t i = it->second + 1; i < out.size(); ++i) where.erase(out[i]);
      out.resize(it->second + 1);
    } else {
      where.emplace(v, out.size());
      out.push_back(v);
    }
  }
  return out;
}

/// Joins two walks that end at the same connector vertex. The shared tail
/// is trimmed first, then any remaining loops are erased.
inline Path join_at_connector(Path from_v, Path from_u) {
  while (from_v.size() >= 2 && from_u.size() >= 2 && from_v[from_v.size() - 2] == from_u[from_u.size() - 2]) {
    from_v.pop_back();
    from_u.pop_back();
  }
  Path walk = std::move(from_v);
  for (auto it = from_u.rbegin() + 1; it != from_u.rend(); ++it) walk.push_back(*it);
  return erase_loops(walk);
}

/// Builds the random grid-routed paths of one refinement.
class GridRouter {
 public:
  explicit GridRouter(const RefinedGraph& refined)
      : refined_(refined), trace_(trace_faces_detailed(refined.original)), r_(refined.resolution()) {
    const RotationGraph& g = refined.original;
    fan_.resize(g.n());
    fan_position_.resize(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
      for (Vertex w : g.rotation(v)) {
        const int f = trace_.dart_face[w][g.position(w, v)];
        fan_position_[v].emplace(f, static_cast<int>(fan_[v].size()));
        fan_[v].push_back(f);
      }
    }
    membership_.resize(refined.rg.n());
    for (std::size_t f = 0; f < refined.lattices.size(); ++f) {
      const FaceLattice& lat = refined.lattices[f];
      std::vector<Vertex> pts;
      for (int i = 0; i <= r_; ++i) {
        for (int j = 0; i + j <= r_; ++j) {
          const Vertex x = lat.at(i, j);
          pts.push_back(x);
          if (membership_[x].empty() || membership_[x].back() != static_cast<int>(f)) membership_[x].push_back(static_cast<int>(f));
        }
      }
      face_points_.push_back(std::move(pts));
    }
  }

  const std::vector<Vertex>& face_points(int f) const { return face_points_[f]; }

  /// A face around v whose subdivision contains x.
  int face_in_fan(Vertex v, Vertex x) const {
    for (int f : membership_[x]) {
      if (fan_position_[v].contains(f)) return f;
    }
    throw Error(ErrorCode::BrokenPath, "vertex " + std::to_string(x) + " lies outside the star of " + std::to_string(v));
  }

  int face_of_dart(Vertex a, Vertex b) const {
    return trace_.dart_face[a][refined_.original.position(a, b)];
  }

  /// Initial-path from start (inside face start_face around v) to target
  /// (inside target_face around v), crossing the shorter run of faces.
  Path initial_path(Vertex v, Vertex start, int start_face, Vertex target, int target_face, CounterRng& rng) const {
    const int d = static_cast<int>(fan_[v].size());
    const int p = fan_position_[v].at(start_face);
    const int q = fan_position_[v].at(target_face);
    const int fwd = ((q - p) % d + d) % d;
    const int bwd = (d - fwd) % d;
    int step = 1;
    if (bwd < fwd || (bwd == fwd && fwd != 0 && rng.coin())) step = -1;
    const int hops = step == 1 ? fwd : bwd;

    std::vector<int> positions{p};
    for (int i = 1; i <= hops; ++i) positions.push_back(((p + step * i) % d + d) % d);
    std::vector<Vertex> anchors{start};
    for (int i = 1; i < hops; ++i) {
      const auto& pts = face_points(fan_[v][positions[i]]);
      anchors.push_back(pts[rng.uniform_index(pts.size())]);
    }
    anchors.push_back(target);

    Path walk{start};
    if (hops == 0) {
      // Same face: borrow a random neighbor across one of its sides.
      const Face& tri = refined_.original_faces[start_face];
      const int side = static_cast<int>(rng.uniform_index(3));
      const Vertex a = tri[side], b = tri[(side + 1) % 3];
      append(walk, route(a, b, start_face, face_of_dart(b, a), start, target, rng));
      return walk;
    }
    const auto& rot = refined_.original.rotation(v);
    for (int i = 0; i < hops; ++i) {
      const int from = positions[i], to = positions[i + 1];
      // Consecutive fan faces j, j+1 share the edge v - rotation[j+1].
      const Vertex w = rot[step == 1 ? (from + 1) % d : from];
      append(walk, route(v, w, fan_[v][from], fan_[v][to], anchors[i], anchors[i + 1], rng));
    }
    return walk;
  }

 private:
  static void append(Path& walk, const Path& segment) {
    for (std::size_t i = 1; i < segment.size(); ++i) walk.push_back(segment[i]);
  }

  /// L-shaped route inside the (r+1) x (r+1) grid formed by two faces that
  /// share the side p-q; p sits at (0,0) and q at (r,r).
  Path route(Vertex p, Vertex q, int face_a, int face_b, Vertex from, Vertex to, CounterRng& rng) const {
    const int side = r_ + 1;
    std::vector<Vertex> grid(static_cast<std::size_t>(side) * side, -1);
    place(grid, face_a, p, q, true);
    place(grid, face_b, p, q, false);
    auto locate = [&](Vertex x) {
      for (int X = 0; X < side; ++X) {
        for (int Y = 0; Y < side; ++Y) {
          if (grid[static_cast<std::size_t>(X) * side + Y] == x) return std::pair{X, Y};
        }
      }
      throw Error(ErrorCode::BrokenPath, "vertex " + std::to_string(x) + " is not in the routing grid");
    };
    auto [x0, y0] = locate(from);
    auto [x1, y1] = locate(to);
    const bool horizontal_first = rng.coin();
    Path out{from};
    int x = x0, y = y0;
    auto walk_x = [&] { while (x != x1) { x += x1 > x ? 1 : -1; out.push_back(grid[static_cast<std::size_t>(x) * side + y]); } };
    auto walk_y = [&] { while (y != y1) { y += y1 > y ? 1 : -1; out.push_back(grid[static_cast<std::size_t>(x) * side + y]); } };
    if (horizontal_first) {
      walk_x();
      walk_y();
    } else {
      walk_y();
      walk_x();
    }
    return out;
  }

  /// Writes the lattice of `face` into square coordinates: p -> (0,0),
  /// q -> (r,r), the third corner -> (r,0) for the lower face or (0,r).
  void place(std::vector<Vertex>& grid, int face, Vertex p, Vertex q, bool lower) const {
    const FaceLattice& lat = refined_.lattices[face];
    const int side = r_ + 1;
    std::array<std::pair<int, int>, 3> corner_pos{};
    for (int c = 0; c < 3; ++c) {
      const Vertex v = lat.corners[c];
      if (v == p) corner_pos[c] = {0, 0};
      else if (v == q) corner_pos[c] = {r_, r_};
      else corner_pos[c] = lower ? std::pair{r_, 0} : std::pair{0, r_};
    }
    for (int i = 0; i <= r_; ++i) {
      for (int j = 0; i + j <= r_; ++j) {
        const int X = (corner_pos[0].first * (r_ - i - j) + corner_pos[1].first * i + corner_pos[2].first * j) / r_;
        const int Y = (corner_pos[0].second * (r_ - i - j) + corner_pos[1].second * i + corner_pos[2].second * j) / r_;
        Vertex& slot = grid[static_cast<std::size_t>(X) * side + Y];
        if (slot >= 0 && slot != lat.at(i, j)) throw Error(ErrorCode::BrokenPath, "faces disagree on their shared side");
        slot = lat.at(i, j);
      }
    }
  }

  const RefinedGraph& refined_;
  FaceTrace trace_;
  int r_;
  std::vector<std::vector<int>> fan_;
  std::vector<std::map<int, int>> fan_position_;
  std::vector<std::vector<int>> membership_;
  std::vector<std::vector<Vertex>> face_points_;
};

}  // namespace detail

/// Random immersion of G into a subgraph H of G^(k).
///
/// Draw order from the seeded stream: one representative per original
/// vertex (uniform over its cell, vertices in index order); then for each
/// edge {v, u} of G in sorted order, the connector x (uniform over the
/// vertices of the two subdivided faces at the edge), followed by the
/// initial-path of v and then of u. Within an initial-path: the tie coin for
/// the direction around v (only on ties), one uniform vertex per
/// intermediate face, and one coin per grid segment choosing horizontal- or
/// vertical-first (preceded by a side pick when both ends share a face).
inline Immersion random_immersion(const RefinedGraph& refined, std::uint64_t seed) {
  if (refined.level < 1) throw Error(ErrorCode::IndexOutOfRange, "random immersion needs refinement level >= 1");
  CounterRng rng(seed);
  detail::GridRouter router(refined);
  const BoundaryGraph& g = refined.original.base();

  auto cells = refined.cells();
  std::vector<Vertex> rep(g.n());
  for (Vertex v = 0; v < g.n(); ++v) rep[v] = cells[v][rng.uniform_index(cells[v].size())];

  std::vector<Path> fine_paths;
  fine_paths.reserve(g.num_edges());
  for (const Edge& e : g.edges()) {
    const Vertex v = e.u, u = e.v;
    const int f1 = router.face_of_dart(v, u), f2 = router.face_of_dart(u, v);
    std::vector<Vertex> pool = router.face_points(f1);
    pool.insert(pool.end(), router.face_points(f2).begin(), router.face_points(f2).end());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    const Vertex x = pool[rng.uniform_index(pool.size())];
    const auto& f1_pts = router.face_points(f1);
    const int fx = std::find(f1_pts.begin(), f1_pts.end(), x) != f1_pts.end() ? f1 : f2;

    Path from_v = router.initial_path(v, rep[v], router.face_in_fan(v, rep[v]), x, fx, rng);
    Path from_u = router.initial_path(u, rep[u], router.face_in_fan(u, rep[u]), x, fx, rng);
    fine_paths.push_back(detail::join_at_connector(std::move(from_v), std::move(from_u)));
  }

  // Host H: the vertices and edges the paths use, relabeled in G^(k) order.
  std::vector<Vertex> origin;
  for (const Path& p : fine_paths) origin.insert(origin.end(), p.begin(), p.end());
  for (Vertex r : rep) origin.push_back(r);
  std::sort(origin.begin(), origin.end());
  origin.erase(std::unique(origin.begin(), origin.end()), origin.end());
  auto local = [&](Vertex x) { return static_cast<Vertex>(std::lower_bound(origin.begin(), origin.end(), x) - origin.begin()); };

  std::vector<Edge> host_edges;
  std::vector<Path> paths;
  for (const Path& p : fine_paths) {
    Path mapped;
    for (Vertex x : p) mapped.push_back(local(x));
    for (std::size_t i = 0; i + 1 < mapped.size(); ++i) host_edges.push_back(Edge{mapped[i], mapped[i + 1]}.normalized());
    paths.push_back(std::move(mapped));
  }
  std::sort(host_edges.begin(), host_edges.end());
  host_edges.erase(std::unique(host_edges.begin(), host_edges.end()), host_edges.end());

  std::vector<Vertex> vertex_map(g.n());
  std::vector<Vertex> host_boundary;
  for (Vertex v = 0; v < g.n(); ++v) vertex_map[v] = local(rep[v]);
  for (Vertex b : g.boundary()) host_boundary.push_back(vertex_map[b]);

  BoundaryGraph host(static_cast<int>(origin.size()), std::move(host_edges), std::move(host_boundary));
  Immersion imm = make_immersion(g, std::move(host), std::move(vertex_map), std::move(paths));
  imm.host_origin = std::move(origin);
  imm.seed = seed;
  return imm;
}

/// Empirical check of |dO| lambda_2(G, dO) <= C |dO^(k)| lambda_2(G^(k), dO^(k)),
/// together with the best random immersion over the seed set.
struct ChainReport {
  int level = 0;
  std::size_t boundary_size = 0;
  std::size_t refined_boundary_size = 0;
  double lambda2 = 0.0;
  double refined_lambda2 = 0.0;
  double lhs = 0.0;       // |dO| lambda_2(G)
  double rhs_unit = 0.0;  // |dO^(k)| lambda_2(G^(k))
  double ratio = 0.0;     // lhs / rhs_unit, the empirical C

  std::size_t seeds_tried = 0;
  bool comparison_always_held = true;
  std::uint64_t best_seed = 0;
  int best_xi = 0;
  int best_ell = 0;
  double best_host_lambda2 = std::numeric_limits<double>::quiet_NaN();
  double best_host_factor = std::numeric_limits<double>::quiet_NaN();  // lambda_2(H) / lambda_2(G^(k))
};

inline ChainReport chain_bound(const RotationGraph& g, std::vector<Vertex> boundary, int k, std::span<const std::uint64_t> seeds) {
  RefinedGraph refined = refine(g, std::move(boundary), k);
  ChainReport rep;
  rep.level = k;
  const BoundaryGraph& base = refined.original.base();
  rep.boundary_size = base.boundary().size();
  rep.refined_boundary_size = refined.inherited_boundary.size();
  rep.lambda2 = lambda2(base);
  rep.refined_lambda2 = k == 0 ? rep.lambda2 : lambda2(refined.rg.base());
  rep.lhs = static_cast<double>(rep.boundary_size) * rep.lambda2;
  rep.rhs_unit = static_cast<double>(rep.refined_boundary_size) * rep.refined_lambda2;
  rep.ratio = rep.lhs / rep.rhs_unit;
  if (k == 0) return rep;

  for (std::uint64_t seed : seeds) {
    Immersion imm = random_immersion(refined, seed);
    const double host_l2 = lambda2(imm.host);
    const double bound = static_cast<double>(imm.xi) * imm.ell * host_l2;
    if (rep.lambda2 > bound + 1e-8 * std::max(1.0, bound)) rep.comparison_always_held = false;
    if (rep.seeds_tried == 0 || host_l2 < rep.best_host_lambda2) {
      rep.best_seed = seed;
      rep.best_xi = imm.xi;
      rep.best_ell = imm.ell;
      rep.best_host_lambda2 = host_l2;
      rep.best_host_factor = host_l2 / rep.refined_lambda2;
    }
    ++rep.seeds_tried;
  }
  return rep;
}

}  // namespace steklov

#endif  // STEKLOV_IMMERSION_HPP
