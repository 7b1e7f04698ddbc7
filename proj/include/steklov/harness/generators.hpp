#ifndef STEKLOV_HARNESS_GENERATORS_HPP
#define STEKLOV_HARNESS_GENERATORS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "steklov/embedding.hpp"
#include "steklov/error.hpp"
#include "steklov/refine.hpp"

namespace steklov::harness {

inline std::vector<Vertex> all_vertices(int n) {
  std::vector<Vertex> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

inline RotationGraph tetrahedron() {
  const std::vector<Face> faces{{0, 1, 3}, {0, 2, 1}, {0, 3, 2}, {1, 2, 3}};
  return RotationGraph::from_faces(4, faces, all_vertices(4));
}

/// Vertices +x, -x, +y, -y, +z, -z.
inline RotationGraph octahedron() {
  const std::vector<Face> faces{{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return RotationGraph::from_faces(6, faces, all_vertices(6));
}

/// Faces are the triples at mutual distance 2 among the 12 points
/// (0, +-1, +-phi) and their cyclic shifts, oriented by the outward normal.
inline RotationGraph icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<std::array<double, 3>> p;
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      p.push_back({0.0, double(s1), s2 * phi});
      p.push_back({double(s1), s2 * phi, 0.0});
      p.push_back({s2 * phi, 0.0, double(s1)});
    }
  }
  auto dist2 = [&](int a, int b) {
    double s = 0;
    for (int k = 0; k < 3; ++k) s += (p[a][k] - p[b][k]) * (p[a][k] - p[b][k]);
    return s;
  };
  auto adjacent = [&](int a, int b) { return std::abs(dist2(a, b) - 4.0) < 1e-9; };
  std::vector<Face> faces;
  for (int a = 0; a < 12; ++a) {
    for (int b = a + 1; b < 12; ++b) {
      for (int c = b + 1; c < 12; ++c) {
        if (!adjacent(a, b) || !adjacent(b, c) || !adjacent(a, c)) continue;
        std::array<double, 3> u{}, w{};
        for (int k = 0; k < 3; ++k) {
          u[k] = p[b][k] - p[a][k];
          w[k] = p[c][k] - p[a][k];
        }
        const std::array<double, 3> nrm{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
        const double outward = nrm[0] * p[a][0] + nrm[1] * p[a][1] + nrm[2] * p[a][2];
        faces.push_back(outward > 0 ? Face{a, b, c} : Face{a, c, b});
      }
    }
  }
  return RotationGraph::from_faces(12, faces, all_vertices(12));
}

/// Icosahedron after `level` hexagon subdivisions, every vertex on the
/// boundary; genus 0, max degree 6.
inline RotationGraph gen_sphere(int level) {
  if (level < 0) throw Error(ErrorCode::IndexOutOfRange, "sphere level must be non-negative");
  RotationGraph g = icosahedron();
  for (int i = 0; i < level; ++i) g = hex_subdivide(g);
  return g.with_boundary(all_vertices(g.n()));
}

namespace detail {

/// Triangles of the n x m wraparound grid, two per square split along the
/// (i, j) - (i+1, j+1) diagonal. Vertex (i, j) is i * m + j.
inline std::vector<Face> torus_faces(int n, int m) {
  std::vector<Face> faces;
  auto id = [m, n](int i, int j) { return ((i % n + n) % n) * m + ((j % m + m) % m); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return faces;
}

}  // namespace detail

/// n x m triangulated torus: V = nm, E = 3nm, F = 2nm, every degree 6.
inline RotationGraph gen_torus(int n, int m) {
  if (n < 3 || m < 3) throw Error(ErrorCode::TooSmall, "torus grid needs n, m >= 3");
  return RotationGraph::from_faces(n * m, detail::torus_faces(n, m), all_vertices(n * m));
}

namespace detail {

/// Distance in the triangular lattice with steps (1,0), (0,1), (1,1).
inline int hex_distance(int di, int dj) {
  if ((di >= 0 && dj >= 0) || (di <= 0 && dj <= 0)) return std::max(std::abs(di), std::abs(dj));
  return std::abs(di) + std::abs(dj);
}

/// Lattice offset of b from a on the r x r torus with the smallest hex
/// distance; ties keep the first candidate.
inline std::pair<int, int> torus_offset(Vertex a, Vertex b, int r) {
  const int x = ((b / r - a / r) % r + r) % r, y = ((b % r - a % r) % r + r) % r;
  std::pair<int, int> best{x, y};
  for (int di : {x, x - r}) {
    for (int dj : {y, y - r}) {
      if (hex_distance(di, dj) < hex_distance(best.first, best.second)) best = {di, dj};
    }
  }
  return best;
}

inline int torus_distance(Vertex a, Vertex b, int r) {
  const auto [di, dj] = torus_offset(a, b, r);
  return hex_distance(di, dj);
}

/// Hub vertices used as handle centres, greedily in index order, pairwise at
/// least 2 * radius + 1 apart so the rims are disjoint.
inline std::vector<Vertex> handle_centres(int r, int radius, int count) {
  std::vector<Vertex> centres;
  for (Vertex c = 0; c < r * r && static_cast<int>(centres.size()) < count; ++c) {
    bool ok = true;
    for (Vertex o : centres) ok = ok && torus_distance(c, o, r) >= 2 * radius + 1;
    if (ok) centres.push_back(c);
  }
  return centres;
}

}  // namespace detail

/// Radius of the hexagonal hole cut for each handle at this resolution.
inline int neck_radius(int g, int resolution) {
  for (int radius = std::max(1, (resolution + 1) / 4); radius >= 1; --radius) {
    if (2 * radius + 1 < resolution && static_cast<int>(detail::handle_centres(resolution, radius, g - 1).size()) == g - 1) return radius;
  }
  throw Error(ErrorCode::TooSmall, "resolution " + std::to_string(resolution) + " cannot host " + std::to_string(g - 1) + " handles");
}

/// Largest degree gen_genus can produce: a rim vertex keeps at most five
/// neighbours on each side of the seam, two of which are shared.
inline constexpr int kGenusDegreeBound = 8;

/// Genus-g surface: a resolution x resolution hub torus with g - 1 further
/// tori of the same size attached by connected sum. Each attachment cuts the
/// open hexagonal ball of radius neck_radius(g, resolution) out of both tori
/// and glues the two rims with the reflection (di, dj) -> (dj, di), which
/// reverses orientation. Vertices are renumbered compactly in first-use order.
inline RotationGraph gen_genus(int g, int resolution) {
  if (g < 1) throw Error(ErrorCode::IndexOutOfRange, "genus must be at least 1");
  if (resolution < 3) throw Error(ErrorCode::TooSmall, "resolution must be at least 3");
  const int r = resolution;
  const int block = r * r;
  const std::vector<Face> hub = detail::torus_faces(r, r);
  if (g == 1) return RotationGraph::from_faces(block, hub, all_vertices(block));

  const int radius = neck_radius(g, r);
  const std::vector<Vertex> centres = detail::handle_centres(r, radius, g - 1);
  auto cut = [&](const Face& f, Vertex c) {
    return std::any_of(f.begin(), f.end(), [&](Vertex v) { return detail::torus_distance(v, c, r) < radius; });
  };

  std::vector<Face> faces;
  for (const Face& f : hub) {
    if (std::none_of(centres.begin(), centres.end(), [&](Vertex c) { return cut(f, c); })) faces.push_back(f);
  }
  int next = block;
  for (Vertex c : centres) {
    std::vector<Vertex> rename(block, -1);
    for (Vertex v = 0; v < block; ++v) {
      const auto [di, dj] = detail::torus_offset(0, v, r);
      const int d = detail::hex_distance(di, dj);
      if (d == radius) {
        rename[v] = ((c / r + dj) % r + r) % r * r + ((c % r + di) % r + r) % r;
      } else if (d > radius) {
        rename[v] = next++;
      }
    }
    for (const Face& f : hub) {
      if (!cut(f, 0)) faces.push_back({rename[f[0]], rename[f[1]], rename[f[2]]});
    }
  }

  std::vector<Vertex> compact(next, -1);
  int n = 0;
  for (Face& f : faces) {
    for (Vertex& v : f) {
      if (compact[v] < 0) compact[v] = n++;
      v = compact[v];
    }
  }
  return fully_triangulate(RotationGraph::from_faces(n, faces, all_vertices(n)));
}

}  // namespace steklov::harness

#endif  // STEKLOV_HARNESS_GENERATORS_HPP
