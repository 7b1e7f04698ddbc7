#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "steklov/harness/generators.hpp"
#include "steklov/refine.hpp"
#include "support/bridge.hpp"
#include "support/oracle.hpp"

using namespace steklov;
using harness::all_vertices;

namespace {

RotationGraph cycle_planar(int n) {
  std::vector<Edge> es;
  std::vector<std::vector<Vertex>> rot(n);
  for (int i = 0; i < n; ++i) {
    es.push_back({i, (i + 1) % n});
    rot[i] = {(i + 1) % n, (i + n - 1) % n};
  }
  return RotationGraph(BoundaryGraph(n, es, {0}), rot);
}

struct Counts {
  long v, e, f;
};

Counts counts(const RotationGraph& rg) {
  return {rg.n(), static_cast<long>(rg.base().num_edges()), static_cast<long>(trace_faces(rg).size())};
}

std::vector<RotationGraph> families() {
  return {harness::tetrahedron(), harness::octahedron(), harness::icosahedron(), harness::gen_torus(3, 4), harness::gen_torus(5, 5)};
}

bool contains_edges(const BoundaryGraph& big, const BoundaryGraph& small) {
  for (const Edge& e : small.edges())
    if (!big.has_edge(e.u, e.v)) return false;
  return true;
}

}  // namespace

TEST(FullyTriangulate, SquareBecomesK4) {
  auto rg = fully_triangulate(cycle_planar(4));
  EXPECT_TRUE(is_fully_triangulated(rg));
  EXPECT_EQ(trace_faces(rg).size(), 4u);
  EXPECT_EQ(rg.base().num_edges(), 6u);
  EXPECT_EQ(genus(rg), 0);
}

TEST(FullyTriangulate, ZigzagChordsOnHexagon) {
  detail::EdgeSet sides;
  const Face hex{1, 2, 3, 4, 5, 6};
  for (int i = 0; i < 6; ++i) sides.insert(detail::key(hex[i], hex[(i + 1) % 6]));
  auto tris = detail::zigzag(hex, sides);
  ASSERT_EQ(tris.size(), 4u);
  std::set<std::pair<Vertex, Vertex>> chords;
  for (const auto& t : tris)
    for (int i = 0; i < 3; ++i) {
      auto k = detail::key(t[i], t[(i + 1) % 3]);
      if (!sides.contains(k)) chords.insert(k);
    }
  EXPECT_EQ(chords, (std::set<std::pair<Vertex, Vertex>>{{2, 6}, {2, 5}, {3, 5}}));
}

TEST(FullyTriangulate, HexagonCycle) {
  auto c6 = cycle_planar(6);
  auto rg = fully_triangulate(c6);
  EXPECT_TRUE(is_fully_triangulated(rg));
  EXPECT_EQ(trace_faces(rg).size(), 8u);
  EXPECT_EQ(genus(rg), 0);
  EXPECT_TRUE(contains_edges(rg.base(), c6.base()));
}

TEST(FullyTriangulate, DeltahedronUnchanged) {
  auto oct = harness::octahedron();
  EXPECT_EQ(fully_triangulate(oct), oct);
}

TEST(FullyTriangulate, NonCycleFaceUsesChords) {
  // A path 0-1-2 embedded in the plane has one face 0 1 2 1 that revisits 1.
  BoundaryGraph path(4, {{0, 1}, {1, 2}, {1, 3}}, {0});
  RotationGraph tree(path, {{1}, {0, 2, 3}, {1}, {1}});
  auto rg = fully_triangulate(tree);
  EXPECT_TRUE(is_fully_triangulated(rg));
  EXPECT_EQ(genus(rg), 0);
  EXPECT_TRUE(contains_edges(rg.base(), path));
}

TEST(FullyTriangulate, RandomPlanarSubgraphsKeepGenusAndDegreeGrowthBounded) {
  // Deleting edges of a triangulation (keeping it connected) leaves an
  // embedded graph whose faces are cycles or closed walks.
  std::mt19937_64 rng(12);
  for (const auto& base : {harness::icosahedron(), harness::gen_sphere(1), harness::gen_torus(4, 4)}) {
    for (int t = 0; t < 10; ++t) {
      std::vector<Edge> keep = base.base().edges();
      std::shuffle(keep.begin(), keep.end(), rng);
      std::vector<Edge> kept;
      // Keep a spanning tree first, then a random half of the rest.
      std::vector<int> comp(base.n());
      std::iota(comp.begin(), comp.end(), 0);
      std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
      std::vector<Edge> rest;
      for (const Edge& e : keep) {
        if (find(e.u) != find(e.v)) {
          comp[find(e.u)] = find(e.v);
          kept.push_back(e);
        } else {
          rest.push_back(e);
        }
      }
      for (std::size_t i = 0; i < rest.size() / 2; ++i) kept.push_back(rest[i]);
      BoundaryGraph sub(base.n(), kept, {0});
      std::vector<std::vector<Vertex>> rot(base.n());
      for (Vertex v = 0; v < base.n(); ++v)
        for (Vertex u : base.rotation(v))
          if (sub.has_edge(u, v)) rot[v].push_back(u);
      RotationGraph embedded(sub, rot);
      const int g0 = genus(embedded);
      auto full = fully_triangulate(embedded);
      EXPECT_TRUE(is_fully_triangulated(full));
      EXPECT_EQ(genus(full), g0);
      EXPECT_TRUE(contains_edges(full.base(), sub));
    }
  }
}

TEST(HexSubdivide, CountRecurrence) {
  for (auto rg : families()) {
    const int g0 = genus(rg);
    for (int k = 1; k <= 5; ++k) {
      const Counts c = counts(rg);
      auto next = hex_subdivide(rg);
      const Counts d = counts(next);
      EXPECT_EQ(d.v, c.v + c.e);
      EXPECT_EQ(d.e, 2 * c.e + 3 * c.f);
      EXPECT_EQ(d.f, 4 * c.f);
      EXPECT_EQ(genus(next), g0);
      EXPECT_TRUE(is_fully_triangulated(next));
      rg = std::move(next);
      if (rg.n() > 20000) break;
    }
  }
}

TEST(HexSubdivide, NamedExamples) {
  auto o = hex_subdivide(harness::octahedron());
  EXPECT_EQ(counts(o).v, 18);
  EXPECT_EQ(counts(o).e, 48);
  EXPECT_EQ(counts(o).f, 32);
  EXPECT_EQ(euler_characteristic(o), 2);
  auto t = hex_subdivide(harness::tetrahedron());
  EXPECT_EQ(counts(t).v, 10);
  EXPECT_EQ(counts(t).e, 24);
  EXPECT_EQ(counts(t).f, 16);
  EXPECT_EQ(euler_characteristic(hex_subdivide(harness::gen_torus(4, 3))), 0);
}

TEST(HexSubdivide, MidpointNeighbourhoods) {
  const auto base = harness::icosahedron();
  const auto sub = hex_subdivide(base);
  const auto& edges = base.base().edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Vertex m = base.n() + static_cast<Vertex>(i);
    EXPECT_TRUE(sub.base().has_edge(m, edges[i].u));
    EXPECT_TRUE(sub.base().has_edge(m, edges[i].v));
    EXPECT_EQ(sub.base().degree(m), 6);
  }
  for (Vertex v = 0; v < base.n(); ++v) EXPECT_EQ(sub.base().degree(v), base.base().degree(v));
}

TEST(HexSubdivide, RejectsNonTriangulation) { EXPECT_THROW(hex_subdivide(cycle_planar(4)), Error); }

TEST(HexSubdivide, MaxDegreeBounded) {
  for (auto rg : {harness::tetrahedron(), harness::octahedron(), harness::icosahedron(), harness::gen_torus(3, 3),
                  harness::gen_genus(3, 6)}) {
    const int d = rg.base().max_degree();
    for (int k = 1; k <= 3; ++k) {
      rg = hex_subdivide(rg);
      EXPECT_LE(rg.base().max_degree(), std::max(d, 6));
    }
  }
}

TEST(Refine, LevelZeroIsIdentity) {
  auto oct = harness::octahedron();
  auto r = refine(oct, {1, 4}, 0);
  EXPECT_EQ(r.rg.base().edges(), oct.base().edges());
  EXPECT_EQ(r.inherited_boundary, (std::vector<Vertex>{1, 4}));
  EXPECT_EQ(boundary_growth(r), 1.0);
}

TEST(Refine, FullBoundaryStaysFull) {
  auto r = refine(harness::octahedron(), all_vertices(6), 1);
  EXPECT_EQ(r.inherited_boundary.size(), 18u);
  EXPECT_DOUBLE_EQ(boundary_growth(r), 0.75);
}

TEST(Refine, ParentMapMatchesBfsOracle) {
  for (const auto& base : {harness::octahedron(), harness::icosahedron(), harness::gen_torus(3, 4)}) {
    for (int k = 1; k <= 3; ++k) {
      auto r = refine(base, {0}, k);
      const int n = r.rg.n();
      const auto es = bridge::edges(r.rg.base());
      std::vector<std::vector<int>> dist;
      for (Vertex s = 0; s < base.n(); ++s) {
        std::vector<int> d(n, -1);
        std::vector<int> frontier{s};
        d[s] = 0;
        std::vector<std::vector<int>> adj(n);
        for (auto [a, b] : es) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
        for (std::size_t h = 0; h < frontier.size(); ++h)
          for (int y : adj[frontier[h]])
            if (d[y] < 0) {
              d[y] = d[frontier[h]] + 1;
              frontier.push_back(y);
            }
        dist.push_back(d);
      }
      for (Vertex v = 0; v < n; ++v) {
        int best = 0;
        for (Vertex s = 1; s < base.n(); ++s)
          if (dist[s][v] < dist[best][v]) best = s;
        EXPECT_EQ(r.parent_map[v], best);
      }
    }
  }
}

TEST(Refine, SingleBoundaryVertexCell) {
  // Midpoints of edges at vertex 0 are equidistant from 0 and the other
  // endpoint; the smaller index (0) wins. Vertex 5 is the largest index, so
  // it loses every tie and keeps only itself.
  auto oct = harness::octahedron();
  auto r0 = refine(oct, {0}, 1);
  EXPECT_EQ(r0.inherited_boundary.size(), 1u + oct.base().degree(0));
  EXPECT_EQ(r0.inherited_boundary.front(), 0);
  auto r5 = refine(oct, {5}, 1);
  EXPECT_EQ(r5.inherited_boundary, std::vector<Vertex>{5});
}

TEST(Refine, CellsPartitionAndScale) {
  for (const auto& base : families()) {
    for (int k = 1; k <= 3; ++k) {
      auto r = refine(base, {0}, k);
      auto cells = r.cells();
      std::size_t total = 0;
      for (Vertex v = 0; v < base.n(); ++v) {
        EXPECT_EQ(r.parent_map[v], v);
        EXPECT_FALSE(cells[v].empty());
        total += cells[v].size();
        const double scaled = static_cast<double>(cells[v].size()) / static_cast<double>(1 << (2 * k));
        EXPECT_GT(scaled, 0.0);
        EXPECT_LT(scaled, 4.0);
      }
      EXPECT_EQ(total, static_cast<std::size_t>(r.rg.n()));
      EXPECT_EQ(genus(r.rg), genus(base));
    }
  }
}

TEST(Refine, BoundaryGrowthBounded) {
  for (const auto& base : families()) {
    for (int k = 1; k <= 3; ++k) {
      const double full = boundary_growth(refine(base, all_vertices(base.n()), k));
      EXPECT_GT(full, 0.25);
      EXPECT_LE(full, 1.0);
    }
  }
}

TEST(Refine, LatticeGeometry) {
  auto r = refine(harness::icosahedron(), {0}, 2);
  for (const auto& lat : r.lattices) {
    const int res = lat.resolution;
    EXPECT_EQ(res, 4);
    EXPECT_EQ(lat.at(0, 0), lat.corners[0]);
    EXPECT_EQ(lat.at(res, 0), lat.corners[1]);
    EXPECT_EQ(lat.at(0, res), lat.corners[2]);
    for (int i = 0; i <= res; ++i)
      for (int j = 0; i + j <= res; ++j) {
        if (i + 1 + j <= res) EXPECT_TRUE(r.rg.base().has_edge(lat.at(i, j), lat.at(i + 1, j)));
        if (i + j + 1 <= res) EXPECT_TRUE(r.rg.base().has_edge(lat.at(i, j), lat.at(i, j + 1)));
        if (i >= 1 && j + 1 <= res) EXPECT_TRUE(r.rg.base().has_edge(lat.at(i, j), lat.at(i - 1, j + 1)));
      }
  }
}

TEST(Refine, Deterministic) {
  auto a = refine(harness::gen_torus(3, 3), {0, 4}, 2);
  auto b = refine(harness::gen_torus(3, 3), {0, 4}, 2);
  EXPECT_EQ(a.rg, b.rg);
  EXPECT_EQ(a.parent_map, b.parent_map);
  EXPECT_EQ(a.inherited_boundary, b.inherited_boundary);
}
