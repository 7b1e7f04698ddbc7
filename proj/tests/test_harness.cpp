#include <gtest/gtest.h>

#include "steklov/harness/document.hpp"
#include "steklov/harness/generators.hpp"
#include "steklov/harness/sweep.hpp"

using namespace steklov;
using namespace steklov::harness;

namespace {

struct Counts {
  long v, e, f;
};

Counts counts(const RotationGraph& rg) {
  return {rg.n(), static_cast<long>(rg.base().num_edges()), static_cast<long>(trace_faces(rg).size())};
}

std::string schema_message(const std::string& text) {
  try {
    parse_document(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Schema);
    return e.what();
  }
  return "";
}

}  // namespace

TEST(GenSphere, Counts) {
  auto s0 = counts(gen_sphere(0));
  EXPECT_EQ(s0.v, 12);
  EXPECT_EQ(s0.e, 30);
  EXPECT_EQ(s0.f, 20);
  auto s1 = counts(gen_sphere(1));
  EXPECT_EQ(s1.v, 42);
  EXPECT_EQ(s1.e, 120);
  EXPECT_EQ(s1.f, 80);
  for (int level = 0; level <= 3; ++level) {
    auto rg = gen_sphere(level);
    EXPECT_EQ(genus(rg), 0);
    EXPECT_TRUE(is_fully_triangulated(rg));
    EXPECT_LE(rg.base().max_degree(), 6);
    EXPECT_EQ(rg.base().boundary(), all_vertices(rg.n()));
  }
}

TEST(GenTorus, CountsAndGenus) {
  auto rg = gen_torus(3, 3);
  auto c = counts(rg);
  EXPECT_EQ(c.v, 9);
  EXPECT_EQ(c.e, 27);
  EXPECT_EQ(c.f, 18);
  EXPECT_EQ(euler_characteristic(rg), 0);
  EXPECT_EQ(genus(gen_torus(4, 6)), 1);
  for (int n = 3; n <= 6; ++n) {
    for (int m = 3; m <= 6; ++m) {
      auto t = gen_torus(n, m);
      EXPECT_TRUE(is_fully_triangulated(t));
      EXPECT_EQ(t.base().max_degree(), 6);
      EXPECT_EQ(counts(t).e, 3L * n * m);
    }
  }
  EXPECT_THROW(gen_torus(2, 5), Error);
}

TEST(GenGenus, GenusAndDegree) {
  auto one = gen_genus(1, 4);
  EXPECT_EQ(genus(one), 1);
  EXPECT_EQ(one.n(), gen_torus(4, 4).n());
  EXPECT_EQ(euler_characteristic(gen_genus(2, 4)), -2);
  EXPECT_EQ(genus(gen_genus(3, 6)), 3);
  for (int res = 5; res <= 12; ++res) {
    for (int g = 1; g <= 4; ++g) {
      if (res == 5 && g == 4) continue;
      auto rg = gen_genus(g, res);
      EXPECT_EQ(genus(rg), g) << "res " << res;
      EXPECT_TRUE(is_fully_triangulated(rg));
      EXPECT_LE(rg.base().max_degree(), kGenusDegreeBound);
      EXPECT_TRUE(rg.base().is_connected());
    }
  }
  EXPECT_THROW(gen_genus(4, 4), Error);
  EXPECT_THROW(gen_genus(0, 6), Error);
}

TEST(GraphDocument, RoundTripsGeneratedFamilies) {
  for (const auto& rg : {tetrahedron(), octahedron(), icosahedron(), gen_sphere(1), gen_torus(3, 5), gen_genus(2, 6)}) {
    auto doc = to_document(rg, {{"family", "test"}, {"genus", genus(rg)}});
    const std::string text = serialize_document(doc);
    auto back = parse_document(text);
    EXPECT_EQ(back, doc);
    EXPECT_EQ(serialize_document(back), text);
    EXPECT_EQ(to_rotation_graph(back), rg);
  }
  auto plain = to_document(full_boundary_graph(2, {{0, 1}}));
  EXPECT_EQ(parse_document(serialize_document(plain)), plain);
  EXPECT_THROW(to_rotation_graph(plain), Error);
}

TEST(GraphDocument, SchemaDiagnosticsArePositional) {
  EXPECT_NE(schema_message("{\"n\": 2, \"edges\": [[0,1]], \"boundary\": [0,").find("byte"), std::string::npos);
  EXPECT_NE(schema_message("[1,2]").find("/"), std::string::npos);
  EXPECT_NE(schema_message("{\"edges\": [], \"boundary\": [0]}").find("/n"), std::string::npos);
  EXPECT_NE(schema_message("{\"n\": 2, \"edges\": [[0,1],[1]], \"boundary\": [0]}").find("/edges/1"), std::string::npos);
  EXPECT_NE(schema_message("{\"n\": 2, \"edges\": [[0,\"x\"]], \"boundary\": [0]}").find("/edges/0/1"), std::string::npos);
  EXPECT_NE(schema_message("{\"n\": 2, \"edges\": [], \"boundary\": [0], \"extra\": 1}").find("/extra"), std::string::npos);
  EXPECT_NE(schema_message("{\"n\": 2.5, \"edges\": [], \"boundary\": [0]}").find("/n"), std::string::npos);
  EXPECT_NE(schema_message("{\"n\": 2, \"edges\": [], \"boundary\": [0], \"rotation\": [[1], 3]}").find("/rotation/1"),
            std::string::npos);
}

TEST(GraphDocument, GraphValidationStillApplies) {
  auto doc = parse_document("{\"n\": 2, \"edges\": [[0,0]], \"boundary\": [0]}");
  try {
    to_boundary_graph(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SelfLoop);
  }
}

TEST(Sweep, FourGeneraAllVertices) {
  auto result = sweep_main_bound(4, 6, BoundaryPolicy::all_vertices());
  ASSERT_EQ(result.records.size(), 4u);
  EXPECT_TRUE(result.diagnostics.empty());
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    EXPECT_EQ(r.g, static_cast<int>(i) + 1);
    EXPECT_EQ(r.family, "genus");
    EXPECT_TRUE(std::isfinite(r.product_over_g));
    EXPECT_GT(r.lambda2, 0.0);
    EXPECT_EQ(r.product, r.lambda2 * r.boundary_size);
    EXPECT_EQ(r.product_over_g, r.product / r.g);
    EXPECT_EQ(r.boundary_size, gen_genus(r.g, 6).n());
    EXPECT_LE(r.D, kGenusDegreeBound);
  }
}

TEST(Sweep, OtherPolicies) {
  auto face = sweep_main_bound(3, 6, BoundaryPolicy::single_face());
  for (const auto& r : face.records) EXPECT_EQ(r.boundary_size, 3);
  auto frac = sweep_main_bound(3, 6, BoundaryPolicy::random_fraction(0.3, 7));
  ASSERT_EQ(frac.records.size(), 3u);
  for (const auto& r : frac.records) EXPECT_EQ(r.boundary_size, static_cast<int>(std::lround(0.3 * gen_genus(r.g, 6).n())));
  EXPECT_EQ(to_csv(frac.records), to_csv(sweep_main_bound(3, 6, BoundaryPolicy::random_fraction(0.3, 7)).records));
  EXPECT_NE(to_csv(frac.records), to_csv(sweep_main_bound(3, 6, BoundaryPolicy::random_fraction(0.3, 8)).records));
}

TEST(Sweep, SingleBoundaryVertexIsSkipped) {
  auto result = sweep_main_bound(2, 6, BoundaryPolicy::random_fraction(0.01, 1));
  EXPECT_TRUE(result.records.empty());
  ASSERT_EQ(result.diagnostics.size(), 2u);
  EXPECT_NE(result.diagnostics[0].find("skipped"), std::string::npos);
}

TEST(Sweep, CsvIsDeterministicAndOrdered) {
  auto serial = sweep_main_bound(4, 6, BoundaryPolicy::all_vertices(), false);
  auto parallel = sweep_main_bound(4, 6, BoundaryPolicy::all_vertices(), true);
  const std::string csv = to_csv(serial.records);
  EXPECT_EQ(csv, to_csv(parallel.records));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "family,g,D,boundary_size,lambda2,product,product_over_g");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Sweep, PolicyParsing) {
  EXPECT_EQ(parse_policy("all-vertices", 0.5, 1).kind, PolicyKind::AllVertices);
  EXPECT_EQ(parse_policy("single-face", 0.5, 1).kind, PolicyKind::SingleFace);
  EXPECT_EQ(parse_policy("random-fraction", 0.5, 1).kind, PolicyKind::RandomFraction);
  EXPECT_THROW(parse_policy("random-fraction", 1.5, 1), Error);
  EXPECT_THROW(parse_policy("bogus", 0.5, 1), Error);
}
