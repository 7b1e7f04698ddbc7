#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "steklov/harness/generators.hpp"
#include "steklov/packing.hpp"
#include "support/bridge.hpp"
#include "support/oracle.hpp"

using namespace steklov;
using harness::all_vertices;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angle at v from the law of cosines on the triangle of centres.
double law_of_cosines(double rv, double ru, double rw) {
  const double a = rv + ru, b = rv + rw, c = ru + rw;
  return std::acos((a * a + b * b - c * c) / (2.0 * a * b));
}

// Angle sums and tangencies recomputed from radii and centres only.
void expect_valid_packing(const RotationGraph& rg, const CirclePacking& cp, double angle_tol, double tangency_tol) {
  for (double r : cp.radii) EXPECT_GT(r, 0.0);
  for (const Edge& e : rg.base().edges()) {
    const double want = cp.radii[e.u] + cp.radii[e.v];
    EXPECT_LE(std::abs((cp.centers[e.u] - cp.centers[e.v]).norm() - want), tangency_tol * want);
  }
  std::vector<double> sums(rg.n(), 0.0);
  for (const Face& f : trace_faces(rg)) {
    if (f.size() != 3) continue;
    for (int i = 0; i < 3; ++i) sums[f[i]] += law_of_cosines(cp.radii[f[i]], cp.radii[f[(i + 1) % 3]], cp.radii[f[(i + 2) % 3]]);
  }
  for (Vertex v = 0; v < rg.n(); ++v) {
    if (std::find(cp.pinned.begin(), cp.pinned.end(), v) != cp.pinned.end()) continue;
    EXPECT_NEAR(sums[v], kTwoPi, angle_tol) << "vertex " << v;
  }
}

RotationGraph wheel(int k) {
  std::vector<Face> faces;
  for (int i = 0; i < k; ++i) faces.push_back({0, 1 + i, 1 + (i + 1) % k});
  // Close the disk with a hub at infinity so from_faces sees a sphere, then
  // drop the hub by rebuilding with only the rim and spokes.
  std::vector<Edge> es;
  std::vector<std::vector<Vertex>> rot(k + 1);
  for (int i = 0; i < k; ++i) {
    es.push_back({0, 1 + i});
    es.push_back({1 + i, 1 + (i + 1) % k});
    rot[0].push_back(1 + i);
    rot[1 + i] = {0, 1 + (i + k - 1) % k, 1 + (i + 1) % k};
  }
  return RotationGraph(BoundaryGraph(k + 1, es, {0}), rot);
}

std::vector<Eigen::Vector3d> random_sphere_points(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < n; ++i) pts.push_back(Eigen::Vector3d(normal(rng), normal(rng), normal(rng)).normalized());
  return pts;
}

}  // namespace

TEST(CirclePack, HexagonalFlowerIsUniform) {
  auto w = wheel(6);
  ASSERT_EQ(trace_faces(w).size(), 7u);
  std::map<Vertex, double> rim;
  for (Vertex v = 1; v <= 6; ++v) rim[v] = 1.0;
  auto cp = circle_pack_with_boundary(w, rim);
  for (double r : cp.radii) EXPECT_NEAR(r, 1.0, 1e-10);
  expect_valid_packing(w, cp, 1e-8, 1e-7);
}

TEST(CirclePack, TetrahedronInteriorRadiusByBisection) {
  auto tet = harness::tetrahedron();
  const std::map<Vertex, double> outer{{1, 1.0}, {2, 2.0}, {3, 3.0}};
  auto cp = circle_pack_with_boundary(tet, outer);
  auto total = [&](double r) {
    return law_of_cosines(r, 1.0, 2.0) + law_of_cosines(r, 2.0, 3.0) + law_of_cosines(r, 1.0, 3.0);
  };
  // The sum decreases in r; bracket and bisect.
  double lo = 1e-6, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > kTwoPi ? lo : hi) = mid;
  }
  EXPECT_NEAR(cp.radii[0], 0.5 * (lo + hi), 1e-9);
  EXPECT_NEAR(angle_sum(tet, cp, 0), kTwoPi, 1e-8);
  expect_valid_packing(tet, cp, 1e-8, 1e-7);
}

TEST(CirclePack, Octahedron) {
  auto oct = harness::octahedron();
  auto cp = circle_pack(oct);
  EXPECT_LE(cp.residual, 1e-8);
  EXPECT_EQ(cp.pinned.size(), 3u);
  expect_valid_packing(oct, cp, 1e-8, 1e-7);
}

TEST(CirclePack, SphereFamily) {
  for (int level = 0; level <= 2; ++level) {
    auto rg = harness::gen_sphere(level);
    auto cp = circle_pack(rg);
    EXPECT_LE(cp.residual, 1e-8);
    EXPECT_LE(max_tangency_error(rg.base(), cp), 1e-7);
    expect_valid_packing(rg, cp, 1e-8, 1e-7);
  }
}

TEST(CirclePack, Rejections) {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code([] { circle_pack(harness::gen_torus(3, 3)); }), ErrorCode::NonzeroGenus);
  EXPECT_EQ(code([] { circle_pack(wheel(5)); }), ErrorCode::NotTriangulated);
  PackingOptions tight;
  tight.max_iterations = 2;
  tight.tolerance = 1e-15;
  EXPECT_EQ(code([&] { circle_pack(harness::gen_sphere(2), tight); }), ErrorCode::ConvergenceFailure);
}

TEST(LiftToSphere, Formulas) {
  EXPECT_LE((inverse_stereographic({0, 0}) - Eigen::Vector3d(0, 0, -1)).norm(), 1e-15);
  EXPECT_NEAR(inverse_stereographic({0.6, 0.8}).z(), 0.0, 1e-15);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    const double x = normal(rng), y = normal(rng);
    const double q = x * x + y * y;
    const Eigen::Vector3d p = inverse_stereographic({x, y});
    EXPECT_NEAR(p.x(), 2 * x / (q + 1), 1e-14);
    EXPECT_NEAR(p.y(), 2 * y / (q + 1), 1e-14);
    EXPECT_NEAR(p.z(), (q - 1) / (q + 1), 1e-14);
    EXPECT_NEAR(p.norm(), 1.0, 1e-14);
  }
}

TEST(MobiusMap, PreservesSphere) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (const auto& x : random_sphere_points(rng, 200)) {
    const Eigen::Vector3d w(u(rng), u(rng), u(rng));
    EXPECT_NEAR(mobius_map(w, x).norm(), 1.0, 1e-12);
    EXPECT_LE((mobius_map(Eigen::Vector3d::Zero(), x) - x).norm(), 1e-15);
  }
}

TEST(MobiusNormalize, CenteredInputsUnchanged) {
  SphereConfiguration sc;
  sc.points = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  sc.subset = all_vertices(6);
  auto out = mobius_normalize(sc);
  for (std::size_t i = 0; i < sc.points.size(); ++i) EXPECT_EQ(out.points[i], sc.points[i]);

  SphereConfiguration pair;
  pair.points = {{0, 0, 1}, {0, 0, -1}, {1, 0, 0}};
  pair.subset = {0, 1};
  EXPECT_LE(mobius_normalize(pair).boundary_centroid.norm(), 1e-15);
}

TEST(MobiusNormalize, NorthPoleCluster) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 0.05);
  SphereConfiguration sc;
  for (int i = 0; i < 40; ++i) sc.points.push_back(Eigen::Vector3d(normal(rng), normal(rng), 1.0).normalized());
  sc.subset = all_vertices(40);
  auto out = mobius_normalize(sc);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& p : out.points) {
    sum += p;
    EXPECT_NEAR(p.norm(), 1.0, 1e-10);
  }
  EXPECT_LE((sum / 40.0).norm(), 1e-7);
}

TEST(MobiusNormalize, CoincidentPointsFail) {
  SphereConfiguration sc;
  sc.points = {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
  sc.subset = {0, 1, 2};
  try {
    mobius_normalize(sc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NormalizationFailure);
    EXPECT_TRUE(e.is_convergence());
  }
}

TEST(CertifyPlanarBound, Octahedron) {
  auto cert = certify_planar_bound(harness::octahedron(), all_vertices(6));
  EXPECT_LE(cert.lambda2, cert.geometric_bound + kCertificateSlack);
  EXPECT_TRUE(std::isfinite(cert.geometric_bound));
  EXPECT_DOUBLE_EQ(cert.degree_bound, 8.0 * 4 / 6);
  EXPECT_LE(cert.centroid_norm, 1e-7);
  // Octahedron Laplacian spectrum is {0, 4^3, 6^2}.
  EXPECT_NEAR(cert.lambda2, 4.0, 1e-9);
}

TEST(CertifyPlanarBound, Icosahedron) {
  auto cert = certify_planar_bound(harness::icosahedron(), all_vertices(12));
  EXPECT_LE(cert.lambda2, cert.geometric_bound + kCertificateSlack);
  EXPECT_DOUBLE_EQ(cert.degree_bound, 8.0 * 5 / 12);
  EXPECT_LE(cert.geometric_bound, cert.degree_bound + 1e-8);
  EXPECT_NEAR(cert.lambda2, 5.0 - std::sqrt(5.0), 1e-9);
}

TEST(CertifyPlanarBound, PartialBoundary) {
  std::mt19937_64 rng(4);
  auto rg = harness::gen_sphere(1);
  for (int t = 0; t < 5; ++t) {
    auto b = oracle::random_subset(rg.n(), 5 + t * 7, rng);
    auto cert = certify_planar_bound(rg, b);
    EXPECT_LE(cert.lambda2, cert.geometric_bound + kCertificateSlack);
  }
}

TEST(CertifyPlanarBound, SubdividedIcosahedronStaysUnderEightD) {
  for (int level = 0; level <= 2; ++level) {
    auto rg = harness::gen_sphere(level);
    auto cert = certify_planar_bound(rg, all_vertices(rg.n()));
    EXPECT_LE(cert.max_degree, 6);
    EXPECT_LE(cert.lambda2 * cert.boundary_size, 8.0 * 6);
  }
}

TEST(ToSvg, OneCirclePerVertex) {
  auto cp = circle_pack(harness::octahedron());
  const std::string svg = to_svg(cp);
  std::size_t count = 0;
  for (std::size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++count;
  EXPECT_EQ(count, 6u);
}
