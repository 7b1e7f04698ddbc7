#ifndef STEKLOV_PACKING_HPP
#define STEKLOV_PACKING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <deque>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "steklov/embedding.hpp"
#include "steklov/error.hpp"
#include "steklov/graph.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

struct PackingOptions {
  double tolerance = 1e-11;  // target angle-sum residual
  int max_iterations = 100000;
};

/// Tangency packing of a triangulation in the plane. `pinned` vertices keep
/// their prescribed radii; the residual is the largest angle-sum defect
/// |theta(v) - 2 pi| over the remaining vertices.
struct CirclePacking {
  std::vector<double> radii;
  std::vector<Eigen::Vector2d> centers;
  std::vector<Vertex> pinned;
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

struct Corner {
  Vertex u;
  Vertex w;
};

/// Angle at a circle of radius rv between tangent neighbors of radii ru, rw.
inline double corner_angle(double rv, double ru, double rw) {
  const double s = std::sqrt(ru * rw / ((rv + ru) * (rv + rw)));
  return 2.0 * std::asin(std::min(1.0, s));
}

class RadiusSolver {
 public:
  RadiusSolver(int n, const std::vector<Face>& triangles, std::vector<char> is_free)
      : corners_(n), free_(std::move(is_free)) {
    for (const Face& t : triangles) {
      for (int i = 0; i < 3; ++i) corners_[t[i]].push_back({t[(i + 1) % 3], t[(i + 2) % 3]});
    }
  }

  double angle_sum(const std::vector<double>& r, Vertex v) const {
    double total = 0.0;
    for (const Corner& c : corners_[v]) total += corner_angle(r[v], r[c.u], r[c.w]);
    return total;
  }

  double residual(const std::vector<double>& r) const {
    double worst = 0.0;
    for (Vertex v = 0; v < static_cast<Vertex>(r.size()); ++v) {
      if (free_[v]) worst = std::max(worst, std::abs(angle_sum(r, v) - 2.0 * std::numbers::pi));
    }
    return worst;
  }

  /// Uniform-neighbor update: the radius a flower of k equal petals would
  /// need for its angle sum to be 2 pi.
  void sweep(std::vector<double>& r) const {
    for (Vertex v = 0; v < static_cast<Vertex>(r.size()); ++v) {
      if (!free_[v] || corners_[v].empty()) continue;
      const double k = static_cast<double>(corners_[v].size());
      const double theta = angle_sum(r, v);
      const double beta = std::sin(theta / (2.0 * k));
      const double delta = std::sin(std::numbers::pi / k);
      const double petal = r[v] * beta / (1.0 - beta);
      r[v] = petal * (1.0 - delta) / delta;
    }
  }

  int solve(std::vector<double>& r, const PackingOptions& opt, double& residual_out) const {
    std::vector<double> prev_change;
    for (int it = 1; it <= opt.max_iterations; ++it) {
      std::vector<double> before = r;
      sweep(r);
      std::vector<double> change(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) change[i] = std::log(r[i]) - std::log(before[i]);
      // Superstep: when successive changes line up and shrink geometrically,
      // jump ahead along them.
      if (!prev_change.empty()) {
        double dot = 0.0, nc = 0.0, np = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
          dot += change[i] * prev_change[i];
          nc += change[i] * change[i];
          np += prev_change[i] * prev_change[i];
        }
        if (np > 0.0 && nc > 0.0) {
          const double ratio = std::sqrt(nc / np);
          const double cosine = dot / std::sqrt(nc * np);
          if (ratio < 1.0 && cosine > 0.99) {
            const double jump = std::min(ratio / (1.0 - ratio), 50.0);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] *= std::exp(jump * change[i]);
            prev_change.clear();
            if ((it % 4) == 0 && (residual_out = residual(r)) <= opt.tolerance) return it;
            continue;
          }
        }
      }
      prev_change = std::move(change);
      if ((residual_out = residual(r)) <= opt.tolerance) return it;
    }
    residual_out = residual(r);
    throw Error(ErrorCode::ConvergenceFailure, "radius iteration stopped at residual " + std::to_string(residual_out));
  }

 private:
  std::vector<std::vector<Corner>> corners_;
  std::vector<char> free_;
};

/// Lays circles out face by face. All traced triangles share one
/// orientation, so the third circle always goes to the same side.
inline std::vector<Eigen::Vector2d> layout(int n, const std::vector<Face>& triangles, const std::vector<double>& r) {
  std::vector<Eigen::Vector2d> c(n, Eigen::Vector2d::Zero());
  std::vector<char> placed(n, 0);
  if (triangles.empty()) throw Error(ErrorCode::NotTriangulated, "no triangles to lay out");

  std::map<std::pair<Vertex, Vertex>, std::vector<int>> by_edge;
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    for (int i = 0; i < 3; ++i) {
      Vertex a = triangles[f][i], b = triangles[f][(i + 1) % 3];
      by_edge[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(f));
    }
  }
  auto place_third = [&](Vertex x, Vertex y, Vertex z) {
    const double a = r[x] + r[y], b = r[x] + r[z], opp = r[y] + r[z];
    const double cosine = std::clamp((a * a + b * b - opp * opp) / (2.0 * a * b), -1.0, 1.0);
    const double angle = std::acos(cosine);
    Eigen::Vector2d dir = (c[y] - c[x]).normalized();
    Eigen::Vector2d rotated(dir.x() * std::cos(angle) - dir.y() * std::sin(angle),
                            dir.x() * std::sin(angle) + dir.y() * std::cos(angle));
    c[z] = c[x] + b * rotated;
    placed[z] = 1;
  };

  const Face& first = triangles.front();
  c[first[0]] = Eigen::Vector2d::Zero();
  c[first[1]] = Eigen::Vector2d(r[first[0]] + r[first[1]], 0.0);
  placed[first[0]] = placed[first[1]] = 1;
  place_third(first[0], first[1], first[2]);

  std::vector<char> done(triangles.size(), 0);
  std::deque<int> queue{0};
  done[0] = 1;
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    const Face& t = triangles[f];
    for (int i = 0; i < 3; ++i) {
      if (placed[t[i]] && placed[t[(i + 1) % 3]] && !placed[t[(i + 2) % 3]]) place_third(t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
    }
    for (int i = 0; i < 3; ++i) {
      Vertex a = t[i], b = t[(i + 1) % 3];
      for (int g : by_edge[{std::min(a, b), std::max(a, b)}]) {
        if (!done[g]) {
          done[g] = 1;
          queue.push_back(g);
        }
      }
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!placed[v]) throw Error(ErrorCode::NotTriangulated, "vertex " + std::to_string(v) + " is not reachable through triangles");
  }
  return c;
}

inline CirclePacking pack(const RotationGraph& rg, const std::map<Vertex, double>& pinned, const std::vector<Face>& skip,
                          const PackingOptions& opt) {
  const int n = rg.n();
  std::vector<char> is_free(n, 1);
  std::vector<double> r(n, 1.0);
  CirclePacking out;
  for (const auto& [v, radius] : pinned) {
    if (v < 0 || v >= n) throw Error(ErrorCode::IndexOutOfRange, "pinned vertex out of range");
    if (!(radius > 0.0)) throw Error(ErrorCode::IndexOutOfRange, "pinned radius must be positive");
    is_free[v] = 0;
    r[v] = radius;
    out.pinned.push_back(v);
  }
  std::vector<Face> triangles;
  for (const Face& f : trace_faces(rg)) {
    if (f.size() != 3) continue;
    if (std::find(skip.begin(), skip.end(), f) != skip.end()) continue;
    if (!is_free[f[0]] && !is_free[f[1]] && !is_free[f[2]]) continue;
    triangles.push_back(f);
  }
  RadiusSolver solver(n, triangles, is_free);
  out.iterations = solver.solve(r, opt, out.residual);
  out.centers = layout(n, triangles, r);
  out.radii = std::move(r);
  return out;
}

}  // namespace detail

/// Univalent packing of a genus-0 triangulation: the three circles of the
/// first traced face are pinned to radius 1 and form the outer triple.
inline CirclePacking circle_pack(const RotationGraph& rg, const PackingOptions& opt = {}) {
  if (rg.n() < 4) throw Error(ErrorCode::TooSmall, "packing needs at least 4 vertices");
  auto faces = trace_faces(rg);
  for (const Face& f : faces) {
    if (f.size() != 3) throw Error(ErrorCode::NotTriangulated, "face of length " + std::to_string(f.size()));
  }
  if (genus(rg) != 0) throw Error(ErrorCode::NonzeroGenus, "planar packing needs a genus-0 embedding");
  const Face& outer = faces.front();
  std::map<Vertex, double> pinned{{outer[0], 1.0}, {outer[1], 1.0}, {outer[2], 1.0}};
  return detail::pack(rg, pinned, {outer}, opt);
}

/// Packing of a disk triangulation with prescribed boundary radii. Faces
/// whose vertices are all pinned are left out.
inline CirclePacking circle_pack_with_boundary(const RotationGraph& rg, const std::map<Vertex, double>& pinned,
                                               const PackingOptions& opt = {}) {
  if (pinned.empty()) throw Error(ErrorCode::EmptyBoundary, "no pinned radii");
  return detail::pack(rg, pinned, {}, opt);
}

inline double angle_sum(const RotationGraph& rg, const CirclePacking& cp, Vertex v) {
  double total = 0.0;
  for (const Face& f : trace_faces(rg)) {
    if (f.size() != 3) continue;
    for (int i = 0; i < 3; ++i) {
      if (f[i] == v) total += detail::corner_angle(cp.radii[v], cp.radii[f[(i + 1) % 3]], cp.radii[f[(i + 2) % 3]]);
    }
  }
  return total;
}

/// Largest relative tangency defect | |c_u - c_v| - (r_u + r_v) | / (r_u + r_v).
inline double max_tangency_error(const BoundaryGraph& g, const CirclePacking& cp) {
  double worst = 0.0;
  for (const Edge& e : g.edges()) {
    const double want = cp.radii[e.u] + cp.radii[e.v];
    worst = std::max(worst, std::abs((cp.centers[e.u] - cp.centers[e.v]).norm() - want) / want);
  }
  return worst;
}

/// Unit vectors on S^2 with a designated subset and that subset's centroid.
struct SphereConfiguration {
  std::vector<Eigen::Vector3d> points;
  std::vector<Vertex> subset;
  Eigen::Vector3d boundary_centroid = Eigen::Vector3d::Zero();
};

inline Eigen::Vector3d centroid_of(std::span<const Eigen::Vector3d> points, std::span<const Vertex> subset) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (Vertex v : subset) sum += points[v];
  return subset.empty() ? sum : Eigen::Vector3d(sum / static_cast<double>(subset.size()));
}

/// Inverse stereographic projection from the north pole:
/// (x, y) -> (2x, 2y, x^2 + y^2 - 1) / (x^2 + y^2 + 1).
inline Eigen::Vector3d inverse_stereographic(const Eigen::Vector2d& p) {
  const double q = p.squaredNorm();
  return Eigen::Vector3d(2.0 * p.x(), 2.0 * p.y(), q - 1.0) / (q + 1.0);
}

inline SphereConfiguration lift_to_sphere(const CirclePacking& cp, std::vector<Vertex> subset) {
  SphereConfiguration sc;
  sc.points.reserve(cp.centers.size());
  for (const auto& c : cp.centers) sc.points.push_back(inverse_stereographic(c));
  sc.subset = std::move(subset);
  sc.boundary_centroid = centroid_of(sc.points, sc.subset);
  return sc;
}

inline SphereConfiguration lift_to_sphere(const CirclePacking& cp) {
  std::vector<Vertex> all(cp.centers.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Vertex>(i);
  return lift_to_sphere(cp, std::move(all));
}

/// Conformal automorphism of the unit ball sending w to the origin,
/// restricted to the sphere. |w| < 1.
inline Eigen::Vector3d mobius_map(const Eigen::Vector3d& w, const Eigen::Vector3d& x) {
  const Eigen::Vector3d d = x - w;
  const double denom = 1.0 - 2.0 * x.dot(w) + w.squaredNorm() * x.squaredNorm();
  Eigen::Vector3d y = ((1.0 - w.squaredNorm()) * d - d.squaredNorm() * w) / denom;
  return y.normalized();
}

struct MobiusOptions {
  double tolerance = 1e-7;  // on the norm of the subset centroid
  int max_iterations = 200;
  int grid_steps = 7;       // seeding grid per axis over [-0.9, 0.9]
};

/// Moves the configuration by a sphere-preserving Moebius map so the subset
/// centroid is (numerically) zero: coarse grid seeding over the ball
/// parameter, then damped Newton steps on the centroid.
inline SphereConfiguration mobius_normalize(const SphereConfiguration& sc, const MobiusOptions& opt = {}) {
  const auto& subset = sc.subset;
  if (subset.empty()) throw Error(ErrorCode::EmptyBoundary, "normalization subset is empty");
  double spread = 0.0;
  for (Vertex v : subset) spread = std::max(spread, (sc.points[v] - sc.points[subset.front()]).norm());
  if (spread < 1e-12) throw Error(ErrorCode::NormalizationFailure, "all subset points coincide");

  std::vector<Eigen::Vector3d> pts = sc.points;
  auto centroid_after = [&](const Eigen::Vector3d& w) {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (Vertex v : subset) sum += mobius_map(w, pts[v]);
    return Eigen::Vector3d(sum / static_cast<double>(subset.size()));
  };
  auto apply = [&](const Eigen::Vector3d& w) {
    for (auto& p : pts) p = mobius_map(w, p);
  };

  double best = centroid_of(pts, subset).norm();
  if (best <= opt.tolerance) return sc;

  Eigen::Vector3d seed = Eigen::Vector3d::Zero();
  const int steps = std::max(2, opt.grid_steps);
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      for (int k = 0; k < steps; ++k) {
        Eigen::Vector3d w(-0.9 + 1.8 * i / (steps - 1), -0.9 + 1.8 * j / (steps - 1), -0.9 + 1.8 * k / (steps - 1));
        if (w.norm() >= 0.95) continue;
        const double value = centroid_after(w).norm();
        if (value < best) {
          best = value;
          seed = w;
        }
      }
    }
  }
  if (seed.norm() > 0.0) apply(seed);

  for (int it = 0; it < opt.max_iterations && best > opt.tolerance; ++it) {
    const Eigen::Vector3d c = centroid_of(pts, subset);
    Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
    for (Vertex v : subset) second += pts[v] * pts[v].transpose();
    second /= static_cast<double>(subset.size());
    const Eigen::Matrix3d jac = Eigen::Matrix3d::Identity() - second;
    Eigen::Vector3d w = 0.5 * jac.completeOrthogonalDecomposition().solve(c);
    if (w.norm() > 0.9) w *= 0.9 / w.norm();
    bool improved = false;
    for (double t = 1.0; t > 1e-8; t *= 0.5) {
      const double value = centroid_after(t * w).norm();
      if (value < best) {
        apply(t * w);
        best = value;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (best > opt.tolerance) {
    throw Error(ErrorCode::NormalizationFailure, "centroid norm stalled at " + std::to_string(best));
  }
  SphereConfiguration out{std::move(pts), subset, Eigen::Vector3d::Zero()};
  out.boundary_centroid = centroid_of(out.points, out.subset);
  return out;
}

/// Upper-bound certificate for lambda_2 of a planar triangulation.
struct PlanarCertificate {
  double lambda2 = 0.0;
  double geometric_bound = 0.0;  // vector Rayleigh quotient at the normalized sphere points
  double degree_bound = 0.0;     // 8 D / |boundary|
  int max_degree = 0;
  std::size_t boundary_size = 0;
  double packing_residual = 0.0;
  double tangency_error = 0.0;
  double centroid_norm = 0.0;
  bool geometric_within_degree_bound = false;
};

inline constexpr double kCertificateSlack = 1e-8;

inline PlanarCertificate certify_planar_bound(const RotationGraph& rg, std::vector<Vertex> boundary,
                                              const PackingOptions& popt = {}, const MobiusOptions& mopt = {}) {
  const BoundaryGraph g = rg.base().with_boundary(std::move(boundary));
  if (g.boundary().size() < 2) throw Error(ErrorCode::TooSmall, "lambda_2 needs at least two boundary vertices");
  CirclePacking cp = circle_pack(rg, popt);
  SphereConfiguration sc = mobius_normalize(lift_to_sphere(cp, g.boundary()), mopt);

  PlanarCertificate cert;
  cert.lambda2 = lambda2(g);
  cert.geometric_bound = vector_rayleigh_bound(g, sc.points);
  cert.max_degree = g.max_degree();
  cert.boundary_size = g.boundary().size();
  cert.degree_bound = 8.0 * cert.max_degree / static_cast<double>(cert.boundary_size);
  cert.packing_residual = cp.residual;
  cert.tangency_error = max_tangency_error(g, cp);
  cert.centroid_norm = sc.boundary_centroid.norm();
  cert.geometric_within_degree_bound = cert.geometric_bound <= cert.degree_bound;
  if (cert.lambda2 > cert.geometric_bound + kCertificateSlack) {
    throw Error(ErrorCode::CertificateViolation, "lambda_2 exceeds the vector Rayleigh quotient");
  }
  return cert;
}

/// SVG drawing of a packing, 100 px per unit.
inline std::string to_svg(const CirclePacking& cp) {
  constexpr double kScale = 100.0;
  double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300;
  for (std::size_t i = 0; i < cp.radii.size(); ++i) {
    xmin = std::min(xmin, cp.centers[i].x() - cp.radii[i]);
    xmax = std::max(xmax, cp.centers[i].x() + cp.radii[i]);
    ymin = std::min(ymin, cp.centers[i].y() - cp.radii[i]);
    ymax = std::max(ymax, cp.centers[i].y() + cp.radii[i]);
  }
  char buf[256];
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf, "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6f %.6f %.6f %.6f\">\n", kScale * xmin,
                kScale * ymin, kScale * (xmax - xmin), kScale * (ymax - ymin));
  out += buf;
  for (std::size_t i = 0; i < cp.radii.size(); ++i) {
    std::snprintf(buf, sizeof buf, "  <circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\"/>\n",
                  kScale * cp.centers[i].x(), kScale * cp.centers[i].y(), kScale * cp.radii[i]);
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace steklov

#endif  // STEKLOV_PACKING_HPP
