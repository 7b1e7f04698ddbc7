#ifndef STEKLOV_HARNESS_SWEEP_HPP
#define STEKLOV_HARNESS_SWEEP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "steklov/embedding.hpp"
#include "steklov/error.hpp"
#include "steklov/harness/generators.hpp"
#include "steklov/rng.hpp"
#include "steklov/spectrum.hpp"

namespace steklov::harness {

enum class PolicyKind { AllVertices, RandomFraction, SingleFace };

struct BoundaryPolicy {
  PolicyKind kind = PolicyKind::AllVertices;
  double fraction = 0.5;
  std::uint64_t seed = 1;

  static BoundaryPolicy all_vertices() { return {}; }
  static BoundaryPolicy random_fraction(double p, std::uint64_t seed) { return {PolicyKind::RandomFraction, p, seed}; }
  static BoundaryPolicy single_face() { return {PolicyKind::SingleFace, 0.0, 0}; }
};

inline std::string to_string(const BoundaryPolicy& p) {
  switch (p.kind) {
    case PolicyKind::AllVertices: return "all-vertices";
    case PolicyKind::RandomFraction: return "random-fraction";
    case PolicyKind::SingleFace: return "single-face";
  }
  return "?";
}

/// "all-vertices", "random-fraction" or "single-face"; anything else is a
/// validation error.
inline BoundaryPolicy parse_policy(const std::string& name, double fraction, std::uint64_t seed) {
  if (name == "all-vertices") return BoundaryPolicy::all_vertices();
  if (name == "single-face") return BoundaryPolicy::single_face();
  if (name == "random-fraction") {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorCode::IndexOutOfRange, "fraction must lie in (0, 1]");
    return BoundaryPolicy::random_fraction(fraction, seed);
  }
  throw Error(ErrorCode::Schema, "unknown boundary policy '" + name + "'");
}

/// Boundary chosen by `policy` on a graph of genus g. The random stream for
/// genus g is seeded with seed + g so rows do not depend on each other.
inline std::vector<Vertex> assign_boundary(const RotationGraph& rg, const BoundaryPolicy& policy, int g) {
  const int n = rg.n();
  switch (policy.kind) {
    case PolicyKind::AllVertices: return all_vertices(n);
    case PolicyKind::SingleFace: {
      Face f = trace_faces(rg).front();
      std::sort(f.begin(), f.end());
      return f;
    }
    case PolicyKind::RandomFraction: {
      const int count = std::clamp(static_cast<int>(std::lround(policy.fraction * n)), 1, n);
      CounterRng rng(policy.seed + static_cast<std::uint64_t>(g));
      std::vector<Vertex> pool = all_vertices(n);
      for (int i = 0; i < count; ++i) std::swap(pool[i], pool[i + rng.uniform_index(n - i)]);
      pool.resize(count);
      std::sort(pool.begin(), pool.end());
      return pool;
    }
  }
  return {};
}

struct SweepRecord {
  std::string family;
  int g = 0;
  int D = 0;
  int boundary_size = 0;
  double lambda2 = 0.0;
  double product = 0.0;
  double product_over_g = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<std::string> diagnostics;
};

namespace detail {

struct SweepItem {
  std::optional<SweepRecord> record;
  std::string diagnostic;
};

inline SweepItem sweep_item(int g, int resolution, const BoundaryPolicy& policy) {
  const RotationGraph surface = gen_genus(g, resolution);
  const std::vector<Vertex> boundary = assign_boundary(surface, policy, g);
  const BoundaryGraph graph = surface.base().with_boundary(boundary);
  if (boundary.size() < 2) {
    return {std::nullopt, "genus " + std::to_string(g) + ": boundary has " + std::to_string(boundary.size()) +
                              " vertex, lambda_2 undefined; skipped"};
  }
  SweepRecord r;
  r.family = "genus";
  r.g = g;
  r.D = graph.max_degree();
  r.boundary_size = static_cast<int>(boundary.size());
  r.lambda2 = lambda2(graph);
  r.product = r.lambda2 * r.boundary_size;
  r.product_over_g = r.product / std::max(g, 1);
  return {r, {}};
}

}  // namespace detail

/// One record per genus 1..g_max on gen_genus(g, resolution). Items run
/// concurrently when `parallel` is set; output order is always by g.
inline SweepResult sweep_main_bound(int g_max, int resolution, const BoundaryPolicy& policy, bool parallel = false) {
  if (g_max < 1) throw Error(ErrorCode::IndexOutOfRange, "g_max must be at least 1");
  std::vector<detail::SweepItem> items(g_max);
  if (parallel) {
    std::vector<std::future<detail::SweepItem>> futures;
    for (int g = 1; g <= g_max; ++g) futures.push_back(std::async(std::launch::async, detail::sweep_item, g, resolution, policy));
    for (int g = 1; g <= g_max; ++g) items[g - 1] = futures[g - 1].get();
  } else {
    for (int g = 1; g <= g_max; ++g) items[g - 1] = detail::sweep_item(g, resolution, policy);
  }
  SweepResult out;
  for (auto& item : items) {
    if (item.record) out.records.push_back(std::move(*item.record));
    else out.diagnostics.push_back(std::move(item.diagnostic));
  }
  return out;
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out = "family,g,D,boundary_size,lambda2,product,product_over_g\n";
  for (const auto& r : records) {
    out += r.family + ',' + std::to_string(r.g) + ',' + std::to_string(r.D) + ',' + std::to_string(r.boundary_size) + ',' +
           format_double(r.lambda2) + ',' + format_double(r.product) + ',' + format_double(r.product_over_g) + '\n';
  }
  return out;
}

/// Scatter of product_over_g against g.
inline std::string sweep_svg(const std::vector<SweepRecord>& records) {
  const double w = 400, h = 300, pad = 40;
  double ymax = 0;
  int gmax = 1;
  for (const auto& r : records) {
    ymax = std::max(ymax, r.product_over_g);
    gmax = std::max(gmax, r.g);
  }
  if (ymax <= 0) ymax = 1;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"300\">\n";
  out += "<line x1=\"40\" y1=\"260\" x2=\"380\" y2=\"260\" stroke=\"black\"/>\n";
  out += "<line x1=\"40\" y1=\"260\" x2=\"40\" y2=\"20\" stroke=\"black\"/>\n";
  for (const auto& r : records) {
    const double x = pad + (w - 2 * pad) * r.g / gmax;
    const double y = h - pad - (h - 2 * pad) * r.product_over_g / ymax;
    out += "<circle cx=\"" + format_double(x) + "\" cy=\"" + format_double(y) + "\" r=\"4\" fill=\"steelblue\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace steklov::harness

#endif  // STEKLOV_HARNESS_SWEEP_HPP
