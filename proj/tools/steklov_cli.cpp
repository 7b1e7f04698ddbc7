// steklov: command line front end for the library.
//
// Exit status is 0 on success, 1 for bad input or usage, 2 when a numerical
// routine fails to converge.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "steklov/steklov.hpp"

using namespace steklov;
using harness::format_double;

namespace {

int max_n() {
  if (const char* env = std::getenv("STEKLOV_MAX_N")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::Schema, "STEKLOV_MAX_N must be a positive integer");
  }
  return 20000;
}

void check_size(int n) {
  if (n > max_n()) {
    throw Error(ErrorCode::TooSmall, "instance has " + std::to_string(n) + " vertices, above the STEKLOV_MAX_N cap of " +
                                         std::to_string(max_n()));
  }
}

harness::GraphDocument load(const std::string& path) {
  auto doc = harness::read_document_file(path);
  check_size(doc.n);
  return doc;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    harness::write_text_file(path, text);
  }
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += format_double(xs[i]);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steklov eigenvalues of graphs with boundary"};
  app.require_subcommand(1);

  std::string file, out, svg, csv, family, policy = "all-vertices";
  int k = 0, u = -1, v = -1, gmax = 4, res = 6;
  std::uint64_t seed = 1;
  std::vector<int> params;
  double fraction = 0.5;
  bool parallel = false;

  auto* spectrum = app.add_subcommand("spectrum", "Steklov eigenvalues, or lambda_k with --k");
  spectrum->add_option("file", file)->required();
  spectrum->add_option("--k", k, "1-based index");

  auto* dtn = app.add_subcommand("dtn", "Dirichlet-to-Neumann matrix, one row per line");
  dtn->add_option("file", file)->required();

  auto* resist = app.add_subcommand("resist", "effective resistance between two vertices");
  resist->add_option("file", file)->required();
  resist->add_option("--u", u)->required();
  resist->add_option("--v", v)->required();

  auto* subdivide = app.add_subcommand("subdivide", "k-fold hexagonal refinement");
  subdivide->add_option("file", file)->required();
  subdivide->add_option("--k", k)->required();
  subdivide->add_option("-o,--out", out);

  auto* immerse = app.add_subcommand("immerse", "random immersion of G into its refinement");
  immerse->add_option("file", file)->required();
  immerse->add_option("--k", k)->required();
  immerse->add_option("--seed", seed);

  auto* pack = app.add_subcommand("pack", "circle packing of a planar triangulation");
  pack->add_option("file", file)->required();
  pack->add_option("--svg", svg);
  PackingOptions popt;
  pack->add_option("--max-iterations", popt.max_iterations);

  auto* certify = app.add_subcommand("certify-planar", "packing certificate for lambda_2");
  certify->add_option("file", file)->required();

  auto* gen = app.add_subcommand("gen", "generate sphere LEVEL | torus N M | genus G RES");
  gen->add_option("family", family)->required()->check(CLI::IsMember({"sphere", "torus", "genus"}));
  gen->add_option("params", params);
  gen->add_option("-o,--out", out);

  auto* sweep = app.add_subcommand("sweep", "lambda_2 |boundary| / g across genus");
  sweep->add_option("--gmax", gmax);
  sweep->add_option("--res", res);
  sweep->add_option("--policy", policy)->check(CLI::IsMember({"all-vertices", "random-fraction", "single-face"}));
  sweep->add_option("--fraction", fraction);
  sweep->add_option("--seed", seed);
  sweep->add_option("--csv", csv);
  sweep->add_option("--svg", svg);
  sweep->add_flag("--parallel", parallel);

  auto* chain = app.add_subcommand("chain", "compare lambda_2 of G with its k-th refinement");
  chain->add_option("file", file)->required();
  chain->add_option("--k", k)->required();
  chain->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (spectrum->parsed()) {
      auto g = harness::to_boundary_graph(load(file));
      if (k != 0) {
        std::cout << format_double(lambda_k(g, k)) << '\n';
      } else {
        std::cout << join(steklov_spectrum(g).eigenvalues) << '\n';
      }
    } else if (dtn->parsed()) {
      auto m = dtn_matrix(harness::to_boundary_graph(load(file)));
      for (Eigen::Index i = 0; i < m.matrix.rows(); ++i) {
        std::vector<double> row;
        for (Eigen::Index j = 0; j < m.matrix.cols(); ++j) row.push_back(m.matrix(i, j));
        std::cout << join(row) << '\n';
      }
    } else if (resist->parsed()) {
      auto r = effective_resistance(harness::to_boundary_graph(load(file)), u, v);
      std::cout << "u,v,resistance,pinv,discrepancy\n"
                << u << ',' << v << ',' << format_double(r.r_steklov) << ',' << format_double(r.r_pinv) << ','
                << format_double(r.discrepancy) << '\n';
    } else if (subdivide->parsed()) {
      auto doc = load(file);
      auto rg = harness::to_rotation_graph(doc);
      auto refined = refine(rg, rg.base().boundary(), k);
      check_size(refined.rg.n());
      nlohmann::json meta = {{"refined_from", file}, {"k", k}, {"genus", steklov::genus(refined.rg)}};
      emit(out, harness::serialize_document(harness::to_document(refined.rg, meta)));
    } else if (immerse->parsed()) {
      auto rg = harness::to_rotation_graph(load(file));
      auto refined = refine(rg, rg.base().boundary(), k);
      check_size(refined.rg.n());
      auto imm = random_immersion(refined, seed);
      auto cmp = comparison_bound(imm, 2);
      std::cout << "seed,xi,ell,lambda2_G,xi_ell_lambda2_H\n"
                << seed << ',' << imm.xi << ',' << imm.ell << ',' << format_double(cmp.lhs) << ','
                << format_double(cmp.rhs) << '\n';
    } else if (pack->parsed()) {
      auto rg = harness::to_rotation_graph(load(file));
      auto cp = circle_pack(rg, popt);
      std::cout << "iterations,residual,tangency_error\n"
                << cp.iterations << ',' << format_double(cp.residual) << ','
                << format_double(max_tangency_error(rg.base(), cp)) << '\n';
      if (!svg.empty()) harness::write_text_file(svg, to_svg(cp));
    } else if (certify->parsed()) {
      auto rg = harness::to_rotation_graph(load(file));
      auto cert = certify_planar_bound(rg, rg.base().boundary());
      std::cout << "lambda2,geometric_bound,eight_D_over_B,D,boundary_size,centroid_norm\n"
                << format_double(cert.lambda2) << ',' << format_double(cert.geometric_bound) << ','
                << format_double(cert.degree_bound) << ',' << cert.max_degree << ',' << cert.boundary_size << ','
                << format_double(cert.centroid_norm) << '\n';
    } else if (gen->parsed()) {
      const std::size_t want = family == "sphere" ? 1 : 2;
      if (params.size() != want) {
        std::cerr << "gen " << family << " takes " << want << " integer parameter(s)\n";
        return 1;
      }
      RotationGraph rg = family == "sphere"  ? harness::gen_sphere(params[0])
                         : family == "torus" ? harness::gen_torus(params[0], params[1])
                                             : harness::gen_genus(params[0], params[1]);
      check_size(rg.n());
      const int bound = family == "genus" ? harness::kGenusDegreeBound : 6;
      nlohmann::json meta = {{"family", family}, {"genus", steklov::genus(rg)}, {"params", params}, {"degree_bound", bound}};
      emit(out, harness::serialize_document(harness::to_document(rg, meta)));
    } else if (sweep->parsed()) {
      auto result = harness::sweep_main_bound(gmax, res, harness::parse_policy(policy, fraction, seed), parallel);
      for (const auto& d : result.diagnostics) std::cerr << d << '\n';
      emit(csv, harness::to_csv(result.records));
      if (!svg.empty()) harness::write_text_file(svg, harness::sweep_svg(result.records));
    } else if (chain->parsed()) {
      auto rg = harness::to_rotation_graph(load(file));
      std::vector<std::uint64_t> seeds;
      for (std::uint64_t s = 0; s < 8; ++s) seeds.push_back(seed + s);
      auto rep = chain_bound(rg, rg.base().boundary(), k, seeds);
      std::cout << "k,boundary,refined_boundary,lambda2,refined_lambda2,ratio\n"
                << k << ',' << rep.boundary_size << ',' << rep.refined_boundary_size << ','
                << format_double(rep.lambda2) << ',' << format_double(rep.refined_lambda2) << ','
                << format_double(rep.ratio) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.is_convergence() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
