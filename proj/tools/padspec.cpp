// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface over JSON documents. Subcommands:
//   norm        operator or vector sup/operator norm
//   invert      one-sided invertibility verdict with certificate
//   member      spectral-set membership for one (lambda, epsilon, side, kind)
//   scan        region report over a lambda grid (json, csv or svg)
//   witness     near-kernel vector for a pseudospectral point
//   destabilize rank-one perturbation with exact kernel witness
//   laws        executable law suite, one JSON verdict per line
//
// Exit codes: 0 ok, 1 law failures, 2 schema violation, 3 contract error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "padspec/perturb.hpp"

namespace {

using namespace padspec;

std::string read_input(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;  // inline JSON
  if (arg == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(arg, std::ios::binary);
  if (!in) fail(Errc::schema, "cannot open input '" + arg + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_document(const std::string& arg) {
  try {
    return Json::parse(read_input(arg));
  } catch (const Json::exception& e) {
    fail(Errc::schema, std::string("invalid JSON: ") + e.what());
  }
}

Rat flag_rational(const std::string& text) { return parse_rational(text); }

int run_norm(const Json& doc) {
  PrimeContext ctx = context_from_document(doc);
  if (doc.contains("vector")) {
    FinSuppVector v = vector_from_json(doc.at("vector"), ctx);
    std::cout << Json{{"norm", pnorm_to_json(v.sup_norm())}}.dump() << "\n";
    return 0;
  }
  OperatorExpr a = operator_from_document(doc);
  OpNorm n = op_norm(a);
  std::cout << Json{{"norm", pnorm_to_json(n.value)}, {"exact", n.exact}}.dump() << "\n";
  return 0;
}

int run_invert(const Json& doc) {
  OperatorExpr a = operator_from_document(doc);
  Side side = side_from_string(require_string(doc, "side"));
  std::cout << verdict_to_json(decide_invertibility(a, side)).dump() << "\n";
  return 0;
}

int run_member(const Json& doc) {
  OperatorExpr a = operator_from_document(doc);
  Rat lambda = require_rational(doc, "lambda");
  Side side = side_from_string(require_string(doc, "side"));
  SpectralKind kind = kind_from_string(require_string(doc, "kind"));
  bool member = false;
  if (kind == SpectralKind::spectrum) {
    if (doc.contains("epsilon"))
      fail(Errc::schema, "epsilon is only meaningful for pseudospectral kinds");
    member = in_spectrum(a, lambda, side);
  } else {
    Rat eps = require_rational(doc, "epsilon");
    member = kind == SpectralKind::pseudospectrum
                 ? in_pseudospectrum(a, lambda, eps, side)
                 : in_condition_pseudospectrum(a, lambda, eps, side);
  }
  std::cout << Json{{"member", member}}.dump() << "\n";
  return 0;
}

GridSpec grid_from_document(const Json& doc, const std::string& units_flag,
                            const std::string& valuations_flag) {
  GridSpec grid;
  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    if (!g.is_array()) fail(Errc::schema, "grid must be an array of rationals");
    std::vector<Rat> pts;
    for (const auto& cell : g) {
      if (!cell.is_string()) fail(Errc::schema, "grid points must be rational strings");
      pts.push_back(parse_rational(cell.get<std::string>()));
    }
    return GridSpec::explicit_list(std::move(pts));
  }
  if (doc.contains("generator")) {
    const Json& g = doc.at("generator");
    if (g.contains("units")) {
      for (const auto& cell : g.at("units"))
        grid.units.push_back(parse_rational(cell.get<std::string>()));
    }
    if (g.contains("valuations")) {
      const Json& v = g.at("valuations");
      if (!v.is_array() || v.size() != 2) fail(Errc::schema, "valuations must be [min, max]");
      grid.val_min = v[0].get<long>();
      grid.val_max = v[1].get<long>();
    }
  }
  if (!units_flag.empty()) {
    grid.units.clear();
    std::stringstream ss(units_flag);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.units.push_back(flag_rational(tok));
  }
  if (!valuations_flag.empty()) {
    auto colon = valuations_flag.find(':');
    if (colon == std::string::npos) fail(Errc::schema, "--grid-valuations wants min:max");
    grid.val_min = std::stol(valuations_flag.substr(0, colon));
    grid.val_max = std::stol(valuations_flag.substr(colon + 1));
  }
  return grid;
}

int run_scan(const Json& doc, const std::string& format, const std::string& units_flag,
             const std::string& valuations_flag) {
  OperatorExpr a = operator_from_document(doc);
  Rat eps = require_rational(doc, "epsilon");
  GridSpec grid = grid_from_document(doc, units_flag, valuations_flag);
  RegionReport report = scan(a, grid, eps);
  if (format == "csv")
    std::cout << report_to_csv(report);
  else if (format == "svg")
    std::cout << report_to_svg(report, &grid);
  else
    std::cout << report_to_json(report).dump() << "\n";
  return 0;
}

int run_witness(const Json& doc) {
  OperatorExpr a = operator_from_document(doc);
  Rat lambda = require_rational(doc, "lambda");
  Rat eps = require_rational(doc, "epsilon");
  SpectralKind kind = doc.contains("kind") ? kind_from_string(require_string(doc, "kind"))
                                           : SpectralKind::pseudospectrum;
  if (kind == SpectralKind::spectrum)
    fail(Errc::schema, "witnesses exist for the pseudospectral kinds");
  FinSuppVector x = kind == SpectralKind::pseudospectrum
                        ? pseudospectrum_witness(a, lambda, eps)
                        : condition_witness(a, lambda, eps);
  OperatorExpr shifted = shift_by_lambda(a, lambda);
  std::cout << Json{{"witness", vector_to_json(x)},
                    {"residual_norm", pnorm_to_json(apply(shifted, x).sup_norm())},
                    {"witness_norm", pnorm_to_json(x.sup_norm())}}
                   .dump()
            << "\n";
  return 0;
}

int run_destabilize(const Json& doc) {
  OperatorExpr a = operator_from_document(doc);
  Rat lambda = require_rational(doc, "lambda");
  Rat eps = require_rational(doc, "epsilon");
  SpectralKind kind = doc.contains("kind") ? kind_from_string(require_string(doc, "kind"))
                                           : SpectralKind::pseudospectrum;
  Destabilizer d = kind == SpectralKind::condition_pseudospectrum
                       ? make_condition_destabilizer(a, lambda, eps)
                       : make_destabilizer(a, lambda, eps);
  std::cout << destabilizer_to_json(d, a.context()).dump() << "\n";
  return 0;
}

LawInstance law_instance_from_json(const Json& j, std::optional<unsigned long> doc_p,
                                   uint64_t default_seed) {
  unsigned long p = doc_p.value_or(0);
  if (j.contains("p")) p = j.at("p").get<unsigned long>();
  if (p == 0) fail(Errc::schema, "law instance needs a prime (document or instance level)");
  PrimeContext ctx(p);
  OperatorExpr a = operator_from_json(require_field(j, "op"), ctx);
  LawInstance inst{ctx,
                   a,
                   require_rational(j, "lambda"),
                   require_rational(j, "epsilon"),
                   Rat(0),
                   Rat(0),
                   Rat(1),
                   default_seed,
                   100};
  inst.epsilon2 = j.contains("epsilon2") ? require_rational(j, "epsilon2")
                                         : inst.epsilon * Rat(ctx.p);
  if (j.contains("alpha")) inst.alpha = require_rational(j, "alpha");
  if (j.contains("beta")) inst.beta = require_rational(j, "beta");
  if (j.contains("seed")) inst.seed = j.at("seed").get<uint64_t>();
  if (j.contains("samples")) inst.samples = j.at("samples").get<int>();
  return inst;
}

int run_laws(const Json& doc, std::optional<uint64_t> seed_flag) {
  std::vector<std::string> ids;
  if (!doc.contains("laws") || (doc.at("laws").is_string() && doc.at("laws") == "all")) {
    ids = all_law_ids();
  } else {
    for (const auto& id : doc.at("laws")) ids.push_back(id.get<std::string>());
  }
  uint64_t seed = seed_flag.value_or(doc.value("seed", uint64_t{0}));

  std::vector<LawInstance> instances;
  std::optional<unsigned long> doc_p;
  if (doc.contains("p")) doc_p = doc.at("p").get<unsigned long>();
  if (doc.contains("instances")) {
    for (const auto& j : doc.at("instances"))
      instances.push_back(law_instance_from_json(j, doc_p, seed));
  } else if (doc.contains("ensemble")) {
    const Json& e = doc.at("ensemble");
    std::vector<unsigned long> primes;
    if (e.contains("primes"))
      for (const auto& p : e.at("primes")) primes.push_back(p.get<unsigned long>());
    if (primes.empty()) primes = {2, 3, 5};
    int count = e.value("count", 20);
    instances = standard_ensemble(primes, count, e.value("seed", seed));
  }

  bool any_fail = false;
  for (const auto& inst : instances) {
    for (const auto& id : ids) {
      LawVerdict v = law_check(id, inst);
      any_fail = any_fail || !v.pass;
      std::cout << law_verdict_to_json_line(v) << "\n";
    }
  }
  return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact one-sided spectra and pseudospectra over Q_p"};
  app.require_subcommand(1);

  std::string input, format = "json", grid_units, grid_valuations;
  std::optional<uint64_t> seed;

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("input", input, "input document: path, inline JSON, or - for stdin")
        ->required();
  };
  CLI::App* norm = app.add_subcommand("norm", "operator or vector norm");
  CLI::App* invert = app.add_subcommand("invert", "invertibility verdict");
  CLI::App* member = app.add_subcommand("member", "spectral set membership");
  CLI::App* scan_cmd = app.add_subcommand("scan", "region report over a grid");
  CLI::App* witness = app.add_subcommand("witness", "pseudospectral witness vector");
  CLI::App* destabilize = app.add_subcommand("destabilize", "rank-one destabilizer");
  CLI::App* laws = app.add_subcommand("laws", "run the law suite");
  for (CLI::App* cmd : {norm, invert, member, scan_cmd, witness, destabilize, laws})
    add_input(cmd);
  scan_cmd->add_option("--format", format, "json, csv or svg")
      ->check(CLI::IsMember({"json", "csv", "svg"}));
  scan_cmd->add_option("--grid-units", grid_units, "comma-separated unit list");
  scan_cmd->add_option("--grid-valuations", grid_valuations, "valuation range min:max");
  laws->add_option("--seed", seed, "seed override for sampling laws");
  destabilize->add_option("--seed", seed, "unused; accepted for uniform invocation");

  CLI11_PARSE(app, argc, argv);

  try {
    Json doc = parse_document(input);
    if (norm->parsed()) return run_norm(doc);
    if (invert->parsed()) return run_invert(doc);
    if (member->parsed()) return run_member(doc);
    if (scan_cmd->parsed()) return run_scan(doc, format, grid_units, grid_valuations);
    if (witness->parsed()) return run_witness(doc);
    if (destabilize->parsed()) return run_destabilize(doc);
    if (laws->parsed()) return run_laws(doc, seed);
  } catch (const padspec::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == padspec::Errc::schema ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
