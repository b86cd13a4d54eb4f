// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "padspec/json_io.hpp"

#include <sstream>

namespace padspec {

namespace {

std::string norm_text(const PNormValue& n, const PrimeContext& ctx) {
  if (n.is_zero()) return "0";
  return std::to_string(ctx.p) + "^" + std::to_string(n.exponent());
}

uint32_t parse_index(const std::string& key) {
  if (key.empty() || key.size() > 9 || key.find_first_not_of("0123456789") != std::string::npos)
    fail(Errc::schema, "bad index '" + key + "'");
  return static_cast<uint32_t>(std::stoul(key));
}

Ambient ambient_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "c0") return Ambient::c0();
  if (j.is_object() && j.contains("kn") && j["kn"].is_number_unsigned())
    return Ambient::kn(j["kn"].get<uint32_t>());
  fail(Errc::schema, "ambient must be \"c0\" or {\"kn\": n}");
}

Json ambient_to_json(const Ambient& a) {
  if (a.finite()) return Json{{"kn", a.n}};
  return Json("c0");
}

}  // namespace

const Json& require_field(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) fail(Errc::schema, "missing field '" + key + "'");
  return j.at(key);
}

std::string require_string(const Json& j, const std::string& key) {
  const Json& f = require_field(j, key);
  if (!f.is_string()) fail(Errc::schema, "field '" + key + "' must be a string");
  return f.get<std::string>();
}

Rat require_rational(const Json& j, const std::string& key) {
  return parse_rational(require_string(j, key));
}

PrimeContext context_from_document(const Json& doc) {
  const Json& p = require_field(doc, "p");
  if (!p.is_number_unsigned()) fail(Errc::schema, "field 'p' must be a positive integer");
  return PrimeContext(p.get<unsigned long>());
}

Json pnorm_to_json(const PNormValue& n) {
  if (n.is_zero()) return Json{{"zero", true}};
  return Json{{"pow", n.exponent()}};
}

PNormValue pnorm_from_json(const Json& j) {
  if (j.is_object() && j.contains("zero") && j["zero"].is_boolean() && j["zero"].get<bool>())
    return PNormValue::zero();
  if (j.is_object() && j.contains("pow") && j["pow"].is_number_integer())
    return PNormValue::pow(j["pow"].get<long>());
  fail(Errc::schema, "norm value must be {\"zero\":true} or {\"pow\":e}");
}

Json vector_to_json(const FinSuppVector& v) {
  Json entries = Json::object();
  for (const auto& [i, q] : v.entries()) entries[std::to_string(i)] = rat_to_string(q);
  return Json{{"ambient", ambient_to_json(v.ambient())}, {"entries", entries}};
}

FinSuppVector vector_from_json(const Json& j, PrimeContext ctx) {
  Ambient amb = ambient_from_json(require_field(j, "ambient"));
  const Json& entries = require_field(j, "entries");
  if (!entries.is_object()) fail(Errc::schema, "vector entries must be an object");
  FinSuppVector v(ctx, amb);
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    if (!it.value().is_string()) fail(Errc::schema, "vector entries must be rational strings");
    v.set(parse_index(it.key()), parse_rational(it.value().get<std::string>()));
  }
  return v;
}

Json functional_to_json(const Functional& f) {
  Json entries = Json::object();
  for (const auto& [i, q] : f.coefficients()) entries[std::to_string(i)] = rat_to_string(q);
  return Json{{"entries", entries}};
}

Functional functional_from_json(const Json& j, PrimeContext ctx) {
  const Json& entries = require_field(j, "entries");
  if (!entries.is_object()) fail(Errc::schema, "functional entries must be an object");
  Functional f(ctx);
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    if (!it.value().is_string()) fail(Errc::schema, "functional entries must be rational strings");
    f.set(parse_index(it.key()), parse_rational(it.value().get<std::string>()));
  }
  return f;
}

Json operator_to_json(const OperatorExpr& a) {
  if (const auto* m = a.as<MatrixOp>()) {
    Json rows = Json::array();
    for (uint32_t i = 0; i < m->m.dim(); ++i) {
      Json row = Json::array();
      for (uint32_t j = 0; j < m->m.dim(); ++j) row.push_back(rat_to_string(m->m.at(i, j)));
      rows.push_back(row);
    }
    return Json{{"kind", "matrix"}, {"entries", rows}};
  }
  if (const auto* d = a.as<DiagonalOp>()) {
    Json prefix = Json::array();
    for (const auto& q : d->prefix) prefix.push_back(rat_to_string(q));
    return Json{{"kind", "diagonal"}, {"prefix", prefix}, {"tail", rat_to_string(d->tail)}};
  }
  if (const auto* s = a.as<ShiftedShiftOp>()) {
    Json bare{{"kind", s->shift == ShiftKind::right ? "right_shift" : "left_shift"}};
    if (s->scale == 1 && sgn(s->lambda) == 0) return bare;
    if (s->scale == 1)
      return Json{{"kind", "shifted"}, {"lambda", rat_to_string(s->lambda)}, {"inner", bare}};
    // scale*(shift - lambda) = scale*shift + (-scale*lambda)*I
    return Json{{"kind", "affine"},
                {"alpha", rat_to_string(-s->scale * s->lambda)},
                {"beta", rat_to_string(s->scale)},
                {"inner", bare}};
  }
  const auto& r = std::get<RankOneOp>(a.node());
  return Json{{"kind", "rank_one"},
              {"u", vector_to_json(r.u)},
              {"phi", functional_to_json(r.phi)},
              {"inner", operator_to_json(*r.inner)}};
}

OperatorExpr operator_from_json(const Json& j, PrimeContext ctx) {
  std::string kind = require_string(j, "kind");
  if (kind == "matrix") {
    const Json& rows = require_field(j, "entries");
    if (!rows.is_array() || rows.empty()) fail(Errc::schema, "matrix entries must be a non-empty array");
    std::vector<std::vector<Rat>> m;
    for (const auto& row : rows) {
      if (!row.is_array()) fail(Errc::schema, "matrix rows must be arrays");
      std::vector<Rat> r;
      for (const auto& cell : row) {
        if (!cell.is_string()) fail(Errc::schema, "matrix cells must be rational strings");
        r.push_back(parse_rational(cell.get<std::string>()));
      }
      m.push_back(std::move(r));
    }
    return make_matrix(ctx, m);
  }
  if (kind == "diagonal") {
    const Json& prefix = require_field(j, "prefix");
    if (!prefix.is_array()) fail(Errc::schema, "diagonal prefix must be an array");
    std::vector<Rat> p;
    for (const auto& cell : prefix) {
      if (!cell.is_string()) fail(Errc::schema, "diagonal entries must be rational strings");
      p.push_back(parse_rational(cell.get<std::string>()));
    }
    return make_diagonal(ctx, std::move(p), require_rational(j, "tail"));
  }
  if (kind == "right_shift") return make_right_shift(ctx);
  if (kind == "left_shift") return make_left_shift(ctx);
  if (kind == "shifted")
    return shift_by_lambda(operator_from_json(require_field(j, "inner"), ctx),
                           require_rational(j, "lambda"));
  if (kind == "affine")
    return affine(operator_from_json(require_field(j, "inner"), ctx),
                  require_rational(j, "alpha"), require_rational(j, "beta"));
  if (kind == "rank_one") {
    OperatorExpr inner = operator_from_json(require_field(j, "inner"), ctx);
    FinSuppVector u = vector_from_json(require_field(j, "u"), ctx);
    Functional phi = functional_from_json(require_field(j, "phi"), ctx);
    return add_rank_one(inner, u, phi);
  }
  fail(Errc::schema, "unknown operator kind '" + kind + "'");
}

Json operator_document(const OperatorExpr& a) {
  return Json{{"p", a.context().p}, {"op", operator_to_json(a)}};
}

OperatorExpr operator_from_document(const Json& doc) {
  PrimeContext ctx = context_from_document(doc);
  return operator_from_json(require_field(doc, "op"), ctx);
}

Side side_from_string(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  if (s == "two_sided") return Side::two_sided;
  fail(Errc::schema, "side must be left, right or two_sided");
}

SpectralKind kind_from_string(const std::string& s) {
  if (s == "spectrum") return SpectralKind::spectrum;
  if (s == "pseudospectrum") return SpectralKind::pseudospectrum;
  if (s == "condition_pseudospectrum") return SpectralKind::condition_pseudospectrum;
  fail(Errc::schema, "kind must be spectrum, pseudospectrum or condition_pseudospectrum");
}

Json certificate_to_json(const Certificate& c) {
  if (const auto* e = std::get_if<ExactInverseCert>(&c)) {
    Json rows = Json::array();
    for (uint32_t i = 0; i < e->inverse.dim(); ++i) {
      Json row = Json::array();
      for (uint32_t j = 0; j < e->inverse.dim(); ++j)
        row.push_back(rat_to_string(e->inverse.at(i, j)));
      rows.push_back(row);
    }
    return Json{{"kind", "exact_inverse"}, {"inverse", rows}};
  }
  if (const auto* k = std::get_if<KernelVectorCert>(&c))
    return Json{{"kind", "kernel_vector"}, {"vector", vector_to_json(k->v)}};
  if (const auto* n = std::get_if<NonSurjectivityCert>(&c))
    return Json{{"kind", "non_surjectivity"},
                {"missed", vector_to_json(n->missed)},
                {"reason", n->reason}};
  if (const auto* f = std::get_if<LeftAnnihilatorCert>(&c))
    return Json{{"kind", "annihilating_functional"}, {"functional", functional_to_json(f->psi)}};
  if (const auto* ci = std::get_if<CanonicalInverseCert>(&c))
    return Json{{"kind", "canonical_one_sided_inverse"},
                {"family", ci->family},
                {"side", side_name(ci->side)},
                {"lower_modulus", pnorm_to_json(ci->gamma)}};
  const auto& t = std::get<KernelTruncationCert>(c);
  return Json{{"kind", "kernel_truncation_family"},
              {"lambda", rat_to_string(t.lambda)},
              {"order", t.m},
              {"ratio", pnorm_to_json(t.ratio)}};
}

Json verdict_to_json(const InvertibilityVerdict& v) {
  Json j{{"side", side_name(v.side)},
         {"invertible", v.invertible},
         {"certificate", certificate_to_json(v.certificate)}};
  if (v.min_inverse_norm) j["min_inverse_norm"] = pnorm_to_json(*v.min_inverse_norm);
  return j;
}

Json report_to_json(const RegionReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j{{"lambda", rat_to_string(row.lambda)}};
    if (row.unsupported) {
      j["unsupported"] = row.note;
    } else {
      j["in_left_spectrum"] = row.in_left_spectrum;
      j["in_right_spectrum"] = row.in_right_spectrum;
      j["in_left_pseudospectrum"] = row.in_left_pseudo;
      j["in_right_pseudospectrum"] = row.in_right_pseudo;
      j["in_left_condition_pseudospectrum"] = row.in_left_condition;
      j["in_right_condition_pseudospectrum"] = row.in_right_condition;
      j["op_norm"] = pnorm_to_json(row.op_norm_shifted);
      j["min_left_inverse_norm"] =
          row.min_left_inverse_norm ? pnorm_to_json(*row.min_left_inverse_norm) : Json("inf");
      j["min_right_inverse_norm"] =
          row.min_right_inverse_norm ? pnorm_to_json(*row.min_right_inverse_norm) : Json("inf");
    }
    rows.push_back(std::move(j));
  }
  return Json{{"p", r.context.p}, {"epsilon", rat_to_string(r.epsilon)}, {"rows", rows}};
}

std::string report_to_csv(const RegionReport& r) {
  std::ostringstream out;
  out << "lambda,in_left_spectrum,in_right_spectrum,in_left_pseudospectrum,"
         "in_right_pseudospectrum,in_left_condition_pseudospectrum,"
         "in_right_condition_pseudospectrum,op_norm,min_left_inverse_norm,"
         "min_right_inverse_norm\n";
  for (const auto& row : r.rows) {
    out << rat_to_string(row.lambda);
    if (row.unsupported) {
      for (int k = 0; k < 9; ++k) out << ",?";
    } else {
      out << ',' << row.in_left_spectrum << ',' << row.in_right_spectrum << ','
          << row.in_left_pseudo << ',' << row.in_right_pseudo << ',' << row.in_left_condition
          << ',' << row.in_right_condition << ',' << norm_text(row.op_norm_shifted, r.context)
          << ','
          << (row.min_left_inverse_norm ? norm_text(*row.min_left_inverse_norm, r.context) : "inf")
          << ','
          << (row.min_right_inverse_norm ? norm_text(*row.min_right_inverse_norm, r.context)
                                         : "inf");
    }
    out << "\n";
  }
  return out.str();
}

namespace {

bool row_member(const ScanRow& row, int set_index) {
  switch (set_index) {
    case 0: return row.in_left_spectrum;
    case 1: return row.in_right_spectrum;
    case 2: return row.in_left_pseudo;
    case 3: return row.in_right_pseudo;
    case 4: return row.in_left_condition;
    default: return row.in_right_condition;
  }
}

const char* row_fill(const ScanRow& row, int set_index) {
  if (row.unsupported) return "#999999";
  return row_member(row, set_index) ? "#1f77b4" : "#eeeeee";
}

}  // namespace

std::string report_to_svg(const RegionReport& r, const GridSpec* grid) {
  const int cell = 12, gap = 2, label_h = 16;
  const char* names[6] = {"left spectrum",          "right spectrum",
                          "left pseudospectrum",    "right pseudospectrum",
                          "left condition pseudo",  "right condition pseudo"};
  std::ostringstream body;
  int width = 0, height = 0;

  if (grid && grid->generated) {
    // x = valuation of lambda (zero gets the leading column), y = unit index.
    std::vector<Rat> units = grid->units;
    if (units.empty()) {
      for (unsigned long u = 1; u < r.context.p; ++u) units.push_back(Rat(u));
      units.push_back(Rat(1 + r.context.p));
    }
    auto find_row = [&](const Rat& lambda) -> const ScanRow* {
      for (const auto& row : r.rows)
        if (row.lambda == lambda) return &row;
      return nullptr;
    };
    int cols = static_cast<int>(grid->val_max - grid->val_min) + 2;
    int rows_per_panel = static_cast<int>(units.size());
    int panel_h = rows_per_panel * (cell + gap) + label_h;
    width = cols * (cell + gap) + 160;
    height = 6 * panel_h + 10;
    for (int s = 0; s < 6; ++s) {
      int y0 = s * panel_h + label_h;
      body << "<text x=\"0\" y=\"" << (y0 - 4) << "\" font-size=\"10\">" << names[s]
           << "</text>\n";
      if (const ScanRow* zero = find_row(Rat(0)))
        body << "<rect x=\"0\" y=\"" << y0 << "\" width=\"" << cell << "\" height=\"" << cell
             << "\" fill=\"" << row_fill(*zero, s) << "\"/>\n";
      for (long v = grid->val_min; v <= grid->val_max; ++v) {
        int x = static_cast<int>(v - grid->val_min + 1) * (cell + gap);
        for (size_t ui = 0; ui < units.size(); ++ui) {
          Rat lambda = units[ui] * pnorm_to_rational(PNormValue::pow(v), r.context);
          const ScanRow* row = find_row(lambda);
          if (!row) continue;
          body << "<rect x=\"" << x << "\" y=\"" << (y0 + static_cast<int>(ui) * (cell + gap))
               << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
               << row_fill(*row, s) << "\"/>\n";
        }
      }
    }
  } else {
    int cols = static_cast<int>(r.rows.size());
    width = cols * (cell + gap) + 160;
    height = 6 * (cell + gap + label_h) + 10;
    for (int s = 0; s < 6; ++s) {
      int y0 = s * (cell + gap + label_h) + label_h;
      body << "<text x=\"0\" y=\"" << (y0 - 4) << "\" font-size=\"10\">" << names[s]
           << "</text>\n";
      for (int c = 0; c < cols; ++c)
        body << "<rect x=\"" << c * (cell + gap) << "\" y=\"" << y0 << "\" width=\"" << cell
             << "\" height=\"" << cell << "\" fill=\"" << row_fill(r.rows[static_cast<size_t>(c)], s)
             << "\"/>\n";
    }
  }
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n"
      << body.str() << "</svg>\n";
  return out.str();
}

}  // namespace padspec
