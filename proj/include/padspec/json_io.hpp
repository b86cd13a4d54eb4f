// Copyright (c) 2026 the padspec authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "json.hpp"
#include "padspec/spectra.hpp"

namespace padspec {

// nlohmann's default object keeps keys sorted, so dumps are byte-deterministic.
using Json = nlohmann::json;

Json pnorm_to_json(const PNormValue& n);
PNormValue pnorm_from_json(const Json& j);

Json vector_to_json(const FinSuppVector& v);
FinSuppVector vector_from_json(const Json& j, PrimeContext ctx);

Json functional_to_json(const Functional& f);
Functional functional_from_json(const Json& j, PrimeContext ctx);

// The "op" object of an operator document.
Json operator_to_json(const OperatorExpr& a);
OperatorExpr operator_from_json(const Json& j, PrimeContext ctx);

// {"p": ..., "op": {...}}
Json operator_document(const OperatorExpr& a);
OperatorExpr operator_from_document(const Json& doc);

Side side_from_string(const std::string& s);
SpectralKind kind_from_string(const std::string& s);

Json certificate_to_json(const Certificate& c);
Json verdict_to_json(const InvertibilityVerdict& v);

Json report_to_json(const RegionReport& r);
std::string report_to_csv(const RegionReport& r);
// Presentational heat grid; the CSV is the normative artifact. With a
// generated grid the panels plot x = valuation of lambda (zero in its own
// leading column) against y = unit index; explicit grids fall back to one
// cell per row.
std::string report_to_svg(const RegionReport& r, const GridSpec* grid = nullptr);

// Schema-checked field access; all failures raise Errc::schema.
const Json& require_field(const Json& j, const std::string& key);
std::string require_string(const Json& j, const std::string& key);
Rat require_rational(const Json& j, const std::string& key);
PrimeContext context_from_document(const Json& doc);

}  // namespace padspec
