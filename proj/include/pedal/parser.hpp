#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pedal/ast.hpp"
#include "pedal/diagnostics.hpp"

namespace pedal {

struct ParseResult {
    std::optional<PedalModel> model; // set iff no syntax error
    Diagnostics diagnostics;         // syntax and validation findings

    bool ok() const { return model.has_value() && diagnostics.empty(); }
};

/// Parse and validate DSL source. Total: every failure is reported as a
/// positioned diagnostic, never an abort.
ParseResult parse(std::string_view text);

/// Structural/typing checks on a parsed model. Empty result iff the model
/// satisfies every invariant (rule/action bijection, declared names,
/// disjoint namespaces, total init, well-typed expressions).
Diagnostics validate(const PedalModel& model);

/// Parse a single boolean expression (used for property files). Names are
/// not resolved here; pass the result through resolve_expr.
struct ExprParseResult {
    std::optional<GuardExpr> expr;
    Diagnostics diagnostics;
};
ExprParseResult parse_expression(std::string_view text);

/// Type-check an expression against a model's declarations.
Diagnostics resolve_expr(const GuardExpr& e, const PedalModel& model);

/// Reclassify bare names in a freestanding expression (parsed without
/// declarations in scope) as boolean or plane variables of the model.
GuardExpr bind_expr(GuardExpr e, const PedalModel& model);

/// Canonical source text; parse(pretty_print(m)).model == m for valid m.
std::string pretty_print(const PedalModel& model);

} // namespace pedal
