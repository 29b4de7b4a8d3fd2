#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pedal/diagnostics.hpp"
#include "pedal/lts.hpp"

namespace pedal {

/// A safety property checked over the explored state space.
struct PropertySpec {
    enum class Kind : std::uint8_t {
        Invariant,       // expr holds at observation points
        DeadlockFree,    // every reachable state has a successor
        NoOutputWithout, // out_type != Standby implies the request expr holds
    };

    Kind kind = Kind::DeadlockFree;
    GuardExpr expr; // Invariant / NoOutputWithout
    /// Invariants are checked at AwaitingInput states by default; set to also
    /// check the transient AwaitingOutput/Evaluating states.
    bool include_transient = false;
    std::string source_text; // as written in the property file, for reports
};

struct CheckResult {
    bool holds = true;
    std::vector<Label> trace;          // shortest path to the violation
    std::uint32_t violating_state = 0; // LTS index
    std::string detail;
};

/// Scan all reachable states; on violation return the BFS-shortest trace.
/// Throws LtsError REQUIRES_COMPLETE_LTS / REQUIRES_STATE_MAP.
CheckResult check(const PedalModel& model, const Lts& lts, const PropertySpec& p);

/// Property file: one property per line — `invariant <expr>`,
/// `deadlock-free`, `no-output-without <expr>`. `#` starts a comment.
struct PropertyParseResult {
    std::vector<PropertySpec> properties;
    Diagnostics diagnostics;
};
PropertyParseResult parse_properties(const std::string& text, const PedalModel& model);

} // namespace pedal
