#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pedal/semantics.hpp"

namespace pedal {

struct Transition {
    std::uint32_t src = 0;
    Label label;
    std::uint32_t dst = 0;

    bool operator==(const Transition&) const = default;
};

/// Explicit labeled transition system. After exploration, state 0 is the
/// initial state and numbering follows BFS discovery order.
struct Lts {
    std::uint32_t n_states = 1;
    std::uint32_t initial = 0;
    std::vector<Transition> transitions;
    bool complete = true;               // false iff exploration hit max_states
    std::vector<SemState> state_map;    // empty when not available (imports)

    bool has_state_map() const { return !state_map.empty(); }
    bool operator==(const Lts& o) const {
        return n_states == o.n_states && initial == o.initial &&
               transitions == o.transitions;
    }
};

struct LtsError : std::runtime_error {
    std::string code;
    LtsError(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

inline constexpr std::uint32_t kDefaultMaxStates = 1'000'000;

/// BFS exploration; states numbered in discovery order. Frontier expansion
/// runs the successor computation in parallel when OpenMP is available; the
/// result is identical to explore_serial.
Lts explore(const PedalModel& model, Engine engine,
            std::uint32_t max_states = kDefaultMaxStates);

/// Single-threaded reference explorer, kept as the behavioral baseline for
/// tests and benchmarks.
Lts explore_serial(const PedalModel& model, Engine engine,
                   std::uint32_t max_states = kDefaultMaxStates);

/// Aldebaran interchange. Header `des (0,<#trans>,<#states>)`, one
/// `(<src>,"<label>",<dst>)` line per transition; byte-stable.
std::string export_aut(const Lts& l);

/// Throws LtsError{"AUT_PARSE_ERROR"} with a line number on malformed input.
Lts import_aut(const std::string& text);

/// GraphViz rendering; initial state double-circled, tau edges dashed.
std::string export_dot(const Lts& l);

/// States with out-degree 0. Throws LtsError{"REQUIRES_COMPLETE_LTS"} when
/// the exploration was truncated.
std::vector<std::uint32_t> deadlocks(const Lts& l);

} // namespace pedal
