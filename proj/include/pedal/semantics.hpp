#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pedal/ast.hpp"

namespace pedal {

/// Total valuation of the declared variables plus the two output registers.
/// Variables are stored positionally in declaration order.
struct State {
    std::vector<std::uint8_t> bvals;
    std::vector<Plane> pvals;
    XRay out_type = XRay::Standby;
    Plane out_plane = Plane::None;

    bool operator==(const State&) const = default;
};

/// Transition label. Delta only occurs in suspension views (MBT); Tau only
/// in the tau engine's output.
struct Label {
    enum class Kind : std::uint8_t { Input, Output, Tau, Delta };

    Kind kind = Kind::Tau;
    std::string input; // Input
    XRay xr = XRay::Standby;
    Plane pl = Plane::None; // Output

    static Label make_input(std::string name) {
        Label l;
        l.kind = Kind::Input;
        l.input = std::move(name);
        return l;
    }
    static Label make_output(XRay x, Plane p) {
        Label l;
        l.kind = Kind::Output;
        l.xr = x;
        l.pl = p;
        return l;
    }
    static Label tau() { return Label{}; }
    static Label delta() {
        Label l;
        l.kind = Kind::Delta;
        return l;
    }

    bool operator==(const Label&) const = default;
    bool operator<(const Label& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (kind == Kind::Input) return input < o.input;
        if (kind == Kind::Output)
            return xr != o.xr ? xr < o.xr : pl < o.pl;
        return false;
    }

    /// Canonical text used everywhere labels cross a boundary (.aut files,
    /// protocol traces, reports): `name`, `output(Fluo,FR)`, `tau`, `delta`.
    std::string text() const;
    static std::optional<Label> from_text(std::string_view s);
};

/// A point of the alternating semantics: the valuation plus the phase of the
/// input/output protocol. Evaluating only occurs in the tau engine.
struct SemState {
    enum class Phase : std::uint8_t { AwaitingInput, AwaitingOutput, Evaluating };

    Phase phase = Phase::AwaitingInput;
    State state;

    bool operator==(const SemState&) const = default;
};

enum class Engine : std::uint8_t { Direct, Tau };

/// Positional name lookup built once per model; all semantic functions take
/// it instead of re-searching declaration lists.
struct ModelIndex {
    const PedalModel* model = nullptr;
    std::unordered_map<std::string, std::uint32_t> bool_index;
    std::unordered_map<std::string, std::uint32_t> plane_index;
    std::unordered_map<std::string, std::uint32_t> rule_by_action;

    explicit ModelIndex(const PedalModel& m);
};

/// Initial valuation: Init values, output registers Standby/None.
State initial_state(const ModelIndex& mi);

bool eval_guard(const ModelIndex& mi, const GuardExpr& g, const State& s);

/// Left-to-right fold of a do clause; every assignment takes effect
/// immediately, conditions read the current intermediate state.
State eval_statements(const ModelIndex& mi, const std::vector<Statement>& body,
                      const State& s);

/// Alternating semantics: an enabled input atomically evaluates its do clause;
/// every AwaitingOutput state has exactly one Output successor.
std::vector<std::pair<Label, SemState>> successors_direct(const ModelIndex& mi,
                                                          const SemState& q);

/// Simulation-style variant: the do clause evaluation is a visible internal
/// step, so an accepted input leads to Evaluating and one tau to AwaitingOutput.
std::vector<std::pair<Label, SemState>> successors_tau(const ModelIndex& mi,
                                                       const SemState& q);

inline std::vector<std::pair<Label, SemState>>
successors(const ModelIndex& mi, Engine e, const SemState& q) {
    return e == Engine::Direct ? successors_direct(mi, q) : successors_tau(mi, q);
}

std::size_t hash_value(const State& s);
std::size_t hash_value(const SemState& q);

struct SemStateHash {
    std::size_t operator()(const SemState& q) const { return hash_value(q); }
};

/// Human-readable dump of a valuation, for the REPL and counterexamples.
std::string describe_state(const ModelIndex& mi, const State& s);

} // namespace pedal
