#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pedal/mbt.hpp"

namespace pedal {

/// A fault injected into the rule table before the engine starts; a mutant is
/// an ordinary model afterwards.
struct Mutation {
    enum class Kind : std::uint8_t {
        NegateGuard,   // wrap one rule's guard in a negation
        DropStatement, // remove one top-level statement of a rule body
        SwapOutput,    // force the output registers at the end of a rule body
        StuckOutput,   // every rule ends by resetting the registers to Standby/None
    };

    Kind kind = Kind::NegateGuard;
    std::uint32_t rule = 0; // NegateGuard/DropStatement/SwapOutput
    std::uint32_t stmt = 0; // DropStatement
    XRay xr = XRay::Standby;
    Plane pl = Plane::None; // SwapOutput

    /// `negate:<rule>`, `drop:<rule>:<stmt>`, `swap:<rule>:<XRay>:<Plane>`,
    /// `stuck`; <rule> is an action name or a rule index.
    std::string spec_text(const PedalModel& m) const;
    static std::optional<Mutation> parse_spec(const std::string& spec,
                                              const PedalModel& m, std::string& error);
};

/// Rewritten model with the mutations applied. Throws std::out_of_range for
/// invalid rule/statement indices.
PedalModel apply_mutations(const PedalModel& model, const std::vector<Mutation>& muts);

/// One SUT session over a (possibly mutated) model: direct semantics,
/// input-enabled — an input whose guard is false is consumed silently.
class Session {
public:
    explicit Session(PedalModel model);

    void reset();
    /// nullopt: unknown action (protocol violation). The inner optional is
    /// empty when the input was ignored (guard false, stays quiescent).
    std::optional<std::optional<Label>> apply_input(const std::string& action);
    const State& current() const { return state_; }
    const PedalModel& model() const { return model_; }

private:
    PedalModel model_;
    ModelIndex mi_;
    State state_;
};

/// Adapter bound directly to an in-process Session; observation never waits.
class InProcessAdapter : public AdapterClient {
public:
    explicit InProcessAdapter(PedalModel model) : session_(std::move(model)) {}
    bool reset(std::string& error) override;
    bool stimulate(const std::string& action, std::string& error) override;
    Observation observe(int timeout_ms) override;

private:
    Session session_;
    std::optional<Label> pending_;
};

/// Serve the adapter protocol over a pair of file descriptors until EOF.
/// Returns 0 on clean shutdown, nonzero on a protocol violation.
int serve_fd(const PedalModel& model, int read_fd, int write_fd);

/// Listen on a TCP port, serve one connection, exit.
int serve_tcp(const PedalModel& model, int port, std::string& error);

/// Seeded enumeration of behavior-changing mutants: candidates are filtered
/// by a strong-bisimulation check against the original (state spaces capped
/// at `filter_cap`).
std::vector<Mutation> mutants(const PedalModel& model, std::uint32_t max,
                              std::uint64_t seed, std::uint32_t filter_cap = 10'000);

} // namespace pedal
