#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pedal/semantics.hpp"

namespace pedal {

/// Canonical state set: sorted by (phase, valuation hash, value), unique.
/// All suspension operators keep sets tau-closed.
using StateSet = std::vector<SemState>;

StateSet canonical(StateSet s);
StateSet tau_closure(const ModelIndex& mi, Engine engine, StateSet s);
StateSet initial_stateset(const ModelIndex& mi, Engine engine);

/// A state is quiescent iff it enables neither an output nor a tau step.
bool quiescent(const ModelIndex& mi, Engine engine, const SemState& q);

/// Tau-closed successor set; delta keeps exactly the quiescent members.
StateSet after(const ModelIndex& mi, Engine engine, const StateSet& s, const Label& l);

/// Outputs enabled in the set, plus delta iff some member is quiescent.
/// Sorted canonically.
std::vector<Label> out_set(const ModelIndex& mi, Engine engine, const StateSet& s);

/// Inputs whose rule guard holds in some member (deduplicated, sorted).
std::vector<Label> enabled_inputs(const ModelIndex& mi, Engine engine, const StateSet& s);

// ---------------------------------------------------------------------------
// Offline test cases
// ---------------------------------------------------------------------------

/// Finite test tree. An Observe node lists every allowed observation; any
/// observation outside the map is an implicit fail.
struct TestCase {
    enum class Kind : std::uint8_t { PassLeaf, Stimulus, Observe };

    Kind kind = Kind::PassLeaf;
    Label stimulus;                          // Stimulus
    std::vector<std::unique_ptr<TestCase>> children;
    std::vector<Label> expected;             // Observe: parallel to children

    static std::unique_ptr<TestCase> pass_leaf() { return std::make_unique<TestCase>(); }
};

std::string to_string(const TestCase& tc);

/// Deterministic in (model, depth, count, seed).
std::vector<std::unique_ptr<TestCase>> gen_tests(const PedalModel& model,
                                                 std::uint32_t depth,
                                                 std::uint32_t count,
                                                 std::uint64_t seed);

// ---------------------------------------------------------------------------
// Adapter protocol
// ---------------------------------------------------------------------------

/// One observation attempt on the system under test.
struct Observation {
    enum class Kind : std::uint8_t { Output, Quiescent, ProtocolError };

    Kind kind = Kind::Quiescent;
    Label output;       // Output
    std::string detail; // ProtocolError
};

/// Tester-side view of one SUT session.
class AdapterClient {
public:
    virtual ~AdapterClient() = default;
    /// RESET / READY exchange; false on protocol failure.
    virtual bool reset(std::string& error) = 0;
    virtual bool stimulate(const std::string& action, std::string& error) = 0;
    virtual Observation observe(int timeout_ms) = 0;
};

/// Line transport for the newline-delimited protocol.
class Transport {
public:
    virtual ~Transport() = default;
    enum class ReadResult : std::uint8_t { Line, Timeout, Closed };
    virtual bool write_line(const std::string& line) = 0;
    virtual ReadResult read_line(std::string& out, int timeout_ms) = 0;
};

/// Speaks `RESET`/`IN <action>` and expects `READY`/`OUT <XRay> <Plane>`.
class LineAdapter : public AdapterClient {
public:
    explicit LineAdapter(std::unique_ptr<Transport> t, int ready_timeout_ms = 2000)
        : transport_(std::move(t)), ready_timeout_ms_(ready_timeout_ms) {}
    bool reset(std::string& error) override;
    bool stimulate(const std::string& action, std::string& error) override;
    Observation observe(int timeout_ms) override;

private:
    std::unique_ptr<Transport> transport_;
    int ready_timeout_ms_;
};

/// Connect to a serving SUT over TCP. Null on connection failure.
std::unique_ptr<Transport> connect_tcp(const std::string& host, int port,
                                       std::string& error);

/// Spawn `sh -c cmd` and talk over its stdio. Null on spawn failure.
std::unique_ptr<Transport> spawn_process(const std::string& cmd, std::string& error);

/// Transport over existing file descriptors (sockets, pipes); owns them.
std::unique_ptr<Transport> fd_transport(int read_fd, int write_fd);

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct Verdict {
    enum class Kind : std::uint8_t { Pass, Fail, AdapterError };

    Kind kind = Kind::Pass;
    std::vector<Label> evidence; // executed trace up to the offending step
    Label offending;             // Fail: observation outside out_set
    std::vector<Label> allowed;  // Fail: out_set at the point of failure
    std::string detail;

    bool passed() const { return kind == Kind::Pass; }
};

struct MbtOptions {
    std::uint32_t max_steps = 500;
    std::uint64_t seed = 1;
    double stimulate_probability = 0.6;
    int observe_timeout_ms = 500;
    Engine engine = Engine::Direct;
};

/// On-the-fly ioco run: per step, randomly stimulate an enabled input or
/// observe; any observation outside out_set fails immediately.
Verdict run_online(const PedalModel& model, AdapterClient& adapter,
                   const MbtOptions& opts);

/// Execute one offline test tree against the adapter.
Verdict run_testcase(const PedalModel& model, const TestCase& tc,
                     AdapterClient& adapter, const MbtOptions& opts);

/// Replays a Fail verdict's evidence through after/out_set and confirms the
/// offending observation really is disallowed by the model.
bool validate_fail_evidence(const PedalModel& model, Engine engine, const Verdict& v);

} // namespace pedal
