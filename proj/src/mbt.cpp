#include "pedal/mbt.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace pedal {

namespace {

bool semstate_less(const SemState& a, const SemState& b) {
    if (a.phase != b.phase) return a.phase < b.phase;
    if (a.state.bvals != b.state.bvals) return a.state.bvals < b.state.bvals;
    if (a.state.pvals != b.state.pvals) return a.state.pvals < b.state.pvals;
    if (a.state.out_type != b.state.out_type) return a.state.out_type < b.state.out_type;
    return a.state.out_plane < b.state.out_plane;
}

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

} // namespace

StateSet canonical(StateSet s) {
    std::sort(s.begin(), s.end(), semstate_less);
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

StateSet tau_closure(const ModelIndex& mi, Engine engine, StateSet s) {
    StateSet result = canonical(std::move(s));
    std::vector<SemState> work(result.begin(), result.end());
    while (!work.empty()) {
        SemState q = std::move(work.back());
        work.pop_back();
        for (auto& [label, succ] : successors(mi, engine, q)) {
            if (label.kind != Label::Kind::Tau) continue;
            auto it = std::lower_bound(result.begin(), result.end(), succ, semstate_less);
            if (it != result.end() && *it == succ) continue;
            result.insert(it, succ);
            work.push_back(succ);
        }
    }
    return result;
}

StateSet initial_stateset(const ModelIndex& mi, Engine engine) {
    SemState init;
    init.state = initial_state(mi);
    return tau_closure(mi, engine, {init});
}

bool quiescent(const ModelIndex& mi, Engine engine, const SemState& q) {
    for (auto& [label, succ] : successors(mi, engine, q))
        if (label.kind == Label::Kind::Output || label.kind == Label::Kind::Tau)
            return false;
    return true;
}

StateSet after(const ModelIndex& mi, Engine engine, const StateSet& s, const Label& l) {
    StateSet next;
    if (l.kind == Label::Kind::Delta) {
        for (const SemState& q : s)
            if (quiescent(mi, engine, q)) next.push_back(q);
        return canonical(std::move(next));
    }
    for (const SemState& q : s)
        for (auto& [label, succ] : successors(mi, engine, q))
            if (label == l) next.push_back(succ);
    return tau_closure(mi, engine, std::move(next));
}

std::vector<Label> out_set(const ModelIndex& mi, Engine engine, const StateSet& s) {
    std::vector<Label> out;
    bool any_quiescent = false;
    for (const SemState& q : s) {
        bool saw_output_or_tau = false;
        for (auto& [label, succ] : successors(mi, engine, q)) {
            if (label.kind == Label::Kind::Output) {
                out.push_back(label);
                saw_output_or_tau = true;
            } else if (label.kind == Label::Kind::Tau) {
                saw_output_or_tau = true;
            }
        }
        if (!saw_output_or_tau) any_quiescent = true;
    }
    if (any_quiescent) out.push_back(Label::delta());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Label> enabled_inputs(const ModelIndex& mi, Engine engine, const StateSet& s) {
    std::vector<Label> out;
    for (const SemState& q : s)
        for (auto& [label, succ] : successors(mi, engine, q))
            if (label.kind == Label::Kind::Input) out.push_back(label);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Offline derivation
// ---------------------------------------------------------------------------

namespace {

std::unique_ptr<TestCase> derive(const ModelIndex& mi, Engine engine, const StateSet& s,
                                 std::uint32_t depth, double stim_prob,
                                 std::mt19937_64& rng) {
    if (depth == 0 || s.empty()) return TestCase::pass_leaf();

    std::vector<Label> inputs = enabled_inputs(mi, engine, s);
    bool stimulate = !inputs.empty() && unit_double(rng) < stim_prob;
    auto tc = std::make_unique<TestCase>();
    if (stimulate) {
        tc->kind = TestCase::Kind::Stimulus;
        tc->stimulus = inputs[pick_index(rng, inputs.size())];
        tc->children.push_back(derive(mi, engine, after(mi, engine, s, tc->stimulus),
                                      depth - 1, stim_prob, rng));
    } else {
        tc->kind = TestCase::Kind::Observe;
        tc->expected = out_set(mi, engine, s);
        for (const Label& l : tc->expected)
            tc->children.push_back(
                derive(mi, engine, after(mi, engine, s, l), depth - 1, stim_prob, rng));
    }
    return tc;
}

void print_tc(std::ostringstream& os, const TestCase& tc, int depth) {
    auto ind = [&] {
        for (int i = 0; i < depth; ++i) os << "  ";
    };
    switch (tc.kind) {
    case TestCase::Kind::PassLeaf:
        ind();
        os << "pass\n";
        break;
    case TestCase::Kind::Stimulus:
        ind();
        os << "stimulate " << tc.stimulus.text() << "\n";
        print_tc(os, *tc.children[0], depth + 1);
        break;
    case TestCase::Kind::Observe:
        ind();
        os << "observe\n";
        for (std::size_t i = 0; i < tc.expected.size(); ++i) {
            ind();
            os << "  " << tc.expected[i].text() << " ->\n";
            print_tc(os, *tc.children[i], depth + 2);
        }
        break;
    }
}

} // namespace

std::string to_string(const TestCase& tc) {
    std::ostringstream os;
    print_tc(os, tc, 0);
    return os.str();
}

std::vector<std::unique_ptr<TestCase>> gen_tests(const PedalModel& model,
                                                 std::uint32_t depth,
                                                 std::uint32_t count,
                                                 std::uint64_t seed) {
    ModelIndex mi(model);
    std::mt19937_64 rng(seed);
    StateSet init = initial_stateset(mi, Engine::Direct);
    std::vector<std::unique_ptr<TestCase>> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i)
        out.push_back(derive(mi, Engine::Direct, init, depth, 0.6, rng));
    return out;
}

// ---------------------------------------------------------------------------
// Line adapter
// ---------------------------------------------------------------------------

bool LineAdapter::reset(std::string& error) {
    if (!transport_->write_line("RESET")) {
        error = "transport closed while sending RESET";
        return false;
    }
    std::string line;
    switch (transport_->read_line(line, ready_timeout_ms_)) {
    case Transport::ReadResult::Line:
        if (line == "READY") return true;
        error = "expected READY, got '" + line + "'";
        return false;
    case Transport::ReadResult::Timeout:
        error = "timeout waiting for READY";
        return false;
    default:
        error = "transport closed while waiting for READY";
        return false;
    }
}

bool LineAdapter::stimulate(const std::string& action, std::string& error) {
    if (!transport_->write_line("IN " + action)) {
        error = "transport closed while sending IN " + action;
        return false;
    }
    return true;
}

Observation LineAdapter::observe(int timeout_ms) {
    std::string line;
    switch (transport_->read_line(line, timeout_ms)) {
    case Transport::ReadResult::Timeout:
        return {Observation::Kind::Quiescent, {}, {}};
    case Transport::ReadResult::Closed:
        return {Observation::Kind::ProtocolError, {}, "connection closed"};
    case Transport::ReadResult::Line:
        break;
    }
    std::istringstream is(line);
    std::string kw, xs, ps, extra;
    if (is >> kw && kw == "OUT" && is >> xs >> ps && !(is >> extra)) {
        auto x = xray_from_string(xs);
        auto p = plane_from_string(ps);
        if (x && p) return {Observation::Kind::Output, Label::make_output(*x, *p), {}};
    }
    return {Observation::Kind::ProtocolError, {}, "unparsable line '" + line + "'"};
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace {

std::string join_labels(const std::vector<Label>& ls) {
    std::string s;
    for (const Label& l : ls) {
        if (!s.empty()) s += ' ';
        s += l.text();
    }
    return s;
}

Verdict adapter_error(std::vector<Label> trace, const std::string& detail) {
    Verdict v;
    v.kind = Verdict::Kind::AdapterError;
    v.evidence = std::move(trace);
    v.detail = detail;
    return v;
}

Verdict fail_verdict(std::vector<Label> trace, const Label& offending,
                     std::vector<Label> allowed) {
    Verdict v;
    v.kind = Verdict::Kind::Fail;
    v.evidence = std::move(trace);
    v.offending = offending;
    v.allowed = std::move(allowed);
    v.detail = "observed " + offending.text() + " but specification allows {" +
               join_labels(v.allowed) + "} after trace [" + join_labels(v.evidence) + "]";
    return v;
}

} // namespace

Verdict run_online(const PedalModel& model, AdapterClient& adapter,
                   const MbtOptions& opts) {
    ModelIndex mi(model);
    std::mt19937_64 rng(opts.seed);
    std::string error;
    if (!adapter.reset(error)) return adapter_error({}, "reset failed: " + error);

    StateSet s = initial_stateset(mi, opts.engine);
    std::vector<Label> trace;

    for (std::uint32_t step = 0; step < opts.max_steps; ++step) {
        std::vector<Label> inputs = enabled_inputs(mi, opts.engine, s);
        bool do_stimulate =
            !inputs.empty() && unit_double(rng) < opts.stimulate_probability;
        if (do_stimulate) {
            const Label& in = inputs[pick_index(rng, inputs.size())];
            if (!adapter.stimulate(in.input, error))
                return adapter_error(std::move(trace), "stimulus failed: " + error);
            s = after(mi, opts.engine, s, in);
            trace.push_back(in);
        } else {
            Observation obs = adapter.observe(opts.observe_timeout_ms);
            if (obs.kind == Observation::Kind::ProtocolError)
                return adapter_error(std::move(trace), obs.detail);
            Label observed = obs.kind == Observation::Kind::Output ? obs.output
                                                                   : Label::delta();
            std::vector<Label> allowed = out_set(mi, opts.engine, s);
            if (!std::binary_search(allowed.begin(), allowed.end(), observed))
                return fail_verdict(std::move(trace), observed, std::move(allowed));
            s = after(mi, opts.engine, s, observed);
            trace.push_back(observed);
        }
    }
    Verdict v;
    v.evidence = std::move(trace);
    v.detail = "no discrepancy in " + std::to_string(opts.max_steps) + " steps";
    return v;
}

namespace {

Verdict walk_testcase(const ModelIndex& mi, const TestCase& tc, AdapterClient& adapter,
                      const MbtOptions& opts, StateSet s, std::vector<Label> trace) {
    std::string error;
    switch (tc.kind) {
    case TestCase::Kind::PassLeaf: {
        Verdict v;
        v.evidence = std::move(trace);
        v.detail = "test case exhausted";
        return v;
    }
    case TestCase::Kind::Stimulus:
        if (!adapter.stimulate(tc.stimulus.input, error))
            return adapter_error(std::move(trace), "stimulus failed: " + error);
        trace.push_back(tc.stimulus);
        return walk_testcase(mi, *tc.children[0], adapter, opts,
                             after(mi, opts.engine, s, tc.stimulus), std::move(trace));
    case TestCase::Kind::Observe: {
        Observation obs = adapter.observe(opts.observe_timeout_ms);
        if (obs.kind == Observation::Kind::ProtocolError)
            return adapter_error(std::move(trace), obs.detail);
        Label observed =
            obs.kind == Observation::Kind::Output ? obs.output : Label::delta();
        for (std::size_t i = 0; i < tc.expected.size(); ++i) {
            if (tc.expected[i] == observed) {
                trace.push_back(observed);
                return walk_testcase(mi, *tc.children[i], adapter, opts,
                                     after(mi, opts.engine, s, observed),
                                     std::move(trace));
            }
        }
        return fail_verdict(std::move(trace), observed, tc.expected);
    }
    }
    return {};
}

} // namespace

Verdict run_testcase(const PedalModel& model, const TestCase& tc,
                     AdapterClient& adapter, const MbtOptions& opts) {
    if (tc.kind == TestCase::Kind::PassLeaf) {
        Verdict v;
        v.detail = "empty test case";
        return v;
    }
    ModelIndex mi(model);
    std::string error;
    if (!adapter.reset(error)) return adapter_error({}, "reset failed: " + error);
    return walk_testcase(mi, tc, adapter, opts, initial_stateset(mi, opts.engine), {});
}

bool validate_fail_evidence(const PedalModel& model, Engine engine, const Verdict& v) {
    if (v.kind != Verdict::Kind::Fail) return false;
    ModelIndex mi(model);
    StateSet s = initial_stateset(mi, engine);
    for (const Label& l : v.evidence) {
        s = after(mi, engine, s, l);
        if (s.empty()) return false; // evidence prefix itself left the spec
    }
    std::vector<Label> allowed = out_set(mi, engine, s);
    return !std::binary_search(allowed.begin(), allowed.end(), v.offending);
}

} // namespace pedal
