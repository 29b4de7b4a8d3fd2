#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "pedal/verify.hpp"

using namespace pedal;

namespace {

const char* kFrFluoProps =
    "# safety properties\n"
    "deadlock-free\n"
    "no-output-without FRFluoReq == true\n"
    "invariant OutputType == Standby or FRFluoOK == true\n";

/// Replay a counterexample trace through the LTS and return the final state.
std::uint32_t replay(const Lts& l, const std::vector<Label>& trace) {
    std::uint32_t cur = l.initial;
    for (const auto& lab : trace) {
        bool moved = false;
        for (const auto& t : l.transitions)
            if (t.src == cur && t.label == lab) {
                cur = t.dst;
                moved = true;
                break;
            }
        REQUIRE(moved);
    }
    return cur;
}

/// Exhaustive oracle: shortest BFS distance to a state failing `pred`,
/// or -1 when the property holds everywhere.
template <typename Pred>
int oracle_violation_distance(const Lts& l, Pred pred) {
    std::vector<std::vector<std::uint32_t>> out(l.n_states);
    for (const auto& t : l.transitions) out[t.src].push_back(t.dst);
    std::vector<int> dist(l.n_states, -1);
    std::vector<std::uint32_t> queue = {l.initial};
    dist[l.initial] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        std::uint32_t s = queue[i];
        if (!pred(s)) return dist[s];
        for (std::uint32_t d : out[s])
            if (dist[d] < 0) {
                dist[d] = dist[s] + 1;
                queue.push_back(d);
            }
    }
    return -1;
}

} // namespace

TEST_CASE("all frfluo properties hold") {
    PedalModel m = fixtures::frfluo();
    Lts l = explore(m, Engine::Direct);
    PropertyParseResult props = parse_properties(kFrFluoProps, m);
    REQUIRE(props.diagnostics.empty());
    REQUIRE(props.properties.size() == 3);
    for (const auto& p : props.properties) {
        CheckResult r = check(m, l, p);
        CHECK(r.holds);
        CHECK(r.trace.empty());
    }
}

TEST_CASE("a violated no-output-without yields the shortest counterexample") {
    const char* src =
        "InActions Prep, Fire\n"
        "BoolVars x, req\n"
        "Init\n  x := false;\n  req := false;\n"
        "Rule Prep:\n  guard x == false\n  do\n    x := true\n  end\n"
        "Rule Fire:\n  guard x == true\n  do\n    OutputType := Fluo;\n"
        "    OutputPlane := FR\n  end\n";
    ParseResult pr = parse(src);
    REQUIRE(pr.ok());
    PedalModel m = *pr.model;
    Lts l = explore(m, Engine::Direct);

    PropertyParseResult props = parse_properties("no-output-without req == true\n", m);
    REQUIRE(props.diagnostics.empty());
    CheckResult r = check(m, l, props.properties[0]);
    CHECK(!r.holds);
    // shortest path: Prep, output(Standby,None), Fire reaches the
    // AwaitingOutput state whose registers already carry the Fluo request
    REQUIRE(r.trace.size() == 3);
    CHECK(r.trace[0] == Label::make_input("Prep"));
    CHECK(r.trace[1] == Label::make_output(XRay::Standby, Plane::None));
    CHECK(r.trace[2] == Label::make_input("Fire"));
    std::uint32_t end = replay(l, r.trace);
    CHECK(end == r.violating_state);
    CHECK(l.state_map[end].state.out_type == XRay::Fluo);
}

TEST_CASE("deadlock-free fails on the one-shot model with a replayable trace") {
    PedalModel m = fixtures::one_shot();
    Lts l = explore(m, Engine::Direct);
    PropertyParseResult props = parse_properties("deadlock-free\n", m);
    CheckResult r = check(m, l, props.properties[0]);
    CHECK(!r.holds);
    CHECK(r.trace.size() == 2); // A, output(Standby,None)
    std::uint32_t end = replay(l, r.trace);
    CHECK(end == r.violating_state);
}

TEST_CASE("invariants are checked at stable states only by default") {
    // OutputType == Standby is violated only in the transient AwaitingOutput
    // state of the one-shot... use frfluo: stable states can hold Fluo, so use
    // a model whose outputs reset before the next stable state.
    const char* src =
        "InActions Ping\n"
        "BoolVars v\n"
        "Init\n  v := false;\n"
        "Rule Ping:\n  guard true\n  do\n"
        "    OutputType := Fluo;\n    OutputPlane := FR;\n"
        "    OutputType := Standby;\n    OutputPlane := None\n  end\n";
    ParseResult pr = parse(src);
    REQUIRE(pr.ok());
    PedalModel m = *pr.model;
    Lts l = explore(m, Engine::Direct);

    PropertyParseResult props = parse_properties("invariant OutputType == Standby\n", m);
    REQUIRE(props.diagnostics.empty());
    PropertySpec p = props.properties[0];
    CHECK(check(m, l, p).holds);

    p.include_transient = true;
    CHECK(check(m, l, p).holds); // registers end at Standby before the output

    // but an invariant on v is transient-independent and can still fail
    PropertySpec q = parse_properties("invariant v == true\n", m).properties[0];
    CheckResult r = check(m, l, q);
    CHECK(!r.holds);
    CHECK(r.trace.empty()); // violated at the initial state itself
}

TEST_CASE("check refuses truncated or imported inputs") {
    PedalModel m = fixtures::frfluo();
    PropertySpec p; // deadlock-free
    try {
        check(m, explore(m, Engine::Direct, 2), p);
        FAIL("expected LtsError");
    } catch (const LtsError& e) {
        CHECK(e.code == "REQUIRES_COMPLETE_LTS");
    }
    try {
        Lts imported = import_aut(export_aut(explore(m, Engine::Direct)));
        PropertySpec inv = parse_properties("invariant FRFluoOK == true\n", m).properties[0];
        check(m, imported, inv);
        FAIL("expected LtsError");
    } catch (const LtsError& e) {
        CHECK(e.code == "REQUIRES_STATE_MAP");
    }
}

TEST_CASE("property parse errors are reported with positions") {
    PedalModel m = fixtures::frfluo();
    PropertyParseResult r = parse_properties("invariant NoSuchVar == true\n", m);
    CHECK(!r.diagnostics.empty());
    r = parse_properties("frobnicate\n", m);
    CHECK(!r.diagnostics.empty());
}

TEST_CASE("random invariants agree with exhaustive enumeration") {
    std::mt19937_64 rng(31415);
    for (int i = 0; i < 60; ++i) {
        PedalModel m = fixtures::random_model(rng);
        Lts l = explore(m, Engine::Direct, 20000);
        if (!l.complete) continue;
        ModelIndex mi(m);
        GuardExpr e = fixtures::random_expr(rng, m, 2);

        PropertySpec p;
        p.kind = PropertySpec::Kind::Invariant;
        p.expr = e;
        CheckResult r = check(m, l, p);

        int dist = oracle_violation_distance(l, [&](std::uint32_t s) {
            if (l.state_map[s].phase != SemState::Phase::AwaitingInput) return true;
            return eval_guard(mi, e, l.state_map[s].state);
        });
        CHECK(r.holds == (dist < 0));
        if (!r.holds) {
            CHECK(static_cast<int>(r.trace.size()) == dist);
            std::uint32_t end = replay(l, r.trace);
            CHECK(end == r.violating_state);
            CHECK(!eval_guard(mi, e, l.state_map[end].state));
        }
    }
}
