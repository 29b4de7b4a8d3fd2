#pragma once

// Shared fixtures: the running-example model, the counter LTS, random
// generators, and naive greatest-fixpoint bisimulation oracles that the
// partition-refinement implementation is checked against.

#include <cassert>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pedal/lts.hpp"
#include "pedal/parser.hpp"
#include "pedal/semantics.hpp"

namespace fixtures {

inline const char* kFrFluoSource = R"(
InActions FRFluoOn, FRFluoOff, StartCond, ResetStartCond
BoolVars FRFluoReq, FRFluoOK
PlaneVars FluoPlane

Init
  FRFluoReq := false;
  FRFluoOK := true;
  FluoPlane := None;

Rule FRFluoOn:
  guard FRFluoReq == false
  do
    FRFluoReq := true;
    FluoPlane := FR;
    if FRFluoOK then
      OutputType := Fluo;
      OutputPlane := FR
    fi
  end

Rule FRFluoOff:
  guard FRFluoReq == true
  do
    FRFluoReq := false;
    FluoPlane := None;
    OutputType := Standby;
    OutputPlane := None
  end

Rule StartCond:
  guard FRFluoOK == false
  do
    FRFluoOK := true;
    if FRFluoReq then
      OutputType := Fluo;
      OutputPlane := FluoPlane
    fi
  end

Rule ResetStartCond:
  guard FRFluoOK == true
  do
    FRFluoOK := false;
    OutputType := Standby;
    OutputPlane := None
  end
)";

inline pedal::PedalModel frfluo() {
    pedal::ParseResult r = pedal::parse(kFrFluoSource);
    assert(r.ok());
    return *r.model;
}

inline const char* kMinimalSource =
    "InActions A\nBoolVars v\nInit\n  v := false;\n"
    "Rule A:\n  guard v == false\n  do\n    v := true\n  end\n";

/// One rule that disables itself forever: deadlocks after one input/output.
inline pedal::PedalModel one_shot() {
    pedal::ParseResult r = pedal::parse(kMinimalSource);
    assert(r.ok());
    return *r.model;
}

/// The modulo-3 counter: count(0) count(1) count(2) reset, a 4-state cycle.
inline pedal::Lts counter() {
    pedal::Lts l;
    l.n_states = 4;
    auto in = [](const char* s) { return pedal::Label::make_input(s); };
    l.transitions = {
        {0, in("count(0)"), 1},
        {1, in("count(1)"), 2},
        {2, in("count(2)"), 3},
        {3, in("reset"), 0},
    };
    return l;
}

/// Counter with the initial state unfolded once: 5 states, same behavior.
inline pedal::Lts counter_unfolded() {
    pedal::Lts l;
    l.n_states = 5;
    auto in = [](const char* s) { return pedal::Label::make_input(s); };
    l.transitions = {
        {0, in("count(0)"), 1},
        {1, in("count(1)"), 2},
        {2, in("count(2)"), 3},
        {3, in("reset"), 4},
        {4, in("count(0)"), 1},
    };
    return l;
}

// ---------------------------------------------------------------------------
// Naive greatest-fixpoint oracles (independent of the refinement code path)
// ---------------------------------------------------------------------------

struct OracleGraph {
    std::uint32_t n = 0;
    std::vector<std::vector<std::pair<int, std::uint32_t>>> out;
    std::vector<pedal::Label> labels;
    int tau_id = -1;
};

inline OracleGraph oracle_graph(const pedal::Lts& a, const pedal::Lts& b) {
    OracleGraph g;
    g.n = a.n_states + b.n_states;
    g.out.resize(g.n);
    auto intern = [&](const pedal::Label& l) {
        for (std::size_t i = 0; i < g.labels.size(); ++i)
            if (g.labels[i] == l) return static_cast<int>(i);
        g.labels.push_back(l);
        if (l.kind == pedal::Label::Kind::Tau)
            g.tau_id = static_cast<int>(g.labels.size() - 1);
        return static_cast<int>(g.labels.size() - 1);
    };
    for (const auto& t : a.transitions)
        g.out[t.src].emplace_back(intern(t.label), t.dst);
    for (const auto& t : b.transitions)
        g.out[a.n_states + t.src].emplace_back(intern(t.label), a.n_states + t.dst);
    return g;
}

/// Strong bisimilarity of all state pairs by fixpoint iteration.
inline std::vector<std::vector<bool>> strong_gfp(const OracleGraph& g) {
    std::vector<std::vector<bool>> rel(g.n, std::vector<bool>(g.n, true));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t s = 0; s < g.n; ++s) {
            for (std::uint32_t t = 0; t < g.n; ++t) {
                if (!rel[s][t]) continue;
                auto simulates = [&](std::uint32_t x, std::uint32_t y) {
                    for (auto [a, x2] : g.out[x]) {
                        bool matched = false;
                        for (auto [b, y2] : g.out[y])
                            if (a == b && rel[x2][y2]) {
                                matched = true;
                                break;
                            }
                        if (!matched) return false;
                    }
                    return true;
                };
                if (!simulates(s, t) || !simulates(t, s)) {
                    rel[s][t] = false;
                    changed = true;
                }
            }
        }
    }
    return rel;
}

/// Branching bisimilarity by fixpoint iteration over the coinductive
/// transfer condition with tau* stuttering.
inline std::vector<std::vector<bool>> branching_gfp(const OracleGraph& g) {
    // tau-reachability closure
    std::vector<std::vector<bool>> reach(g.n, std::vector<bool>(g.n, false));
    for (std::uint32_t s = 0; s < g.n; ++s) reach[s][s] = true;
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::uint32_t s = 0; s < g.n; ++s)
            for (std::uint32_t u = 0; u < g.n; ++u) {
                if (!reach[s][u]) continue;
                for (auto [a, v] : g.out[u])
                    if (a == g.tau_id && !reach[s][v]) {
                        reach[s][v] = true;
                        grew = true;
                    }
            }
    }

    std::vector<std::vector<bool>> rel(g.n, std::vector<bool>(g.n, true));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t s = 0; s < g.n; ++s) {
            for (std::uint32_t t = 0; t < g.n; ++t) {
                if (!rel[s][t]) continue;
                auto transfers = [&](std::uint32_t x, std::uint32_t y) {
                    for (auto [a, x2] : g.out[x]) {
                        if (a == g.tau_id && rel[x2][y]) continue; // inert step
                        bool matched = false;
                        for (std::uint32_t y1 = 0; y1 < g.n && !matched; ++y1) {
                            if (!reach[y][y1] || !rel[x][y1]) continue;
                            for (auto [b, y2] : g.out[y1])
                                if (a == b && rel[x2][y2]) {
                                    matched = true;
                                    break;
                                }
                        }
                        if (!matched) return false;
                    }
                    return true;
                };
                if (!transfers(s, t) || !transfers(t, s)) {
                    rel[s][t] = false;
                    changed = true;
                }
            }
        }
    }
    return rel;
}

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

inline pedal::Lts random_lts(std::mt19937_64& rng, std::uint32_t max_states = 8) {
    pedal::Lts l;
    l.n_states = 1 + static_cast<std::uint32_t>(rng() % max_states);
    std::vector<pedal::Label> alphabet = {
        pedal::Label::make_input("a"),
        pedal::Label::make_input("b"),
        pedal::Label::tau(),
        pedal::Label::make_output(pedal::XRay::Fluo, pedal::Plane::FR),
    };
    std::set<std::tuple<std::uint32_t, std::string, std::uint32_t>> seen;
    for (std::uint32_t s = 0; s < l.n_states; ++s) {
        std::uint32_t degree = rng() % 4;
        for (std::uint32_t k = 0; k < degree; ++k) {
            const pedal::Label& lab = alphabet[rng() % alphabet.size()];
            std::uint32_t dst = static_cast<std::uint32_t>(rng() % l.n_states);
            if (seen.emplace(s, lab.text(), dst).second)
                l.transitions.push_back({s, lab, dst});
        }
    }
    return l;
}

/// A behaviorally equivalent variant: states duplicated and renumbered.
inline pedal::Lts duplicate_states(const pedal::Lts& l, std::mt19937_64& rng) {
    // Each state s gets a twin s + n with the same outgoing behavior; incoming
    // edges are redirected to either copy at random.
    pedal::Lts out;
    out.n_states = l.n_states * 2;
    out.initial = l.initial;
    std::set<std::tuple<std::uint32_t, std::string, std::uint32_t>> seen;
    for (const auto& t : l.transitions) {
        for (std::uint32_t copy = 0; copy < 2; ++copy) {
            std::uint32_t src = t.src + copy * l.n_states;
            std::uint32_t dst = t.dst + (rng() % 2) * l.n_states;
            if (seen.emplace(src, t.label.text(), dst).second)
                out.transitions.push_back({src, t.label, dst});
        }
    }
    return out;
}

inline pedal::GuardExpr random_expr(std::mt19937_64& rng, const pedal::PedalModel& m,
                                    int depth) {
    pedal::GuardExpr e;
    std::uint64_t pick = rng() % (depth > 0 ? 6 : 3);
    switch (pick) {
    case 0:
        e.kind = pedal::GuardExpr::Kind::Lit;
        e.lit = rng() % 2 == 0;
        break;
    case 1:
        if (!m.bool_vars.empty()) {
            e.kind = pedal::GuardExpr::Kind::VarRef;
            e.var = m.bool_vars[rng() % m.bool_vars.size()];
        } else {
            e.kind = pedal::GuardExpr::Kind::Lit;
            e.lit = true;
        }
        break;
    case 2: {
        e.kind = pedal::GuardExpr::Kind::Eq;
        std::uint64_t which = rng() % 3;
        if (which == 0 && !m.bool_vars.empty()) {
            e.lhs.kind = pedal::Term::Kind::BoolVar;
            e.lhs.name = m.bool_vars[rng() % m.bool_vars.size()];
            e.rhs.kind = pedal::Term::Kind::BoolLit;
            e.rhs.bval = rng() % 2 == 0;
        } else if (which == 1 && !m.plane_vars.empty()) {
            e.lhs.kind = pedal::Term::Kind::PlaneVar;
            e.lhs.name = m.plane_vars[rng() % m.plane_vars.size()];
            e.rhs.kind = pedal::Term::Kind::PlaneLit;
            e.rhs.pval = static_cast<pedal::Plane>(rng() % 4);
        } else {
            e.lhs.kind = pedal::Term::Kind::OutType;
            e.rhs.kind = pedal::Term::Kind::XRayLit;
            e.rhs.xval = static_cast<pedal::XRay>(rng() % 4);
        }
        break;
    }
    case 3:
        e.kind = pedal::GuardExpr::Kind::Not;
        e.kids.push_back(random_expr(rng, m, depth - 1));
        break;
    default:
        e.kind = pick == 4 ? pedal::GuardExpr::Kind::And : pedal::GuardExpr::Kind::Or;
        e.kids.push_back(random_expr(rng, m, depth - 1));
        e.kids.push_back(random_expr(rng, m, depth - 1));
        break;
    }
    return e;
}

inline pedal::Statement random_assign(std::mt19937_64& rng, const pedal::PedalModel& m) {
    pedal::Statement st;
    st.kind = pedal::Statement::Kind::Assign;
    std::uint64_t which = rng() % 4;
    if (which == 0 && !m.bool_vars.empty()) {
        st.target.kind = pedal::Term::Kind::BoolVar;
        st.target.name = m.bool_vars[rng() % m.bool_vars.size()];
        if (rng() % 3 == 0 && !m.bool_vars.empty()) {
            st.value.kind = pedal::Term::Kind::BoolVar;
            st.value.name = m.bool_vars[rng() % m.bool_vars.size()];
        } else {
            st.value.kind = pedal::Term::Kind::BoolLit;
            st.value.bval = rng() % 2 == 0;
        }
    } else if (which == 1 && !m.plane_vars.empty()) {
        st.target.kind = pedal::Term::Kind::PlaneVar;
        st.target.name = m.plane_vars[rng() % m.plane_vars.size()];
        st.value.kind = pedal::Term::Kind::PlaneLit;
        st.value.pval = static_cast<pedal::Plane>(rng() % 4);
    } else if (which == 2) {
        st.target.kind = pedal::Term::Kind::OutType;
        st.value.kind = pedal::Term::Kind::XRayLit;
        st.value.xval = static_cast<pedal::XRay>(rng() % 4);
    } else {
        st.target.kind = pedal::Term::Kind::OutPlane;
        if (rng() % 3 == 0 && !m.plane_vars.empty()) {
            st.value.kind = pedal::Term::Kind::PlaneVar;
            st.value.name = m.plane_vars[rng() % m.plane_vars.size()];
        } else {
            st.value.kind = pedal::Term::Kind::PlaneLit;
            st.value.pval = static_cast<pedal::Plane>(rng() % 4);
        }
    }
    return st;
}

inline std::vector<pedal::Statement> random_body(std::mt19937_64& rng,
                                                 const pedal::PedalModel& m,
                                                 std::uint32_t max_len = 3) {
    std::vector<pedal::Statement> body;
    std::uint32_t len = rng() % (max_len + 1);
    for (std::uint32_t i = 0; i < len; ++i) {
        if (rng() % 4 == 0) {
            pedal::Statement st;
            st.kind = pedal::Statement::Kind::Conditional;
            st.cond = random_expr(rng, m, 1);
            std::uint32_t tn = 1 + rng() % 2, en = rng() % 2;
            for (std::uint32_t k = 0; k < tn; ++k)
                st.then_body.push_back(random_assign(rng, m));
            for (std::uint32_t k = 0; k < en; ++k)
                st.else_body.push_back(random_assign(rng, m));
            body.push_back(std::move(st));
        } else {
            body.push_back(random_assign(rng, m));
        }
    }
    return body;
}

/// Random valid model with 3-8 rules over a few booleans and planes.
inline pedal::PedalModel random_model(std::mt19937_64& rng) {
    pedal::PedalModel m;
    std::uint32_t n_actions = 3 + rng() % 6;
    std::uint32_t n_bools = 1 + rng() % 3;
    std::uint32_t n_planes = rng() % 3;
    for (std::uint32_t i = 0; i < n_bools; ++i)
        m.bool_vars.push_back("b" + std::to_string(i));
    for (std::uint32_t i = 0; i < n_planes; ++i)
        m.plane_vars.push_back("p" + std::to_string(i));
    for (const auto& v : m.bool_vars)
        m.init[v] = pedal::InitValue{pedal::Domain::Bool, rng() % 2 == 0, {}};
    for (const auto& v : m.plane_vars)
        m.init[v] = pedal::InitValue{pedal::Domain::Plane, false,
                                     static_cast<pedal::Plane>(rng() % 4)};
    for (std::uint32_t i = 0; i < n_actions; ++i) {
        pedal::Rule r;
        r.action = "Act" + std::to_string(i);
        r.guard = random_expr(rng, m, 2);
        r.body = random_body(rng, m);
        m.input_actions.push_back(r.action);
        m.rules.push_back(std::move(r));
    }
    return m;
}

inline pedal::State random_state(std::mt19937_64& rng, const pedal::PedalModel& m) {
    pedal::State s;
    for (std::size_t i = 0; i < m.bool_vars.size(); ++i)
        s.bvals.push_back(rng() % 2);
    for (std::size_t i = 0; i < m.plane_vars.size(); ++i)
        s.pvals.push_back(static_cast<pedal::Plane>(rng() % 4));
    s.out_type = static_cast<pedal::XRay>(rng() % 4);
    s.out_plane = static_cast<pedal::Plane>(rng() % 4);
    return s;
}

} // namespace fixtures
