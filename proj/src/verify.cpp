#include "pedal/verify.hpp"

#include <queue>
#include <sstream>

#include "pedal/parser.hpp"

namespace pedal {

namespace {

bool violates(const ModelIndex& mi, const PropertySpec& p, const SemState& q,
              bool is_deadlocked) {
    switch (p.kind) {
    case PropertySpec::Kind::DeadlockFree:
        return is_deadlocked;
    case PropertySpec::Kind::Invariant:
        if (!p.include_transient && q.phase != SemState::Phase::AwaitingInput)
            return false;
        return !eval_guard(mi, p.expr, q.state);
    case PropertySpec::Kind::NoOutputWithout:
        if (q.state.out_type == XRay::Standby) return false;
        return !eval_guard(mi, p.expr, q.state);
    }
    return false;
}

} // namespace

CheckResult check(const PedalModel& model, const Lts& lts, const PropertySpec& p) {
    if (!lts.complete)
        throw LtsError("REQUIRES_COMPLETE_LTS",
                       "property checking needs a fully explored state space");
    if (!lts.has_state_map())
        throw LtsError("REQUIRES_STATE_MAP",
                       "property checking needs semantic states attached to the LTS");

    ModelIndex mi(model);

    std::vector<std::uint8_t> has_out(lts.n_states, 0);
    std::vector<std::vector<std::pair<std::uint32_t, const Label*>>> adj(lts.n_states);
    for (const Transition& t : lts.transitions) {
        has_out[t.src] = 1;
        adj[t.src].emplace_back(t.dst, &t.label);
    }

    // BFS from the initial state; the first violating state found is at
    // minimal depth, and parents give the shortest witness trace.
    std::vector<std::int64_t> parent(lts.n_states, -1);
    std::vector<const Label*> via(lts.n_states, nullptr);
    std::vector<std::uint8_t> seen(lts.n_states, 0);
    std::queue<std::uint32_t> queue;
    queue.push(lts.initial);
    seen[lts.initial] = 1;

    CheckResult res;
    while (!queue.empty()) {
        std::uint32_t s = queue.front();
        queue.pop();
        if (violates(mi, p, lts.state_map[s], !has_out[s])) {
            res.holds = false;
            res.violating_state = s;
            std::vector<Label> trace;
            for (std::uint32_t cur = s; via[cur] != nullptr;
                 cur = static_cast<std::uint32_t>(parent[cur]))
                trace.push_back(*via[cur]);
            std::reverse(trace.begin(), trace.end());
            res.trace = std::move(trace);
            std::ostringstream os;
            os << "violated at state " << s << " "
               << describe_state(mi, lts.state_map[s].state) << " after "
               << res.trace.size() << " step(s)";
            res.detail = os.str();
            return res;
        }
        for (auto [d, lab] : adj[s]) {
            if (seen[d]) continue;
            seen[d] = 1;
            parent[d] = s;
            via[d] = lab;
            queue.push(d);
        }
    }
    res.detail = "holds on all reachable states";
    return res;
}

PropertyParseResult parse_properties(const std::string& text, const PedalModel& model) {
    PropertyParseResult res;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;

        PropertySpec p;
        std::string rest;
        std::getline(ls, rest);
        if (kw == "deadlock-free") {
            p.kind = PropertySpec::Kind::DeadlockFree;
        } else if (kw == "invariant" || kw == "no-output-without") {
            p.kind = kw == "invariant" ? PropertySpec::Kind::Invariant
                                       : PropertySpec::Kind::NoOutputWithout;
            auto parsed = parse_expression(rest);
            if (!parsed.expr) {
                for (auto d : parsed.diagnostics) {
                    d.line = lineno;
                    res.diagnostics.push_back(d);
                }
                continue;
            }
            GuardExpr bound = bind_expr(*parsed.expr, model);
            Diagnostics typed = resolve_expr(bound, model);
            if (!typed.empty()) {
                for (auto d : typed) {
                    d.line = lineno;
                    res.diagnostics.push_back(d);
                }
                continue;
            }
            p.expr = std::move(bound);
        } else {
            res.diagnostics.push_back(
                {diag::kSyntax, "unknown property kind '" + kw + "'", lineno, 1});
            continue;
        }
        p.source_text = kw + rest;
        res.properties.push_back(std::move(p));
    }
    return res;
}

} // namespace pedal
