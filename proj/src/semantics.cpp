#include "pedal/semantics.hpp"

#include <sstream>
#include <stdexcept>

namespace pedal {

std::string Label::text() const {
    switch (kind) {
    case Kind::Input: return input;
    case Kind::Output:
        return std::string("output(") + to_string(xr) + "," + to_string(pl) + ")";
    case Kind::Tau: return "tau";
    case Kind::Delta: return "delta";
    }
    return "";
}

std::optional<Label> Label::from_text(std::string_view s) {
    if (s == "tau") return tau();
    if (s == "delta") return delta();
    if (s.starts_with("output(") && s.ends_with(")")) {
        std::string_view inner = s.substr(7, s.size() - 8);
        size_t comma = inner.find(',');
        if (comma == std::string_view::npos) return std::nullopt;
        auto x = xray_from_string(inner.substr(0, comma));
        auto p = plane_from_string(inner.substr(comma + 1));
        if (!x || !p) return std::nullopt;
        return make_output(*x, *p);
    }
    if (s.empty()) return std::nullopt;
    return make_input(std::string(s));
}

ModelIndex::ModelIndex(const PedalModel& m) : model(&m) {
    for (std::uint32_t i = 0; i < m.bool_vars.size(); ++i)
        bool_index.emplace(m.bool_vars[i], i);
    for (std::uint32_t i = 0; i < m.plane_vars.size(); ++i)
        plane_index.emplace(m.plane_vars[i], i);
    for (std::uint32_t i = 0; i < m.rules.size(); ++i)
        rule_by_action.emplace(m.rules[i].action, i);
}

State initial_state(const ModelIndex& mi) {
    const PedalModel& m = *mi.model;
    State s;
    s.bvals.resize(m.bool_vars.size(), 0);
    s.pvals.resize(m.plane_vars.size(), Plane::None);
    for (std::size_t i = 0; i < m.bool_vars.size(); ++i) {
        auto it = m.init.find(m.bool_vars[i]);
        if (it != m.init.end()) s.bvals[i] = it->second.b ? 1 : 0;
    }
    for (std::size_t i = 0; i < m.plane_vars.size(); ++i) {
        auto it = m.init.find(m.plane_vars[i]);
        if (it != m.init.end()) s.pvals[i] = it->second.p;
    }
    return s;
}

namespace {

std::uint32_t index_of(const std::unordered_map<std::string, std::uint32_t>& idx,
                       const std::string& name, const char* what) {
    auto it = idx.find(name);
    if (it == idx.end())
        throw std::invalid_argument(std::string("unknown ") + what + " '" + name + "'");
    return it->second;
}

bool term_bool(const ModelIndex& mi, const Term& t, const State& s) {
    switch (t.kind) {
    case Term::Kind::BoolLit: return t.bval;
    case Term::Kind::BoolVar:
        return s.bvals[index_of(mi.bool_index, t.name, "boolean variable")] != 0;
    default:
        throw std::invalid_argument("term is not boolean");
    }
}

Plane term_plane(const ModelIndex& mi, const Term& t, const State& s) {
    switch (t.kind) {
    case Term::Kind::PlaneLit: return t.pval;
    case Term::Kind::PlaneVar:
        return s.pvals[index_of(mi.plane_index, t.name, "plane variable")];
    case Term::Kind::OutPlane: return s.out_plane;
    default:
        throw std::invalid_argument("term is not a plane");
    }
}

XRay term_xray(const ModelIndex& mi, const Term& t, const State& s) {
    switch (t.kind) {
    case Term::Kind::XRayLit: return t.xval;
    case Term::Kind::OutType: return s.out_type;
    default:
        throw std::invalid_argument("term is not an x-ray type");
    }
}

Domain term_domain(const Term& t) {
    switch (t.kind) {
    case Term::Kind::BoolLit:
    case Term::Kind::BoolVar: return Domain::Bool;
    case Term::Kind::PlaneLit:
    case Term::Kind::PlaneVar:
    case Term::Kind::OutPlane: return Domain::Plane;
    default: return Domain::XRay;
    }
}

} // namespace

bool eval_guard(const ModelIndex& mi, const GuardExpr& g, const State& s) {
    switch (g.kind) {
    case GuardExpr::Kind::Lit: return g.lit;
    case GuardExpr::Kind::VarRef:
        return s.bvals[index_of(mi.bool_index, g.var, "boolean variable")] != 0;
    case GuardExpr::Kind::Eq:
        switch (term_domain(g.lhs)) {
        case Domain::Bool: return term_bool(mi, g.lhs, s) == term_bool(mi, g.rhs, s);
        case Domain::Plane: return term_plane(mi, g.lhs, s) == term_plane(mi, g.rhs, s);
        default: return term_xray(mi, g.lhs, s) == term_xray(mi, g.rhs, s);
        }
    case GuardExpr::Kind::Not: return !eval_guard(mi, g.kids[0], s);
    case GuardExpr::Kind::And:
        return eval_guard(mi, g.kids[0], s) && eval_guard(mi, g.kids[1], s);
    case GuardExpr::Kind::Or:
        return eval_guard(mi, g.kids[0], s) || eval_guard(mi, g.kids[1], s);
    }
    return false;
}

State eval_statements(const ModelIndex& mi, const std::vector<Statement>& body,
                      const State& s) {
    State cur = s;
    for (const Statement& st : body) {
        if (st.kind == Statement::Kind::Assign) {
            switch (st.target.kind) {
            case Term::Kind::BoolVar:
                cur.bvals[index_of(mi.bool_index, st.target.name, "boolean variable")] =
                    term_bool(mi, st.value, cur) ? 1 : 0;
                break;
            case Term::Kind::PlaneVar:
                cur.pvals[index_of(mi.plane_index, st.target.name, "plane variable")] =
                    term_plane(mi, st.value, cur);
                break;
            case Term::Kind::OutType:
                cur.out_type = term_xray(mi, st.value, cur);
                break;
            case Term::Kind::OutPlane:
                cur.out_plane = term_plane(mi, st.value, cur);
                break;
            default:
                throw std::invalid_argument("assignment target is not a variable");
            }
        } else {
            cur = eval_guard(mi, st.cond, cur)
                      ? eval_statements(mi, st.then_body, cur)
                      : eval_statements(mi, st.else_body, cur);
        }
    }
    return cur;
}

namespace {

std::vector<std::pair<Label, SemState>>
input_successors(const ModelIndex& mi, const State& s, SemState::Phase next_phase) {
    std::vector<std::pair<Label, SemState>> out;
    for (const Rule& r : mi.model->rules) {
        if (!eval_guard(mi, r.guard, s)) continue;
        SemState q;
        q.phase = next_phase;
        q.state = eval_statements(mi, r.body, s);
        out.emplace_back(Label::make_input(r.action), std::move(q));
    }
    return out;
}

} // namespace

std::vector<std::pair<Label, SemState>> successors_direct(const ModelIndex& mi,
                                                          const SemState& q) {
    switch (q.phase) {
    case SemState::Phase::AwaitingInput:
        return input_successors(mi, q.state, SemState::Phase::AwaitingOutput);
    case SemState::Phase::AwaitingOutput: {
        SemState n;
        n.phase = SemState::Phase::AwaitingInput;
        n.state = q.state;
        return {{Label::make_output(q.state.out_type, q.state.out_plane), std::move(n)}};
    }
    case SemState::Phase::Evaluating:
        throw std::invalid_argument("direct engine has no Evaluating states");
    }
    return {};
}

std::vector<std::pair<Label, SemState>> successors_tau(const ModelIndex& mi,
                                                       const SemState& q) {
    switch (q.phase) {
    case SemState::Phase::AwaitingInput:
        return input_successors(mi, q.state, SemState::Phase::Evaluating);
    case SemState::Phase::Evaluating: {
        SemState n;
        n.phase = SemState::Phase::AwaitingOutput;
        n.state = q.state;
        return {{Label::tau(), std::move(n)}};
    }
    case SemState::Phase::AwaitingOutput: {
        SemState n;
        n.phase = SemState::Phase::AwaitingInput;
        n.state = q.state;
        return {{Label::make_output(q.state.out_type, q.state.out_plane), std::move(n)}};
    }
    }
    return {};
}

std::size_t hash_value(const State& s) {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::size_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (auto b : s.bvals) mix(b);
    for (auto p : s.pvals) mix(static_cast<std::size_t>(p));
    mix(static_cast<std::size_t>(s.out_type));
    mix(static_cast<std::size_t>(s.out_plane) + 17);
    return h;
}

std::size_t hash_value(const SemState& q) {
    return hash_value(q.state) * 1099511628211ull +
           static_cast<std::size_t>(q.phase);
}

std::string describe_state(const ModelIndex& mi, const State& s) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (std::size_t i = 0; i < mi.model->bool_vars.size(); ++i) {
        if (!first) os << ", ";
        first = false;
        os << mi.model->bool_vars[i] << "=" << (s.bvals[i] ? "true" : "false");
    }
    for (std::size_t i = 0; i < mi.model->plane_vars.size(); ++i) {
        if (!first) os << ", ";
        first = false;
        os << mi.model->plane_vars[i] << "=" << to_string(s.pvals[i]);
    }
    if (!first) os << ", ";
    os << "OutputType=" << to_string(s.out_type)
       << ", OutputPlane=" << to_string(s.out_plane) << "}";
    return os.str();
}

} // namespace pedal
