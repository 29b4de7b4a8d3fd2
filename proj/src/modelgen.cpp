#include "pedal/modelgen.hpp"

namespace pedal {

PedalModel make_synthetic_model(std::uint32_t n_toggles, std::uint32_t n_noops) {
    PedalModel m;
    for (std::uint32_t i = 0; i < n_toggles; ++i)
        m.bool_vars.push_back("v" + std::to_string(i));
    for (const auto& v : m.bool_vars) m.init[v] = InitValue{Domain::Bool, false, {}};

    auto bool_term = [](bool v) {
        Term t;
        t.kind = Term::Kind::BoolLit;
        t.bval = v;
        return t;
    };
    auto var_term = [](const std::string& name) {
        Term t;
        t.kind = Term::Kind::BoolVar;
        t.name = name;
        return t;
    };

    for (std::uint32_t i = 0; i < n_toggles; ++i) {
        std::string v = "v" + std::to_string(i);
        Rule r;
        r.action = "Toggle" + std::to_string(i);
        r.guard.kind = GuardExpr::Kind::Lit;
        r.guard.lit = true;

        Statement flip;
        flip.kind = Statement::Kind::Conditional;
        flip.cond.kind = GuardExpr::Kind::VarRef;
        flip.cond.var = v;
        Statement set_false;
        set_false.target = var_term(v);
        set_false.value = bool_term(false);
        Statement set_true;
        set_true.target = var_term(v);
        set_true.value = bool_term(true);
        flip.then_body.push_back(set_false);
        flip.else_body.push_back(set_true);
        r.body.push_back(std::move(flip));
        m.input_actions.push_back(r.action);
        m.rules.push_back(std::move(r));
    }
    for (std::uint32_t i = 0; i < n_noops; ++i) {
        Rule r;
        r.action = "Probe" + std::to_string(i);
        r.guard.kind = GuardExpr::Kind::Lit;
        r.guard.lit = true;
        m.input_actions.push_back(r.action);
        m.rules.push_back(std::move(r));
    }
    return m;
}

} // namespace pedal
