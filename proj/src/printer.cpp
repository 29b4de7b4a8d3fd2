#include "pedal/parser.hpp"

#include <algorithm>
#include <sstream>

namespace pedal {
namespace {

std::string term_text(const Term& t) {
    switch (t.kind) {
    case Term::Kind::BoolLit: return t.bval ? "true" : "false";
    case Term::Kind::PlaneLit: return to_string(t.pval);
    case Term::Kind::XRayLit: return to_string(t.xval);
    case Term::Kind::OutType: return "OutputType";
    case Term::Kind::OutPlane: return "OutputPlane";
    case Term::Kind::BoolVar:
    case Term::Kind::PlaneVar: return t.name;
    }
    return "";
}

int precedence(GuardExpr::Kind k) {
    switch (k) {
    case GuardExpr::Kind::Or: return 1;
    case GuardExpr::Kind::And: return 2;
    case GuardExpr::Kind::Not: return 3;
    default: return 4; // atoms
    }
}

void print_expr(std::ostream& os, const GuardExpr& e, int parent_prec) {
    int prec = precedence(e.kind);
    bool parens = prec < parent_prec;
    if (parens) os << '(';
    switch (e.kind) {
    case GuardExpr::Kind::Lit:
        os << (e.lit ? "true" : "false");
        break;
    case GuardExpr::Kind::VarRef:
        os << e.var;
        break;
    case GuardExpr::Kind::Eq:
        os << term_text(e.lhs) << " == " << term_text(e.rhs);
        break;
    case GuardExpr::Kind::Not:
        os << "not ";
        print_expr(os, e.kids[0], precedence(GuardExpr::Kind::Not));
        break;
    case GuardExpr::Kind::And:
    case GuardExpr::Kind::Or: {
        const char* op = e.kind == GuardExpr::Kind::And ? " and " : " or ";
        print_expr(os, e.kids[0], prec);
        os << op;
        print_expr(os, e.kids[1], prec + 1); // right operand: keep left association
        break;
    }
    }
    if (parens) os << ')';
}

void indent(std::ostream& os, int depth) {
    for (int i = 0; i < depth; ++i) os << "  ";
}

void print_statements(std::ostream& os, const std::vector<Statement>& body, int depth) {
    for (size_t i = 0; i < body.size(); ++i) {
        const Statement& st = body[i];
        indent(os, depth);
        if (st.kind == Statement::Kind::Assign) {
            os << term_text(st.target) << " := " << term_text(st.value);
        } else {
            os << "if ";
            print_expr(os, st.cond, 0);
            os << " then\n";
            print_statements(os, st.then_body, depth + 1);
            if (!st.else_body.empty()) {
                indent(os, depth);
                os << "else\n";
                print_statements(os, st.else_body, depth + 1);
            }
            indent(os, depth);
            os << "fi";
        }
        if (i + 1 < body.size()) os << ';';
        os << '\n';
    }
}

} // namespace

std::string pretty_print(const PedalModel& m) {
    std::ostringstream os;
    auto section = [&](const char* kw, const std::vector<std::string>& names) {
        if (names.empty()) return;
        os << kw << ' ';
        for (size_t i = 0; i < names.size(); ++i) {
            if (i) os << ", ";
            os << names[i];
        }
        os << '\n';
    };
    section("InActions", m.input_actions);
    section("BoolVars", m.bool_vars);
    section("PlaneVars", m.plane_vars);
    if (!m.init.empty()) {
        os << "Init\n";
        // Canonical order: booleans then planes, each in declaration order.
        auto emit = [&](const std::string& name) {
            auto it = m.init.find(name);
            if (it == m.init.end()) return;
            os << "  " << name << " := ";
            if (it->second.domain == Domain::Bool)
                os << (it->second.b ? "true" : "false");
            else
                os << to_string(it->second.p);
            os << ";\n";
        };
        for (const auto& v : m.bool_vars) emit(v);
        for (const auto& v : m.plane_vars) emit(v);
        // Entries for undeclared names (invalid models) are still printed so
        // nothing is silently dropped.
        for (const auto& [name, v] : m.init) {
            bool declared =
                std::find(m.bool_vars.begin(), m.bool_vars.end(), name) != m.bool_vars.end() ||
                std::find(m.plane_vars.begin(), m.plane_vars.end(), name) != m.plane_vars.end();
            if (!declared) {
                os << "  " << name << " := ";
                if (v.domain == Domain::Bool)
                    os << (v.b ? "true" : "false");
                else
                    os << to_string(v.p);
                os << ";\n";
            }
        }
    }
    for (const auto& r : m.rules) {
        os << "\nRule " << r.action << ":\n  guard ";
        print_expr(os, r.guard, 0);
        os << "\n  do\n";
        print_statements(os, r.body, 2);
        os << "  end\n";
    }
    return os.str();
}

} // namespace pedal
