#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pedal {

/// X-ray source plane. None combined with Standby means no radiation.
enum class Plane : std::uint8_t { None, FR, LT, BI };

/// Dose type requested from a plane.
enum class XRay : std::uint8_t { Standby, Fluo, SingleShot, Series };

const char* to_string(Plane p);
const char* to_string(XRay x);
std::optional<Plane> plane_from_string(std::string_view s);
std::optional<XRay> xray_from_string(std::string_view s);

/// Value domain of a term; Unknown for unresolved variable references.
enum class Domain : std::uint8_t { Bool, Plane, XRay, Unknown };

/// Atomic operand of comparisons and assignments.
struct Term {
    enum class Kind : std::uint8_t {
        BoolLit,
        PlaneLit,
        XRayLit,
        BoolVar,
        PlaneVar,
        OutType,
        OutPlane,
    };

    Kind kind = Kind::BoolLit;
    bool bval = false;
    Plane pval = Plane::None;
    XRay xval = XRay::Standby;
    std::string name; // BoolVar / PlaneVar
    int line = 1;
    int col = 1;

    bool operator==(const Term& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
        case Kind::BoolLit: return bval == o.bval;
        case Kind::PlaneLit: return pval == o.pval;
        case Kind::XRayLit: return xval == o.xval;
        case Kind::BoolVar:
        case Kind::PlaneVar: return name == o.name;
        default: return true;
        }
    }
};

/// Boolean expression over a full state (guards, conditions, properties).
struct GuardExpr {
    enum class Kind : std::uint8_t { Lit, VarRef, Eq, Not, And, Or };

    Kind kind = Kind::Lit;
    bool lit = false;            // Lit
    std::string var;             // VarRef, a boolean variable
    Term lhs, rhs;               // Eq
    std::vector<GuardExpr> kids; // Not: 1 child; And/Or: 2 children
    int line = 1;
    int col = 1;

    bool operator==(const GuardExpr& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
        case Kind::Lit: return lit == o.lit;
        case Kind::VarRef: return var == o.var;
        case Kind::Eq: return lhs == o.lhs && rhs == o.rhs;
        default: return kids == o.kids;
        }
    }
};

struct Statement {
    enum class Kind : std::uint8_t { Assign, Conditional };

    Kind kind = Kind::Assign;
    Term target, value;          // Assign
    GuardExpr cond;              // Conditional
    std::vector<Statement> then_body, else_body;
    int line = 1;
    int col = 1;

    bool operator==(const Statement& o) const {
        if (kind != o.kind) return false;
        if (kind == Kind::Assign) return target == o.target && value == o.value;
        return cond == o.cond && then_body == o.then_body && else_body == o.else_body;
    }
};

struct Rule {
    std::string action;
    GuardExpr guard;
    std::vector<Statement> body; // may be empty: identity on the state
    int line = 1;
    int col = 1;

    bool operator==(const Rule& o) const {
        return action == o.action && guard == o.guard && body == o.body;
    }
};

/// Initial value of one declared variable.
struct InitValue {
    Domain domain = Domain::Bool;
    bool b = false;
    Plane p = Plane::None;

    bool operator==(const InitValue& o) const {
        if (domain != o.domain) return false;
        return domain == Domain::Bool ? b == o.b : p == o.p;
    }
};

/// A parsed DSL model. The two output registers OutputType/OutputPlane are
/// implicit and never appear among the declared variables.
struct PedalModel {
    std::vector<std::string> input_actions;
    std::vector<std::string> bool_vars;
    std::vector<std::string> plane_vars;
    std::map<std::string, InitValue> init;
    std::vector<Rule> rules;

    bool operator==(const PedalModel& o) const = default;
};

} // namespace pedal
