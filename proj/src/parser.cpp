#include "pedal/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace pedal {
namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    Ident,
    Comma,
    Semi,
    Colon,
    Assign, // :=
    EqEq,   // ==
    LParen,
    RParen,
    Eof,
};

struct Token {
    Tok kind = Tok::Eof;
    std::string text;
    int line = 1;
    int col = 1;
};

struct SyntaxError {
    Diagnostic d;
};

[[noreturn]] void fail(int line, int col, const std::string& msg) {
    throw SyntaxError{{diag::kSyntax, msg, line, col}};
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        int tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), tl, tc});
            advance(j - i);
            continue;
        }
        switch (c) {
        case ',': out.push_back({Tok::Comma, ",", tl, tc}); advance(1); break;
        case ';': out.push_back({Tok::Semi, ";", tl, tc}); advance(1); break;
        case '(': out.push_back({Tok::LParen, "(", tl, tc}); advance(1); break;
        case ')': out.push_back({Tok::RParen, ")", tl, tc}); advance(1); break;
        case ':':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                out.push_back({Tok::Assign, ":=", tl, tc});
                advance(2);
            } else {
                out.push_back({Tok::Colon, ":", tl, tc});
                advance(1);
            }
            break;
        case '=':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                out.push_back({Tok::EqEq, "==", tl, tc});
                advance(2);
            } else {
                fail(tl, tc, "stray '='; use ':=' for assignment or '==' for comparison");
            }
            break;
        default:
            fail(tl, tc, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::Eof, "", line, col});
    return out;
}

const std::set<std::string> kKeywords = {
    "InActions", "BoolVars", "PlaneVars", "Init", "Rule",  "guard",
    "do",        "end",      "if",        "then", "else",  "fi",
    "not",       "and",      "or",        "true", "false", "None",
    "FR",        "LT",       "BI",        "Standby", "Fluo", "SingleShot",
    "Series",    "OutputType", "OutputPlane",
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    PedalModel parse_model() {
        PedalModel m;
        if (at_kw("InActions")) {
            next();
            m.input_actions = name_list();
        }
        if (at_kw("BoolVars")) {
            next();
            m.bool_vars = name_list();
        }
        if (at_kw("PlaneVars")) {
            next();
            m.plane_vars = name_list();
        }
        bools_.insert(m.bool_vars.begin(), m.bool_vars.end());
        planes_.insert(m.plane_vars.begin(), m.plane_vars.end());
        if (at_kw("Init")) {
            next();
            parse_init(m);
        }
        while (at_kw("Rule")) m.rules.push_back(parse_rule());
        expect_eof();
        return m;
    }

    GuardExpr parse_single_expression() {
        GuardExpr e = parse_expr();
        expect_eof();
        return e;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::set<std::string> bools_, planes_;

    const Token& cur() const { return toks_[pos_]; }
    void next() { if (pos_ + 1 < toks_.size()) ++pos_; }

    bool at_kw(const char* kw) const {
        return cur().kind == Tok::Ident && cur().text == kw;
    }
    bool at_name() const {
        return cur().kind == Tok::Ident && kKeywords.count(cur().text) == 0;
    }

    std::string expect_name(const char* what) {
        if (!at_name())
            fail(cur().line, cur().col,
                 std::string("expected ") + what + ", got '" + cur().text + "'");
        std::string s = cur().text;
        next();
        return s;
    }

    void expect(Tok k, const char* what) {
        if (cur().kind != k)
            fail(cur().line, cur().col,
                 std::string("expected ") + what + ", got '" +
                     (cur().kind == Tok::Eof ? "end of input" : cur().text) + "'");
        next();
    }

    void expect_kw(const char* kw) {
        if (!at_kw(kw))
            fail(cur().line, cur().col,
                 std::string("expected '") + kw + "', got '" +
                     (cur().kind == Tok::Eof ? "end of input" : cur().text) + "'");
        next();
    }

    void expect_eof() {
        if (cur().kind != Tok::Eof)
            fail(cur().line, cur().col, "unexpected '" + cur().text + "'");
    }

    std::vector<std::string> name_list() {
        std::vector<std::string> names;
        if (!at_name()) return names; // empty section
        names.push_back(expect_name("a name"));
        while (cur().kind == Tok::Comma) {
            next();
            names.push_back(expect_name("a name"));
        }
        return names;
    }

    void parse_init(PedalModel& m) {
        while (at_name()) {
            Token nameTok = cur();
            std::string name = expect_name("a variable name");
            expect(Tok::Assign, "':='");
            InitValue v;
            if (at_kw("true") || at_kw("false")) {
                v.domain = Domain::Bool;
                v.b = cur().text == "true";
                next();
            } else if (auto p = plane_from_string(cur().text);
                       cur().kind == Tok::Ident && p) {
                v.domain = Domain::Plane;
                v.p = *p;
                next();
            } else {
                fail(cur().line, cur().col,
                     "expected a boolean or plane literal, got '" + cur().text + "'");
            }
            if (!m.init.emplace(name, v).second)
                throw SyntaxError{{diag::kDuplicateInit,
                                   "variable '" + name + "' initialized twice",
                                   nameTok.line, nameTok.col}};
            expect(Tok::Semi, "';'");
        }
    }

    Rule parse_rule() {
        Rule r;
        r.line = cur().line;
        r.col = cur().col;
        expect_kw("Rule");
        r.action = expect_name("an action name");
        expect(Tok::Colon, "':'");
        expect_kw("guard");
        r.guard = parse_expr();
        expect_kw("do");
        r.body = parse_statements();
        expect_kw("end");
        return r;
    }

    bool at_statement_start() const {
        return at_name() || at_kw("if") || at_kw("OutputType") || at_kw("OutputPlane");
    }

    std::vector<Statement> parse_statements() {
        std::vector<Statement> body;
        if (!at_statement_start()) return body;
        body.push_back(parse_statement());
        while (cur().kind == Tok::Semi) {
            next();
            if (!at_statement_start()) break; // trailing separator
            body.push_back(parse_statement());
        }
        return body;
    }

    Statement parse_statement() {
        Statement st;
        st.line = cur().line;
        st.col = cur().col;
        if (at_kw("if")) {
            st.kind = Statement::Kind::Conditional;
            next();
            st.cond = parse_expr();
            expect_kw("then");
            st.then_body = parse_statements();
            if (at_kw("else")) {
                next();
                st.else_body = parse_statements();
            }
            expect_kw("fi");
            return st;
        }
        st.kind = Statement::Kind::Assign;
        st.target = parse_term();
        switch (st.target.kind) {
        case Term::Kind::BoolVar:
        case Term::Kind::PlaneVar:
        case Term::Kind::OutType:
        case Term::Kind::OutPlane:
            break;
        default:
            fail(st.target.line, st.target.col, "assignment target must be a variable");
        }
        expect(Tok::Assign, "':='");
        st.value = parse_term();
        return st;
    }

    // expr := conj ('or' conj)* ; conj := unary ('and' unary)* ;
    // unary := 'not' unary | atom
    GuardExpr parse_expr() {
        GuardExpr e = parse_conj();
        while (at_kw("or")) {
            GuardExpr n;
            n.kind = GuardExpr::Kind::Or;
            n.line = cur().line;
            n.col = cur().col;
            next();
            n.kids.push_back(std::move(e));
            n.kids.push_back(parse_conj());
            e = std::move(n);
        }
        return e;
    }

    GuardExpr parse_conj() {
        GuardExpr e = parse_unary();
        while (at_kw("and")) {
            GuardExpr n;
            n.kind = GuardExpr::Kind::And;
            n.line = cur().line;
            n.col = cur().col;
            next();
            n.kids.push_back(std::move(e));
            n.kids.push_back(parse_unary());
            e = std::move(n);
        }
        return e;
    }

    GuardExpr parse_unary() {
        if (at_kw("not")) {
            GuardExpr n;
            n.kind = GuardExpr::Kind::Not;
            n.line = cur().line;
            n.col = cur().col;
            next();
            n.kids.push_back(parse_unary());
            return n;
        }
        return parse_atom();
    }

    GuardExpr parse_atom() {
        if (cur().kind == Tok::LParen) {
            next();
            GuardExpr e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        int l = cur().line, c = cur().col;
        Term t = parse_term();
        if (cur().kind == Tok::EqEq) {
            next();
            GuardExpr e;
            e.kind = GuardExpr::Kind::Eq;
            e.line = l;
            e.col = c;
            e.lhs = std::move(t);
            e.rhs = parse_term();
            return e;
        }
        GuardExpr e;
        e.line = l;
        e.col = c;
        if (t.kind == Term::Kind::BoolLit) {
            e.kind = GuardExpr::Kind::Lit;
            e.lit = t.bval;
        } else if (t.kind == Term::Kind::BoolVar || t.kind == Term::Kind::PlaneVar) {
            // Bare names are boolean variable references; plane variables used
            // alone are a type error caught in validation.
            e.kind = GuardExpr::Kind::VarRef;
            e.var = t.name;
        } else {
            fail(l, c, "expected '==' after '" + std::string(to_string_term(t)) + "'");
        }
        return e;
    }

    static std::string to_string_term(const Term& t) {
        switch (t.kind) {
        case Term::Kind::OutType: return "OutputType";
        case Term::Kind::OutPlane: return "OutputPlane";
        case Term::Kind::PlaneLit: return to_string(t.pval);
        case Term::Kind::XRayLit: return to_string(t.xval);
        default: return t.name;
        }
    }

    Term parse_term() {
        Term t;
        t.line = cur().line;
        t.col = cur().col;
        if (cur().kind != Tok::Ident)
            fail(t.line, t.col, "expected a value or variable, got '" + cur().text + "'");
        const std::string& s = cur().text;
        if (s == "true" || s == "false") {
            t.kind = Term::Kind::BoolLit;
            t.bval = s == "true";
        } else if (s == "OutputType") {
            t.kind = Term::Kind::OutType;
        } else if (s == "OutputPlane") {
            t.kind = Term::Kind::OutPlane;
        } else if (auto p = plane_from_string(s)) {
            t.kind = Term::Kind::PlaneLit;
            t.pval = *p;
        } else if (auto x = xray_from_string(s)) {
            t.kind = Term::Kind::XRayLit;
            t.xval = *x;
        } else if (kKeywords.count(s)) {
            fail(t.line, t.col, "expected a value or variable, got keyword '" + s + "'");
        } else {
            // Classify against the declarations seen so far; names that are
            // declared nowhere default to boolean and get flagged in validation.
            t.kind = planes_.count(s) ? Term::Kind::PlaneVar : Term::Kind::BoolVar;
            t.name = s;
        }
        next();
        return t;
    }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

Domain term_domain(const Term& t) {
    switch (t.kind) {
    case Term::Kind::BoolLit:
    case Term::Kind::BoolVar: return Domain::Bool;
    case Term::Kind::PlaneLit:
    case Term::Kind::PlaneVar:
    case Term::Kind::OutPlane: return Domain::Plane;
    case Term::Kind::XRayLit:
    case Term::Kind::OutType: return Domain::XRay;
    }
    return Domain::Unknown;
}

class Validator {
public:
    explicit Validator(const PedalModel& m) : m_(m) {
        bools_.insert(m.bool_vars.begin(), m.bool_vars.end());
        planes_.insert(m.plane_vars.begin(), m.plane_vars.end());
    }

    Diagnostics run() {
        check_declarations();
        check_init();
        check_rules();
        return std::move(diags_);
    }

private:
    const PedalModel& m_;
    std::set<std::string> bools_, planes_;
    Diagnostics diags_;

    void emit(const char* code, const std::string& msg, int line = 1, int col = 1) {
        diags_.push_back({code, msg, line, col});
    }

    void check_declarations() {
        std::set<std::string> seen;
        auto dup_check = [&](const std::vector<std::string>& names, const char* what) {
            std::set<std::string> local;
            for (const auto& n : names) {
                if (!local.insert(n).second)
                    emit(diag::kDuplicateDecl,
                         std::string(what) + " '" + n + "' declared twice");
                else if (!seen.insert(n).second)
                    emit(diag::kNameClash, "name '" + n + "' used in more than one namespace");
            }
        };
        dup_check(m_.input_actions, "action");
        dup_check(m_.bool_vars, "boolean variable");
        dup_check(m_.plane_vars, "plane variable");
    }

    void check_init() {
        for (const auto& v : m_.bool_vars) {
            auto it = m_.init.find(v);
            if (it == m_.init.end())
                emit(diag::kMissingInit, "boolean variable '" + v + "' has no initial value");
            else if (it->second.domain != Domain::Bool)
                emit(diag::kTypeMismatch, "initial value of '" + v + "' must be a boolean");
        }
        for (const auto& v : m_.plane_vars) {
            auto it = m_.init.find(v);
            if (it == m_.init.end())
                emit(diag::kMissingInit, "plane variable '" + v + "' has no initial value");
            else if (it->second.domain != Domain::Plane)
                emit(diag::kTypeMismatch, "initial value of '" + v + "' must be a plane");
        }
        for (const auto& [name, _] : m_.init) {
            if (!bools_.count(name) && !planes_.count(name))
                emit(diag::kUnknownInit, "init assigns undeclared variable '" + name + "'");
        }
    }

    void check_rules() {
        std::set<std::string> actions(m_.input_actions.begin(), m_.input_actions.end());
        std::set<std::string> ruled;
        for (const auto& r : m_.rules) {
            if (!actions.count(r.action))
                emit(diag::kUnknownAction,
                     "rule for undeclared action '" + r.action + "'", r.line, r.col);
            if (!ruled.insert(r.action).second)
                emit(diag::kDuplicateRule,
                     "multiple rules for action '" + r.action + "'", r.line, r.col);
            check_expr(r.guard);
            check_statements(r.body);
        }
        for (const auto& a : m_.input_actions)
            if (!ruled.count(a))
                emit(diag::kMissingRule, "no rule for action '" + a + "'");
    }

    Domain check_term(const Term& t) {
        if (t.kind == Term::Kind::BoolVar && !bools_.count(t.name)) {
            if (planes_.count(t.name)) return Domain::Plane; // misclassified, tolerated
            emit(diag::kUndeclaredVariable, "undeclared variable '" + t.name + "'",
                 t.line, t.col);
            return Domain::Unknown;
        }
        if (t.kind == Term::Kind::PlaneVar && !planes_.count(t.name)) {
            if (bools_.count(t.name)) return Domain::Bool;
            emit(diag::kUndeclaredVariable, "undeclared variable '" + t.name + "'",
                 t.line, t.col);
            return Domain::Unknown;
        }
        return term_domain(t);
    }

    void check_expr(const GuardExpr& e) {
        switch (e.kind) {
        case GuardExpr::Kind::Lit:
            break;
        case GuardExpr::Kind::VarRef:
            if (!bools_.count(e.var)) {
                if (planes_.count(e.var))
                    emit(diag::kTypeMismatch,
                         "plane variable '" + e.var + "' used as a boolean", e.line, e.col);
                else
                    emit(diag::kUndeclaredVariable,
                         "undeclared variable '" + e.var + "'", e.line, e.col);
            }
            break;
        case GuardExpr::Kind::Eq: {
            Domain dl = check_term(e.lhs);
            Domain dr = check_term(e.rhs);
            if (dl != Domain::Unknown && dr != Domain::Unknown && dl != dr)
                emit(diag::kTypeMismatch, "comparison of values from different domains",
                     e.line, e.col);
            break;
        }
        default:
            for (const auto& k : e.kids) check_expr(k);
        }
    }

    void check_statements(const std::vector<Statement>& body) {
        for (const auto& st : body) {
            if (st.kind == Statement::Kind::Assign) {
                Domain dt = check_term(st.target);
                Domain dv = check_term(st.value);
                if (dt != Domain::Unknown && dv != Domain::Unknown && dt != dv)
                    emit(diag::kTypeMismatch, "assigned value has the wrong domain",
                         st.line, st.col);
            } else {
                check_expr(st.cond);
                check_statements(st.then_body);
                check_statements(st.else_body);
            }
        }
    }
};

} // namespace

ParseResult parse(std::string_view text) {
    ParseResult res;
    try {
        Parser p(lex(text));
        PedalModel m = p.parse_model();
        res.diagnostics = validate(m);
        res.model = std::move(m);
    } catch (const SyntaxError& e) {
        res.diagnostics.push_back(e.d);
    }
    return res;
}

Diagnostics validate(const PedalModel& model) {
    return Validator(model).run();
}

ExprParseResult parse_expression(std::string_view text) {
    ExprParseResult res;
    try {
        Parser p(lex(text));
        res.expr = p.parse_single_expression();
    } catch (const SyntaxError& e) {
        res.diagnostics.push_back(e.d);
    }
    return res;
}

namespace {

// Reclassify bare names in an expression against a model's declarations.
void reclassify_term(Term& t, const PedalModel& m) {
    if (t.kind != Term::Kind::BoolVar && t.kind != Term::Kind::PlaneVar) return;
    if (std::find(m.plane_vars.begin(), m.plane_vars.end(), t.name) != m.plane_vars.end())
        t.kind = Term::Kind::PlaneVar;
    else if (std::find(m.bool_vars.begin(), m.bool_vars.end(), t.name) != m.bool_vars.end())
        t.kind = Term::Kind::BoolVar;
}

void reclassify_expr(GuardExpr& e, const PedalModel& m) {
    if (e.kind == GuardExpr::Kind::Eq) {
        reclassify_term(e.lhs, m);
        reclassify_term(e.rhs, m);
    }
    for (auto& k : e.kids) reclassify_expr(k, m);
}

} // namespace

Diagnostics resolve_expr(const GuardExpr& e, const PedalModel& model) {
    // Wrap the expression in a throwaway rule so the validator's expression
    // checks apply unchanged.
    PedalModel probe = model;
    GuardExpr copy = e;
    reclassify_expr(copy, model);
    probe.rules.clear();
    probe.input_actions.clear();
    Rule r;
    r.action = "__probe";
    r.guard = copy;
    probe.input_actions.push_back(r.action);
    probe.rules.push_back(r);
    Diagnostics all = validate(probe);
    Diagnostics expr_only;
    for (auto& d : all)
        if (d.code == diag::kUndeclaredVariable || d.code == diag::kTypeMismatch)
            expr_only.push_back(d);
    return expr_only;
}

GuardExpr bind_expr(GuardExpr e, const PedalModel& model) {
    reclassify_expr(e, model);
    return e;
}

} // namespace pedal
