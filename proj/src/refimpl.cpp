#include "pedal/refimpl.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "pedal/equiv.hpp"
#include "pedal/lts.hpp"

namespace pedal {

namespace {

Statement make_assign(Term::Kind target, XRay x, Plane p) {
    Statement st;
    st.kind = Statement::Kind::Assign;
    st.target.kind = target;
    if (target == Term::Kind::OutType) {
        st.value.kind = Term::Kind::XRayLit;
        st.value.xval = x;
    } else {
        st.value.kind = Term::Kind::PlaneLit;
        st.value.pval = p;
    }
    return st;
}

} // namespace

std::string Mutation::spec_text(const PedalModel& m) const {
    auto rule_name = [&](std::uint32_t r) {
        return r < m.rules.size() ? m.rules[r].action : std::to_string(r);
    };
    switch (kind) {
    case Kind::NegateGuard: return "negate:" + rule_name(rule);
    case Kind::DropStatement:
        return "drop:" + rule_name(rule) + ":" + std::to_string(stmt);
    case Kind::SwapOutput:
        return "swap:" + rule_name(rule) + ":" + to_string(xr) + ":" + to_string(pl);
    case Kind::StuckOutput: return "stuck";
    }
    return "";
}

std::optional<Mutation> Mutation::parse_spec(const std::string& spec,
                                             const PedalModel& m, std::string& error) {
    std::vector<std::string> parts;
    std::istringstream is(spec);
    for (std::string p; std::getline(is, p, ':');) parts.push_back(p);
    if (parts.empty()) {
        error = "empty mutation spec";
        return std::nullopt;
    }

    auto resolve_rule = [&](const std::string& s, std::uint32_t& out) {
        for (std::uint32_t i = 0; i < m.rules.size(); ++i)
            if (m.rules[i].action == s) {
                out = i;
                return true;
            }
        try {
            size_t used;
            unsigned long v = std::stoul(s, &used);
            if (used == s.size() && v < m.rules.size()) {
                out = static_cast<std::uint32_t>(v);
                return true;
            }
        } catch (...) {
        }
        error = "unknown rule '" + s + "'";
        return false;
    };

    Mutation mu;
    if (parts[0] == "stuck" && parts.size() == 1) {
        mu.kind = Kind::StuckOutput;
        return mu;
    }
    if (parts[0] == "negate" && parts.size() == 2) {
        mu.kind = Kind::NegateGuard;
        if (!resolve_rule(parts[1], mu.rule)) return std::nullopt;
        return mu;
    }
    if (parts[0] == "drop" && parts.size() == 3) {
        mu.kind = Kind::DropStatement;
        if (!resolve_rule(parts[1], mu.rule)) return std::nullopt;
        try {
            mu.stmt = static_cast<std::uint32_t>(std::stoul(parts[2]));
        } catch (...) {
            error = "bad statement index '" + parts[2] + "'";
            return std::nullopt;
        }
        if (mu.stmt >= m.rules[mu.rule].body.size()) {
            error = "statement index out of range";
            return std::nullopt;
        }
        return mu;
    }
    if (parts[0] == "swap" && parts.size() == 4) {
        mu.kind = Kind::SwapOutput;
        if (!resolve_rule(parts[1], mu.rule)) return std::nullopt;
        auto x = xray_from_string(parts[2]);
        auto p = plane_from_string(parts[3]);
        if (!x || !p) {
            error = "bad output literals in '" + spec + "'";
            return std::nullopt;
        }
        mu.xr = *x;
        mu.pl = *p;
        return mu;
    }
    error = "unrecognized mutation spec '" + spec + "'";
    return std::nullopt;
}

PedalModel apply_mutations(const PedalModel& model, const std::vector<Mutation>& muts) {
    PedalModel m = model;
    for (const Mutation& mu : muts) {
        switch (mu.kind) {
        case Mutation::Kind::NegateGuard: {
            Rule& r = m.rules.at(mu.rule);
            GuardExpr neg;
            neg.kind = GuardExpr::Kind::Not;
            neg.kids.push_back(std::move(r.guard));
            r.guard = std::move(neg);
            break;
        }
        case Mutation::Kind::DropStatement: {
            Rule& r = m.rules.at(mu.rule);
            if (mu.stmt >= r.body.size())
                throw std::out_of_range("statement index out of range");
            r.body.erase(r.body.begin() + mu.stmt);
            break;
        }
        case Mutation::Kind::SwapOutput: {
            Rule& r = m.rules.at(mu.rule);
            r.body.push_back(make_assign(Term::Kind::OutType, mu.xr, Plane::None));
            r.body.push_back(make_assign(Term::Kind::OutPlane, XRay::Standby, mu.pl));
            break;
        }
        case Mutation::Kind::StuckOutput:
            for (Rule& r : m.rules) {
                r.body.push_back(
                    make_assign(Term::Kind::OutType, XRay::Standby, Plane::None));
                r.body.push_back(
                    make_assign(Term::Kind::OutPlane, XRay::Standby, Plane::None));
            }
            break;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Session / adapter
// ---------------------------------------------------------------------------

Session::Session(PedalModel model)
    : model_(std::move(model)), mi_(model_), state_(initial_state(mi_)) {}

void Session::reset() { state_ = initial_state(mi_); }

std::optional<std::optional<Label>> Session::apply_input(const std::string& action) {
    auto it = mi_.rule_by_action.find(action);
    if (it == mi_.rule_by_action.end()) return std::nullopt;
    const Rule& r = model_.rules[it->second];
    if (!eval_guard(mi_, r.guard, state_))
        return std::optional<std::optional<Label>>{std::optional<Label>{}};
    state_ = eval_statements(mi_, r.body, state_);
    return std::optional<std::optional<Label>>{
        Label::make_output(state_.out_type, state_.out_plane)};
}

bool InProcessAdapter::reset(std::string& error) {
    (void)error;
    session_.reset();
    pending_.reset();
    return true;
}

bool InProcessAdapter::stimulate(const std::string& action, std::string& error) {
    auto r = session_.apply_input(action);
    if (!r) {
        error = "unknown action '" + action + "'";
        return false;
    }
    if (*r) pending_ = **r; // alternation: at most one unread output
    return true;
}

Observation InProcessAdapter::observe(int) {
    if (pending_) {
        Observation o{Observation::Kind::Output, *pending_, {}};
        pending_.reset();
        return o;
    }
    return {Observation::Kind::Quiescent, {}, {}};
}

// ---------------------------------------------------------------------------
// Serving
// ---------------------------------------------------------------------------

int serve_fd(const PedalModel& model, int read_fd, int write_fd) {
    auto transport = fd_transport(read_fd, write_fd);
    Session session(model);
    std::string line;
    for (;;) {
        switch (transport->read_line(line, -1)) {
        case Transport::ReadResult::Closed:
            return 0;
        case Transport::ReadResult::Timeout:
            continue;
        case Transport::ReadResult::Line:
            break;
        }
        if (line == "RESET") {
            session.reset();
            if (!transport->write_line("READY")) return 0;
            continue;
        }
        if (line.rfind("IN ", 0) == 0) {
            std::string action = line.substr(3);
            auto r = session.apply_input(action);
            if (!r) return 2; // protocol violation: undeclared action
            if (*r) {
                const Label& out = **r;
                if (!transport->write_line(std::string("OUT ") + to_string(out.xr) +
                                           " " + to_string(out.pl)))
                    return 0;
            }
            continue;
        }
        return 2; // protocol violation: unrecognized line
    }
}

int serve_tcp(const PedalModel& model, int port, std::string& error) {
    int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener < 0) {
        error = "socket failed";
        return 2;
    }
    int one = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
        ::listen(listener, 1) != 0) {
        error = "cannot listen on port " + std::to_string(port);
        ::close(listener);
        return 2;
    }
    int conn = ::accept(listener, nullptr, nullptr);
    ::close(listener);
    if (conn < 0) {
        error = "accept failed";
        return 2;
    }
    int conn2 = ::dup(conn);
    return serve_fd(model, conn, conn2);
}

// ---------------------------------------------------------------------------
// Mutant enumeration
// ---------------------------------------------------------------------------

std::vector<Mutation> mutants(const PedalModel& model, std::uint32_t max,
                              std::uint64_t seed, std::uint32_t filter_cap) {
    std::vector<Mutation> candidates;
    for (std::uint32_t r = 0; r < model.rules.size(); ++r) {
        candidates.push_back({Mutation::Kind::NegateGuard, r, 0, {}, {}});
        for (std::uint32_t s = 0; s < model.rules[r].body.size(); ++s)
            candidates.push_back({Mutation::Kind::DropStatement, r, s, {}, {}});
        static constexpr std::pair<XRay, Plane> kSwaps[] = {
            {XRay::Standby, Plane::None},
            {XRay::Fluo, Plane::FR},
            {XRay::SingleShot, Plane::LT},
            {XRay::Series, Plane::BI},
        };
        for (auto [x, p] : kSwaps)
            candidates.push_back({Mutation::Kind::SwapOutput, r, 0, x, p});
    }
    candidates.push_back({Mutation::Kind::StuckOutput, 0, 0, {}, {}});

    std::mt19937_64 rng(seed);
    for (std::size_t i = candidates.size(); i > 1; --i)
        std::swap(candidates[i - 1], candidates[rng() % i]);

    Lts original = explore(model, Engine::Direct, filter_cap);
    std::vector<Mutation> out;
    for (const Mutation& mu : candidates) {
        if (out.size() >= max) break;
        PedalModel mutated = apply_mutations(model, {mu});
        Lts lm = explore(mutated, Engine::Direct, filter_cap);
        if (!original.complete || !lm.complete) continue; // cannot certify change
        if (!strong_bisim_equal(original, lm).equivalent) out.push_back(mu);
    }
    return out;
}

} // namespace pedal
