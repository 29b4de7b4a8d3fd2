#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/socket.h>

#include <random>
#include <thread>

#include "fixtures.hpp"
#include "pedal/equiv.hpp"
#include "pedal/refimpl.hpp"

using namespace pedal;

TEST_CASE("session agrees with the direct semantics on random input sequences") {
    std::mt19937_64 rng(8080);
    for (int trial = 0; trial < 20; ++trial) {
        PedalModel m = trial == 0 ? fixtures::frfluo() : fixtures::random_model(rng);
        ModelIndex mi(m);
        Session session(m);
        SemState q{SemState::Phase::AwaitingInput, initial_state(mi)};

        for (int step = 0; step < 100; ++step) {
            const std::string& action = m.input_actions[rng() % m.input_actions.size()];
            auto r = session.apply_input(action);
            REQUIRE(r.has_value()); // declared action, never a protocol error

            const Rule& rule = m.rules[mi.rule_by_action.at(action)];
            if (!eval_guard(mi, rule.guard, q.state)) {
                CHECK(!r->has_value()); // ignored silently
                continue;
            }
            // the engine's input step followed by its unique output step
            auto in_succ = successors_direct(mi, q);
            const SemState* mid = nullptr;
            for (const auto& [l, q2] : in_succ)
                if (l == Label::make_input(action)) mid = &q2;
            REQUIRE(mid != nullptr);
            auto out_succ = successors_direct(mi, *mid);
            REQUIRE(out_succ.size() == 1);

            REQUIRE(r->has_value());
            CHECK(**r == out_succ[0].first);
            q = out_succ[0].second;
            CHECK(session.current() == q.state);
        }
    }
}

TEST_CASE("unknown actions are a session-level protocol violation") {
    Session s(fixtures::frfluo());
    CHECK(!s.apply_input("NoSuchAction").has_value());
}

TEST_CASE("mutation specs round trip through their text form") {
    PedalModel m = fixtures::frfluo();
    std::vector<Mutation> muts = {
        {Mutation::Kind::NegateGuard, 2, 0, {}, {}},
        {Mutation::Kind::DropStatement, 0, 1, {}, {}},
        {Mutation::Kind::SwapOutput, 3, 0, XRay::Series, Plane::BI},
        {Mutation::Kind::StuckOutput, 0, 0, {}, {}},
    };
    for (const auto& mut : muts) {
        std::string err;
        auto back = Mutation::parse_spec(mut.spec_text(m), m, err);
        REQUIRE(back.has_value());
        CHECK(back->kind == mut.kind);
        CHECK(back->rule == mut.rule);
        CHECK(back->stmt == mut.stmt);
        CHECK(back->xr == mut.xr);
        CHECK(back->pl == mut.pl);
    }
    std::string err;
    CHECK(!Mutation::parse_spec("negate:NoSuchRule", m, err).has_value());
    CHECK(!err.empty());
}

TEST_CASE("mutations change the model as advertised") {
    PedalModel m = fixtures::frfluo();
    ModelIndex mi(m);
    State s0 = initial_state(mi);

    PedalModel neg = apply_mutations(m, {{Mutation::Kind::NegateGuard, 0, 0, {}, {}}});
    ModelIndex nmi(neg);
    CHECK(eval_guard(mi, m.rules[0].guard, s0));
    CHECK(!eval_guard(nmi, neg.rules[0].guard, s0));

    PedalModel dropped =
        apply_mutations(m, {{Mutation::Kind::DropStatement, 0, 2, {}, {}}});
    CHECK(dropped.rules[0].body.size() == m.rules[0].body.size() - 1);

    PedalModel swapped = apply_mutations(
        m, {{Mutation::Kind::SwapOutput, 0, 0, XRay::Series, Plane::BI}});
    ModelIndex smi(swapped);
    State after = eval_statements(smi, swapped.rules[0].body, s0);
    CHECK(after.out_type == XRay::Series);
    CHECK(after.out_plane == Plane::BI);

    CHECK_THROWS_AS(apply_mutations(m, {{Mutation::Kind::NegateGuard, 99, 0, {}, {}}}),
                    std::out_of_range);
}

TEST_CASE("enumerated mutants are behaviorally distinct from the original") {
    PedalModel m = fixtures::frfluo();
    std::vector<Mutation> muts = mutants(m, 10, 5);
    CHECK(muts.size() == 10);
    Lts original = explore(m, Engine::Direct);
    for (const auto& mut : muts) {
        Lts mutated = explore(apply_mutations(m, {mut}), Engine::Direct);
        CHECK(!strong_bisim_equal(original, mutated).equivalent);
    }

    // determinism in the seed
    std::vector<Mutation> again = mutants(m, 10, 5);
    REQUIRE(again.size() == muts.size());
    for (std::size_t i = 0; i < muts.size(); ++i)
        CHECK(again[i].spec_text(m) == muts[i].spec_text(m));
}

TEST_CASE("server speaks the exact protocol grammar") {
    PedalModel m = fixtures::frfluo();
    int fds[2];
    REQUIRE(socketpair(AF_UNIX, SOCK_STREAM, 0, fds) == 0);
    int rc = -1;
    std::thread server([&] { rc = serve_fd(m, fds[1], fds[1]); });

    auto t = fd_transport(fds[0], fds[0]);
    std::string line;
    CHECK(t->write_line("RESET"));
    REQUIRE(t->read_line(line, 2000) == Transport::ReadResult::Line);
    CHECK(line == "READY");

    // a full request/response cycle, byte-exact
    CHECK(t->write_line("IN ResetStartCond"));
    REQUIRE(t->read_line(line, 2000) == Transport::ReadResult::Line);
    CHECK(line == "OUT Standby None");

    // RESET mid-session returns to the initial state
    CHECK(t->write_line("RESET"));
    REQUIRE(t->read_line(line, 2000) == Transport::ReadResult::Line);
    CHECK(line == "READY");
    CHECK(t->write_line("IN FRFluoOn"));
    REQUIRE(t->read_line(line, 2000) == Transport::ReadResult::Line);
    CHECK(line == "OUT Fluo FR");

    t.reset();
    server.join();
    CHECK(rc == 0); // clean EOF shutdown
}

TEST_CASE("server exits nonzero on protocol violations") {
    PedalModel m = fixtures::frfluo();
    int fds[2];
    REQUIRE(socketpair(AF_UNIX, SOCK_STREAM, 0, fds) == 0);
    int rc = -1;
    std::thread server([&] { rc = serve_fd(m, fds[1], fds[1]); });
    auto t = fd_transport(fds[0], fds[0]);
    CHECK(t->write_line("IN NoSuchAction"));
    server.join();
    CHECK(rc == 2);
    t.reset();
}
