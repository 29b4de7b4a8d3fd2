// pedalwb - workbench for the pedal-handling controller DSL:
// parsing, state-space exploration, equivalence checking, safety
// verification, ioco model-based testing, and a reference SUT server.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pedal/equiv.hpp"
#include "pedal/lts.hpp"
#include "pedal/mbt.hpp"
#include "pedal/parser.hpp"
#include "pedal/refimpl.hpp"
#include "pedal/verify.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return out.good();
}

int result_line(const std::string& verdict, int code) {
    std::cout << "RESULT: " << verdict << std::endl;
    return code;
}

/// Loads, parses, and validates a model file; prints diagnostics on failure.
std::optional<pedal::PedalModel> load_model(const std::string& path) {
    std::string text;
    if (!read_file(path, text)) {
        std::cerr << "cannot read '" << path << "'\n";
        return std::nullopt;
    }
    pedal::ParseResult res = pedal::parse(text);
    for (const auto& d : res.diagnostics) std::cout << d.render(path) << "\n";
    if (!res.ok()) return std::nullopt;
    return res.model;
}

pedal::Engine engine_from(const std::string& s) {
    return s == "tau" ? pedal::Engine::Tau : pedal::Engine::Direct;
}

json labels_json(const std::vector<pedal::Label>& ls) {
    json a = json::array();
    for (const auto& l : ls) a.push_back(l.text());
    return a;
}

int cmd_check(const std::string& file) {
    std::string text;
    if (!read_file(file, text)) {
        std::cerr << "cannot read '" << file << "'\n";
        return result_line("error", kExitUsage);
    }
    pedal::ParseResult res = pedal::parse(text);
    for (const auto& d : res.diagnostics) std::cout << d.render(file) << "\n";
    if (!res.ok()) return result_line("invalid", kExitViolation);
    const auto& m = *res.model;
    std::cout << m.input_actions.size() << " action(s), " << m.bool_vars.size()
              << " boolean(s), " << m.plane_vars.size() << " plane(s), "
              << m.rules.size() << " rule(s)\n";
    return result_line("ok", kExitOk);
}

int cmd_explore(const std::string& file, const std::string& engine,
                const std::string& out, const std::string& dot, std::uint32_t max,
                bool serial) {
    auto model = load_model(file);
    if (!model) return result_line("error", kExitUsage);
    pedal::Lts l = serial ? pedal::explore_serial(*model, engine_from(engine), max)
                          : pedal::explore(*model, engine_from(engine), max);
    std::cout << l.n_states << " state(s), " << l.transitions.size()
              << " transition(s)\n";
    if (!out.empty() && !write_file(out, pedal::export_aut(l))) {
        std::cerr << "cannot write '" << out << "'\n";
        return result_line("error", kExitUsage);
    }
    if (!dot.empty() && !write_file(dot, pedal::export_dot(l))) {
        std::cerr << "cannot write '" << dot << "'\n";
        return result_line("error", kExitUsage);
    }
    if (!l.complete) {
        std::cerr << "STATE_LIMIT_EXCEEDED: exploration truncated at " << max
                  << " states\n";
        return result_line("truncated", kExitViolation);
    }
    return result_line("complete", kExitOk);
}

int cmd_equiv(const std::string& a, const std::string& b, const std::string& relation,
              bool as_json) {
    std::string ta, tb;
    if (!read_file(a, ta) || !read_file(b, tb)) {
        std::cerr << "cannot read input files\n";
        return result_line("error", kExitUsage);
    }
    pedal::Lts la, lb;
    try {
        la = pedal::import_aut(ta);
        lb = pedal::import_aut(tb);
    } catch (const pedal::LtsError& e) {
        std::cerr << e.what() << "\n";
        return result_line("error", kExitUsage);
    }
    pedal::Relation rel =
        relation == "strong" ? pedal::Relation::Strong : pedal::Relation::Branching;
    pedal::EquivResult res = pedal::bisim_equal(la, lb, rel);
    if (as_json) {
        json j{{"relation", relation},
               {"equivalent", res.equivalent},
               {"detail", res.detail},
               {"distinguishing_trace", labels_json(res.distinguishing)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << res.detail << "\n";
    }
    return res.equivalent ? result_line("equivalent", kExitOk)
                          : result_line("inequivalent", kExitViolation);
}

int cmd_verify(const std::string& file, const std::string& props,
               const std::string& engine, std::uint32_t max, bool as_json) {
    auto model = load_model(file);
    if (!model) return result_line("error", kExitUsage);
    std::string ptext;
    if (!read_file(props, ptext)) {
        std::cerr << "cannot read '" << props << "'\n";
        return result_line("error", kExitUsage);
    }
    pedal::PropertyParseResult parsed = pedal::parse_properties(ptext, *model);
    for (const auto& d : parsed.diagnostics) std::cout << d.render(props) << "\n";
    if (!parsed.diagnostics.empty()) return result_line("error", kExitUsage);

    pedal::Lts l = pedal::explore(*model, engine_from(engine), max);
    if (!l.complete) {
        std::cerr << "STATE_LIMIT_EXCEEDED: cannot verify a truncated state space\n";
        return result_line("error", kExitUsage);
    }

    bool all_hold = true;
    json report = json::array();
    for (const auto& p : parsed.properties) {
        pedal::CheckResult r = pedal::check(*model, l, p);
        all_hold = all_hold && r.holds;
        if (as_json) {
            report.push_back({{"property", p.source_text},
                              {"holds", r.holds},
                              {"detail", r.detail},
                              {"counterexample", labels_json(r.trace)}});
        } else {
            std::cout << (r.holds ? "holds:    " : "VIOLATED: ") << p.source_text
                      << "\n";
            if (!r.holds) {
                std::cout << "  " << r.detail << "\n  trace:";
                for (const auto& lab : r.trace) std::cout << " " << lab.text();
                std::cout << "\n";
            }
        }
    }
    if (as_json) std::cout << report.dump(2) << "\n";
    return all_hold ? result_line("holds", kExitOk)
                    : result_line("violated", kExitViolation);
}

int cmd_mbt_gen(const std::string& file, std::uint32_t depth, std::uint32_t count,
                std::uint64_t seed) {
    auto model = load_model(file);
    if (!model) return result_line("error", kExitUsage);
    auto tests = pedal::gen_tests(*model, depth, count, seed);
    for (std::size_t i = 0; i < tests.size(); ++i) {
        std::cout << "# test " << i << "\n" << pedal::to_string(*tests[i]);
    }
    return result_line("generated " + std::to_string(tests.size()), kExitOk);
}

int cmd_mbt_run(const std::string& file, const std::string& connect,
                const std::string& spawn, std::uint32_t steps, std::uint64_t seed,
                int timeout_ms, bool as_json) {
    auto model = load_model(file);
    if (!model) return result_line("error", kExitUsage);

    std::unique_ptr<pedal::Transport> transport;
    std::string error;
    if (!connect.empty()) {
        auto colon = connect.rfind(':');
        if (colon == std::string::npos) {
            std::cerr << "--connect expects host:port\n";
            return result_line("error", kExitUsage);
        }
        transport = pedal::connect_tcp(connect.substr(0, colon),
                                       std::stoi(connect.substr(colon + 1)), error);
    } else if (!spawn.empty()) {
        transport = pedal::spawn_process(spawn, error);
    } else {
        std::cerr << "one of --connect or --spawn is required\n";
        return result_line("error", kExitUsage);
    }
    if (!transport) {
        std::cerr << error << "\n";
        return result_line("error", kExitUsage);
    }

    pedal::LineAdapter adapter(std::move(transport));
    pedal::MbtOptions opts;
    opts.max_steps = steps;
    opts.seed = seed;
    opts.observe_timeout_ms = timeout_ms;
    pedal::Verdict v = pedal::run_online(*model, adapter, opts);

    if (as_json) {
        const char* kind = v.kind == pedal::Verdict::Kind::Pass        ? "pass"
                           : v.kind == pedal::Verdict::Kind::Fail      ? "fail"
                                                                       : "adapter-error";
        json j{{"verdict", kind},
               {"detail", v.detail},
               {"trace", labels_json(v.evidence)}};
        if (v.kind == pedal::Verdict::Kind::Fail) {
            j["offending"] = v.offending.text();
            j["allowed"] = labels_json(v.allowed);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << v.detail << "\n";
    }
    switch (v.kind) {
    case pedal::Verdict::Kind::Pass: return result_line("pass", kExitOk);
    case pedal::Verdict::Kind::Fail: return result_line("fail", kExitViolation);
    default: return result_line("adapter-error", kExitUsage);
    }
}

int cmd_serve(const std::string& file, const std::vector<std::string>& mutate,
              bool stdio, int port) {
    auto model = load_model(file);
    if (!model) return kExitUsage;
    std::vector<pedal::Mutation> muts;
    for (const auto& spec : mutate) {
        std::string error;
        auto mu = pedal::Mutation::parse_spec(spec, *model, error);
        if (!mu) {
            std::cerr << error << "\n";
            return kExitUsage;
        }
        muts.push_back(*mu);
    }
    pedal::PedalModel mutated = pedal::apply_mutations(*model, muts);
    if (stdio) return pedal::serve_fd(mutated, 0, 1);
    std::string error;
    int rc = pedal::serve_tcp(mutated, port, error);
    if (!error.empty()) std::cerr << error << "\n";
    return rc;
}

int cmd_simulate(const std::string& file) {
    auto model = load_model(file);
    if (!model) return kExitUsage;
    pedal::ModelIndex mi(*model);
    pedal::SemState q;
    q.state = pedal::initial_state(mi);

    std::string line;
    for (;;) {
        std::cout << "state: " << pedal::describe_state(mi, q.state) << "\n";
        auto succs = pedal::successors_direct(mi, q);
        if (succs.empty()) {
            std::cout << "deadlock: no input is enabled\n";
            return result_line("deadlock", kExitOk);
        }
        std::cout << "enabled:";
        for (const auto& [label, next] : succs) std::cout << " " << label.text();
        std::cout << "\n> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        if (line == "quit") break;
        bool found = false;
        for (const auto& [label, next] : succs) {
            if (label.kind == pedal::Label::Kind::Input && label.input == line) {
                // One accepted input is immediately followed by its output.
                auto out = pedal::successors_direct(mi, next);
                std::cout << "  " << label.text() << " / " << out[0].first.text()
                          << "\n";
                q = out[0].second;
                found = true;
                break;
            }
        }
        if (!found) std::cout << "  input '" << line << "' is not enabled here\n";
    }
    return result_line("bye", kExitOk);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification workbench for the pedal-handling controller DSL"};
    app.require_subcommand(1);

    std::string model_file, out_file, dot_file, engine = "direct";
    std::string relation = "branching", props_file, connect, spawn;
    std::vector<std::string> mutate;
    std::uint32_t max_states = pedal::kDefaultMaxStates;
    std::uint32_t depth = 5, count = 10, steps = 200;
    std::uint64_t seed = 1;
    int timeout_ms = 500, port = 0;
    bool as_json = false, serial = false, stdio = false;
    std::string aut_a, aut_b;

    auto* check = app.add_subcommand("check", "parse and validate a model");
    check->add_option("model", model_file)->required();

    auto* explore = app.add_subcommand("explore", "generate the state space");
    explore->add_option("model", model_file)->required();
    explore->add_option("--engine", engine)->check(CLI::IsMember({"direct", "tau"}));
    explore->add_option("--out", out_file, "write Aldebaran .aut file");
    explore->add_option("--dot", dot_file, "write GraphViz .dot file");
    explore->add_option("--max", max_states, "state limit");
    explore->add_flag("--serial", serial, "use the serial reference explorer");

    auto* equiv = app.add_subcommand("equiv", "compare two .aut files");
    equiv->add_option("a", aut_a)->required();
    equiv->add_option("b", aut_b)->required();
    equiv->add_option("--relation", relation)
        ->check(CLI::IsMember({"strong", "branching"}));
    equiv->add_flag("--json", as_json);

    auto* verify = app.add_subcommand("verify", "check safety properties");
    verify->add_option("model", model_file)->required();
    verify->add_option("--props", props_file)->required();
    verify->add_option("--engine", engine)->check(CLI::IsMember({"direct", "tau"}));
    verify->add_option("--max", max_states);
    verify->add_flag("--json", as_json);

    auto* mbt = app.add_subcommand("mbt", "model-based conformance testing");
    mbt->require_subcommand(1);
    auto* gen = mbt->add_subcommand("gen", "derive offline test cases");
    gen->add_option("model", model_file)->required();
    gen->add_option("--depth", depth);
    gen->add_option("--count", count);
    gen->add_option("--seed", seed);
    auto* run = mbt->add_subcommand("run", "test a running implementation online");
    run->add_option("model", model_file)->required();
    run->add_option("--connect", connect, "host:port of a serving SUT");
    run->add_option("--spawn", spawn, "shell command started as the SUT");
    run->add_option("--steps", steps);
    run->add_option("--seed", seed);
    run->add_option("--timeout", timeout_ms, "quiescence timeout in ms");
    run->add_flag("--json", as_json);

    auto* serve = app.add_subcommand("serve", "run the reference implementation");
    serve->add_option("model", model_file)->required();
    serve->add_option("--mutate", mutate, "fault to inject (repeatable)");
    serve->add_flag("--stdio", stdio, "speak the protocol on stdin/stdout");
    serve->add_option("--port", port, "listen on a TCP port");

    auto* simulate = app.add_subcommand("simulate", "interactive step-through");
    simulate->add_option("model", model_file)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(model_file);
        if (explore->parsed())
            return cmd_explore(model_file, engine, out_file, dot_file, max_states,
                               serial);
        if (equiv->parsed()) return cmd_equiv(aut_a, aut_b, relation, as_json);
        if (verify->parsed())
            return cmd_verify(model_file, props_file, engine, max_states, as_json);
        if (gen->parsed()) return cmd_mbt_gen(model_file, depth, count, seed);
        if (run->parsed())
            return cmd_mbt_run(model_file, connect, spawn, steps, seed, timeout_ms,
                               as_json);
        if (serve->parsed()) return cmd_serve(model_file, mutate, stdio, port);
        if (simulate->parsed()) return cmd_simulate(model_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
