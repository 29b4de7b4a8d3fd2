#include "pedal/lts.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pedal {

namespace {

Lts explore_impl(const PedalModel& model, Engine engine, std::uint32_t max_states,
                 bool parallel) {
    ModelIndex mi(model);
    if (max_states == 0) max_states = 1;

    Lts l;
    SemState init; // AwaitingInput(initial valuation)
    init.state = initial_state(mi);

    std::unordered_map<SemState, std::uint32_t, SemStateHash> index;
    index.emplace(init, 0);
    l.state_map.push_back(init);
    l.n_states = 1;

    std::vector<std::uint32_t> frontier{0};
    bool truncated = false;

    while (!frontier.empty()) {
        // Successor computation is the data-parallel kernel; the merge below
        // stays serial so state numbering is identical to explore_serial.
        std::vector<std::vector<std::pair<Label, SemState>>> succs(frontier.size());
        if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(frontier.size()); ++i)
                succs[i] = successors(mi, engine, l.state_map[frontier[i]]);
        } else {
            for (std::size_t i = 0; i < frontier.size(); ++i)
                succs[i] = successors(mi, engine, l.state_map[frontier[i]]);
        }

        std::vector<std::uint32_t> next;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            std::uint32_t src = frontier[i];
            for (auto& [label, q] : succs[i]) {
                auto it = index.find(q);
                std::uint32_t dst;
                if (it != index.end()) {
                    dst = it->second;
                } else if (l.n_states < max_states) {
                    dst = l.n_states++;
                    index.emplace(q, dst);
                    l.state_map.push_back(q);
                    next.push_back(dst);
                } else {
                    truncated = true;
                    continue; // transition into the unexplored region is dropped
                }
                l.transitions.push_back({src, label, dst});
            }
        }
        frontier = std::move(next);
    }

    l.complete = !truncated;
    return l;
}

} // namespace

Lts explore(const PedalModel& model, Engine engine, std::uint32_t max_states) {
    return explore_impl(model, engine, max_states, true);
}

Lts explore_serial(const PedalModel& model, Engine engine, std::uint32_t max_states) {
    return explore_impl(model, engine, max_states, false);
}

std::string export_aut(const Lts& l) {
    std::ostringstream os;
    os << "des (" << l.initial << "," << l.transitions.size() << "," << l.n_states
       << ")\n";
    for (const Transition& t : l.transitions)
        os << "(" << t.src << ",\"" << t.label.text() << "\"," << t.dst << ")\n";
    return os.str();
}

namespace {

[[noreturn]] void aut_fail(int line, const std::string& msg) {
    throw LtsError("AUT_PARSE_ERROR", "line " + std::to_string(line) + ": " + msg);
}

} // namespace

Lts import_aut(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_line()) aut_fail(1, "missing 'des' header");
    Lts l;
    std::uint64_t ntrans = 0, nstates = 0, init = 0;
    {
        std::istringstream h(line);
        std::string kw;
        char c;
        h >> kw;
        if (kw != "des") aut_fail(lineno, "expected 'des'");
        h >> c;
        if (c != '(') aut_fail(lineno, "expected '('");
        if (!(h >> init >> c) || c != ',') aut_fail(lineno, "malformed header");
        if (!(h >> ntrans >> c) || c != ',') aut_fail(lineno, "malformed header");
        if (!(h >> nstates >> c) || c != ')') aut_fail(lineno, "malformed header");
        if (nstates == 0) aut_fail(lineno, "state count must be positive");
        if (init >= nstates) aut_fail(lineno, "initial state out of range");
    }
    l.n_states = static_cast<std::uint32_t>(nstates);
    l.initial = static_cast<std::uint32_t>(init);

    std::set<std::tuple<std::uint32_t, std::string, std::uint32_t>> seen;
    while (next_line()) {
        std::string s = line;
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
        if (s.empty() || s.front() != '(' || s.back() != ')')
            aut_fail(lineno, "malformed transition line");
        s = s.substr(1, s.size() - 2);
        size_t q1 = s.find('"');
        size_t q2 = s.rfind('"');
        if (q1 == std::string::npos || q2 == q1)
            aut_fail(lineno, "missing quoted label");
        std::string src_part = s.substr(0, q1);
        std::string label_text = s.substr(q1 + 1, q2 - q1 - 1);
        std::string dst_part = s.substr(q2 + 1);
        if (src_part.empty() || src_part.back() != ',' || dst_part.empty() ||
            dst_part.front() != ',')
            aut_fail(lineno, "malformed transition line");
        src_part.pop_back();
        dst_part.erase(dst_part.begin());
        std::uint64_t src, dst;
        try {
            size_t used;
            src = std::stoull(src_part, &used);
            if (used != src_part.size()) throw std::invalid_argument("");
            dst = std::stoull(dst_part, &used);
            if (used != dst_part.size()) throw std::invalid_argument("");
        } catch (...) {
            aut_fail(lineno, "malformed state index");
        }
        if (src >= l.n_states || dst >= l.n_states)
            aut_fail(lineno, "state index out of range");
        auto label = Label::from_text(label_text);
        if (!label) aut_fail(lineno, "unparsable label '" + label_text + "'");
        if (!seen.emplace(static_cast<std::uint32_t>(src), label_text,
                          static_cast<std::uint32_t>(dst))
                 .second)
            aut_fail(lineno, "duplicate transition");
        l.transitions.push_back({static_cast<std::uint32_t>(src), *label,
                                 static_cast<std::uint32_t>(dst)});
    }
    if (l.transitions.size() != ntrans)
        aut_fail(lineno, "transition count does not match header");
    return l;
}

std::string export_dot(const Lts& l) {
    std::ostringstream os;
    os << "digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n";
    os << "  " << l.initial << " [shape=doublecircle];\n";
    for (const Transition& t : l.transitions) {
        os << "  " << t.src << " -> " << t.dst << " [label=\"" << t.label.text()
           << "\"";
        if (t.label.kind == Label::Kind::Tau) os << ", style=dashed";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::vector<std::uint32_t> deadlocks(const Lts& l) {
    if (!l.complete)
        throw LtsError("REQUIRES_COMPLETE_LTS",
                       "deadlock detection needs a fully explored state space");
    std::vector<std::uint8_t> has_out(l.n_states, 0);
    for (const Transition& t : l.transitions) has_out[t.src] = 1;
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < l.n_states; ++i)
        if (!has_out[i]) out.push_back(i);
    return out;
}

} // namespace pedal
