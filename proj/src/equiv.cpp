#include "pedal/equiv.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace pedal {

namespace {

/// Adjacency with interned label ids; tau_id is -1 when no tau occurs.
struct Graph {
    std::uint32_t n = 0;
    std::vector<std::vector<std::pair<int, std::uint32_t>>> out; // (label, dst)
    std::vector<Label> labels;
    int tau_id = -1;

    int intern(std::map<Label, int>& ids, const Label& l) {
        auto [it, inserted] = ids.emplace(l, static_cast<int>(labels.size()));
        if (inserted) {
            labels.push_back(l);
            if (l.kind == Label::Kind::Tau) tau_id = it->second;
        }
        return it->second;
    }

    void add(std::map<Label, int>& ids, const Lts& l, std::uint32_t offset) {
        for (const Transition& t : l.transitions)
            out[offset + t.src].emplace_back(intern(ids, t.label), offset + t.dst);
    }
};

Graph build_graph(const Lts& l1, const Lts* l2) {
    Graph g;
    g.n = l1.n_states + (l2 ? l2->n_states : 0);
    g.out.resize(g.n);
    std::map<Label, int> ids;
    g.add(ids, l1, 0);
    if (l2) g.add(ids, *l2, l1.n_states);
    return g;
}

using Sig = std::vector<std::pair<int, std::uint32_t>>; // sorted unique moves

Sig strong_signature(const Graph& g, const std::vector<std::uint32_t>& block,
                     std::uint32_t s) {
    Sig sig;
    sig.reserve(g.out[s].size());
    for (auto [a, t] : g.out[s]) sig.emplace_back(a, block[t]);
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
}

// Visible moves reachable through inert tau steps (tau steps that stay in the
// state's own block). An inert tau move itself is not part of the signature.
Sig branching_signature(const Graph& g, const std::vector<std::uint32_t>& block,
                        std::uint32_t s) {
    Sig sig;
    std::vector<std::uint32_t> stack{s};
    std::set<std::uint32_t> visited{s};
    std::uint32_t b = block[s];
    while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        for (auto [a, t] : g.out[u]) {
            if (a == g.tau_id && block[t] == b) {
                if (visited.insert(t).second) stack.push_back(t);
            } else {
                sig.emplace_back(a, block[t]);
            }
        }
    }
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
}

struct RefineTrace {
    std::vector<std::vector<std::uint32_t>> rounds; // rounds[0] = all-zero
};

Partition refine_graph(const Graph& g, Relation rel, RefineTrace* trace) {
    std::vector<std::uint32_t> block(g.n, 0);
    std::uint32_t n_blocks = g.n == 0 ? 0 : 1;
    if (trace) trace->rounds.push_back(block);

    for (;;) {
        std::vector<Sig> sigs(g.n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 256)
#endif
        for (std::int64_t s = 0; s < static_cast<std::int64_t>(g.n); ++s)
            sigs[s] = rel == Relation::Strong
                          ? strong_signature(g, block, static_cast<std::uint32_t>(s))
                          : branching_signature(g, block, static_cast<std::uint32_t>(s));

        // Old block is part of the key, so the partition only ever splits.
        std::map<std::pair<std::uint32_t, Sig>, std::uint32_t> ids;
        std::vector<std::uint32_t> next(g.n);
        for (std::uint32_t s = 0; s < g.n; ++s) {
            auto key = std::make_pair(block[s], sigs[s]);
            auto [it, inserted] =
                ids.emplace(std::move(key), static_cast<std::uint32_t>(ids.size()));
            next[s] = it->second;
        }
        // Renumber by first occurrence for determinism.
        std::vector<std::uint32_t> remap(ids.size(), UINT32_MAX);
        std::uint32_t fresh = 0;
        for (std::uint32_t s = 0; s < g.n; ++s) {
            if (remap[next[s]] == UINT32_MAX) remap[next[s]] = fresh++;
            next[s] = remap[next[s]];
        }
        if (fresh == n_blocks) break;
        block = std::move(next);
        n_blocks = fresh;
        if (trace) trace->rounds.push_back(block);
    }
    return Partition{std::move(block), n_blocks};
}

// Distinguishing label sequence for strongly inequivalent states, derived
// from the refinement rounds. Replay is genuinely divergent on deterministic
// LTSs; with nondeterminism it is a best-effort witness.
std::vector<Label> distinguishing_trace(const Graph& g, const RefineTrace& tr,
                                        std::uint32_t s, std::uint32_t t) {
    auto level = [&](std::uint32_t a, std::uint32_t b) -> std::size_t {
        for (std::size_t r = 0; r < tr.rounds.size(); ++r)
            if (tr.rounds[r][a] != tr.rounds[r][b]) return r;
        return 0; // equivalent; caller must not ask
    };

    std::vector<Label> out;
    for (;;) {
        std::size_t r = level(s, t);
        if (r == 0) break;
        const auto& prev = tr.rounds[r - 1];
        bool advanced = false;
        for (int dir = 0; dir < 2 && !advanced; ++dir) {
            std::uint32_t u = dir == 0 ? s : t;
            std::uint32_t v = dir == 0 ? t : s;
            for (auto [a, u2] : g.out[u]) {
                bool matched = false;
                std::uint32_t v2_pick = 0;
                bool has_label = false;
                for (auto [b, v2] : g.out[v]) {
                    if (b != a) continue;
                    has_label = true;
                    v2_pick = v2;
                    if (prev[v2] == prev[u2]) {
                        matched = true;
                        break;
                    }
                }
                if (matched) continue;
                out.push_back(g.labels[a]);
                if (!has_label) return out; // label enabled on one side only
                s = u2;
                t = v2_pick;
                advanced = true;
                break;
            }
        }
        if (!advanced) break; // defensive; signatures guarantee progress
    }
    return out;
}

} // namespace

Partition refine(const Lts& l, Relation rel) {
    Graph g = build_graph(l, nullptr);
    return refine_graph(g, rel, nullptr);
}

EquivResult strong_bisim_equal(const Lts& l1, const Lts& l2) {
    Graph g = build_graph(l1, &l2);
    RefineTrace tr;
    Partition p = refine_graph(g, Relation::Strong, &tr);
    std::uint32_t i1 = l1.initial, i2 = l1.n_states + l2.initial;
    EquivResult res;
    res.equivalent = p.block_of[i1] == p.block_of[i2];
    if (res.equivalent) {
        res.detail = "initial states are strongly bisimilar";
    } else {
        res.distinguishing = distinguishing_trace(g, tr, i1, i2);
        std::string trace;
        for (const Label& l : res.distinguishing) {
            if (!trace.empty()) trace += ' ';
            trace += l.text();
        }
        res.detail = "not strongly bisimilar; distinguishing trace: " + trace;
    }
    return res;
}

EquivResult branching_bisim_equal(const Lts& l1, const Lts& l2) {
    Graph g = build_graph(l1, &l2);
    Partition p = refine_graph(g, Relation::Branching, nullptr);
    std::uint32_t i1 = l1.initial, i2 = l1.n_states + l2.initial;
    EquivResult res;
    res.equivalent = p.block_of[i1] == p.block_of[i2];
    res.detail = res.equivalent
                     ? "initial states are branching bisimilar"
                     : "initial states end up in different blocks of the "
                       "branching-bisimulation partition";
    return res;
}

Lts minimize(const Lts& l, Relation rel) {
    Graph g = build_graph(l, nullptr);
    Partition p = refine_graph(g, rel, nullptr);

    // Canonical block numbering: order by smallest member.
    std::vector<std::uint32_t> smallest(p.n_blocks, UINT32_MAX);
    for (std::uint32_t s = 0; s < l.n_states; ++s)
        smallest[p.block_of[s]] = std::min(smallest[p.block_of[s]], s);
    std::vector<std::uint32_t> order(p.n_blocks);
    for (std::uint32_t b = 0; b < p.n_blocks; ++b) order[b] = b;
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return smallest[a] < smallest[b]; });
    std::vector<std::uint32_t> renum(p.n_blocks);
    for (std::uint32_t i = 0; i < p.n_blocks; ++i) renum[order[i]] = i;

    std::set<std::tuple<std::uint32_t, Label, std::uint32_t>> edges;
    for (const Transition& t : l.transitions) {
        std::uint32_t bs = renum[p.block_of[t.src]];
        std::uint32_t bd = renum[p.block_of[t.dst]];
        if (rel == Relation::Branching && t.label.kind == Label::Kind::Tau && bs == bd)
            continue; // inert in the quotient
        edges.emplace(bs, t.label, bd);
    }

    Lts out;
    out.n_states = p.n_blocks;
    out.initial = renum[p.block_of[l.initial]];
    out.complete = l.complete;
    for (const auto& [s, lab, d] : edges) out.transitions.push_back({s, lab, d});
    return out;
}

} // namespace pedal
