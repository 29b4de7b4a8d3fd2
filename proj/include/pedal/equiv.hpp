#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pedal/lts.hpp"

namespace pedal {

enum class Relation : std::uint8_t { Strong, Branching };

/// Block assignment over a state set; refinement only ever splits blocks.
struct Partition {
    std::vector<std::uint32_t> block_of;
    std::uint32_t n_blocks = 0;
};

/// Signature-based partition refinement to fixpoint over one LTS.
Partition refine(const Lts& l, Relation rel);

struct EquivResult {
    bool equivalent = false;
    /// For strong inequivalence: a label sequence whose replay exhibits the
    /// divergence (meaningful for deterministic LTSs, which both engines
    /// produce). Empty when equivalent or not computed.
    std::vector<Label> distinguishing;
    std::string detail;
};

/// True iff the initial states are strongly bisimilar; decided by refining
/// the disjoint union of the two systems.
EquivResult strong_bisim_equal(const Lts& l1, const Lts& l2);

/// Branching bisimilarity (divergence-blind) of the initial states.
EquivResult branching_bisim_equal(const Lts& l1, const Lts& l2);

inline EquivResult bisim_equal(const Lts& l1, const Lts& l2, Relation rel) {
    return rel == Relation::Strong ? strong_bisim_equal(l1, l2)
                                   : branching_bisim_equal(l1, l2);
}

/// Quotient under the chosen relation. Inert tau self-steps vanish in the
/// branching quotient. Idempotent; blocks renumbered by smallest member so
/// the result is canonical.
Lts minimize(const Lts& l, Relation rel);

} // namespace pedal
