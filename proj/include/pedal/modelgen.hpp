#pragma once

#include <cstdint>

#include "pedal/ast.hpp"

namespace pedal {

/// Synthetic load model: `n_toggles` always-enabled actions that flip one
/// boolean each (and steer the output registers), plus `n_noops` actions with
/// an empty do clause. Direct-engine state count grows as 2^(n_toggles+1).
PedalModel make_synthetic_model(std::uint32_t n_toggles, std::uint32_t n_noops);

} // namespace pedal
