#pragma once

#include <cstdint>
#include <vector>

#include "srnorder/feasibility.hpp"

namespace oracle {

/// Feasibility of D alpha = b under per-variable sign constraints, decided by
/// Fourier-Motzkin elimination over 64-bit integers. Intended for small
/// integer instances; throws std::overflow_error if coefficients grow too large.
bool fm_feasible(const std::vector<std::vector<std::int64_t>>& d, const std::vector<std::int64_t>& b,
                 const std::vector<srnorder::Sign>& signs);

}  // namespace oracle
