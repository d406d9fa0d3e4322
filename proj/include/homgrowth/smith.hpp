#pragma once

#include <cstdint>
#include <vector>

#include "homgrowth/sparse.hpp"

namespace homgrowth {

// Invariant factors d_1 | d_2 | ... | d_r (nonzero, positive) of m.
// Dense algorithm with smallest-entry pivoting; intermediate values use
// arbitrary precision, so there is no coefficient-explosion failure mode.
// Inputs with rows*cols > 10^7 are rejected.
std::vector<std::int64_t> smith_normal_form(const SparseIntMatrix& m);

}  // namespace homgrowth
