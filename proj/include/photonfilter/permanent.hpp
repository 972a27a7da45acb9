#pragma once

#include "photonfilter/types.hpp"

namespace pf {

// Matrix permanent via Ryser's inclusion-exclusion with Gray-code column
// updates, O(2^k k). perm of the 0x0 matrix is 1. Throws on non-square input.
Complex permanent(const Matrix& m);

}  // namespace pf
