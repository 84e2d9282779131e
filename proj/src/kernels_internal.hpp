#pragma once

#include "g2kit/kernels.hpp"

namespace g2kit::kernels::detail {

// Cyclic triples (i, j, k, sign) of phi0.
inline constexpr int kPhiTerms[7][4] = {
    {0, 1, 2, 1}, {0, 3, 4, 1}, {0, 5, 6, 1}, {1, 3, 5, 1}, {1, 4, 6, -1}, {2, 3, 6, -1}, {2, 4, 5, -1},
};

const KernelTable& avx2_table();

}  // namespace g2kit::kernels::detail
