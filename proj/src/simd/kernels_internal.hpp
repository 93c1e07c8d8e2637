#pragma once

#include "vpmc/simd.hpp"

namespace vpmc::simd::detail {

// Defined in the per-ISA translation units.
extern const KernelTable kScalarTable;
#if defined(VPMC_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(VPMC_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif

}  // namespace vpmc::simd::detail
