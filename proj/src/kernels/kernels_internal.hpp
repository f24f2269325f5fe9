#pragma once

#include "sklevy/kernels/kernels.hpp"

namespace sklevy::kernels {

#if defined(SKLEVY_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(SKLEVY_HAVE_NEON)
const KernelTable& neon_table();
#endif

}  // namespace sklevy::kernels
