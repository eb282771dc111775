#pragma once

#include "ramaniton/kernels.hpp"

namespace ramaniton::kernels::detail {

extern const KernelTable kScalarTable;
#ifdef RAMANITON_HAVE_AVX2_KERNELS
extern const KernelTable kAvx2Table;
#endif

}  // namespace ramaniton::kernels::detail
