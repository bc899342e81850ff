#include <cstdlib>
#include <cstring>

#include "casimir/kernels.hpp"

namespace casimir::kernels {

#if defined(__x86_64__) || defined(_M_X64)
extern const KernelSet kAvx2Kernels;
#endif

const KernelSet* avx2_kernels() {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &kAvx2Kernels : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active_kernels() {
  static const KernelSet* chosen = [] {
    const char* env = std::getenv("CASIMIR_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    const KernelSet* v = avx2_kernels();
    return v ? v : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace casimir::kernels
