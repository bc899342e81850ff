#pragma once

#include <cstddef>
#include <string>

// Batched inner loops of the Lifshitz integrand over transverse-wavevector
// nodes. Each entry has a scalar reference and, on x86-64, an AVX2/FMA
// variant chosen at runtime.
namespace casimir::kernels {

struct ModeSum {
  double sum = 0.0;
  double min_denominator = 1.0;  // smallest 1 - x seen over all terms
};

struct KernelSet {
  const char* name;
  // out[i] = sqrt(a + k2[i])
  void (*layer_kappa)(double a, const double* k2, double* out, std::size_t n);
  // Fresnel coefficients for the interface from medium 0 into medium 1.
  void (*interface_reflection)(const double* k0, const double* k1, double e0, double e1, double* rte,
                               double* rtm, std::size_t n);
  // r[i] <- (r01[i] + r[i] E) / (1 + r01[i] r[i] E), E = exp(-2 k1[i] t)
  void (*layer_recursion)(const double* r01, const double* k1, double t, double* r, std::size_t n);
  // sum_i w[i] kap[i] sum_p x/(1 - x), x = ra^p rb^p exp(-2 kap d)
  ModeSum (*mode_sum)(const double* w, const double* kap, const double* ra_te, const double* rb_te,
                      const double* ra_tm, const double* rb_tm, double d, std::size_t n);
  // out[i] = exp(x[i])
  void (*exp)(const double* x, double* out, std::size_t n);
};

const KernelSet& scalar_kernels();
// nullptr when not compiled in or not supported by this CPU.
const KernelSet* avx2_kernels();

// Selected once: AVX2 if available, unless CASIMIR_SIMD=scalar is set.
const KernelSet& active_kernels();

}  // namespace casimir::kernels
