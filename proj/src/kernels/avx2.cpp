#if defined(__x86_64__) || defined(_M_X64)

#pragma GCC target("avx2,fma")

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "casimir/kernels.hpp"

namespace casimir::kernels {

namespace {

constexpr std::size_t W = 4;

// exp on [-708, 709]; below the range the result flushes to zero.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);
  __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, hi), lo);

  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  // Taylor series to degree 13; |r| <= ln2/2 keeps the truncation below 1 ulp.
  static const double c[] = {1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
                             1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
                             1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
                             1.0,                1.0};
  __m256d p = _mm256_set1_pd(c[0]);
  for (int k = 1; k < 14; ++k) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[k]));

  // 2^n by writing n + 1023 into the exponent field.
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52
  __m256i ni = _mm256_castpd_si256(_mm256_add_pd(n, magic));
  ni = _mm256_sub_epi64(ni, _mm256_castpd_si256(magic));
  ni = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  __m256d res = _mm256_mul_pd(p, _mm256_castsi256_pd(ni));
  return _mm256_blendv_pd(res, _mm256_setzero_pd(), under);
}

void layer_kappa(double a, const double* k2, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + W <= n; i += W)
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_add_pd(va, _mm256_loadu_pd(k2 + i))));
  for (; i < n; ++i) out[i] = std::sqrt(a + k2[i]);
}

void interface_reflection(const double* k0, const double* k1, double e0, double e1, double* rte,
                          double* rtm, std::size_t n) {
  const __m256d ve0 = _mm256_set1_pd(e0);
  const __m256d ve1 = _mm256_set1_pd(e1);
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    __m256d a = _mm256_loadu_pd(k0 + i);
    __m256d b = _mm256_loadu_pd(k1 + i);
    _mm256_storeu_pd(rte + i, _mm256_div_pd(_mm256_sub_pd(a, b), _mm256_add_pd(a, b)));
    __m256d ea = _mm256_mul_pd(ve1, a);
    __m256d eb = _mm256_mul_pd(ve0, b);
    _mm256_storeu_pd(rtm + i, _mm256_div_pd(_mm256_sub_pd(ea, eb), _mm256_add_pd(ea, eb)));
  }
  for (; i < n; ++i) {
    rte[i] = (k0[i] - k1[i]) / (k0[i] + k1[i]);
    rtm[i] = (e1 * k0[i] - e0 * k1[i]) / (e1 * k0[i] + e0 * k1[i]);
  }
}

void layer_recursion(const double* r01, const double* k1, double t, double* r, std::size_t n) {
  const __m256d m2t = _mm256_set1_pd(-2.0 * t);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    __m256d e = exp_pd(_mm256_mul_pd(m2t, _mm256_loadu_pd(k1 + i)));
    __m256d a = _mm256_loadu_pd(r01 + i);
    __m256d re = _mm256_mul_pd(_mm256_loadu_pd(r + i), e);
    __m256d num = _mm256_add_pd(a, re);
    __m256d den = _mm256_fmadd_pd(a, re, one);
    _mm256_storeu_pd(r + i, _mm256_div_pd(num, den));
  }
  for (; i < n; ++i) {
    double e = std::exp(-2.0 * k1[i] * t);
    double re = r[i] * e;
    r[i] = (r01[i] + re) / (1.0 + r01[i] * re);
  }
}

ModeSum mode_sum(const double* w, const double* kap, const double* ra_te, const double* rb_te,
                 const double* ra_tm, const double* rb_tm, double d, std::size_t n) {
  const __m256d m2d = _mm256_set1_pd(-2.0 * d);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  __m256d dmin = one;
  std::size_t i = 0;
  for (; i + W <= n; i += W) {
    __m256d k = _mm256_loadu_pd(kap + i);
    __m256d e = exp_pd(_mm256_mul_pd(m2d, k));
    __m256d xte = _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(ra_te + i), _mm256_loadu_pd(rb_te + i)), e);
    __m256d xtm = _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(ra_tm + i), _mm256_loadu_pd(rb_tm + i)), e);
    __m256d dte = _mm256_sub_pd(one, xte);
    __m256d dtm = _mm256_sub_pd(one, xtm);
    dmin = _mm256_min_pd(dmin, _mm256_min_pd(dte, dtm));
    __m256d s = _mm256_add_pd(_mm256_div_pd(xte, dte), _mm256_div_pd(xtm, dtm));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), k), s, acc);
  }
  alignas(32) double lanes[W], mins[W];
  _mm256_store_pd(lanes, acc);
  _mm256_store_pd(mins, dmin);
  ModeSum out;
  out.sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  out.min_denominator = std::min(std::min(mins[0], mins[1]), std::min(mins[2], mins[3]));
  for (; i < n; ++i) {
    double e = std::exp(-2.0 * kap[i] * d);
    double xte = ra_te[i] * rb_te[i] * e;
    double xtm = ra_tm[i] * rb_tm[i] * e;
    double dte = 1.0 - xte;
    double dtm = 1.0 - xtm;
    out.min_denominator = std::min(out.min_denominator, std::min(dte, dtm));
    out.sum += w[i] * kap[i] * (xte / dte + xtm / dtm);
  }
  return out;
}

void vexp(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + W <= n; i += W) _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

}  // namespace

extern const KernelSet kAvx2Kernels;
const KernelSet kAvx2Kernels{"avx2", layer_kappa, interface_reflection, layer_recursion, mode_sum, vexp};

}  // namespace casimir::kernels

#endif
