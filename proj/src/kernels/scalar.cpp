#include <algorithm>
#include <cmath>

#include "casimir/kernels.hpp"

namespace casimir::kernels {

namespace {

void layer_kappa(double a, const double* k2, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(a + k2[i]);
}

void interface_reflection(const double* k0, const double* k1, double e0, double e1, double* rte,
                          double* rtm, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    rte[i] = (k0[i] - k1[i]) / (k0[i] + k1[i]);
    rtm[i] = (e1 * k0[i] - e0 * k1[i]) / (e1 * k0[i] + e0 * k1[i]);
  }
}

void layer_recursion(const double* r01, const double* k1, double t, double* r, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double e = std::exp(-2.0 * k1[i] * t);
    double re = r[i] * e;
    r[i] = (r01[i] + re) / (1.0 + r01[i] * re);
  }
}

ModeSum mode_sum(const double* w, const double* kap, const double* ra_te, const double* rb_te,
                 const double* ra_tm, const double* rb_tm, double d, std::size_t n) {
  ModeSum out;
  for (std::size_t i = 0; i < n; ++i) {
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
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

const KernelSet kScalar{"scalar", layer_kappa, interface_reflection, layer_recursion, mode_sum, vexp};

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

}  // namespace casimir::kernels
