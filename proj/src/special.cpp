#include "casimir/special.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir::special {

namespace {

double log_i0(double x) {
  if (x < 1e-4) return x * x / 6.0;
  if (x < 20.0) return std::log(std::sinh(x) / x);
  return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
}

}  // namespace

BesselI bessel_i(double x, int lmax) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("modified Bessel i needs a positive finite argument");
  BesselI out;
  out.log.assign(lmax + 1, 0.0);
  out.ratio.assign(lmax + 1, 0.0);
  // Backward continued fraction r_l = 1 / ((2l+1)/x + r_{l+1}), started well
  // above both lmax and x from the uniform asymptotic ratio.
  int top = std::max(lmax, static_cast<int>(std::min(2.0 * x, 1e6))) + 40;
  double nu = top + 1.5;
  double r = x / (nu + std::sqrt(nu * nu + x * x));
  for (int l = top; l >= 1; --l) {
    r = 1.0 / ((2.0 * l + 1.0) / x + r);
    if (l <= lmax) out.ratio[l] = r;
  }
  out.log[0] = log_i0(x);
  for (int l = 1; l <= lmax; ++l) out.log[l] = out.log[l - 1] + std::log(out.ratio[l]);
  return out;
}

BesselK bessel_k(double x, int lmax) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("modified Bessel k needs a positive finite argument");
  BesselK out;
  out.log.assign(lmax + 1, 0.0);
  out.ratio.assign(lmax + 1, 0.0);
  out.log[0] = -x - std::log(x);
  double rho = 1.0 + 1.0 / x;
  for (int l = 1; l <= lmax; ++l) {
    if (l > 1) rho = 1.0 / rho + (2.0 * l - 1.0) / x;
    out.ratio[l] = rho;
    out.log[l] = out.log[l - 1] + std::log(rho);
  }
  return out;
}

std::vector<double> log_legendre_derivative(int m, int lmax, double t) {
  std::vector<double> out;
  if (lmax < m) return out;
  out.resize(lmax - m + 1);
  out[0] = std::lgamma(2.0 * m + 1.0) - m * std::log(2.0) - std::lgamma(m + 1.0);
  double prev = 0.0;  // P_{l-1} / P_l
  for (int l = m; l < lmax; ++l) {
    double rho = ((2.0 * l + 1.0) * t - (l + m) * prev) / (l - m + 1.0);
    out[l - m + 1] = out[l - m] + std::log(rho);
    prev = 1.0 / rho;
  }
  return out;
}

long double wigner3j_zero(int l1, int l2, int l3) {
  int two_g = l1 + l2 + l3;
  if (two_g % 2) return 0.0L;
  if (l3 < std::abs(l1 - l2) || l3 > l1 + l2) return 0.0L;
  int g = two_g / 2;
  auto lf = [](int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); };
  long double lv = 0.5L * (lf(two_g - 2 * l1) + lf(two_g - 2 * l2) + lf(two_g - 2 * l3) - lf(two_g + 1)) + lf(g) -
                   lf(g - l1) - lf(g - l2) - lf(g - l3);
  long double v = std::exp(lv);
  return (g % 2) ? -v : v;
}

long double wigner3j_m(int j1, int j2, int j3, int m) {
  const int m1 = m, m2 = -m, m3 = 0;
  if (std::abs(m) > j1 || std::abs(m) > j2) return 0.0L;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0L;
  auto lf = [](int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); };
  long double pre = 0.5L * (lf(j1 + j2 - j3) + lf(j1 - j2 + j3) + lf(-j1 + j2 + j3) - lf(j1 + j2 + j3 + 1) +
                            lf(j1 + m1) + lf(j1 - m1) + lf(j2 + m2) + lf(j2 - m2) + lf(j3 + m3) + lf(j3 - m3));
  int kmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  int kmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  long double s = 0.0L;
  for (int k = kmin; k <= kmax; ++k) {
    long double t = pre - (lf(k) + lf(j1 + j2 - j3 - k) + lf(j1 - m1 - k) + lf(j2 + m2 - k) + lf(j3 - j2 + m1 + k) +
                           lf(j3 - j1 - m2 + k));
    long double term = std::exp(t);
    s += (k % 2) ? -term : term;
  }
  int ph = j1 - j2 - m3;
  return (((ph % 2) + 2) % 2) ? -s : s;
}

double log_ylm_norm(int l, int m) {
  return 0.5 * (std::log((2.0 * l + 1.0) / (4.0 * kPi)) + std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0));
}

double cos_coupling(int l, int m) {
  if (l < std::abs(m) || l < 0) return 0.0;
  double num = (l + 1.0) * (l + 1.0) - static_cast<double>(m) * m;
  return std::sqrt(num / ((2.0 * l + 1.0) * (2.0 * l + 3.0)));
}

}  // namespace casimir::special
