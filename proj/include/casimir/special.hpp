#pragma once

#include <vector>

// Modified spherical Bessel functions with i_0(x) = sinh(x)/x and
// k_0(x) = exp(-x)/x, tracked as logarithms plus neighbour ratios so that
// no intermediate overflows for any order or argument.
namespace casimir::special {

struct BesselI {
  std::vector<double> log;    // log i_l(x), l = 0..lmax
  std::vector<double> ratio;  // i_l / i_{l-1}, l >= 1 (ratio[0] unused)
};

struct BesselK {
  std::vector<double> log;    // log k_l(x)
  std::vector<double> ratio;  // k_l / k_{l-1}, l >= 1
};

BesselI bessel_i(double x, int lmax);
BesselK bessel_k(double x, int lmax);

// log of d^m P_l / dt^m at t >= 1, for l = m..lmax (index l - m).
std::vector<double> log_legendre_derivative(int m, int lmax, double t);

// Wigner 3j symbols (l1 l2 l3; 0 0 0) and (l1 l2 l3; m -m 0).
long double wigner3j_zero(int l1, int l2, int l3);
long double wigner3j_m(int l1, int l2, int l3, int m);

// Normalization of Y_lm: sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!), as a logarithm.
double log_ylm_norm(int l, int m);

// Coupling coefficient of cos(theta) Y_lm onto Y_{l+1,m}.
double cos_coupling(int l, int m);

}  // namespace casimir::special
