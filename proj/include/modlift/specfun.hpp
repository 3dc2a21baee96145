#pragma once

#include <complex>

namespace modlift::specfun {

using cplx = std::complex<double>;

// int_1^inf e^{-s t} t^{-1/2} dt, s > 0
double beta_half(double s);
// int_0^1 e^{-s t} t^{-1/2} dt, any real s
double beta_half_c(double s);

// arcsin_s(1/sqrt a) = int_0^1 (a - t^2)^{-1/2} ((1 - t^2)/(a - t^2))^s dt, a >= 1, s > -1
double arcsin_s(double a, double s);

// Modified Bessel K_s(x), 0 <= s <= 3/2, x > 0.
double bessel_k(double s, double x);

// y sqrt(pi) Gamma(s)/Gamma(s + 1/2): the pole term of the periodized arcsin_s sum
double arcsin_sum_constant(double s, double y);
// 2y sqrt(pi)/Gamma(s+1/2) sum_{n != 0} (pi|n|y)^s int_0^1 (1-t^2)^{s/2} K_s(2pi|n|y sqrt(1-t^2)) dt cos(2 pi n x)
double arcsin_sum_oscillatory(double s, cplx z);

// The s -> 0 regularized value of sum_l arcsin_s(y/|z + l|), and d/dz of it.
double script_F(cplx z);
cplx script_F_prime(cplx z);  // z off the lines x in Z

// L(1, (Delta/.)) from the finite log-sine (Delta > 0) or linear (Delta < 0) sums; Delta fundamental.
double dirichlet_L1(long long delta);

// B_m(x), Bernoulli polynomial
double bernoulli_poly(int m, double x);

}  // namespace modlift::specfun
