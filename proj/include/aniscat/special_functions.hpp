// Integer-order Bessel functions of real argument.
#pragma once

#include <complex>

namespace aniscat {

// Largest supported |m|.
inline constexpr int kMaxBesselOrder = 512;

// J_m(x) for x >= 0. J_{-m} = (-1)^m J_m by construction.
double bessel_j(int m, double x);

// Y_m(x) for x > 0. Y_{-m} = (-1)^m Y_m by construction.
double bessel_y(int m, double x);

// I_m(x) for x >= 0; with scaled = true returns exp(-x) I_m(x). Unscaled
// evaluation above x = 700 overflows and is rejected.
double bessel_i(int m, double x, bool scaled = false);

// I_{m+1}(x) / I_m(x) for x > 0 and m >= 0, finite for every x.
double bessel_i_ratio(int m, double x);

double bessel_j_prime(int m, double x);
double bessel_y_prime(int m, double x);

// Outgoing Hankel function H^(1)_m(x) = J_m(x) + i Y_m(x), x > 0.
std::complex<double> hankel1(int m, double x);

}  // namespace aniscat
