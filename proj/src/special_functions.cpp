#include "aniscat/special_functions.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "aniscat/errors.hpp"

namespace aniscat {

namespace {

constexpr double kScaledThreshold = 700.0;

void check_order(int m, const char* what) {
  if (std::abs(m) > kMaxBesselOrder) {
    throw Error(ErrorCategory::kInvalidArgument,
                std::string(what) + ": order " + std::to_string(m) +
                    " outside |m| <= " + std::to_string(kMaxBesselOrder));
  }
}

void check_argument(double x, bool allow_zero, const char* what) {
  const bool ok = std::isfinite(x) && (allow_zero ? x >= 0.0 : x > 0.0);
  if (!ok) {
    throw Error(ErrorCategory::kInvalidArgument,
                std::string(what) + ": argument " + std::to_string(x) +
                    (allow_zero ? " must be finite and >= 0"
                                : " must be finite and > 0"));
  }
}

double parity(int m) { return (m < 0 && (m % 2 != 0)) ? -1.0 : 1.0; }

template <typename F>
double call_boost(F&& f, const char* what) {
  try {
    return f();
  } catch (const std::overflow_error&) {
    throw Error(ErrorCategory::kNumerical, std::string(what) + ": overflow");
  } catch (const std::domain_error& e) {
    throw Error(ErrorCategory::kInvalidArgument,
                std::string(what) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCategory::kNumerical, std::string(what) + ": " + e.what());
  }
}

// exp(-x) I_0(x) from the large-argument expansion; accurate to rounding for
// x above kScaledThreshold.
double scaled_i0_large(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_j(int m, double x) {
  check_order(m, "bessel_j");
  check_argument(x, true, "bessel_j");
  const int am = std::abs(m);
  if (x == 0.0) return am == 0 ? 1.0 : 0.0;
  const double v = call_boost(
      [&] { return boost::math::cyl_bessel_j(am, x); }, "bessel_j");
  return parity(m) * v;
}

double bessel_y(int m, double x) {
  check_order(m, "bessel_y");
  check_argument(x, false, "bessel_y");
  const int am = std::abs(m);
  const double v = call_boost(
      [&] { return boost::math::cyl_neumann(am, x); }, "bessel_y");
  return parity(m) * v;
}

double bessel_i_ratio(int m, double x) {
  if (m < 0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "bessel_i_ratio: order must be >= 0");
  }
  check_argument(x, false, "bessel_i_ratio");
  // Modified Lentz evaluation of I_{m+1}/I_m = 1/(b_1 + 1/(b_2 + ...)),
  // b_k = 2 (m + k) / x.
  constexpr double kTiny = 1e-300;
  double f = kTiny;
  double c = f;
  double d = 0.0;
  for (int k = 1; k < 1000000; ++k) {
    const double b = 2.0 * (m + k) / x;
    d = b + d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 4e-16) return f;
  }
  throw Error(ErrorCategory::kNumerical,
              "bessel_i_ratio: continued fraction did not converge");
}

double bessel_i(int m, double x, bool scaled) {
  check_order(m, "bessel_i");
  check_argument(x, true, "bessel_i");
  const int am = std::abs(m);  // I_{-m} = I_m for integer m
  if (x == 0.0) return am == 0 ? 1.0 : 0.0;
  if (x <= kScaledThreshold) {
    const double v = call_boost(
        [&] { return boost::math::cyl_bessel_i(am, x); }, "bessel_i");
    return scaled ? v * std::exp(-x) : v;
  }
  if (!scaled) {
    throw Error(ErrorCategory::kNumerical,
                "bessel_i: x = " + std::to_string(x) +
                    " overflows; request the scaled variant");
  }
  double value = scaled_i0_large(x);
  if (am == 0) return value;
  // Downward ratio recurrence r_{k-1} = 1 / (2k/x + r_k) is stable.
  double r = bessel_i_ratio(am - 1, x);
  double product = r;
  for (int k = am - 1; k >= 1; --k) {
    r = 1.0 / (2.0 * k / x + r);
    product *= r;
  }
  return value * product;
}

double bessel_j_prime(int m, double x) {
  check_order(m, "bessel_j_prime");
  check_argument(x, true, "bessel_j_prime");
  const int am = std::abs(m);
  const double v = call_boost(
      [&] { return boost::math::cyl_bessel_j_prime(am, x); },
      "bessel_j_prime");
  return parity(m) * v;
}

double bessel_y_prime(int m, double x) {
  check_order(m, "bessel_y_prime");
  check_argument(x, false, "bessel_y_prime");
  const int am = std::abs(m);
  const double v = call_boost(
      [&] { return boost::math::cyl_neumann_prime(am, x); }, "bessel_y_prime");
  return parity(m) * v;
}

std::complex<double> hankel1(int m, double x) {
  return {bessel_j(m, x), bessel_y(m, x)};
}

}  // namespace aniscat
