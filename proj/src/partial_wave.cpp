#include "aniscat/partial_wave.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "aniscat/errors.hpp"
#include "aniscat/special_functions.hpp"

namespace aniscat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegligiblePhase = 1e-12;

// Map an angle to (-pi/2, pi/2].
double principal_phase(double delta) {
  double d = std::remainder(delta, kPi);
  if (d <= -0.5 * kPi) d += kPi;
  return d;
}

// Phase shift from a radial log-derivative expressed as value/derivative
// pair (R, R') at radius a: cos(d) (q J' R - J R') = sin(d) (q Y' R - Y R').
double phase_from_match(int m, double q, double a, double R, double dR) {
  const double x = q * a;
  double J, Jp, Y, Yp;
  try {
    J = bessel_j(m, x);
    Jp = bessel_j_prime(m, x);
    Y = bessel_y(m, x);
    Yp = bessel_y_prime(m, x);
  } catch (const Error& e) {
    // Y_m overflows only where the channel is deep in its centrifugal
    // barrier and the phase shift is far below double resolution.
    if (e.category() == ErrorCategory::kNumerical) return 0.0;
    throw;
  }
  const double num = q * Jp * R - J * dR;
  const double den = q * Yp * R - Y * dR;
  if (!std::isfinite(num) || !std::isfinite(den)) return 0.0;
  return principal_phase(std::atan2(num, den));
}

template <typename PhaseOfOrder>
std::vector<double> collect(int m_max, int cap, PhaseOfOrder&& phase) {
  std::vector<double> delta;
  if (m_max >= 0) {
    for (int m = 0; m <= m_max; ++m) delta.push_back(phase(m));
    return delta;
  }
  int small_run = 0;
  for (int m = 0; m <= cap; ++m) {
    const double d = phase(m);
    delta.push_back(d);
    small_run = std::abs(d) < kNegligiblePhase ? small_run + 1 : 0;
    if (small_run >= 2) return delta;
  }
  throw Error(ErrorCategory::kPrecondition,
              "phase shifts did not fall below 1e-12 up to order " +
                  std::to_string(cap));
}

using State = std::array<double, 2>;

}  // namespace

double PhaseShiftTable::at(int m) const {
  const int am = std::abs(m);
  return am < static_cast<int>(delta.size()) ? delta[am] : 0.0;
}

PhaseShiftTable barrier_phase_shifts(double q, double U0, double a0,
                                     int m_max) {
  if (!(q > 0.0) || !(a0 > 0.0) || !(U0 >= 0.0)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "barrier_phase_shifts needs q > 0, a0 > 0, U0 >= 0");
  }
  const double energy = 0.5 * q * q;
  auto phase = [&](int m) -> double {
    if (U0 == 0.0) return 0.0;
    if (m > kMaxBesselOrder - 1) return 0.0;
    // Interior radial function R and derivative R' at a0, up to a common
    // positive factor.
    double R, dR;
    if (energy > U0) {
      const double k = std::sqrt(2.0 * (energy - U0));
      R = bessel_j(m, k * a0);
      dR = k * bessel_j_prime(m, k * a0);
    } else if (energy < U0) {
      const double kappa = std::sqrt(2.0 * (U0 - energy));
      const double x = kappa * a0;
      R = 1.0;
      dR = kappa * (bessel_i_ratio(m, x) + m / x);
    } else {
      R = 1.0;
      dR = m / a0;
    }
    return phase_from_match(m, q, a0, R, dR);
  };
  PhaseShiftTable table;
  table.q = q;
  table.delta = collect(m_max, kMaxBesselOrder - 1, phase);
  std::ostringstream d;
  d.precision(17);
  d << "circular_barrier U0=" << U0 << " a0=" << a0;
  table.descriptor = d.str();
  return table;
}

PhaseShiftTable radial_phase_shifts(double q,
                                    const std::function<double(double)>& potential,
                                    double rho_hw, int m_max,
                                    const RadialOracleOptions& options) {
  namespace ode = boost::numeric::odeint;
  const double R = options.match_radius;
  if (!(q > 0.0) || !(rho_hw >= 0.0) || !(R > rho_hw)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "radial_phase_shifts needs q > 0 and match radius > rho_hw");
  }
  const double uR = potential(R);
  if (uR != 0.0) {
    const double u2R = potential(2.0 * R);
    if (!(std::abs(u2R) * 4.0 < std::abs(uR))) {
      throw Error(ErrorCategory::kPrecondition,
                  "potential does not decay faster than 1/rho^2 at the "
                  "match radius");
    }
  }
  const double q2 = q * q;

  auto phase = [&](int m) -> double {
    const double c = static_cast<double>(m) * m - 0.25;
    auto rhs = [&](const State& x, State& dxdt, double rho) {
      dxdt[0] = x[1];
      dxdt[1] = (c / (rho * rho) + 2.0 * potential(rho) - q2) * x[0];
    };
    double rho;
    State x;
    if (rho_hw > 0.0) {
      rho = rho_hw;
      x = {0.0, 1.0};
    } else {
      // Regular solution rho^(m + 1/2) (1 + O(rho^2)) at a start radius small
      // enough that the O(rho^2) correction is below rounding.
      const double k2 = std::abs(2.0 * potential(0.0) - q2) + 1.0;
      rho = 1e-9 / std::sqrt(k2);
      x = {1.0, (m + 0.5) / rho};
    }
    std::vector<double> stops;
    for (double b : options.breakpoints) {
      if (b > rho && b < R) stops.push_back(b);
    }
    std::sort(stops.begin(), stops.end());
    stops.push_back(R);

    auto stepper = ode::make_controlled(options.relative_tolerance * 1e-3,
                                        options.relative_tolerance,
                                        ode::runge_kutta_dopri5<State>());
    double dt = std::min(1e-3, 0.1 * rho + 1e-6);
    for (double stop : stops) {
      while (rho < stop) {
        if (rho + dt > stop) dt = stop - rho;
        const double before = rho;
        if (stepper.try_step(rhs, x, rho, dt) == ode::success) {
          const double scale = std::max(std::abs(x[0]), std::abs(x[1]));
          if (scale > 1e50) {
            x[0] /= scale;
            x[1] /= scale;
          }
          if (rho >= stop - 1e-15 * stop) rho = stop;
        }
        if (rho == before && dt < 1e-300) {
          throw Error(ErrorCategory::kNumerical,
                      "radial integration step size underflow");
        }
      }
      // Restart the step-size control after a breakpoint.
      dt = std::min(dt, 1e-4 * std::max(1.0, stop));
    }
    // Radial function R = u / sqrt(rho): R'/R = u'/u - 1/(2 rho).
    const double value = x[0];
    const double slope = x[1] - x[0] / (2.0 * R);
    return phase_from_match(m, q, R, value, slope);
  };

  PhaseShiftTable table;
  table.q = q;
  table.delta = collect(m_max, std::min(options.max_order, kMaxBesselOrder - 1), phase);
  std::ostringstream d;
  d.precision(17);
  d << "radial rho_hw=" << rho_hw << " match_radius=" << R;
  table.descriptor = d.str();
  return table;
}

std::complex<double> oracle_channel_amplitude(const PhaseShiftTable& table,
                                              int m) {
  const double d = table.at(m);
  return 2.0 / std::sqrt(table.q) * std::polar(std::sin(d), d);
}

std::complex<double> oracle_amplitude(const PhaseShiftTable& table,
                                      double phi) {
  std::complex<double> sum = std::polar(std::sin(table.delta[0]), table.delta[0]);
  for (int m = 1; m <= table.m_max(); ++m) {
    const double d = table.delta[m];
    sum += 2.0 * std::cos(m * phi) * std::polar(std::sin(d), d);
  }
  return std::sqrt(2.0 / (kPi * table.q)) * sum;
}

double oracle_integrated_cs(const PhaseShiftTable& table) {
  double sum = std::pow(std::sin(table.delta[0]), 2);
  for (int m = 1; m <= table.m_max(); ++m) {
    sum += 2.0 * std::pow(std::sin(table.delta[m]), 2);
  }
  return 4.0 / table.q * sum;
}

}  // namespace aniscat
