// Partial-wave reference solutions for circularly symmetric potentials, where
// the angular channels decouple and each reduces to one radial equation.
//
// With phase shifts delta_m the amplitude is
//   f(phi) = sqrt(2 / (pi q)) sum_m exp(i delta_m) sin(delta_m) exp(i m phi),
// i.e. channel amplitudes f_m = (2 / sqrt q) exp(i delta_m) sin(delta_m).
#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace aniscat {

struct PhaseShiftTable {
  double q = 0.0;
  std::vector<double> delta;  // delta_m for m = 0..m_max; delta_{-m} = delta_m
  std::string descriptor;

  int m_max() const { return static_cast<int>(delta.size()) - 1; }
  double at(int m) const;
};

// Adaptive truncation: stop once |delta_m| < 1e-12 for two consecutive m.
inline constexpr int kAdaptiveOrder = -1;

// Circular barrier of height U0 and radius a0. Interior J_m(k rho) for
// E > U0 or I_m(kappa rho) for E < U0, exterior A J_m + B Y_m.
PhaseShiftTable barrier_phase_shifts(double q, double U0, double a0,
                                     int m_max = kAdaptiveOrder);

struct RadialOracleOptions {
  double match_radius = 0.0;
  // Radii where the potential is discontinuous; integration restarts there.
  std::vector<double> breakpoints;
  double relative_tolerance = 1e-12;
  // Upper bound for the adaptive truncation; also capped by the Bessel order
  // envelope.
  int max_order = 2000;
};

// Single-channel integration of u'' = [(m^2 - 1/4)/rho^2 + 2U(rho) - q^2] u
// from rho_hw (u = 0) or from the regular power law at the origin, matched
// to sqrt(rho) [cos(delta) J_m - sin(delta) Y_m] at the match radius.
PhaseShiftTable radial_phase_shifts(double q,
                                    const std::function<double(double)>& potential,
                                    double rho_hw, int m_max,
                                    const RadialOracleOptions& options);

std::complex<double> oracle_amplitude(const PhaseShiftTable& table, double phi);

// Channel amplitude f_m in the convention f = (1/sqrt(2 pi)) sum f_m e^{i m phi}.
std::complex<double> oracle_channel_amplitude(const PhaseShiftTable& table,
                                              int m);

// \int |f|^2 dphi = (4/q) sum_m sin^2(delta_m).
double oracle_integrated_cs(const PhaseShiftTable& table);

}  // namespace aniscat
