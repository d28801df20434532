// Scattering amplitudes from the solved radial functions, cross sections,
// symmetrized amplitudes and analytic reference quantities.
//
// The amplitude is f(phi) = (1/sqrt(2 pi)) sum_m f_m exp(i m phi), defined by
//   Psi -> exp(i q x) + f(phi) exp(i q rho) / sqrt(-i rho),
// with sqrt(-i) = exp(-i pi/4).
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aniscat/assembler.hpp"

namespace aniscat {

// Relative disagreement between extractions at rho_N and at an inner node
// above which a warning is attached.
inline constexpr double kStabilityWarnLevel = 1e-3;
// Amplitude magnitude below which channel amplitudes count as zero when the
// relative mismatch is formed.
inline constexpr double kAmplitudeFloor = 1e-8;

struct AmplitudeSet {
  double q = 0.0;
  double phi_q = 0.0;
  int M = 0;
  std::vector<cplx> fm;        // index m + M
  std::vector<double> angles;  // evaluation grid for cross sections
  double stability = 0.0;      // relative extraction mismatch
  std::vector<std::string> warnings;

  cplx coefficient(int m) const { return fm[m + M]; }
};

// n uniform angles 2 pi k / n, k = 0..n-1.
std::vector<double> uniform_angles(int count);

// Node of the stability extraction: max(3, N/20) rows inside rho_N.
int stability_row(int N);

// Channel amplitudes (B x nrhs) from grid values psi(rho) (B x nrhs) at one
// radius, for incident channel weights `weights` (see plane_wave_weights).
Eigen::MatrixXcd channel_amplitudes(const Eigen::MatrixXcd& psi_row, double rho,
                                    const ProblemSetup& setup,
                                    const Eigen::MatrixXcd& weights);

// Relative mismatch max|a - b| / max(max|a|, kAmplitudeFloor).
double relative_mismatch(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

AmplitudeSet extract_amplitudes(const RadialSolution& sol,
                                const ProblemSetup& setup);

cplx amplitude_at(const AmplitudeSet& set, double phi);

// |f(phi)|^2 on set.angles.
std::vector<double> differential_cs(const AmplitudeSet& set);

// Rectangle rule for (1/2 pi) \int\int |f|^2 dphi dphi_q over sets whose
// phi_q values form the uniform grid 2 pi k / n. Throws kInvalidArgument for
// non-uniform incident directions or mismatched angle grids.
double total_cs(const std::vector<AmplitudeSet>& sets);

struct SymmetrizedSet {
  AmplitudeSet gerade;    // (f(phi) + f(phi - pi)) / sqrt 2
  AmplitudeSet ungerade;  // (f(phi) - f(phi - pi)) / sqrt 2
};

SymmetrizedSet symmetrize(const AmplitudeSet& set);

struct CrossSectionSet {
  std::vector<double> angles;
  std::vector<double> directions;  // phi_q values
  Eigen::MatrixXd differential;    // (angle, direction)
  double sigma = 0.0;
  double sigma_g = 0.0;
  double sigma_u = 0.0;
  std::optional<double> sigma_sc;  // eikonal reference in dipolar runs
};

CrossSectionSet cross_sections(const std::vector<AmplitudeSet>& sets,
                               std::optional<double> dipolar_length);

// \int |f|^2 dphi over one incident direction (rectangle rule).
double integrated_cs(const AmplitudeSet& set);

// |\int |f|^2 dphi - sqrt(8 pi / q) Im f(forward)| / \int |f|^2 dphi. The
// forward direction is phi = 0 because the incident wave runs along +x.
double optical_theorem_defect(const AmplitudeSet& set);

// -sqrt(pi / (2q)) / (ln[2 / (gamma q a)] + i pi / 2), gamma = exp(Euler C).
cplx threshold_amplitude(double q, double a2d);

// Inverse of threshold_amplitude in its real part:
// a = (2 / (gamma q)) exp(-Re[-sqrt(pi / (2q)) / f]).
double scattering_length(cplx f, double q);

// (4/q) sqrt(pi D q).
double eikonal_sigma(double q, double D);

}  // namespace aniscat
