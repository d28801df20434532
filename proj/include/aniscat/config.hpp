// Run configuration: a sectioned key = value text file (INI syntax).
//
//   [preset]      description, production
//   [potential]   model, units, parameters of the chosen model
//   [incident]    q (or Dq in dipolar units), phi_q
//   [numerics]    M, N, rho_0, rho_N, phi_q_count, angle_count, matching,
//                 right_closure, origin_correction, rotation
//   [scan]        variable, values | start, stop, count
//   [convergence] axis, values
//   [output]      path, precision
//
// Angles accept either radians (alpha = 0.628) or multiples of pi
// (alpha_pi = 0.2). In dipolar units lengths are read in units of the
// dipolar length D, wavenumbers in 1/D and dipole strengths in units of d^2.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aniscat/assembler.hpp"
#include "aniscat/potentials.hpp"
#include "aniscat/scattering.hpp"

namespace aniscat {

struct NumericsConfig {
  int M = 8;
  int N = 40000;
  std::optional<double> rho0;  // defaults to the hard-wall radius
  double rhoN = 15.0;
  // 0: a single incident direction phi_q. n > 0: the uniform grid
  // 2 pi k / n used for the direction-averaged cross section.
  int phi_q_count = 0;
  // Scattering angles for cross sections; 0 selects 2 (2M + 1).
  int angle_count = 0;
  DiscretizationOptions options;
  RotationMode rotation = RotationMode::kIncident;
};

enum class ScanVariable { kQ, kPhiQ, kU0, kAlpha, kBeta, kGamma, kAlphaGamma };

struct ScanConfig {
  ScanVariable variable = ScanVariable::kQ;
  std::string label;           // variable name as written, e.g. "alpha_pi"
  std::vector<double> given;   // values as written in the config file
  std::vector<double> values;  // the same values in internal units
};

enum class ConvergenceAxis { kM, kN, kRhoN };

struct ConvergenceConfig {
  ConvergenceAxis axis = ConvergenceAxis::kN;
  std::vector<double> values;
};

struct OutputConfig {
  std::string path;
  int precision = 17;
};

struct RunConfig {
  std::string name;
  std::string description;
  bool production = false;

  // Internal units (hbar = mu = 1); conversion happens while parsing.
  PotentialSpec potential;
  double q = 1.0;
  double phi_q = 0.0;
  NumericsConfig numerics;
  std::optional<ScanConfig> scan;
  std::optional<ConvergenceConfig> convergence;
  OutputConfig output;
};

// "section.key=value" overrides applied on top of a file.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

// Parses the text of a configuration. Errors are ErrorCategory::kConfig with
// messages naming the offending field, e.g. "numerics.M: must be >= 0".
RunConfig parse_config(const std::string& text, const std::string& name = "",
                       const ConfigOverrides& overrides = {});

RunConfig load_config(const std::string& path,
                      const ConfigOverrides& overrides = {});

// Splits "section.key=value"; throws kConfig for malformed input.
std::pair<std::string, std::string> parse_override(const std::string& text);

// Problem setup for the configured incident direction.
ProblemSetup make_setup(const RunConfig& config);

// Copy of the configuration with a scan variable set to a value in internal
// units.
RunConfig with_scan_value(const RunConfig& config, ScanVariable variable,
                          double value);

// Canonical, fully resolved listing (one "key = value" per line, internal
// units, 17 significant digits). Identical configurations give identical
// listings.
std::string canonical_listing(const RunConfig& config);

// CRC-32 of the canonical listing as 8 hex digits.
std::string config_hash(const RunConfig& config);

const char* scan_variable_name(ScanVariable variable);
const char* convergence_axis_name(ConvergenceAxis axis);

}  // namespace aniscat
