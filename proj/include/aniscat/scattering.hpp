// End-to-end amplitude computation: assemble, solve for the outer rows only,
// extract. Also the sweep over incident directions phi_q.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aniscat/amplitudes.hpp"
#include "aniscat/assembler.hpp"

namespace aniscat {

// How a sweep over incident directions is carried out.
enum class RotationMode {
  // One system per phi_q with the potential sampled at phi_j + phi_q.
  kPotential,
  // One system with the unrotated potential and a right-hand side per
  // incident channel; each phi_q is then a change of incident weights.
  kIncident,
};

// Amplitudes for setup.phi_q; keeps only the rows needed for extraction and
// the stability diagnostic.
AmplitudeSet solve_amplitudes(const ProblemSetup& setup);

// Response of the scatterer to each incident channel alone: column m' holds
// the amplitudes f_m for the incident channel function i^m' J_m'(q rho).
struct ChannelResponse {
  ProblemSetup setup;
  Eigen::MatrixXcd response;  // B x B
  double stability = 0.0;
};

ChannelResponse solve_channel_response(const ProblemSetup& setup);

// Amplitude set for incidence angle phi_q expressed in the rotated-potential
// convention: f(phi; phi_q) = g(phi + phi_q) where g belongs to the
// unrotated potential and a plane wave along phi_q.
AmplitudeSet amplitudes_for_direction(const ChannelResponse& response,
                                      double phi_q);

// Amplitude sets for each direction. `base.phi_q` must be 0 in kIncident
// mode; in kPotential mode it is replaced by each direction in turn.
std::vector<AmplitudeSet> solve_directions(const ProblemSetup& base,
                                           const std::vector<double>& phi_q,
                                           RotationMode mode);

}  // namespace aniscat
