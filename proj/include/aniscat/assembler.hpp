// Finite-difference discretization of the coupled radial equations
//   psi_j'' + [2 (E - U(rho, phi_j + phi_q)) + 1/(4 rho^2)] psi_j
//           + (1/rho^2) sum_j' h0_{jj'} psi_j' = 0,     E = q^2 / 2,
// on the (rho_n, phi_j) mesh, with psi(rho_0) = 0 and an outgoing-wave
// condition at rho_N, and its solution.
#pragma once

#include <memory>

#include <Eigen/Dense>

#include "aniscat/block_band.hpp"
#include "aniscat/grids.hpp"
#include "aniscat/potentials.hpp"

namespace aniscat {

// Outgoing channel function used by the right boundary.
enum class MatchingMode {
  kHankel,      // H^(1)_m(q rho): exact for a potential that vanishes beyond rho_N
  kAsymptotic,  // exp(i q rho) / sqrt(rho): leading large-rho form
};

// Treatment of block rows N-2 and N-1.
enum class RightClosure {
  // Seven-point rows; nodes beyond rho_N are extrapolated through the
  // outgoing-wave form of the solution.
  kExtrapolated,
  // Centered five- and three-point rows.
  kReduced,
};

struct DiscretizationOptions {
  MatchingMode matching = MatchingMode::kHankel;
  RightClosure right_closure = RightClosure::kExtrapolated;
  // For rho_0 = 0: make rows near the origin exact for the first two terms
  // rho^(|m| + 1/2) and rho^(|m| + 5/2) of the regular solution in channels
  // |m| <= 1.
  bool origin_correction = true;
};

struct ProblemSetup {
  double q = 1.0;
  double phi_q = 0.0;
  PotentialSpec spec;
  AngularGrid ang{0};
  RadialGrid rad{8, 0.0, 1.0};
  DiscretizationOptions options;
};

// Checks q > 0, N >= 8, the inner radius against the hard wall, and the
// asymptotic-region condition max_j |2 U(rho_N, phi_j + phi_q)| <= 1e-6 q^2.
void validate_setup(const ProblemSetup& setup);

// Plane wave exp(i q rho cos(phi - theta)) has channel coefficients
// i^m J_m(q rho) exp(-i m theta). Column c of the weight matrix gives the
// factors exp(-i m theta) (or any channel weights) of right-hand side c.
Eigen::MatrixXcd plane_wave_weights(const AngularGrid& grid,
                                    const std::vector<double>& directions);

// i^m J_m(q rho) for every channel m, index m + M.
Eigen::VectorXcd incident_channels(const AngularGrid& grid, double q,
                                   double rho);

// Outgoing channel functions at rho under the chosen matching mode.
Eigen::VectorXcd outgoing_channels(const AngularGrid& grid, double q,
                                   double rho, MatchingMode mode);

// Centrifugal coefficient replacing 1/4 - m^2 on row n (units: multiply by
// 1/rho_n^2) so that the row's second-difference stencil is exact for
// rho^(|m| + 1/2). `offsets`/`weights` describe the row stencil in units of
// h^-2.
double origin_centrifugal(int n, int m, const std::vector<int>& offsets,
                          const std::vector<double>& weights);

// Factor multiplying 2 (E - U) on row n so that the row, with the corrected
// centrifugal coefficient, also reproduces the rho^(|m| + 5/2) term of the
// regular solution when U is isotropic near the origin. The angular mean of
// U on the row is used for the channel-diagonal correction.
double origin_energy_factor(int n, int m, const std::vector<int>& offsets,
                            const std::vector<double>& weights);

// Assemble with the incident plane wave along +x (one right-hand side).
BlockBandSystem assemble(const ProblemSetup& setup);

// Assemble with arbitrary incident channel weights (B x nrhs).
BlockBandSystem assemble(const ProblemSetup& setup,
                         const Eigen::MatrixXcd& incident_weights);

struct RadialSolution {
  // psi(n, j) = psi_j(rho_n); row 0 is exactly zero.
  Eigen::MatrixXcd psi;
  double residual = 0.0;
};

// Full solution of a single right-hand-side system.
RadialSolution solve_band(const BlockBandSystem& system);

}  // namespace aniscat
