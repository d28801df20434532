#include "aniscat/scattering.hpp"

#include <cmath>
#include <string>

#include "aniscat/errors.hpp"

namespace aniscat {

namespace {

struct OuterRows {
  Eigen::MatrixXcd outer;  // channel amplitudes at rho_N
  Eigen::MatrixXcd inner;  // channel amplitudes at the stability node
  int inner_row = 0;
};

OuterRows solve_outer(const ProblemSetup& setup,
                      const Eigen::MatrixXcd& weights) {
  const BlockBandSystem system = assemble(setup, weights);
  const int N = setup.rad.N();
  OuterRows out;
  out.inner_row = stability_row(N);
  const BandSolution sol = solve_band_rows(system, out.inner_row);
  out.outer = channel_amplitudes(sol.row(N), setup.rad.node(N), setup, weights);
  out.inner = channel_amplitudes(sol.row(out.inner_row),
                                 setup.rad.node(out.inner_row), setup, weights);
  return out;
}

void attach_stability(AmplitudeSet& set, double stability, double inner_rho) {
  set.stability = stability;
  if (stability > kStabilityWarnLevel) {
    set.warnings.push_back("matching-stability: extraction at rho_N and at rho = " +
                           std::to_string(inner_rho) + " differ by " +
                           std::to_string(stability));
  }
}

}  // namespace

AmplitudeSet solve_amplitudes(const ProblemSetup& setup) {
  const Eigen::MatrixXcd weights = plane_wave_weights(setup.ang, {0.0});
  const OuterRows rows = solve_outer(setup, weights);
  AmplitudeSet set;
  set.q = setup.q;
  set.phi_q = setup.phi_q;
  set.M = setup.ang.M();
  set.fm.resize(setup.ang.size());
  for (int k = 0; k < setup.ang.size(); ++k) set.fm[k] = rows.outer(k, 0);
  set.angles = uniform_angles(2 * setup.ang.size());
  attach_stability(set, relative_mismatch(rows.outer, rows.inner),
                   setup.rad.node(rows.inner_row));
  return set;
}

ChannelResponse solve_channel_response(const ProblemSetup& setup) {
  const int B = setup.ang.size();
  const Eigen::MatrixXcd weights = Eigen::MatrixXcd::Identity(B, B);
  const OuterRows rows = solve_outer(setup, weights);
  ChannelResponse out;
  out.setup = setup;
  out.response = rows.outer;
  out.stability = relative_mismatch(rows.outer, rows.inner);
  return out;
}

AmplitudeSet amplitudes_for_direction(const ChannelResponse& response,
                                      double phi_q) {
  const ProblemSetup& setup = response.setup;
  const int B = setup.ang.size();
  const Eigen::MatrixXcd w = plane_wave_weights(setup.ang, {phi_q});
  const Eigen::VectorXcd g = response.response * w.col(0);
  AmplitudeSet set;
  set.q = setup.q;
  set.phi_q = phi_q;
  set.M = setup.ang.M();
  set.fm.resize(B);
  for (int k = 0; k < B; ++k) {
    set.fm[k] = std::polar(1.0, setup.ang.channel(k) * phi_q) * g(k);
  }
  set.angles = uniform_angles(2 * B);
  const int N = setup.rad.N();
  attach_stability(set, response.stability,
                   setup.rad.node(stability_row(N)));
  return set;
}

std::vector<AmplitudeSet> solve_directions(const ProblemSetup& base,
                                           const std::vector<double>& phi_q,
                                           RotationMode mode) {
  std::vector<AmplitudeSet> out;
  out.reserve(phi_q.size());
  if (mode == RotationMode::kPotential) {
    for (double angle : phi_q) {
      ProblemSetup setup = base;
      setup.phi_q = angle;
      out.push_back(solve_amplitudes(setup));
    }
    return out;
  }
  if (base.phi_q != 0.0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "incident-rotation sweeps start from an unrotated potential");
  }
  const ChannelResponse response = solve_channel_response(base);
  for (double angle : phi_q) {
    out.push_back(amplitudes_for_direction(response, angle));
  }
  return out;
}

}  // namespace aniscat
