#include "aniscat/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "aniscat/errors.hpp"
#include "aniscat/special_functions.hpp"

namespace aniscat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEulerGamma = 1.7810724179901979;  // exp(0.5772156649...)

cplx minus_i_power(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, -1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, 1.0};
  }
}

void check_same_grid(const AmplitudeSet& a, const AmplitudeSet& b) {
  if (a.angles.size() != b.angles.size() || a.M != b.M) {
    throw Error(ErrorCategory::kInvalidArgument,
                "amplitude sets use different angle grids or orders");
  }
}

}  // namespace

std::vector<double> uniform_angles(int count) {
  if (count <= 0) {
    throw Error(ErrorCategory::kInvalidArgument, "angle count must be >= 1");
  }
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = kTwoPi * k / count;
  return out;
}

int stability_row(int N) { return N - std::max(3, N / 20); }

Eigen::MatrixXcd channel_amplitudes(const Eigen::MatrixXcd& psi_row, double rho,
                                    const ProblemSetup& setup,
                                    const Eigen::MatrixXcd& weights) {
  const AngularGrid& ang = setup.ang;
  const int B = ang.size();
  const FourierBasis basis(ang);
  const Eigen::MatrixXcd C = basis.to_channel * psi_row / std::sqrt(rho);
  const Eigen::VectorXcd inc = incident_channels(ang, setup.q, rho);
  Eigen::MatrixXcd scattered = C - inc.asDiagonal() * weights;
  if (setup.options.matching == MatchingMode::kHankel) {
    for (int k = 0; k < B; ++k) {
      const int m = ang.channel(k);
      const cplx factor = 2.0 / std::sqrt(setup.q) * minus_i_power(m + 1) /
                          hankel1(m, setup.q * rho);
      scattered.row(k) *= factor;
    }
    return scattered;
  }
  const cplx factor = std::sqrt(kTwoPi) * std::polar(1.0, -0.25 * kPi) *
                      std::sqrt(rho) * std::polar(1.0, -setup.q * rho);
  return factor * scattered;
}

double relative_mismatch(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), kAmplitudeFloor);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

AmplitudeSet extract_amplitudes(const RadialSolution& sol,
                                const ProblemSetup& setup) {
  const int N = setup.rad.N();
  const int B = setup.ang.size();
  if (sol.psi.rows() != N + 1 || sol.psi.cols() != B) {
    throw Error(ErrorCategory::kInvalidArgument,
                "radial solution does not match the problem grids");
  }
  const Eigen::MatrixXcd weights = plane_wave_weights(setup.ang, {0.0});
  const Eigen::MatrixXcd outer = channel_amplitudes(
      sol.psi.row(N).transpose(), setup.rad.node(N), setup, weights);
  const int inner_row = stability_row(N);
  const Eigen::MatrixXcd inner =
      channel_amplitudes(sol.psi.row(inner_row).transpose(),
                         setup.rad.node(inner_row), setup, weights);

  AmplitudeSet set;
  set.q = setup.q;
  set.phi_q = setup.phi_q;
  set.M = setup.ang.M();
  set.fm.resize(B);
  for (int k = 0; k < B; ++k) set.fm[k] = outer(k, 0);
  set.angles = uniform_angles(2 * B);
  set.stability = relative_mismatch(outer, inner);
  if (set.stability > kStabilityWarnLevel) {
    set.warnings.push_back("matching-stability: extraction at rho_N and at rho = " +
                           std::to_string(setup.rad.node(inner_row)) +
                           " differ by " + std::to_string(set.stability));
  }
  return set;
}

cplx amplitude_at(const AmplitudeSet& set, double phi) {
  cplx sum(0.0);
  for (int k = 0; k < static_cast<int>(set.fm.size()); ++k) {
    sum += set.fm[k] * std::polar(1.0, (k - set.M) * phi);
  }
  return sum / std::sqrt(kTwoPi);
}

std::vector<double> differential_cs(const AmplitudeSet& set) {
  std::vector<double> out(set.angles.size());
  for (size_t i = 0; i < set.angles.size(); ++i) {
    out[i] = std::norm(amplitude_at(set, set.angles[i]));
  }
  return out;
}

double integrated_cs(const AmplitudeSet& set) {
  if (set.angles.empty()) {
    throw Error(ErrorCategory::kInvalidArgument, "empty angle grid");
  }
  double sum = 0.0;
  for (double v : differential_cs(set)) sum += v;
  return sum * kTwoPi / static_cast<double>(set.angles.size());
}

double total_cs(const std::vector<AmplitudeSet>& sets) {
  if (sets.empty()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "total_cs needs at least one incident direction");
  }
  const int count = static_cast<int>(sets.size());
  double sum = 0.0;
  for (int k = 0; k < count; ++k) {
    check_same_grid(sets[0], sets[k]);
    const double expected = kTwoPi * k / count;
    const double delta = std::remainder(sets[k].phi_q - expected, kTwoPi);
    if (std::abs(delta) > 1e-12) {
      throw Error(ErrorCategory::kInvalidArgument,
                  "incident directions must be the uniform grid 2 pi k / n");
    }
    sum += integrated_cs(sets[k]);
  }
  // (1/2pi) * sum_phi_q [\int |f|^2 dphi] * (2 pi / n)
  return sum / count;
}

SymmetrizedSet symmetrize(const AmplitudeSet& set) {
  SymmetrizedSet out{set, set};
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < static_cast<int>(set.fm.size()); ++k) {
    const bool even = ((k - set.M) % 2) == 0;
    out.gerade.fm[k] = even ? 2.0 * r * set.fm[k] : cplx(0.0);
    out.ungerade.fm[k] = even ? cplx(0.0) : 2.0 * r * set.fm[k];
  }
  return out;
}

CrossSectionSet cross_sections(const std::vector<AmplitudeSet>& sets,
                               std::optional<double> dipolar_length) {
  CrossSectionSet out;
  out.sigma = total_cs(sets);
  std::vector<AmplitudeSet> g;
  std::vector<AmplitudeSet> u;
  g.reserve(sets.size());
  u.reserve(sets.size());
  for (const AmplitudeSet& s : sets) {
    SymmetrizedSet sym = symmetrize(s);
    g.push_back(std::move(sym.gerade));
    u.push_back(std::move(sym.ungerade));
  }
  out.sigma_g = total_cs(g);
  out.sigma_u = total_cs(u);
  out.angles = sets[0].angles;
  out.differential.resize(static_cast<int>(out.angles.size()),
                          static_cast<int>(sets.size()));
  for (size_t c = 0; c < sets.size(); ++c) {
    out.directions.push_back(sets[c].phi_q);
    const std::vector<double> d = differential_cs(sets[c]);
    for (size_t i = 0; i < d.size(); ++i) out.differential(i, c) = d[i];
  }
  if (dipolar_length) {
    out.sigma_sc = eikonal_sigma(sets[0].q, *dipolar_length);
  }
  return out;
}

double optical_theorem_defect(const AmplitudeSet& set) {
  const double integral = integrated_cs(set);
  const double rhs =
      std::sqrt(8.0 * kPi / set.q) * amplitude_at(set, 0.0).imag();
  if (integral == 0.0) return std::abs(rhs);
  return std::abs(integral - rhs) / integral;
}

cplx threshold_amplitude(double q, double a2d) {
  const double arg = 2.0 / (kEulerGamma * q * a2d);
  if (!(q > 0.0) || !(a2d > 0.0) || !(arg > 0.0) || !std::isfinite(arg)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "threshold_amplitude: log argument 2/(gamma q a) must be "
                "positive and finite");
  }
  const cplx denom(std::log(arg), 0.5 * kPi);
  return -std::sqrt(kPi / (2.0 * q)) / denom;
}

double scattering_length(cplx f, double q) {
  if (f == cplx(0.0)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "scattering_length: amplitude is zero");
  }
  if (!(q > 0.0)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "scattering_length: q must be > 0");
  }
  const cplx inverse = -std::sqrt(kPi / (2.0 * q)) / f;
  return 2.0 / (kEulerGamma * q) * std::exp(-inverse.real());
}

double eikonal_sigma(double q, double D) {
  if (!(q > 0.0) || !(D >= 0.0)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "eikonal_sigma needs q > 0 and D >= 0");
  }
  return 4.0 / q * std::sqrt(kPi * D * q);
}

}  // namespace aniscat
