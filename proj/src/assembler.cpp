#include "aniscat/assembler.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "aniscat/errors.hpp"
#include "aniscat/special_functions.hpp"

namespace aniscat {

namespace {

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;  // multiply by 1/h^2
};

const Stencil kSeven{{-3, -2, -1, 0, 1, 2, 3},
                     {2.0 / 180, -27.0 / 180, 270.0 / 180, -490.0 / 180,
                      270.0 / 180, -27.0 / 180, 2.0 / 180}};
const Stencil kFive{{-2, -1, 0, 1, 2},
                    {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}};
const Stencil kThree{{-1, 0, 1}, {1.0, -2.0, 1.0}};

const Stencil& row_stencil(int n, int N, RightClosure closure) {
  if (n == 1) return kThree;
  if (n == 2) return kFive;
  if (closure == RightClosure::kReduced) {
    if (n == N - 1) return kThree;
    if (n == N - 2) return kFive;
  }
  return kSeven;
}

// Channels whose centrifugal coefficient is corrected near the origin.
constexpr int kCorrectedChannels = 1;
// Rows stop receiving the correction once it changes the coefficient by less
// than this amount.
constexpr double kCorrectionCutoff = 1e-14;

cplx i_power(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

void validate_setup(const ProblemSetup& setup) {
  validate(setup.spec);
  if (!(setup.q > 0.0) || !std::isfinite(setup.q)) {
    throw Error(ErrorCategory::kInvalidArgument, "wavenumber q must be > 0");
  }
  if (!std::isfinite(setup.phi_q)) {
    throw Error(ErrorCategory::kInvalidArgument, "phi_q must be finite");
  }
  if (setup.rad.N() < 8) {
    throw Error(ErrorCategory::kPrecondition,
                "N = " + std::to_string(setup.rad.N()) +
                    " is too small for the stencil layout (need N >= 8)");
  }
  const double wall = hard_wall_radius(setup.spec);
  if (setup.rad.rho0() < wall) {
    throw Error(ErrorCategory::kPrecondition,
                "inner radius rho_0 = " + format_double(setup.rad.rho0()) +
                    " lies inside the hard wall rho_hw = " +
                    format_double(wall));
  }
  if (is_dipolar(setup.spec) && setup.rad.rho0() <= 0.0) {
    throw Error(ErrorCategory::kPrecondition,
                "dipole potentials need a hard wall or rho_0 > 0");
  }
  const double limit = 1e-6 * setup.q * setup.q;
  double worst = 0.0;
  for (double phi : setup.ang.nodes()) {
    const double u = rotated_eval(setup.spec, setup.phi_q, setup.rad.rhoN(), phi);
    worst = std::max(worst, std::abs(2.0 * u));
  }
  if (!(worst <= limit)) {
    throw Error(ErrorCategory::kPrecondition,
                "asymptotic-region condition violated: max |2U(rho_N)| = " +
                    format_double(worst) + " exceeds 1e-6 q^2 = " +
                    format_double(limit) + "; increase rho_N");
  }
}

Eigen::MatrixXcd plane_wave_weights(const AngularGrid& grid,
                                    const std::vector<double>& directions) {
  const int B = grid.size();
  Eigen::MatrixXcd w(B, static_cast<int>(directions.size()));
  for (int c = 0; c < static_cast<int>(directions.size()); ++c) {
    for (int k = 0; k < B; ++k) {
      w(k, c) = std::polar(1.0, -grid.channel(k) * directions[c]);
    }
  }
  return w;
}

Eigen::VectorXcd incident_channels(const AngularGrid& grid, double q,
                                   double rho) {
  const int B = grid.size();
  Eigen::VectorXcd out(B);
  for (int k = 0; k < B; ++k) {
    const int m = grid.channel(k);
    out(k) = i_power(m) * bessel_j(m, q * rho);
  }
  return out;
}

Eigen::VectorXcd outgoing_channels(const AngularGrid& grid, double q,
                                   double rho, MatchingMode mode) {
  const int B = grid.size();
  Eigen::VectorXcd out(B);
  for (int k = 0; k < B; ++k) {
    const int m = grid.channel(k);
    if (mode == MatchingMode::kHankel) {
      out(k) = hankel1(m, q * rho);
    } else {
      out(k) = std::polar(1.0 / std::sqrt(rho), q * rho);
    }
  }
  return out;
}

double origin_centrifugal(int n, int m, const std::vector<int>& offsets,
                          const std::vector<double>& weights) {
  const double s = std::abs(m) + 0.5;
  // sum_o w_o ((n + o) / n)^s, written with expm1/log1p because the weights
  // sum to zero and the leading terms cancel.
  double sum = 0.0;
  for (size_t i = 0; i < offsets.size(); ++i) {
    const double ratio = static_cast<double>(offsets[i]) / n;
    sum += weights[i] * std::expm1(s * std::log1p(ratio));
  }
  return -static_cast<double>(n) * n * sum;
}

double origin_energy_factor(int n, int m, const std::vector<int>& offsets,
                            const std::vector<double>& weights) {
  const double s = std::abs(m) + 0.5;
  const double c = origin_centrifugal(n, m, offsets, weights);
  // Defect of the row on rho^(s+2) relative to the exact operator value
  // (4s + 2) rho^s, in units of h = 1:
  //   sum_o w_o (n + o)^(s+2) / n^s + c - (4s + 2).
  // sum_o w_o ((n + o)/n)^(s+2) is again evaluated through expm1/log1p.
  double sum = 0.0;
  for (size_t i = 0; i < offsets.size(); ++i) {
    const double ratio = static_cast<double>(offsets[i]) / n;
    sum += weights[i] * std::expm1((s + 2.0) * std::log1p(ratio));
  }
  const double defect = static_cast<double>(n) * n * sum + c - (4.0 * s + 2.0);
  return 1.0 + defect / (4.0 * s + 2.0);
}

BlockBandSystem assemble(const ProblemSetup& setup) {
  return assemble(setup, plane_wave_weights(setup.ang, {0.0}));
}

BlockBandSystem assemble(const ProblemSetup& setup,
                         const Eigen::MatrixXcd& incident_weights) {
  validate_setup(setup);
  const AngularGrid& ang = setup.ang;
  const RadialGrid& rad = setup.rad;
  const int B = ang.size();
  const int N = rad.N();
  const int nrhs = static_cast<int>(incident_weights.cols());
  if (incident_weights.rows() != B || nrhs == 0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "incident weights must have 2M+1 rows and >= 1 column");
  }
  const double h = rad.h();
  const double inv_h2 = 1.0 / (h * h);
  const double energy = 0.5 * setup.q * setup.q;
  const DiscretizationOptions& opt = setup.options;

  auto basis = std::make_shared<const FourierBasis>(ang);
  BlockBandSystem system(basis, N + 1, nrhs);

  system.block(0, 0).scalar = 1.0;

  const bool correct_origin = opt.origin_correction && rad.rho0() == 0.0;
  bool correction_active = correct_origin;

  Eigen::VectorXcd centrifugal(B);
  Eigen::VectorXcd diagonal(B);
  for (int n = 1; n < N; ++n) {
    const double rho = rad.node(n);
    const Stencil& st = row_stencil(n, N, opt.right_closure);
    for (size_t i = 0; i < st.offsets.size(); ++i) {
      const int col = n + st.offsets[i];
      if (col > N) continue;  // extrapolated node, handled below
      system.block(n, st.offsets[i]).scalar += st.weights[i] * inv_h2;
    }

    for (int j = 0; j < B; ++j) {
      const double u = mesh_value(setup.spec, rho, h, ang.node(j) + setup.phi_q);
      if (!std::isfinite(u)) {
        throw Error(ErrorCategory::kPrecondition,
                    "potential is not finite at mesh radius " +
                        format_double(rho));
      }
      diagonal(j) = 2.0 * (energy - u);
    }
    system.block(n, 0).add_grid(diagonal);

    bool any_correction = false;
    const cplx mean_diagonal = diagonal.mean();
    for (int k = 0; k < B; ++k) {
      const int m = ang.channel(k);
      double c = 0.25 - static_cast<double>(m) * m;
      double kinetic = 0.0;
      if (correction_active && std::abs(m) <= kCorrectedChannels) {
        const double corrected =
            origin_centrifugal(n, m, st.offsets, st.weights);
        kinetic = origin_energy_factor(n, m, st.offsets, st.weights) - 1.0;
        if (std::abs(corrected - c) > kCorrectionCutoff * std::max(1.0, std::abs(c)) ||
            std::abs(kinetic) > kCorrectionCutoff) {
          any_correction = true;
        }
        c = corrected;
      }
      centrifugal(k) = c / (rho * rho) + kinetic * mean_diagonal;
    }
    if (correction_active && n >= 3 && !any_correction) {
      correction_active = false;
    }
    system.block(n, 0).add_channel(centrifugal);
  }

  // Incident channel coefficients for every right-hand side at radius rho.
  auto incident_at = [&](double rho) -> Eigen::MatrixXcd {
    const Eigen::VectorXcd base = incident_channels(ang, setup.q, rho);
    return base.asDiagonal() * incident_weights;
  };

  const double rho_n = rad.node(N);
  const double rho_prev = rad.node(N - 1);
  const Eigen::VectorXcd out_n =
      outgoing_channels(ang, setup.q, rho_n, opt.matching);
  const Eigen::MatrixXcd inc_n = incident_at(rho_n);

  // Seven-point rows next to rho_N: psi at rho_k > rho_N is expressed as
  //   C(rho_k) = I(rho_k) + (C(rho_N) - I(rho_N)) out(rho_k) / out(rho_N),
  // with C(rho) = F^-1 psi / sqrt(rho).
  if (opt.right_closure == RightClosure::kExtrapolated) {
    for (int n = N - 2; n < N; ++n) {
      const Stencil& st = row_stencil(n, N, opt.right_closure);
      for (size_t i = 0; i < st.offsets.size(); ++i) {
        const int col = n + st.offsets[i];
        if (col <= N) continue;
        const double rho_k = rho_n + (col - N) * h;
        const double w = st.weights[i] * inv_h2;
        const Eigen::VectorXcd ratio =
            outgoing_channels(ang, setup.q, rho_k, opt.matching).cwiseQuotient(out_n);
        system.block(n, N - n).add_channel(w * std::sqrt(rho_k / rho_n) * ratio);
        const Eigen::MatrixXcd inc_k = incident_at(rho_k);
        const Eigen::MatrixXcd chan = inc_k - ratio.asDiagonal() * inc_n;
        Eigen::MatrixXcd contribution = -w * std::sqrt(rho_k) * (basis->to_grid * chan);
        if (system.has_rhs(n)) {
          system.rhs(n) += contribution;
        } else {
          system.rhs(n) = contribution;
        }
      }
    }
  }

  // Matching row: eliminate the outgoing amplitude between rho_{N-1} and
  // rho_N channel by channel,
  //   r_m C_m(rho_{N-1}) - C_m(rho_N) = r_m I_m(rho_{N-1}) - I_m(rho_N),
  // r_m = out_m(rho_N) / out_m(rho_{N-1}); written in grid space.
  const Eigen::VectorXcd out_prev =
      outgoing_channels(ang, setup.q, rho_prev, opt.matching);
  const Eigen::VectorXcd ratio = out_n.cwiseQuotient(out_prev);
  system.block(N, -1).add_channel(ratio / std::sqrt(rho_prev));
  system.block(N, 0).scalar = -1.0 / std::sqrt(rho_n);
  const Eigen::MatrixXcd inc_prev = incident_at(rho_prev);
  system.rhs(N) = basis->to_grid * (ratio.asDiagonal() * inc_prev - inc_n);

  return system;
}

RadialSolution solve_band(const BlockBandSystem& system) {
  if (system.nrhs() != 1) {
    throw Error(ErrorCategory::kInvalidArgument,
                "solve_band expects a single right-hand side");
  }
  const BandSolution full = solve_band_rows(system, 0);
  RadialSolution out;
  out.psi.resize(system.rows(), system.block_size());
  for (int n = 0; n < system.rows(); ++n) {
    out.psi.row(n) = full.values[n].col(0).transpose();
  }
  out.residual = relative_residual(system, full);
  return out;
}

}  // namespace aniscat
