#include "aniscat/grids.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "aniscat/errors.hpp"

namespace aniscat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

AngularGrid::AngularGrid(int M) : M_(M) {
  if (M < 0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "angular truncation order M must be >= 0, got " +
                    std::to_string(M));
  }
  const int count = 2 * M + 1;
  nodes_.resize(count);
  for (int j = 0; j < count; ++j) {
    nodes_[j] = kTwoPi * j / count;
  }
}

double AngularGrid::spacing() const { return kTwoPi / size(); }

RadialGrid::RadialGrid(int N, double rho0, double rhoN)
    : N_(N), rho0_(rho0), rhoN_(rhoN), h_(0.0) {
  if (N <= 0) {
    throw Error(ErrorCategory::kInvalidArgument,
                "radial node count N must be positive, got " +
                    std::to_string(N));
  }
  if (!(rho0 >= 0.0) || !std::isfinite(rhoN) || !(rhoN > rho0)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "radial grid needs 0 <= rho0 < rhoN");
  }
  h_ = (rhoN - rho0) / N;
}

AngularGrid make_angular_grid(int M) { return AngularGrid(M); }

RadialGrid make_radial_grid(int N, double rho0, double rhoN) {
  return RadialGrid(N, rho0, rhoN);
}

Eigen::MatrixXd kinetic_matrix(const AngularGrid& grid) {
  const int B = grid.size();
  const int M = grid.M();
  // Circulant: the entry depends only on (j - j') mod B.
  Eigen::VectorXd column(B);
  for (int d = 0; d < B; ++d) {
    double sum = 0.0;
    for (int m = 1; m <= M; ++m) {
      sum += 2.0 * m * m * std::cos(kTwoPi * m * d / B);
    }
    column(d) = -sum / B;
  }
  Eigen::MatrixXd h0(B, B);
  for (int j = 0; j < B; ++j) {
    for (int jp = 0; jp < B; ++jp) {
      h0(j, jp) = column((j - jp + B) % B);
    }
  }
  return h0;
}

FourierCoefficients grid_to_fourier(const std::vector<cplx>& samples,
                                    const AngularGrid& grid, double rho) {
  const int B = grid.size();
  if (static_cast<int>(samples.size()) != B) {
    throw Error(ErrorCategory::kInvalidArgument,
                "grid_to_fourier: expected " + std::to_string(B) +
                    " samples, got " + std::to_string(samples.size()));
  }
  FourierCoefficients out;
  out.M = grid.M();
  out.rho = rho;
  out.values.assign(B, cplx(0.0));
  for (int k = 0; k < B; ++k) {
    const int m = grid.channel(k);
    cplx sum(0.0);
    for (int j = 0; j < B; ++j) {
      sum += std::polar(1.0, -m * grid.node(j)) * samples[j];
    }
    out.values[k] = sum / static_cast<double>(B);
  }
  return out;
}

std::vector<cplx> fourier_to_grid(const FourierCoefficients& coeffs,
                                  const AngularGrid& grid) {
  const int B = grid.size();
  if (coeffs.M != grid.M() || static_cast<int>(coeffs.values.size()) != B) {
    throw Error(ErrorCategory::kInvalidArgument,
                "fourier_to_grid: coefficient order does not match grid");
  }
  std::vector<cplx> samples(B, cplx(0.0));
  for (int j = 0; j < B; ++j) {
    cplx sum(0.0);
    for (int k = 0; k < B; ++k) {
      sum += coeffs.values[k] * std::polar(1.0, grid.channel(k) * grid.node(j));
    }
    samples[j] = sum;
  }
  return samples;
}

std::vector<double> interpolation_weights(const AngularGrid& grid, double phi) {
  const int B = grid.size();
  std::vector<double> weights(B);
  for (int j = 0; j < B; ++j) {
    const double d = phi - grid.node(j);
    double sum = 1.0;
    for (int m = 1; m <= grid.M(); ++m) {
      sum += 2.0 * std::cos(m * d);
    }
    weights[j] = sum / B;
  }
  return weights;
}

cplx interpolate(const std::vector<cplx>& samples, const AngularGrid& grid,
                 double phi) {
  if (static_cast<int>(samples.size()) != grid.size()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "interpolate: sample count does not match grid");
  }
  const std::vector<double> weights = interpolation_weights(grid, phi);
  cplx sum(0.0);
  for (int j = 0; j < grid.size(); ++j) {
    sum += weights[j] * samples[j];
  }
  return sum;
}

FourierBasis::FourierBasis(const AngularGrid& grid) : M(grid.M()) {
  const int B = grid.size();
  to_grid.resize(B, B);
  to_channel.resize(B, B);
  for (int j = 0; j < B; ++j) {
    for (int k = 0; k < B; ++k) {
      // Reduce m*j modulo B so the phase is an exact grid angle.
      const long long idx =
          ((static_cast<long long>(grid.channel(k)) * j) % B + B) % B;
      const cplx e = std::polar(1.0, kTwoPi * idx / B);
      to_grid(j, k) = e;
      to_channel(k, j) = std::conj(e) / static_cast<double>(B);
    }
  }
}

Eigen::MatrixXcd FourierBasis::circulant(
    const Eigen::VectorXcd& eigenvalues) const {
  const int B = size();
  // Entry (j, j') = (1/B) sum_m lambda_m exp(i m (phi_j - phi_j')) depends on
  // (j - j') mod B only, so build one column and replicate it.
  Eigen::VectorXcd column = to_grid * eigenvalues / static_cast<double>(B);
  Eigen::MatrixXcd out(B, B);
  for (int jp = 0; jp < B; ++jp) {
    for (int j = 0; j < B; ++j) {
      out(j, jp) = column((j - jp + B) % B);
    }
  }
  return out;
}

}  // namespace aniscat
