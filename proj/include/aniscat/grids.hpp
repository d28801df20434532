// Angular and radial meshes, the grid <-> Fourier-channel transforms, Fourier
// interpolation and the angular kinetic-energy matrix.
//
// Channel coefficients and grid samples are related by
//   C_m      = (1/(2M+1)) sum_j exp(-i m phi_j) s_j
//   s_j      = sum_m C_m exp(i m phi_j),      phi_j = 2 pi j / (2M+1).
// Channel vectors are stored with index k = m + M.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace aniscat {

using cplx = std::complex<double>;

class AngularGrid {
 public:
  explicit AngularGrid(int M);

  int M() const { return M_; }
  int size() const { return 2 * M_ + 1; }
  double node(int j) const { return nodes_[j]; }
  const std::vector<double>& nodes() const { return nodes_; }
  double spacing() const;

  // Channel index m of storage slot k.
  int channel(int k) const { return k - M_; }

 private:
  int M_;
  std::vector<double> nodes_;
};

class RadialGrid {
 public:
  RadialGrid(int N, double rho0, double rhoN);

  int N() const { return N_; }
  double rho0() const { return rho0_; }
  double rhoN() const { return rhoN_; }
  double h() const { return h_; }
  double node(int n) const { return n == N_ ? rhoN_ : rho0_ + n * h_; }

 private:
  int N_;
  double rho0_;
  double rhoN_;
  double h_;
};

struct FourierCoefficients {
  int M = 0;
  double rho = 0.0;
  std::vector<cplx> values;  // length 2M+1, index m + M

  cplx operator[](int m) const { return values[m + M]; }
  cplx& operator[](int m) { return values[m + M]; }
};

AngularGrid make_angular_grid(int M);
RadialGrid make_radial_grid(int N, double rho0, double rhoN);

// h0_{jj'} = -(1/(2M+1)) sum_m m^2 exp(i m (phi_j - phi_j')).
Eigen::MatrixXd kinetic_matrix(const AngularGrid& grid);

FourierCoefficients grid_to_fourier(const std::vector<cplx>& samples,
                                    const AngularGrid& grid, double rho = 0.0);
std::vector<cplx> fourier_to_grid(const FourierCoefficients& coeffs,
                                  const AngularGrid& grid);

// Weights omega_j(phi) = (1/(2M+1)) sum_m exp(i m (phi - phi_j)).
std::vector<double> interpolation_weights(const AngularGrid& grid, double phi);
cplx interpolate(const std::vector<cplx>& samples, const AngularGrid& grid,
                 double phi);

// Dense transform matrices for the block assembly.
//   to_grid(j, k)    = exp(i m_k phi_j)
//   to_channel(k, j) = exp(-i m_k phi_j) / (2M+1)
struct FourierBasis {
  explicit FourierBasis(const AngularGrid& grid);

  int size() const { return static_cast<int>(to_grid.rows()); }

  // Grid-space matrix of the operator that multiplies channel m by
  // eigenvalues(m + M). The result is circulant.
  Eigen::MatrixXcd circulant(const Eigen::VectorXcd& eigenvalues) const;

  int M;
  Eigen::MatrixXcd to_grid;
  Eigen::MatrixXcd to_channel;
};

}  // namespace aniscat
