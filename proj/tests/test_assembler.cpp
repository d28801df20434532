#include "aniscat/assembler.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "aniscat/amplitudes.hpp"
#include "aniscat/errors.hpp"
#include "aniscat/scattering.hpp"
#include "aniscat/special_functions.hpp"
#include "gtest/gtest.h"

namespace aniscat {
namespace {

constexpr double kPi = std::numbers::pi;

ProblemSetup barrier_setup(double U0, double ax, double ay, int M, int N, double rhoN,
                           double q = 1.0) {
  ProblemSetup setup;
  setup.q = q;
  setup.spec = PotentialSpec{EllipticBarrier{U0, ax, ay, 0.0}, Units::kBarrier, 1.0};
  setup.ang = make_angular_grid(M);
  setup.rad = make_radial_grid(N, 0.0, rhoN);
  return setup;
}

TEST(StencilTest, InteriorWeightsAnnihilateConstants) {
  const ProblemSetup setup = barrier_setup(0.0, 1.0, 1.0, 0, 60, 6.0);
  const BlockBandSystem system = assemble(setup);
  const double h = setup.rad.h();
  cplx sum = 0.0;
  for (int o = -3; o <= 3; ++o) sum += system.block(30, o).scalar;
  EXPECT_NEAR(std::abs(sum * h * h), 0.0, 1e-12);
  EXPECT_NEAR(system.block(30, 3).scalar.real() * h * h, 2.0 / 180.0, 1e-15);
  EXPECT_NEAR(system.block(30, -1).scalar.real() * h * h, 270.0 / 180.0, 1e-15);
}

TEST(AssemblerTest, FreeParticleGivesRegularBesselSolution) {
  const ProblemSetup setup = barrier_setup(0.0, 1.0, 1.0, 0, 2000, 20.0, 1.3);
  const RadialSolution sol = solve_band(assemble(setup));
  EXPECT_EQ(sol.psi(0, 0), cplx(0.0));
  EXPECT_LT(sol.residual, 1e-10);
  const int ref = 100;
  const cplx scale = sol.psi(ref, 0) / (std::sqrt(setup.rad.node(ref)) *
                                        bessel_j(0, setup.q * setup.rad.node(ref)));
  double worst = 0.0;
  double peak = 0.0;
  for (int n = 1; n <= setup.rad.N(); ++n) {
    const double rho = setup.rad.node(n);
    const cplx expected = scale * std::sqrt(rho) * bessel_j(0, setup.q * rho);
    worst = std::max(worst, std::abs(sol.psi(n, 0) - expected));
    peak = std::max(peak, std::abs(expected));
  }
  EXPECT_LT(worst / peak, 1e-6);
  const AmplitudeSet set = extract_amplitudes(sol, setup);
  for (const cplx& f : set.fm) EXPECT_LT(std::abs(f), 1e-8);
}

TEST(AssemblerTest, MirrorSymmetricPotentialGivesMirrorSymmetricSolution) {
  const ProblemSetup setup = barrier_setup(50.0, 1.0, 1.4, 3, 600, 6.0);
  const RadialSolution sol = solve_band(assemble(setup));
  EXPECT_LT(sol.residual, 1e-10);
  for (int n = 1; n <= setup.rad.N(); n += 37) {
    for (int j = 1; j < setup.ang.size(); ++j) {
      const int mirror = setup.ang.size() - j;
      EXPECT_LT(std::abs(sol.psi(n, j) - sol.psi(n, mirror)),
                1e-10 * (1.0 + sol.psi.row(n).cwiseAbs().maxCoeff()));
    }
  }
}

TEST(AssemblerTest, IsotropicScattererGivesDirectionIndependentSolution) {
  // With incident weights that put the same amplitude in channel 0 only, an
  // isotropic scatterer keeps psi constant across the angular nodes.
  const ProblemSetup setup = barrier_setup(50.0, 1.0, 1.0, 3, 600, 6.0);
  Eigen::MatrixXcd weights = Eigen::MatrixXcd::Zero(setup.ang.size(), 1);
  weights(setup.ang.M(), 0) = 1.0;
  const BlockBandSystem system = assemble(setup, weights);
  const BandSolution sol = solve_band_rows(system, 0);
  EXPECT_LT(relative_residual(system, sol), 1e-10);
  double scale = 0.0;
  for (int n = 1; n <= setup.rad.N(); ++n) scale = std::max(scale, sol.row(n).cwiseAbs().maxCoeff());
  for (int n = 1; n <= setup.rad.N(); ++n) {
    const Eigen::VectorXcd row = sol.row(n).col(0);
    for (int j = 1; j < row.size(); ++j) {
      EXPECT_LE(std::abs(row(j) - row(0)), 1e-10 * scale) << "n=" << n;
    }
  }
}

TEST(AssemblerTest, IncidentRotationIsTwoPiPeriodic) {
  ProblemSetup a = barrier_setup(30.0, 1.0, 1.6, 4, 400, 6.0);
  a.phi_q = 0.7;
  ProblemSetup b = a;
  b.phi_q = 0.7 + 2 * kPi;
  const AmplitudeSet fa = solve_amplitudes(a);
  const AmplitudeSet fb = solve_amplitudes(b);
  for (size_t k = 0; k < fa.fm.size(); ++k) {
    EXPECT_LT(std::abs(fa.fm[k] - fb.fm[k]), 1e-12 * (1.0 + std::abs(fa.fm[k])));
  }
}

TEST(AssemblerTest, DoublingOuterRadiusChangesAmplitudesLittle) {
  const ProblemSetup near = barrier_setup(100.0, 1.0, 1.0, 4, 1500, 8.0);
  const ProblemSetup far = barrier_setup(100.0, 1.0, 1.0, 4, 3000, 16.0);
  const AmplitudeSet a = solve_amplitudes(near);
  const AmplitudeSet b = solve_amplitudes(far);
  double diff = 0.0;
  double scale = 0.0;
  for (size_t k = 0; k < a.fm.size(); ++k) {
    diff = std::max(diff, std::abs(a.fm[k] - b.fm[k]));
    scale = std::max(scale, std::abs(a.fm[k]));
  }
  EXPECT_LE(diff / scale, 1e-4);
}

TEST(AssemblerTest, RadialConvergenceOrderForSmoothBarrier) {
  auto forward = [](int N) {
    ProblemSetup setup = barrier_setup(100.0, 1.0, 1.0, 4, N, 8.0);
    std::get<EllipticBarrier>(setup.spec.model).edge_width = 0.1;
    return amplitude_at(solve_amplitudes(setup), 0.0);
  };
  std::vector<cplx> f;
  for (int N : {100, 200, 400, 800}) f.push_back(forward(N));
  for (int i = 0; i + 2 < static_cast<int>(f.size()); ++i) {
    const double order = std::log2(std::abs(f[i + 1] - f[i]) / std::abs(f[i + 2] - f[i + 1]));
    EXPECT_GE(order, 4.0) << "from N = " << (100 << i);
    EXPECT_LE(order, 6.5) << "from N = " << (100 << i);
  }
}

TEST(AssemblerTest, OriginCorrectionIsExactForRegularPower) {
  const std::vector<int> offsets{-1, 0, 1};
  const std::vector<double> weights{1.0, -2.0, 1.0};
  for (int m : {0, 1}) {
    const double s = m + 0.5;
    const int n = 1;
    const double c = origin_centrifugal(n, m, offsets, weights);
    // Row n with h = 1 applied to rho^s: sum_o w_o (n+o)^s + c n^(s-2) = 0.
    double lhs = 0.0;
    for (size_t i = 0; i < offsets.size(); ++i) lhs += weights[i] * std::pow(n + offsets[i], s);
    EXPECT_NEAR(lhs + c * std::pow(n, s - 2.0), 0.0, 1e-14);
  }
  // Far from the origin the corrected coefficient tends to 1/4 - m^2.
  const std::vector<int> seven{-3, -2, -1, 0, 1, 2, 3};
  const std::vector<double> w7{2.0 / 180, -27.0 / 180, 270.0 / 180, -490.0 / 180,
                               270.0 / 180, -27.0 / 180, 2.0 / 180};
  EXPECT_NEAR(origin_centrifugal(5000, 1, seven, w7), -0.75, 1e-10);
}

TEST(AssemblerValidationTest, RejectsInvalidSetups) {
  ProblemSetup small = barrier_setup(1.0, 1.0, 1.0, 1, 6, 5.0);
  EXPECT_THROW(assemble(small), Error);
  ProblemSetup bad_q = barrier_setup(1.0, 1.0, 1.0, 1, 100, 5.0, -1.0);
  try {
    assemble(bad_q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kInvalidArgument);
  }
  ProblemSetup short_range;
  short_range.q = 1.0;
  short_range.spec = PotentialSpec{DipoleIsotropic{1.0, 0.1}, Units::kDipolar, 1.0};
  short_range.ang = make_angular_grid(2);
  short_range.rad = make_radial_grid(200, 0.1, 10.0);
  try {
    assemble(short_range);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kPrecondition);
    EXPECT_NE(std::string(e.what()).find("asymptotic"), std::string::npos);
  }
  short_range.rad = make_radial_grid(200, 0.05, 200.0);
  EXPECT_THROW(assemble(short_range), Error);
}

TEST(AssemblerTest, HardWallRowIsDirichlet) {
  ProblemSetup setup;
  setup.q = 2.0;
  setup.spec = PotentialSpec{DipoleIsotropic{1.0, 0.1}, Units::kDipolar, 1.0};
  setup.ang = make_angular_grid(2);
  setup.rad = make_radial_grid(2000, 0.1, 90.0);
  const RadialSolution sol = solve_band(assemble(setup));
  EXPECT_EQ(sol.psi.row(0).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(sol.residual, 1e-10);
}

}  // namespace
}  // namespace aniscat
