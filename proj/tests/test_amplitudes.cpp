#include "aniscat/amplitudes.hpp"

#include <cmath>
#include <numbers>

#include "aniscat/errors.hpp"
#include "aniscat/partial_wave.hpp"
#include "aniscat/scattering.hpp"
#include "gtest/gtest.h"

namespace aniscat {
namespace {

constexpr double kPi = std::numbers::pi;

AmplitudeSet constant_set(int M, cplx value, double q = 1.0, double phi_q = 0.0) {
  AmplitudeSet set;
  set.q = q;
  set.phi_q = phi_q;
  set.M = M;
  set.fm.assign(2 * M + 1, 0.0);
  set.fm[M] = std::sqrt(2 * kPi) * value;
  set.angles = uniform_angles(4 * M + 2);
  return set;
}

ProblemSetup barrier_setup(double U0, double ax, double ay, int M, int N, double rhoN,
                           double q) {
  ProblemSetup setup;
  setup.q = q;
  setup.spec = PotentialSpec{EllipticBarrier{U0, ax, ay, 0.0}, Units::kBarrier, 1.0};
  setup.ang = make_angular_grid(M);
  setup.rad = make_radial_grid(N, 0.0, rhoN);
  return setup;
}

TEST(AmplitudeAtTest, UnitChannelCoefficients) {
  const AmplitudeSet one = constant_set(2, 1.0);
  for (double phi : {0.0, 1.0, 4.0}) EXPECT_NEAR(std::abs(amplitude_at(one, phi) - 1.0), 0.0, 1e-15);
  AmplitudeSet first = constant_set(2, 0.0);
  first.fm[3] = std::sqrt(2 * kPi);
  EXPECT_NEAR(std::abs(amplitude_at(first, kPi) + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(amplitude_at(first, 0.3 + 2 * kPi) - amplitude_at(first, 0.3)), 0.0, 1e-14);
}

TEST(CrossSectionTest, ConstantAmplitude) {
  const cplx c(0.3, -0.4);
  const AmplitudeSet set = constant_set(3, c);
  for (double d : differential_cs(set)) EXPECT_NEAR(d, std::norm(c), 1e-15);
  EXPECT_NEAR(integrated_cs(set), 2 * kPi * std::norm(c), 1e-14);
  std::vector<AmplitudeSet> sweep;
  for (int k = 0; k < 5; ++k) sweep.push_back(constant_set(3, c, 1.0, 2 * kPi * k / 5));
  EXPECT_NEAR(total_cs(sweep), 2 * kPi * std::norm(c), 1e-14);
}

TEST(CrossSectionTest, GlobalPhaseDoesNotChangeDifferential) {
  AmplitudeSet a = constant_set(2, 0.0);
  a.fm = {cplx(0.1, 0.2), cplx(-0.3, 0.1), cplx(0.5, 0.0), cplx(0.0, -0.2), cplx(0.05, 0.05)};
  AmplitudeSet b = a;
  for (cplx& f : b.fm) f *= std::polar(1.0, 0.83);
  const auto da = differential_cs(a);
  const auto db = differential_cs(b);
  for (size_t i = 0; i < da.size(); ++i) EXPECT_NEAR(da[i], db[i], 1e-15);
}

TEST(CrossSectionTest, NonUniformDirectionsAreRejected) {
  std::vector<AmplitudeSet> sweep{constant_set(1, 1.0, 1.0, 0.0), constant_set(1, 1.0, 1.0, 1.0)};
  try {
    total_cs(sweep);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kInvalidArgument);
  }
  EXPECT_THROW(total_cs({}), Error);
}

TEST(SymmetrizeTest, ListedCases) {
  const SymmetrizedSet constant = symmetrize(constant_set(2, cplx(0.7, 0.1)));
  for (double phi : {0.0, 1.3}) {
    EXPECT_NEAR(std::abs(amplitude_at(constant.gerade, phi) - std::sqrt(2.0) * cplx(0.7, 0.1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(amplitude_at(constant.ungerade, phi)), 0.0, 1e-15);
  }
  AmplitudeSet odd = constant_set(2, 0.0);
  odd.fm[3] = std::sqrt(2 * kPi);
  const SymmetrizedSet sym = symmetrize(odd);
  EXPECT_NEAR(std::abs(amplitude_at(sym.gerade, 0.4)), 0.0, 1e-15);
}

TEST(SymmetrizeTest, MatchesDefinitionPointwise) {
  AmplitudeSet set = constant_set(3, 0.0);
  for (int k = 0; k < 7; ++k) set.fm[k] = cplx(0.1 * k - 0.2, 0.05 * k * k - 0.3);
  const SymmetrizedSet sym = symmetrize(set);
  for (double phi : {0.0, 0.9, 2.2, 5.0}) {
    const cplx f = amplitude_at(set, phi);
    const cplx f_half = amplitude_at(set, phi - kPi);
    EXPECT_NEAR(std::abs(amplitude_at(sym.gerade, phi) - (f + f_half) / std::sqrt(2.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(amplitude_at(sym.ungerade, phi) - (f - f_half) / std::sqrt(2.0)), 0.0, 1e-14);
  }
}

TEST(ThresholdTest, ReferenceValues) {
  const cplx low = threshold_amplitude(0.125, 0.01);
  EXPECT_NEAR(low.real(), -0.49486, 1e-5);
  EXPECT_NEAR(low.imag(), 0.11430, 1e-5);
  const cplx high = threshold_amplitude(1.0, 0.01);
  EXPECT_NEAR(high.real(), -0.23901, 1e-5);
  EXPECT_NEAR(high.imag(), 0.07952, 1e-5);
  for (double q : {0.01, 0.3, 2.0}) {
    for (double a : {1e-3, 0.1, 0.5}) {
      const cplx f = threshold_amplitude(q, a);
      EXPECT_LT(f.real(), 0.0);
      EXPECT_GT(f.imag(), 0.0);
    }
  }
  EXPECT_THROW(threshold_amplitude(0.0, 0.01), Error);
  EXPECT_THROW(threshold_amplitude(1.0, -0.01), Error);
}

TEST(ScatteringLengthTest, RoundTrips) {
  EXPECT_NEAR(scattering_length(threshold_amplitude(0.125, 0.01), 0.125), 0.01, 1e-12);
  EXPECT_NEAR(scattering_length(threshold_amplitude(0.5, 0.3), 0.5), 0.3, 3e-11);
  EXPECT_THROW(scattering_length(0.0, 1.0), Error);
}

TEST(EikonalTest, FormulaValues) {
  EXPECT_DOUBLE_EQ(eikonal_sigma(10.0, 1.0), 0.4 * std::sqrt(10.0 * kPi));
  EXPECT_NEAR(eikonal_sigma(10.0, 1.0), 2.2419965, 1e-7);
  EXPECT_DOUBLE_EQ(eikonal_sigma(8.0, 2.0) / eikonal_sigma(2.0, 2.0), 0.5);
  EXPECT_EQ(eikonal_sigma(3.0, 0.0), 0.0);
  EXPECT_THROW(eikonal_sigma(0.0, 1.0), Error);
}

TEST(ExtractionTest, PureIncidentWaveHasZeroAmplitude) {
  const ProblemSetup setup = barrier_setup(0.0, 1.0, 1.0, 2, 100, 10.0, 1.0);
  RadialSolution sol;
  sol.psi = Eigen::MatrixXcd::Zero(101, 5);
  const FourierBasis basis(setup.ang);
  for (int n = 1; n <= 100; ++n) {
    const double rho = setup.rad.node(n);
    sol.psi.row(n) = (std::sqrt(rho) * basis.to_grid * incident_channels(setup.ang, 1.0, rho)).transpose();
  }
  const AmplitudeSet set = extract_amplitudes(sol, setup);
  for (const cplx& f : set.fm) EXPECT_LT(std::abs(f), 1e-14);
  EXPECT_TRUE(set.warnings.empty());
}

TEST(ExtractionTest, OpticalTheoremConstantFromOracle) {
  const PhaseShiftTable table = barrier_phase_shifts(1.3, 4.0, 1.0);
  const double lhs = oracle_integrated_cs(table);
  const double rhs = std::sqrt(8 * kPi / 1.3) * oracle_amplitude(table, 0.0).imag();
  EXPECT_NEAR(lhs, rhs, 1e-12 * lhs);
}

TEST(ExtractionTest, SolverSatisfiesOpticalTheoremForEllipse) {
  const ProblemSetup setup = barrier_setup(20.0, 1.0, 1.5, 10, 3000, 6.0, 1.5);
  const AmplitudeSet set = solve_amplitudes(setup);
  EXPECT_LT(optical_theorem_defect(set), 1e-3);
}

TEST(ExtractionTest, ChannelsMatchPartialWaveOracle) {
  const ProblemSetup setup = barrier_setup(1e3, 1.0, 1.0, 6, 12000, 3.0, 1.0);
  const AmplitudeSet set = solve_amplitudes(setup);
  const PhaseShiftTable table = barrier_phase_shifts(1.0, 1e3, 1.0);
  for (int m = -4; m <= 4; ++m) {
    const cplx expected = oracle_channel_amplitude(table, m);
    EXPECT_LT(std::abs(set.coefficient(m) - expected), 1e-4 * std::abs(expected)) << "m=" << m;
  }
}

double largest_channel_difference(const std::vector<AmplitudeSet>& a,
                                  const std::vector<AmplitudeSet>& b, int m_max) {
  double out = 0.0;
  for (size_t d = 0; d < a.size(); ++d) {
    for (int m = -m_max; m <= m_max; ++m) {
      out = std::max(out, std::abs(a[d].coefficient(m) - b[d].coefficient(m)));
    }
  }
  return out;
}

TEST(RotationTest, RotationsByNodeMultiplesAreExact) {
  // 2M + 1 = 25 nodes: the directions 2 pi k / 5 map the node set onto
  // itself, so both rotation modes solve the same discrete problem.
  const ProblemSetup base = barrier_setup(15.0, 0.8, 1.4, 12, 1500, 5.0, 1.2);
  const std::vector<double> dirs = {0.0, 2 * kPi / 5, 4 * kPi / 5, 6 * kPi / 5, 8 * kPi / 5};
  const auto by_potential = solve_directions(base, dirs, RotationMode::kPotential);
  const auto by_incidence = solve_directions(base, dirs, RotationMode::kIncident);
  ASSERT_EQ(by_potential.size(), dirs.size());
  for (size_t d = 0; d < dirs.size(); ++d) {
    EXPECT_DOUBLE_EQ(by_potential[d].phi_q, by_incidence[d].phi_q);
  }
  EXPECT_LT(largest_channel_difference(by_potential, by_incidence, 12), 1e-9);
}

TEST(RotationTest, GeneralRotationsAgreeAsAngularGridConverges) {
  std::vector<double> differences;
  for (int M : {10, 24}) {
    ProblemSetup base = barrier_setup(15.0, 0.8, 1.4, M, 1500, 5.0, 1.2);
    std::get<EllipticBarrier>(base.spec.model).edge_width = 0.1;
    const std::vector<double> dirs = {0.0, 0.7};
    differences.push_back(largest_channel_difference(
        solve_directions(base, dirs, RotationMode::kPotential),
        solve_directions(base, dirs, RotationMode::kIncident), 4));
  }
  EXPECT_LT(differences[1], 1e-2 * differences[0]);
  EXPECT_LT(differences[1], 1e-8);
}

TEST(RotationTest, CircularBarrierCrossSectionIndependentOfDirection) {
  const ProblemSetup base = barrier_setup(50.0, 1.0, 1.0, 6, 1500, 5.0, 1.0);
  std::vector<double> dirs;
  for (int k = 0; k < 101; ++k) dirs.push_back(2 * kPi * k / 101);
  const auto sets = solve_directions(base, dirs, RotationMode::kIncident);
  const auto first = differential_cs(sets[0]);
  for (const AmplitudeSet& s : sets) {
    const auto d = differential_cs(s);
    for (size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], first[i], 1e-8);
  }
  EXPECT_NEAR(total_cs({sets[0]}), total_cs(sets), 1e-12 * total_cs(sets));
}

TEST(CrossSectionTest, SymmetrizedSumIdentityOnDipoleRun) {
  ProblemSetup base;
  base.q = 10.0;
  base.spec = PotentialSpec{DipoleGeneral{0.2 * kPi, kPi / 3, 0.2 * kPi, 1.0, 0.1},
                            Units::kDipolar, 1.0};
  base.ang = make_angular_grid(6);
  base.rad = make_radial_grid(3000, 0.1, 36.0);
  const auto sets = solve_directions(base, {0.0, 2 * kPi / 3, 4 * kPi / 3}, RotationMode::kIncident);
  const CrossSectionSet cs = cross_sections(sets, 1.0);
  EXPECT_NEAR(cs.sigma_g + cs.sigma_u, 2 * cs.sigma, 1e-10 * cs.sigma);
  ASSERT_TRUE(cs.sigma_sc.has_value());
  EXPECT_DOUBLE_EQ(*cs.sigma_sc, eikonal_sigma(10.0, 1.0));
  EXPECT_GE(cs.differential.minCoeff(), 0.0);
}

}  // namespace
}  // namespace aniscat
