#include <gtest/gtest.h>

#include <thread>

#include "c60/continuation.hpp"
#include "c60/errors.hpp"
#include "common.hpp"

using namespace c60;

namespace {

const LinearModes& modes() {
  static const LinearModes m{test::equilibrium().u0, test::slice_spectrum()};
  return m;
}

ContinuationOptions options() {
  ContinuationOptions opt;
  opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return opt;
}

const Seed& standing_seed() {
  static const Seed s = seed_from_mode(modes(), 2, 0.01, "D5pxD1");
  return s;
}

const PeriodicOrbit& standing_orbit() {
  static const PeriodicOrbit o = newton_correct(standing_seed(), options());
  return o;
}

Eigen::VectorXd act_state(int g, const Eigen::VectorXd& x) {
  const auto& tab = SymmetryTable::get();
  return phase_state(tab.apply(g, x.head(kDim)), tab.apply(g, x.tail(kDim)));
}

Eigen::VectorXd small_state(std::mt19937& rng) {
  return phase_state(test::equilibrium().u0 + test::random_vector(rng, kDim, 0.01), test::random_vector(rng, kDim, 0.05));
}

}  // namespace

TEST(Hamiltonian, RestStateAndInvariance) {
  const auto& u0 = test::equilibrium().u0;
  const Eigen::VectorXd x = phase_state(u0, Eigen::VectorXd::Zero(kDim));
  EXPECT_DOUBLE_EQ(hamiltonian(x), energy(u0));
  std::mt19937 rng(51);
  const Eigen::VectorXd y = small_state(rng);
  for (int g : {1, 17, 60, 99}) EXPECT_NEAR(hamiltonian(act_state(g, y)), hamiltonian(y), 1e-10 * std::abs(hamiltonian(y)));
  EXPECT_THROW(phase_state(u0, Eigen::VectorXd::Zero(3)), DomainViolation);
}

TEST(Generators, TranslationColumn) {
  std::mt19937 rng(52);
  const Eigen::MatrixXd A = generators(small_state(rng));
  ASSERT_EQ(A.rows(), kPhaseDim);
  ASSERT_EQ(A.cols(), 7);
  for (int a = 0; a < kAtoms; ++a) {
    EXPECT_EQ(A(3 * a, 0), 1.0);
    EXPECT_EQ(A(3 * a + 1, 0), 0.0);
  }
  EXPECT_EQ(A.col(0).tail(kDim).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Generators, OrthogonalToHamiltonianGradient) {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd x = small_state(rng);
    const Eigen::VectorXd grad = phase_state(gradient(x.head(kDim)), x.tail(kDim));
    const Eigen::MatrixXd A = generators(x);
    for (int j = 0; j < 7; ++j) EXPECT_LT(std::abs(grad.dot(A.col(j))), 1e-9 * grad.norm() * A.col(j).norm()) << j;
  }
}

TEST(Flow, EquilibriumIsFixed) {
  const Eigen::VectorXd x = phase_state(test::equilibrium().u0, Eigen::VectorXd::Zero(kDim));
  EXPECT_LT((flow_time_one(x, 0.5, Multipliers::Zero()) - x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(flow_time_one(x, 0.0, Multipliers::Zero()), DomainViolation);
}

TEST(Flow, TimeReversal) {
  std::mt19937 rng(54);
  const Eigen::VectorXd x = small_state(rng);
  const Eigen::VectorXd y = flow_time_one(x, 0.5, Multipliers::Zero());
  const Eigen::VectorXd back = flow_time_one(phase_state(y.head(kDim), -y.tail(kDim)), 0.5, Multipliers::Zero());
  EXPECT_LT((phase_state(back.head(kDim), -back.tail(kDim)) - x).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Flow, ConservedQuantities) {
  std::mt19937 rng(55);
  const Eigen::VectorXd x = small_state(rng);
  const auto g0 = conserved_quantities(x);
  const auto g1 = conserved_quantities(flow_time_one(x, 0.5, Multipliers::Zero()));
  for (int k = 0; k < 7; ++k) EXPECT_NEAR(g1(k), g0(k), 1e-9 * std::max(1.0, std::abs(g0(k)))) << k;
}

TEST(Flow, SamplesEndAtTimeOne) {
  std::mt19937 rng(56);
  const Eigen::VectorXd x = small_state(rng);
  const auto s = flow_samples(x, 0.3, Multipliers::Zero(), {0.0, 0.5, 1.0});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], x);
  EXPECT_LT((s[2] - flow_time_one(x, 0.3, Multipliers::Zero())).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Seed, StandingWave) {
  const Seed& s = standing_seed();
  EXPECT_EQ(s.label, 3);
  EXPECT_NEAR(s.T, 2 * M_PI * 0.075300, 1e-5);
  double largest = 0;
  for (int a = 0; a < kAtoms; ++a) largest = std::max(largest, (s.x.segment<3>(3 * a) - modes().u0.segment<3>(3 * a)).norm());
  EXPECT_GT(largest, 0.0);
  EXPECT_LE(largest, s.amplitude + 1e-12);
}

TEST(Seed, WrongLabelHasNoFixedVectors) {
  EXPECT_THROW(seed_from_mode(modes(), 1, 0.01, "D5pxD1"), EmptyFixedSpace);
  EXPECT_THROW(seed_from_mode(modes(), 2, 0.01, "not-a-type"), DomainViolation);
  EXPECT_THROW(seed_from_mode(modes(), 47, 0.01, "D5pxD1"), DomainViolation);
}

TEST(Seed, ResidualIsQuadraticInAmplitude) {
  auto res = [](double a) {
    const Seed s = seed_from_mode(modes(), 2, a, "D5pxD1");
    return augmented_residual(s.x, Multipliers::Zero(), s.T, s.x).cwiseAbs().maxCoeff();
  };
  const double r1 = res(0.02), r2 = res(0.01), r3 = res(0.005);
  EXPECT_NEAR(r1 / r2, 4.0, 0.5);
  EXPECT_NEAR(r2 / r3, 4.0, 0.5);
}

TEST(Newton, StandingWaveConverges) {
  const PeriodicOrbit& o = standing_orbit();
  EXPECT_LT(o.residual, 1e-10);
  EXPECT_LT(o.multipliers.cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((flow_time_one(o.x, o.T, o.multipliers) - o.x).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(augmented_residual(o.x, o.multipliers, o.T, o.x).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(augmented_residual(o.x, o.multipliers, o.T, o.x).tail(kMultipliers).cwiseAbs().maxCoeff(), 0.0);
  // Frozen regression: period of the 0.01 A standing wave.
  EXPECT_NEAR(o.T, 0.473127284, 1e-8);
}

TEST(Newton, ConservationOverOnePeriod) {
  const PeriodicOrbit& o = standing_orbit();
  std::vector<double> times;
  for (int k = 0; k <= 16; ++k) times.push_back(k / 16.0);
  const auto g0 = conserved_quantities(o.x);
  for (const auto& x : flow_samples(o.x, o.T, o.multipliers, times)) {
    const auto g = conserved_quantities(x);
    for (int k = 0; k < 7; ++k) EXPECT_NEAR(g(k), g0(k), 1e-9 * std::max(1.0, std::abs(g0(k))));
  }
}

TEST(Newton, ConvergedSeedNeedsNoIterations) {
  const PeriodicOrbit& o = standing_orbit();
  Seed s = standing_seed();
  s.x = o.x;
  s.T = o.T;
  const PeriodicOrbit again = newton_correct(s, options());
  EXPECT_EQ(again.iterations, 0);
  EXPECT_EQ(again.x, o.x);
}

TEST(Newton, JacobianHasFullRank) {
  const PeriodicOrbit& o = standing_orbit();
  const Eigen::MatrixXd J = augmented_jacobian(o.x, o.multipliers, o.T, o.x, options());
  ASSERT_EQ(J.rows(), 367);
  ASSERT_EQ(J.cols(), kUnknowns);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  EXPECT_GT(s(366) / s(0), 1e-9);
}

TEST(Newton, LargeAmplitudeFails) {
  ContinuationOptions opt = options();
  opt.max_iterations = 1;
  EXPECT_THROW(newton_correct(seed_from_mode(modes(), 2, 10.0, "D5pxD1"), opt), NoConvergence);
}

TEST(Symmetry, StandingWaveIsBrakeOrbit) {
  const SymmetryReport r = verify_symmetry(standing_orbit(), "D5pxD1", options());
  EXPECT_LT(r.max_error, 1e-8);
  EXPECT_GE(r.brake_error, 0.0);
  EXPECT_LT(r.brake_error, 1e-8);
  EXPECT_FALSE(r.relations.empty());
}

TEST(Symmetry, BrokenOrbitIsRejected) {
  std::mt19937 rng(57);
  PeriodicOrbit o = standing_orbit();
  o.x.head(kDim) += test::random_vector(rng, kDim, 1e-3);
  EXPECT_THROW(verify_symmetry(o, "D5pxD1", options()), SymmetryViolation);
}

TEST(Symmetry, RotatingWaveTimeShift) {
  const std::string id = "D3p^{Z1p}x_{D3}D3";
  const PeriodicOrbit o = newton_correct(seed_from_mode(modes(), 3, 0.01, id), options());
  const SymmetryReport r = verify_symmetry(o, id, options());
  EXPECT_LT(r.max_error, 1e-8);
  EXPECT_EQ(r.brake_error, -1.0);
  // Claiming a brake symmetry this orbit does not have fails.
  EXPECT_THROW(verify_symmetry(o, "D3pxD1", options()), SymmetryViolation);
}

TEST(Branch, ShortContinuationAndRetrace) {
  const ContinuationOptions opt = options();
  OrbitBranch b = arclength_continue(start_branch(standing_seed(), standing_orbit()), 2, 1e-3, opt);
  ASSERT_EQ(b.points.size(), 3u);
  for (std::size_t k = 1; k < b.points.size(); ++k) {
    EXPECT_GT(b.points[k].amplitude, b.points[k - 1].amplitude);
    EXPECT_GT(b.points[k].T, b.points[k - 1].T);
    EXPECT_LT(b.points[k].residual, 1e-10);
    EXPECT_EQ(b.points[k].orbit_type, "D5pxD1");
    EXPECT_LT(verify_symmetry(b.points[k], "D5pxD1", opt).brake_error, 1e-8);
  }
  const OrbitBranch back = arclength_continue(b, 1, -b.steps.back(), opt);
  EXPECT_LT((back.points.back().x - b.points[1].x).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(arclength_continue(b, 1, 0.0, opt), DomainViolation);
}

TEST(Branch, TrajectorySamples) {
  const auto traj = orbit_trajectory(standing_orbit(), options(), 64);
  ASSERT_EQ(traj.size(), 64u);
  EXPECT_EQ(traj[0].first, 0.0);
  EXPECT_NEAR(traj[1].first, standing_orbit().T / 64, 1e-15);
  EXPECT_NEAR(orbit_amplitude(standing_orbit(), modes().u0, options()), standing_orbit().amplitude, 1e-12);
}
