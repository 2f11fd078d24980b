#include <gtest/gtest.h>

#include "c60/equilibrium.hpp"
#include "c60/errors.hpp"
#include "common.hpp"

using namespace c60;

TEST(Symmetric, FixedByDiagonalGroup) {
  const Eigen::VectorXd u = build_symmetric({1.2, 3.3});
  for (int g = 0; g < 120; ++g) EXPECT_LT((act(gamma_element(g), u) - u).cwiseAbs().maxCoeff(), 1e-12);
  const double r = atom_position(u, 0).norm();
  for (int a = 0; a < kAtoms; ++a) EXPECT_NEAR(atom_position(u, a).norm(), r, 1e-12);
  EXPECT_LT(barycenter(u).norm(), 1e-12);
  EXPECT_NEAR(u(0), 1.2, 1e-15);
  EXPECT_NEAR(u(2), 3.3, 1e-15);
}

TEST(Symmetric, DomainErrors) {
  EXPECT_THROW(build_symmetric({1.0, -1.0}), DomainViolation);
  EXPECT_THROW(build_symmetric({4.0, 3.0}), DomainViolation);
  EXPECT_THROW(build_symmetric({0.0, 3.0}, 10.0), DuplicateOrbitPoint);
}

TEST(Symmetric, RegularTruncatedIcosahedronSeed) {
  ForceFieldParams p;
  p.r0 = 1.0;
  const BondLengths b = bond_lengths(build_symmetric(geometric_seed(p), 2.0));
  EXPECT_NEAR(b.dS, 1.0, 1e-12);
  EXPECT_NEAR(b.dD, 1.0, 1e-12);
}

TEST(Reduced, GradientMatchesDifferences) {
  const ReducedPoint xz{1.21, 3.31};
  const Eigen::Vector2d g = reduced_gradient(xz);
  const double h = 1e-6;
  EXPECT_NEAR(g(0), (reduced_potential({xz.x + h, xz.z}) - reduced_potential({xz.x - h, xz.z})) / (2 * h), 1e-6);
  EXPECT_NEAR(g(1), (reduced_potential({xz.x, xz.z + h}) - reduced_potential({xz.x, xz.z - h})) / (2 * h), 1e-6);
  EXPECT_NE(reduced_potential({1.21, 3.31}), reduced_potential({1.22, 3.32}));
}

TEST(Minimizer, BondLengthsAndCriticality) {
  const Equilibrium& eq = test::equilibrium();
  const BondLengths b = bond_lengths(eq.u0);
  EXPECT_NEAR(b.dS, 1.438084, 1e-5);
  EXPECT_NEAR(b.dD, 1.420845, 1e-5);
  EXPECT_LT(b.spreadS, 1e-9);
  EXPECT_LT(b.spreadD, 1e-9);
  EXPECT_LT(gradient(eq.u0).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(eq.grad_inf, 1e-8);
  EXPECT_LT(reduced_gradient(eq.xz).cwiseAbs().maxCoeff(), 1e-9);
  // Frozen minimizer coordinates.
  EXPECT_NEAR(eq.xz.x, 1.22330755, 1e-8);
  EXPECT_NEAR(eq.xz.z, 3.33065736, 1e-8);
}

TEST(Minimizer, LocalMinimumOnGrid) {
  const ReducedPoint m = test::equilibrium().xz;
  const double v0 = reduced_potential(m);
  for (int dx = -1; dx <= 1; ++dx)
    for (int dz = -1; dz <= 1; ++dz)
      if (dx || dz) EXPECT_GT(reduced_potential({m.x + 1e-3 * dx, m.z + 1e-3 * dz}), v0);
}

TEST(Minimizer, SeedIndependence) {
  const ReducedPoint s = geometric_seed();
  const ReducedPoint ref = test::equilibrium().xz;
  const double offsets[5][2] = {{0, 0}, {0.03, 0.02}, {-0.03, 0.02}, {0.02, -0.04}, {-0.02, -0.03}};
  for (const auto& o : offsets) {
    const Equilibrium e = find_minimizer({}, {s.x + o[0], s.z + o[1]});
    EXPECT_LT(std::hypot(e.xz.x - ref.x, e.xz.z - ref.z), 1e-8);
  }
}

TEST(Minimizer, RebuildIsBitIdentical) {
  const Equilibrium& eq = test::equilibrium();
  EXPECT_EQ(build_symmetric(eq.xz), eq.u0);
}

TEST(Minimizer, NoConvergenceWithoutIterations) {
  EXPECT_THROW(find_minimizer({}, geometric_seed(), 0), NoConvergence);
}

TEST(Slice, BasisIsOrthonormalComplement) {
  const auto& u0 = test::equilibrium().u0;
  const Eigen::MatrixXd W = slice_basis(u0);
  ASSERT_EQ(W.cols(), 174);
  EXPECT_LT((W.transpose() * W - Eigen::MatrixXd::Identity(174, 174)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((W.transpose() * rotation_fields(u0)).cwiseAbs().maxCoeff(), 1e-12);
  for (int a = 0; a < 3; ++a) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(kDim);
    for (int k = 0; k < kAtoms; ++k) t(3 * k + a) = 1;
    EXPECT_LT((W.transpose() * t).cwiseAbs().maxCoeff(), 1e-12);
  }
  const Eigen::MatrixXd Hs = W.transpose() * hessian(u0) * W;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Minimizer, VanDerWaalsShiftsBondLengths) {
  ForceFieldParams p;
  p.vdw_enabled = true;
  const BondLengths b = bond_lengths(find_minimizer(p).u0);
  EXPECT_GT(std::abs(b.dS - 1.438084) + std::abs(b.dD - 1.420845), 1e-4);
}
