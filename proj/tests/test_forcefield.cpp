#include <gtest/gtest.h>

#include "c60/errors.hpp"
#include "c60/forcefield.hpp"
#include "common.hpp"

using namespace c60;

namespace {

Eigen::VectorXd perturbed_equilibrium(std::mt19937& rng, double scale) {
  return test::equilibrium().u0 + test::random_vector(rng, kDim, scale);
}

Eigen::VectorXd rotate_config(const Mat3& R, const Eigen::VectorXd& u) {
  Eigen::VectorXd out(u.size());
  for (int a = 0; a < kAtoms; ++a) out.segment<3>(3 * a) = R * u.segment<3>(3 * a);
  return out;
}

}  // namespace

TEST(Terms, Morse) {
  const ForceFieldParams p;
  EXPECT_NEAR(morse(p.r0, p), -6.1322, 1e-12);
  EXPECT_NEAR(morse_deriv(p.r0, p), 0.0, 1e-12);
  EXPECT_NEAR(morse(100.0, p), 0.0, 1e-12);
  const double h = 1e-6, x = 1.6;
  EXPECT_NEAR(morse_deriv(x, p), (morse(x + h, p) - morse(x - h, p)) / (2 * h), 1e-7);
}

TEST(Terms, Bending) {
  const ForceFieldParams p;
  EXPECT_DOUBLE_EQ(bend_energy(-0.5, p), 0.0);
  EXPECT_NEAR(bend_energy(1.0, p), 11.25, 1e-12);
  EXPECT_NEAR(bend_energy(-1.0, p), 1.25, 1e-12);
}

TEST(Terms, Torsion) {
  const ForceFieldParams p;
  EXPECT_NEAR(torsion_energy(1.0, p), 0.0, 1e-15);
  EXPECT_NEAR(torsion_energy(0.0, p), 0.346, 1e-15);
  EXPECT_NEAR(torsion_energy(-1.0, p), 0.0, 1e-15);
}

TEST(Terms, VanDerWaals) {
  const ForceFieldParams p;
  EXPECT_NEAR(vdw_pair(p.vdw_sigma, p), -0.0115, 1e-14);
  EXPECT_NEAR(vdw_pair_deriv(p.vdw_sigma, p), 0.0, 1e-12);
  EXPECT_NEAR(vdw_pair(1e3, p), 0.0, 1e-12);
}

TEST(Params, ParseRoundTrip) {
  ForceFieldParams p = ForceFieldParams::parse("# comment\nk_phi = 0.5\nvdw_enabled = true\n");
  EXPECT_DOUBLE_EQ(p.k_phi, 0.5);
  EXPECT_TRUE(p.vdw_enabled);
  const ForceFieldParams q = ForceFieldParams::parse(p.to_text());
  EXPECT_EQ(q.to_text(), p.to_text());
  EXPECT_THROW(ForceFieldParams::parse("nonsense = 1\n"), ParseError);
  EXPECT_THROW(ForceFieldParams::parse("E0 = -1\n"), DomainViolation);
}

TEST(SiteAngles, EquilibriumValues) {
  const auto& u0 = test::equilibrium().u0;
  const SiteAngles s = site_angles(u0, 0);
  // Pentagon angle 108 degrees, hexagon angles 120 degrees; frozen torsion cosines of the cage.
  EXPECT_NEAR(s.cos_theta[0], std::cos(0.6 * M_PI), 1e-12);
  EXPECT_NEAR(s.cos_theta[1], -0.5, 1e-12);
  EXPECT_NEAR(s.cos_theta[2], -0.5, 1e-12);
  EXPECT_NEAR(s.cos_phi[0], 0.7414639909, 1e-9);
  EXPECT_NEAR(s.cos_phi[1], -0.6571236705, 1e-9);
  EXPECT_NEAR(s.cos_phi[2], 0.6571236705, 1e-9);
  for (int a = 1; a < kAtoms; ++a) {
    const SiteAngles t = site_angles(u0, a);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(t.cos_theta[k], s.cos_theta[k], 1e-12);
      EXPECT_NEAR(t.cos_phi[k], s.cos_phi[k], 1e-12);
    }
  }
}

TEST(SiteAngles, PlanarSiteHasNoTorsion) {
  ForceFieldParams unit;
  unit.normals = TorsionNormals::Unit;
  // Projecting the cage onto z = 0 makes every four-atom set coplanar.
  Eigen::VectorXd u = test::equilibrium().u0;
  for (int a = 0; a < kAtoms; ++a) u(3 * a + 2) = 0.0;
  bool any = false;
  for (int a = 0; a < kAtoms; ++a) {
    try {
      const SiteAngles s = site_angles(u, a, unit);
      for (double c : s.cos_phi) EXPECT_NEAR(std::abs(c), 1.0, 1e-12);
      any = true;
    } catch (const DegenerateGeometry&) {
    }
  }
  EXPECT_TRUE(any);
}

TEST(SiteAngles, RawNormalsScaleTheCosine) {
  Eigen::VectorXd u = test::equilibrium().u0;
  for (int a = 0; a < kAtoms; ++a) u(3 * a + 2) = 0.0;
  ForceFieldParams unit;
  unit.normals = TorsionNormals::Unit;
  for (int a = 0; a < kAtoms; ++a) {
    try {
      const SiteAngles r = site_angles(u, a), s = site_angles(u, a, unit);
      for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(r.cos_phi[k]), std::abs(s.cos_phi[k]) + 1e-12);
    } catch (const DegenerateGeometry&) {
    }
  }
}

TEST(SiteAngles, DegenerateGeometryRaises) {
  Eigen::VectorXd u = test::equilibrium().u0;
  const int s = neighbor_table()[0][0];
  u.segment<3>(3 * s) = u.segment<3>(0);
  EXPECT_THROW(site_angles(u, 0), DegenerateGeometry);
  EXPECT_THROW(energy(u), DegenerateGeometry);
}

TEST(SiteAngles, Invariance) {
  std::mt19937 rng(11);
  const Eigen::VectorXd u = perturbed_equilibrium(rng, 0.05);
  for (int trial = 0; trial < 10; ++trial) {
    const GroupElement g = test::random_element(rng);
    const Eigen::VectorXd gu = act(g, u);
    for (int a = 0; a < kAtoms; ++a) {
      // (g.u)_a = R u_{source(g,a)}.
      // The reflection part of g exchanges the S and S^-1 neighbors, so compare the sorted values.
      const SiteAngles s = site_angles(gu, a), t = site_angles(u, action_source(g, a));
      auto sorted = [](std::array<double, 3> v, bool absolute) {
        for (auto& x : v) x = absolute ? std::abs(x) : x;
        std::sort(v.begin(), v.end());
        return v;
      };
      const auto s1 = sorted(s.cos_theta, false), t1 = sorted(t.cos_theta, false);
      const auto x = sorted(s.cos_phi, true), y = sorted(t.cos_phi, true);
      for (int k = 0; k < 3; ++k) ASSERT_NEAR(s1[k], t1[k], 1e-12);
      for (int k = 0; k < 3; ++k) ASSERT_NEAR(x[k], y[k], 1e-12);
    }
  }
}

TEST(Energy, Invariance) {
  std::mt19937 rng(12);
  for (bool vdw : {false, true}) {
    ForceFieldParams p;
    p.vdw_enabled = vdw;
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd u = perturbed_equilibrium(rng, 0.05);
      const double e = energy(u, p);
      const GroupElement g = test::random_element(rng);
      EXPECT_NEAR(energy(act(g, u), p), e, 1e-10 * std::abs(e));
      EXPECT_NEAR(energy(rotate_config(test::random_rotation(rng), u), p), e, 1e-10 * std::abs(e));
      const Vec3 v = Vec3::Random();
      Eigen::VectorXd shifted = u;
      for (int a = 0; a < kAtoms; ++a) shifted.segment<3>(3 * a) += v;
      EXPECT_NEAR(energy(shifted, p), e, 1e-10 * std::abs(e));
    }
  }
}

TEST(Energy, VanDerWaalsChangesEnergy) {
  ForceFieldParams p;
  p.vdw_enabled = true;
  const auto& u0 = test::equilibrium().u0;
  EXPECT_GT(std::abs(energy(u0, p) - energy(u0)), 1e-3);
  EXPECT_EQ(vdw_pairs().size(), 60u * 59u / 2u - 90u);
}

TEST(Energy, LocalMinimum) {
  std::mt19937 rng(13);
  const auto& u0 = test::equilibrium().u0;
  const double e0 = energy(u0);
  for (int trial = 0; trial < 20; ++trial) EXPECT_GT(energy(u0 + test::random_vector(rng, kDim, 1e-3)), e0);
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937 rng(14);
  for (bool vdw : {false, true}) {
    ForceFieldParams p;
    p.vdw_enabled = vdw;
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd u = perturbed_equilibrium(rng, 0.05);
      const Eigen::VectorXd g = gradient(u, p);
      Eigen::VectorXd fd(kDim);
      const double h = 1e-6;
      for (int i = 0; i < kDim; ++i) {
        Eigen::VectorXd a = u, b = u;
        a(i) += h;
        b(i) -= h;
        fd(i) = (energy(a, p) - energy(b, p)) / (2 * h);
      }
      EXPECT_LT((g - fd).norm() / g.norm(), 1e-5);
      Eigen::VectorXd g2;
      EXPECT_NEAR(energy_gradient(u, p, g2), energy(u, p), 1e-12);
      EXPECT_LT((g2 - g).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Gradient, Equivariance) {
  std::mt19937 rng(15);
  const Eigen::VectorXd u = perturbed_equilibrium(rng, 0.05);
  const Eigen::VectorXd g = gradient(u);
  std::vector<GroupElement> elems{{gen_a(), 1}, {gen_b(), 1}, {Perm5::identity(), -1}};
  for (int k = 0; k < 10; ++k) elems.push_back(test::random_element(rng));
  for (const auto& e : elems) EXPECT_LT((gradient(act(e, u)) - act(e, g)).cwiseAbs().maxCoeff(), 1e-9);
  const Mat3 R = test::random_rotation(rng);
  EXPECT_LT((gradient(rotate_config(R, u)) - rotate_config(R, g)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Gradient, OrthogonalToRotations) {
  std::mt19937 rng(16);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd u = perturbed_equilibrium(rng, 0.05);
    const Eigen::VectorXd g = gradient(u);
    const Eigen::MatrixXd R = rotation_fields(u);
    for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(g.dot(R.col(j))), 1e-9 * g.norm() * R.col(j).norm());
  }
}

TEST(Hessian, SymmetryAndZeroModes) {
  const auto& u0 = test::equilibrium().u0;
  const Eigen::MatrixXd H = hessian(u0);
  EXPECT_LT((H - H.transpose()).cwiseAbs().maxCoeff(), 1e-8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  int zeros = 0;
  for (int i = 0; i < kDim; ++i) zeros += std::abs(es.eigenvalues()(i)) < 1e-6;
  EXPECT_EQ(zeros, 6);
  for (int g = 0; g < 120; g += 7) {
    const Eigen::MatrixXd S = SymmetryTable::get().dense(g);
    EXPECT_LT((S * H - H * S).cwiseAbs().maxCoeff(), 1e-7);
  }
}

TEST(Hessian, MatchesGradientDifferences) {
  std::mt19937 rng(17);
  const Eigen::VectorXd u = perturbed_equilibrium(rng, 0.02);
  const Eigen::MatrixXd H = hessian(u);
  for (int k = 0; k < 10; ++k) {
    const int j = std::uniform_int_distribution<int>(0, kDim - 1)(rng);
    const double h = 1e-4;
    Eigen::VectorXd a = u, b = u;
    a(j) += h;
    b(j) -= h;
    const Eigen::VectorXd col = (gradient(a) - gradient(b)) / (2 * h);
    EXPECT_LT((col - H.col(j)).norm() / col.norm(), 1e-5);
  }
}

TEST(Hessian, ParallelAssemblyIsIdentical) {
  const auto& u0 = test::equilibrium().u0;
  EXPECT_EQ(hessian(u0, {}, 1e-5, 1), hessian(u0, {}, 1e-5, 3));
}
