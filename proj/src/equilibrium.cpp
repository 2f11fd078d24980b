#include "c60/equilibrium.hpp"

#include <cmath>

#include "c60/errors.hpp"

namespace c60 {

Eigen::VectorXd symmetric_orbit(const Vec3& v) {
  Eigen::VectorXd u(kDim);
  std::array<bool, kAtoms> seen{};
  const Perm5 b = gen_b();
  for (const Perm5& s : a5_elements()) {
    Perm5 si = s.inverse();
    int f = c4_index(si * b * s);
    if (f < 0) throw StructuralError("face label left class C4");
    int atom = AtomIndex{f, si(1)}.linear();
    if (seen[atom]) throw DuplicateOrbitPoint("orbit map is not injective on indices");
    seen[atom] = true;
    u.segment<3>(3 * atom) = rho(s).transpose() * v;
  }
  return u;
}

Eigen::VectorXd build_symmetric(const ReducedPoint& xz, double C) {
  if (!(xz.z > 0) || !(xz.x < C * xz.z)) throw DomainViolation("reduced point outside 0 < z, x < C z");
  Eigen::VectorXd u = symmetric_orbit(Vec3(xz.x, 0, xz.z));
  for (int i = 0; i < kAtoms; ++i)
    for (int j = i + 1; j < kAtoms; ++j)
      if ((u.segment<3>(3 * i) - u.segment<3>(3 * j)).norm() < 1e-12)
        throw DuplicateOrbitPoint("orbit points coincide");
  return u;
}

double reduced_potential(const ReducedPoint& xz, const ForceFieldParams& p) {
  return energy(build_symmetric(xz), p);
}

Eigen::Vector2d reduced_gradient(const ReducedPoint& xz, const ForceFieldParams& p) {
  static const Eigen::VectorXd Ux = symmetric_orbit(Vec3::UnitX());
  static const Eigen::VectorXd Uz = symmetric_orbit(Vec3::UnitZ());
  Eigen::VectorXd g = gradient(build_symmetric(xz), p);
  return {g.dot(Ux), g.dot(Uz)};
}

ReducedPoint geometric_seed(const ForceFieldParams& p) {
  const double s = p.r0;
  const double pi = std::acos(-1.0);
  const double Rp = s / (2 * std::sin(pi / 5));                          // pentagon circumradius
  const double R = s / 4 * std::sqrt(58 + 18 * std::sqrt(5.0));          // cage circumradius
  return {Rp, std::sqrt(R * R - Rp * Rp)};
}

namespace {

Eigen::Matrix2d reduced_hessian(const ReducedPoint& xz, const ForceFieldParams& p, double h) {
  Eigen::Matrix2d H;
  for (int k = 0; k < 2; ++k) {
    ReducedPoint a = xz, b = xz;
    (k == 0 ? a.x : a.z) += h;
    (k == 0 ? b.x : b.z) -= h;
    H.col(k) = (reduced_gradient(a, p) - reduced_gradient(b, p)) / (2 * h);
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace

Equilibrium find_minimizer(const ForceFieldParams& p, const ReducedPoint& seed, int max_iter) {
  ReducedPoint xz = seed;
  build_symmetric(xz);
  double v = reduced_potential(xz, p);
  Eigen::Vector2d g = reduced_gradient(xz, p);
  int it = 0;
  for (; it < max_iter && g.cwiseAbs().maxCoeff() > 1e-12; ++it) {
    Eigen::Matrix2d H = reduced_hessian(xz, p, 1e-5);
    Eigen::Vector2d step;
    Eigen::LLT<Eigen::Matrix2d> llt(H);
    if (llt.info() == Eigen::Success) {
      step = -llt.solve(g);
    } else {
      // Coordinate descent on the larger gradient component.
      int k = std::abs(g[0]) >= std::abs(g[1]) ? 0 : 1;
      double curv = H(k, k) > 0 ? H(k, k) : 1.0;
      step.setZero();
      step[k] = -g[k] / curv;
    }
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      ReducedPoint trial{xz.x + t * step[0], xz.z + t * step[1]};
      try {
        double vt = reduced_potential(trial, p);
        Eigen::Vector2d gt = reduced_gradient(trial, p);
        if (vt < v || (vt <= v + 1e-12 * std::abs(v) && gt.norm() < g.norm())) {
          xz = trial;
          v = vt;
          g = gt;
          accepted = true;
          break;
        }
      } catch (const StructuralError&) {
      } catch (const DegenerateGeometry&) {
      }
    }
    if (!accepted) break;  // no further decrease resolvable
  }
  Equilibrium eq;
  eq.xz = xz;
  eq.u0 = build_symmetric(xz);
  Eigen::VectorXd grad;
  eq.energy = energy_gradient(eq.u0, p, grad);
  eq.grad_inf = grad.cwiseAbs().maxCoeff();
  eq.iterations = it;
  if (g.cwiseAbs().maxCoeff() > 1e-9)
    throw NoConvergence("reduced minimization stalled with |grad v| = " + std::to_string(g.cwiseAbs().maxCoeff()));
  return eq;
}

Equilibrium find_minimizer(const ForceFieldParams& p) { return find_minimizer(p, geometric_seed(p)); }

BondLengths bond_lengths(const Eigen::VectorXd& u) {
  double sMin = 1e300, sMax = -1e300, dMin = 1e300, dMax = -1e300, sSum = 0, dSum = 0;
  int nS = 0, nD = 0;
  for (int i = 0; i < kAtoms; ++i) {
    const auto& nb = neighbor_table()[i];
    double ls = (u.segment<3>(3 * i) - u.segment<3>(3 * nb[0])).norm();
    sMin = std::min(sMin, ls), sMax = std::max(sMax, ls), sSum += ls, ++nS;
    if (i < nb[2]) {
      double ld = (u.segment<3>(3 * i) - u.segment<3>(3 * nb[2])).norm();
      dMin = std::min(dMin, ld), dMax = std::max(dMax, ld), dSum += ld, ++nD;
    }
  }
  return {sSum / nS, dSum / nD, sMax - sMin, dMax - dMin};
}

Eigen::MatrixXd rotation_fields(const Eigen::VectorXd& u) {
  Eigen::MatrixXd R(kDim, 3);
  const auto& J = rotation_generators();
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < kAtoms; ++i) R.block<3, 1>(3 * i, j) = J[j] * u.segment<3>(3 * i);
  return R;
}

Eigen::MatrixXd slice_basis(const Eigen::VectorXd& u) {
  Eigen::MatrixXd M(kDim, 6);
  M.leftCols<3>().setZero();
  for (int i = 0; i < kAtoms; ++i) M.block<3, 3>(3 * i, 0) = Mat3::Identity();
  M.rightCols<3>() = rotation_fields(u);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(kDim - 6);
}

}  // namespace c60
