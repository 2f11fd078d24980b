#pragma once

#include <Eigen/Dense>

#include "c60/forcefield.hpp"
#include "c60/molecule.hpp"

namespace c60 {

/// Coordinates (x, 0, z) of the base atom ((12345),1) of a symmetric configuration.
struct ReducedPoint {
  double x = 0;
  double z = 0;
};

/// Orbit of the base position v under the diagonal action; v placed at ((12345),1).
Eigen::VectorXd symmetric_orbit(const Vec3& v);

/// Symmetric configuration with base atom (x,0,z); requires z > 0 and x < C z.
Eigen::VectorXd build_symmetric(const ReducedPoint& xz, double C = 1.0);

double reduced_potential(const ReducedPoint& xz, const ForceFieldParams& p = {});
/// Exact partial derivatives (dv/dx, dv/dz) through the analytic gradient of V.
Eigen::Vector2d reduced_gradient(const ReducedPoint& xz, const ForceFieldParams& p = {});

/// Base atom of a regular truncated icosahedron with edge r0.
ReducedPoint geometric_seed(const ForceFieldParams& p = {});

struct Equilibrium {
  ReducedPoint xz;
  Eigen::VectorXd u0;
  double energy = 0;
  double grad_inf = 0;  // sup norm of the full 180-gradient
  int iterations = 0;
};

Equilibrium find_minimizer(const ForceFieldParams& p, const ReducedPoint& seed, int max_iter = 500);
Equilibrium find_minimizer(const ForceFieldParams& p = {});

struct BondLengths {
  double dS = 0, dD = 0;
  double spreadS = 0, spreadD = 0;  // max - min over the bond class
};

BondLengths bond_lengths(const Eigen::VectorXd& u);

/// Columns: orthonormal basis of the complement of translations and infinitesimal rotations at u (174 columns).
Eigen::MatrixXd slice_basis(const Eigen::VectorXd& u);

/// Rotation fields J_j u, stacked as columns.
Eigen::MatrixXd rotation_fields(const Eigen::VectorXd& u);

}  // namespace c60
