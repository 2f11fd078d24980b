#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "c60/molecule.hpp"

namespace c60 {

/// How the torsion normals are formed from the two unit bond directions.
enum class TorsionNormals {
  Unit,  // cross product rescaled to unit length
  Raw,   // plain cross product of the unit directions
};

struct ForceFieldParams {
  double E0 = 6.1322;     // eV
  double beta = 1.8502;   // 1/A
  double r0 = 1.4322;     // A
  double k_theta = 10.0;  // eV
  double k_phi = 0.346;   // eV
  bool vdw_enabled = false;
  double vdw_epsilon = 0.0115;  // eV
  double vdw_sigma = 3.4681;    // A
  TorsionNormals normals = TorsionNormals::Raw;

  void validate() const;
  /// Flat "key = value" lines; unknown keys are errors.
  static ForceFieldParams parse(const std::string& text);
  std::string to_text() const;
};

double morse(double x, const ForceFieldParams& p);
double morse_deriv(double x, const ForceFieldParams& p);
double bend_energy(double cos_theta, const ForceFieldParams& p);
double torsion_energy(double cos_phi, const ForceFieldParams& p);
double vdw_pair(double x, const ForceFieldParams& p);
double vdw_pair_deriv(double x, const ForceFieldParams& p);

struct SiteAngles {
  std::array<double, 3> cos_theta;
  std::array<double, 3> cos_phi;
};

SiteAngles site_angles(const Eigen::VectorXd& u, int atom, const ForceFieldParams& p = {});

double energy(const Eigen::VectorXd& u, const ForceFieldParams& p = {});
Eigen::VectorXd gradient(const Eigen::VectorXd& u, const ForceFieldParams& p = {});
/// Energy and gradient in one pass.
double energy_gradient(const Eigen::VectorXd& u, const ForceFieldParams& p, Eigen::VectorXd& grad);
/// Central differences of the analytic gradient, symmetrized.
Eigen::MatrixXd hessian(const Eigen::VectorXd& u, const ForceFieldParams& p = {}, double h = 1e-5, int jobs = 1);

/// Unordered non-bonded atom pairs used by the van der Waals term.
const std::vector<std::pair<int, int>>& vdw_pairs();

}  // namespace c60
