#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "c60/forcefield.hpp"
#include "c60/molecule.hpp"

namespace c60 {

/// Isotypical label n in {+-1..+-5}: |n| picks the A5 irrep, the sign the action of -1.
int irrep_dim(int n);
bool valid_label(int n);
const std::vector<int>& all_labels();  // 1,-1,2,-2,...,5,-5

/// Conjugacy class of an A5 element: 0 identity, 1 involutions, 2 three-cycles, 3 class of (12345), 4 class of (13524).
int a5_class(const Perm5& p);

double character(int n, const GroupElement& g);

/// Real orthogonal matrix of the irrep V_|n| (times the sign for n < 0).
Eigen::MatrixXd irrep_matrix(int n, const GroupElement& g);

/// P_n v = dim/120 sum_g chi_n(g) g v with the diagonal action.
Eigen::VectorXd isotypical_projection(int n, const Eigen::VectorXd& v);
/// Dense 180x180 projector.
Eigen::MatrixXd isotypical_projector(int n);

struct SpectralMode {
  int j = 0;
  double mu = 0;
  int multiplicity = 0;
  int label = 0;
  double lambda1 = 0;  // 1/sqrt(mu)
  double dominance = 0;  // projection weight of the chosen label
  Eigen::MatrixXd vectors;  // 180 x multiplicity, orthonormal
};

struct SpectrumOptions {
  double cluster_gap = 1e-6;  // relative gap splitting eigenvalue clusters
  double hessian_step = 1e-5;
  int jobs = 1;
};

struct Spectrum {
  std::vector<SpectralMode> modes;  // ordered by decreasing mu (increasing lambda)
  int rotation_label = 0;            // label of the span of the rotation fields
  double slice_orthogonality = 0;    // max |<w, J_j u0>| over eigenvectors
  double isotypic_leak = 0;          // max ||(I - P_n) w||
};

Spectrum spectrum(const Eigen::VectorXd& u0, const ForceFieldParams& p = {}, const SpectrumOptions& opt = {});

/// (1 - (lambda^2 mu + 1)/(l^2 + 1)).
double linearized_block(double lambda, double mu, int l);

struct CriticalNumber {
  double lambda = 0;
  int j = 0;
  int l = 0;
};

struct ResonanceReport {
  std::vector<CriticalNumber> numbers;  // ascending, within [lambda_{1,1}, max lambda_{j,1}]
  double min_gap = 0;
  CriticalNumber gap_lo, gap_hi;
  int l_max = 0;
  bool resonant = false;
  double tolerance = 1e-5;
};

/// All l/sqrt(mu_j) up to the largest first critical number, sorted.
ResonanceReport critical_numbers(const std::vector<double>& mu, double tolerance = 1e-5);
/// Position of (j,l) in the sorted list, or -1.
int chain_position(const ResonanceReport& r, int j, int l);

struct ReferenceMode {
  int j, multiplicity;
  double mu, lambda;
  int n;
};
/// Reads the five-column reference table (j,multiplicity,mu,lambda,n).
std::vector<ReferenceMode> load_reference_spectrum(const std::string& path);

}  // namespace c60
