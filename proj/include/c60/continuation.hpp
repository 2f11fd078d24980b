#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "c60/forcefield.hpp"
#include "c60/orbit_types.hpp"
#include "c60/representation.hpp"

namespace c60 {

/// Phase-space point x = (q, p), 360 entries; unit masses.
constexpr int kPhaseDim = 2 * kDim;
constexpr int kMultipliers = 7;
/// Unknowns (x, multipliers, T).
constexpr int kUnknowns = kPhaseDim + kMultipliers + 1;

using Multipliers = Eigen::Matrix<double, kMultipliers, 1>;

Eigen::VectorXd phase_state(const Eigen::VectorXd& q, const Eigen::VectorXd& p);

/// H = |p|^2/2 + V(q).
double hamiltonian(const Eigen::VectorXd& x, const ForceFieldParams& params = {});
/// (p, -grad V): the Hamiltonian field, J grad H with J(a, b) = (b, -a).
Eigen::VectorXd hamiltonian_field(const Eigen::VectorXd& x, const ForceFieldParams& params = {});
/// Columns A_1..A_7: translations (E_j, 0), rotations (J_j q, J_j p), time shift J grad H.
Eigen::MatrixXd generators(const Eigen::VectorXd& x, const ForceFieldParams& params = {});
/// G_1..G_3 = -p.E_j, G_4..G_6 = p^T J_j q, G_7 = H.
Eigen::Matrix<double, 7, 1> conserved_quantities(const Eigen::VectorXd& x, const ForceFieldParams& params = {});

struct FlowOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
};

/// Time-one map of x' = T J grad H + sum_j lambda_j J A_j.
Eigen::VectorXd flow_time_one(const Eigen::VectorXd& x, double T, const Multipliers& lambda,
                              const ForceFieldParams& params = {}, const FlowOptions& opt = {});
/// States of the same flow at the given rescaled times in [0, 1], ascending.
std::vector<Eigen::VectorXd> flow_samples(const Eigen::VectorXd& x, double T, const Multipliers& lambda,
                                          const std::vector<double>& times, const ForceFieldParams& params = {},
                                          const FlowOptions& opt = {});

/// (x - phi_1(x), A_j(x_ref) . (x - x_ref)), 367 entries.
Eigen::VectorXd augmented_residual(const Eigen::VectorXd& x, const Multipliers& lambda, double T,
                                   const Eigen::VectorXd& x_ref, const ForceFieldParams& params = {},
                                   const FlowOptions& opt = {});

struct ContinuationOptions {
  ForceFieldParams params;
  FlowOptions flow;
  double newton_tol = 1e-10;     // sup norm of the augmented residual
  double multiplier_tol = 1e-8;
  double fd_step = 1e-7;
  int max_iterations = 50;
  int max_halvings = 8;
  int jobs = 1;
};

/// d F / d(x, multipliers, T): forward-difference shooting rows and the analytic section rows, 367 x 368.
Eigen::MatrixXd augmented_jacobian(const Eigen::VectorXd& x, const Multipliers& lambda, double T,
                                   const Eigen::VectorXd& x_ref, const ContinuationOptions& opt = {});

/// Equilibrium data shared by the seeds and the amplitude measurements.
struct LinearModes {
  Eigen::VectorXd u0;
  Spectrum spectrum;
};

struct Seed {
  int j = 0;
  int label = 0;
  std::string orbit_type;
  OrbitGroup group;
  Eigen::VectorXd x;
  Eigen::VectorXd x_eq;  // (u0, 0)
  double T = 0;
  double amplitude = 0;
};

/// (u0 + a Re(w), -a omega Im(w)) for w a complex mode-j vector fixed by the orbit type, scaled so that the
/// linear orbit u0 + a Re(w e^{i omega t}) has largest displacement a; T = 2 pi / sqrt(mu_j).
Seed seed_from_mode(const LinearModes& modes, int j, double amplitude, const std::string& orbit_type_id);

struct PeriodicOrbit {
  Eigen::VectorXd x;
  double T = 0;
  Multipliers multipliers = Multipliers::Zero();
  double residual = 0;
  std::string orbit_type;
  int iterations = 0;
  double amplitude = 0;  // max over one period of |q(t) - u0|
  double energy = 0;
};

struct NewtonStats {
  int jacobians = 0;
  int residuals = 0;
};

/// Newton on F = 0 plus the anchor <x - x_seed, x_seed - x_eq> = 0 fixing the seed amplitude. Each iterate
/// is replaced by the initial state of its loop averaged over the orbit type.
PeriodicOrbit newton_correct(const Seed& seed, const ContinuationOptions& opt = {}, NewtonStats* stats = nullptr);

struct OrbitBranch {
  int j = 0;
  std::string orbit_type;
  Eigen::VectorXd x_eq;
  std::vector<PeriodicOrbit> points;
  std::vector<double> steps;         // accepted arclength step of each point after the first
  std::vector<int> turning_points;   // indices where the period changes direction
  Eigen::VectorXd tangent;           // unit tangent in (x, multipliers, T) at the last point
  NewtonStats stats;
};

OrbitBranch start_branch(const Seed& seed, const PeriodicOrbit& first);
/// Extends the branch by n_steps pseudo-arclength steps of length ds (negative ds reverses the tangent); the
/// corrector averages iterates like newton_correct.
OrbitBranch arclength_continue(OrbitBranch branch, int n_steps, double ds, const ContinuationOptions& opt = {});

/// Displacement amplitude of an orbit: max over samples of |q(t) - u0|.
double orbit_amplitude(const PeriodicOrbit& orbit, const Eigen::VectorXd& u0, const ContinuationOptions& opt = {},
                       int samples = 64);

struct SymmetryReport {
  std::string orbit_type;
  int samples = 0;
  double max_error = 0;     // largest violation over all relations
  double brake_error = -1;  // sup |p| at the two turning instants, -1 when no pure reflection is present
  double alignment_angle = 0;  // rigid rotation (rad) applied before testing the relations
  std::vector<std::pair<std::string, double>> relations;  // relation name, violation
};

/// Checks u(s) = gamma.u(s + theta) and u(s) = gamma.u(-s - theta) for every element (gamma, rot(theta) kappa^f)
/// of the orbit type on `samples` equally spaced instants, after a least-squares rigid rotation of the orbit
/// (the rotation sections may leave a symmetric orbit slightly turned); SymmetryViolation above `tol`.
SymmetryReport verify_symmetry(const PeriodicOrbit& orbit, const std::string& orbit_type_id,
                               const ContinuationOptions& opt = {}, double tol = 1e-6, int samples = 120);

/// Samples q over one period: rows (t, state) for t = k T / samples.
std::vector<std::pair<double, Eigen::VectorXd>> orbit_trajectory(const PeriodicOrbit& orbit,
                                                                 const ContinuationOptions& opt = {},
                                                                 int samples = 64);

}  // namespace c60
