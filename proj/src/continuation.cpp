#include "c60/continuation.hpp"

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>

#include "c60/degrees.hpp"
#include "c60/errors.hpp"
#include "c60/molecule.hpp"
#include "c60/parallel.hpp"

namespace c60 {

namespace odeint = boost::numeric::odeint;

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

Vec head(const Vec& x) { return x.head(kDim); }
Vec tail(const Vec& x) { return x.tail(kDim); }

// J_j applied atom by atom.
Vec rotate_all(const Mat3& J, const Vec& v) {
  Vec out(kDim);
  for (int a = 0; a < kAtoms; ++a) out.segment<3>(3 * a) = J * v.segment<3>(3 * a);
  return out;
}

struct AugmentedField {
  double T;
  Multipliers lambda;
  const ForceFieldParams& params;

  void operator()(const Vec& x, Vec& dx, double) const {
    const Vec q = head(x), p = tail(x);
    Vec g(kDim);
    energy_gradient(q, params, g);
    Vec dq = T * p - lambda(6) * g;
    Vec dp = -T * g - lambda(6) * p;
    const auto& J = rotation_generators();
    for (int k = 0; k < 3; ++k) {
      for (int a = 0; a < kAtoms; ++a) dp(3 * a + k) -= lambda(k);
      if (lambda(3 + k) != 0) {
        dq += lambda(3 + k) * rotate_all(J[k], p);
        dp -= lambda(3 + k) * rotate_all(J[k], q);
      }
    }
    dx.resize(kPhaseDim);
    dx << dq, dp;
  }
};

using Stepper = odeint::runge_kutta_dopri5<Vec, double, Vec, double, odeint::vector_space_algebra>;

template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const odeint::step_adjustment_error& e) {
    throw StepSizeUnderflow(std::string("integrator step size underflow: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw StepSizeUnderflow(std::string("integrator made no progress: ") + e.what());
  }
}

Vec y_pack(const Vec& x, const Multipliers& lambda, double T) {
  Vec y(kUnknowns);
  y << x, lambda, T;
  return y;
}

Vec y_state(const Vec& y) { return y.head(kPhaseDim); }
Multipliers y_lambda(const Vec& y) { return y.segment<kMultipliers>(kPhaseDim); }
double y_period(const Vec& y) { return y(kUnknowns - 1); }

// Columns of d(x - phi_1)/d(x, lambda, T) by forward differences.
Mat shooting_jacobian(const Vec& y, const ContinuationOptions& opt) {
  const Vec base = flow_time_one(y_state(y), y_period(y), y_lambda(y), opt.params, opt.flow);
  Mat J(kPhaseDim, kUnknowns);
  parallel_for(kUnknowns, opt.jobs, [&](int k) {
    Vec yk = y;
    const double h = opt.fd_step * std::max(1.0, std::abs(y(k)));
    yk(k) += h;
    Vec col = -(flow_time_one(y_state(yk), y_period(yk), y_lambda(yk), opt.params, opt.flow) - base) / h;
    if (k < kPhaseDim) col(k) += 1.0;
    J.col(k) = col;
  });
  return J;
}

// Rows of the section constraints A_j(x_ref) . (x - x_ref) as a 7 x kUnknowns block.
Mat section_rows(const Vec& x_ref, const ForceFieldParams& params) {
  Mat S = Mat::Zero(kMultipliers, kUnknowns);
  S.leftCols(kPhaseDim) = generators(x_ref, params).transpose();
  return S;
}

// Residual of F plus one linear row <c, y - y0>.
Vec bordered_residual(const Vec& y, const Vec& x_ref, const Vec& c, const Vec& y0, const ContinuationOptions& opt) {
  Vec r(kUnknowns);
  r.head(kPhaseDim + kMultipliers) =
      augmented_residual(y_state(y), y_lambda(y), y_period(y), x_ref, opt.params, opt.flow);
  r(kUnknowns - 1) = c.dot(y - y0);
  return r;
}

double f_norm(const Vec& r) { return r.head(kPhaseDim + kMultipliers).cwiseAbs().maxCoeff(); }

Vec rotate_state(const Mat3& Q, const Vec& x) {
  Vec out = x;
  for (int a = 0; a < 2 * kAtoms; ++a) out.segment<3>(3 * a) = Q * x.segment<3>(3 * a);
  return out;
}

// Rotation Q minimizing |violations(Q)| by two linearized least-squares passes.
template <class Fn>
Mat3 best_alignment(Fn&& violations) {
  Mat3 Q = Mat3::Identity();
  for (int pass = 0; pass < 2; ++pass) {
    const Vec d0 = violations(Q);
    Mat B(d0.size(), 3);
    const double eps = 1e-6;
    for (int k = 0; k < 3; ++k)
      B.col(k) = (violations(Eigen::AngleAxisd(eps, Vec3::Unit(k)).toRotationMatrix() * Q) - d0) / eps;
    const Vec3 w = -B.colPivHouseholderQr().solve(d0);
    if (w.norm() > 0) Q = Eigen::AngleAxisd(w.norm(), w.normalized()).toRotationMatrix() * Q;
  }
  return Q;
}

// Image of the state at s_h under h = (gamma, rot(theta) kappa^f), with s_h = theta for f = 0 and -theta for f = 1.
Vec act_phase(const ProductElement& e, const Vec& x) {
  const auto& table = SymmetryTable::get();
  return phase_state(table.apply(e.g, head(x)), (e.flip ? -1.0 : 1.0) * table.apply(e.g, tail(x)));
}

Turn sample_turn(const ProductElement& e) { return e.flip ? wrap(-e.t) : e.t; }

// Initial state of the loop averaged over H, in the frame that best fits the symmetry: the rotation sections may
// pick a slightly turned copy of a symmetric orbit. Symmetric periodic orbits are fixed points.
Vec symmetrize(const Vec& x, const Multipliers& lambda, double T, const OrbitGroup& H, const ContinuationOptions& opt) {
  if (H.whole || H.elements.empty()) return x;
  std::map<Turn, int> slot;
  for (const auto& e : H.elements) slot.emplace(sample_turn(e), 0);
  std::vector<double> times;
  for (auto& [t, k] : slot) {
    k = static_cast<int>(times.size());
    times.push_back(static_cast<double>(t.numerator()) / static_cast<double>(t.denominator()));
  }
  const std::vector<Vec> xs =
      times.size() == 1 ? std::vector<Vec>{x} : flow_samples(x, T, lambda, times, opt.params, opt.flow);
  const Vec& x0 = xs[slot.at(Turn(0))];
  const Mat3 Q = best_alignment([&](const Mat3& R) {
    Vec out(static_cast<Eigen::Index>(H.order()) * kPhaseDim);
    const Vec r0 = rotate_state(R, x0);
    for (std::size_t i = 0; i < H.order(); ++i)
      out.segment(static_cast<Eigen::Index>(i) * kPhaseDim, kPhaseDim) =
          act_phase(H.elements[i], rotate_state(R, xs[slot.at(sample_turn(H.elements[i]))])) - r0;
    return out;
  });
  Vec sum = Vec::Zero(kPhaseDim);
  for (const auto& e : H.elements) sum += act_phase(e, rotate_state(Q, xs[slot.at(sample_turn(e))]));
  return rotate_state(Q.transpose(), sum / static_cast<double>(H.order()));
}

struct Corrector {
  Mat shoot;  // cached shooting block
  bool fresh = false;
};

struct SolveResult {
  Vec y;
  double residual = 0;
  int iterations = 0;
  bool ok = false;
};

// Chord iterations on the bordered system; the shooting block is refreshed when the contraction stalls.
SolveResult solve_bordered(Vec y, const Vec& x_ref, const Vec& c, const Vec& y0, const OrbitGroup& H,
                           Corrector& cache, const ContinuationOptions& opt, NewtonStats& stats, int max_iter) {
  SolveResult out;
  const Mat S = section_rows(x_ref, opt.params);
  Eigen::PartialPivLU<Mat> lu;
  auto factor = [&] {
    Mat A(kUnknowns, kUnknowns);
    A.topRows(kPhaseDim) = cache.shoot;
    A.middleRows(kPhaseDim, kMultipliers) = S;
    A.bottomRows(1) = c.transpose();
    lu.compute(A);
    if (!(lu.rcond() > 1e-15)) throw SingularJacobian("bordered Jacobian is singular");
  };
  auto refresh = [&] {
    cache.shoot = shooting_jacobian(y, opt);
    cache.fresh = true;
    ++stats.jacobians;
  };
  if (cache.shoot.size() == 0) refresh();
  factor();
  Vec r = bordered_residual(y, x_ref, c, y0, opt);
  ++stats.residuals;
  for (int it = 0;; ++it) {
    const double fn = f_norm(r);
    if (!std::isfinite(fn)) break;
    if (fn < opt.newton_tol && y_lambda(y).cwiseAbs().maxCoeff() < opt.multiplier_tol) {
      out.ok = true;
      out.iterations = it;
      break;
    }
    if (it >= max_iter) break;
    Vec y_new = y - lu.solve(r);
    y_new.head(kPhaseDim) = symmetrize(y_state(y_new), y_lambda(y_new), y_period(y_new), H, opt);
    Vec r_new = bordered_residual(y_new, x_ref, c, y0, opt);
    ++stats.residuals;
    const double fn_new = f_norm(r_new);
    if (!(fn_new < 0.5 * fn) && !cache.fresh) {
      // Stale Jacobian: rebuild at the current iterate and redo the step.
      refresh();
      factor();
      continue;
    }
    cache.fresh = false;
    y = std::move(y_new);
    r = std::move(r_new);
  }
  out.y = y;
  out.residual = f_norm(r);
  return out;
}

PeriodicOrbit make_orbit(const Vec& y, double residual, int iterations, const std::string& type, const Vec& x_eq,
                         const ContinuationOptions& opt) {
  PeriodicOrbit o;
  o.x = y_state(y);
  o.multipliers = y_lambda(y);
  o.T = y_period(y);
  o.residual = residual;
  o.iterations = iterations;
  o.orbit_type = type;
  o.energy = hamiltonian(o.x, opt.params);
  o.amplitude = orbit_amplitude(o, head(x_eq), opt);
  return o;
}

}  // namespace

Eigen::VectorXd phase_state(const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
  if (q.size() != kDim || p.size() != kDim) throw DomainViolation("phase state needs two 180-vectors");
  Vec x(kPhaseDim);
  x << q, p;
  return x;
}

double hamiltonian(const Eigen::VectorXd& x, const ForceFieldParams& params) {
  return 0.5 * tail(x).squaredNorm() + energy(head(x), params);
}

Eigen::VectorXd hamiltonian_field(const Eigen::VectorXd& x, const ForceFieldParams& params) {
  return phase_state(tail(x), -gradient(head(x), params));
}

Eigen::MatrixXd generators(const Eigen::VectorXd& x, const ForceFieldParams& params) {
  const Vec q = head(x), p = tail(x);
  Mat A = Mat::Zero(kPhaseDim, kMultipliers);
  const auto& J = rotation_generators();
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < kAtoms; ++a) A(3 * a + k, k) = 1.0;
    A.col(3 + k) << rotate_all(J[k], q), rotate_all(J[k], p);
  }
  A.col(6) = hamiltonian_field(x, params);
  return A;
}

Eigen::Matrix<double, 7, 1> conserved_quantities(const Eigen::VectorXd& x, const ForceFieldParams& params) {
  const Vec q = head(x), p = tail(x);
  Eigen::Matrix<double, 7, 1> G;
  const auto& J = rotation_generators();
  for (int k = 0; k < 3; ++k) {
    double s = 0;
    for (int a = 0; a < kAtoms; ++a) s += p(3 * a + k);
    G(k) = -s;
    G(3 + k) = p.dot(rotate_all(J[k], q));
  }
  G(6) = hamiltonian(x, params);
  return G;
}

Eigen::VectorXd flow_time_one(const Eigen::VectorXd& x, double T, const Multipliers& lambda,
                              const ForceFieldParams& params, const FlowOptions& opt) {
  if (!(T > 0)) throw DomainViolation("period must be positive");
  if (x.size() != kPhaseDim) throw DomainViolation("phase state must have 360 entries");
  Vec state = x;
  AugmentedField f{T, lambda, params};
  guarded([&] {
    return odeint::integrate_adaptive(odeint::make_controlled(opt.atol, opt.rtol, Stepper()), f, state, 0.0, 1.0,
                                      1e-3);
  });
  return state;
}

std::vector<Eigen::VectorXd> flow_samples(const Eigen::VectorXd& x, double T, const Multipliers& lambda,
                                          const std::vector<double>& times, const ForceFieldParams& params,
                                          const FlowOptions& opt) {
  if (!(T > 0)) throw DomainViolation("period must be positive");
  std::vector<Vec> out;
  out.reserve(times.size());
  Vec state = x;
  AugmentedField f{T, lambda, params};
  guarded([&] {
    return odeint::integrate_times(odeint::make_dense_output(opt.atol, opt.rtol, Stepper()), f, state, times.begin(),
                                   times.end(), 1e-3, [&](const Vec& s, double) { out.push_back(s); });
  });
  return out;
}

Eigen::VectorXd augmented_residual(const Eigen::VectorXd& x, const Multipliers& lambda, double T,
                                   const Eigen::VectorXd& x_ref, const ForceFieldParams& params,
                                   const FlowOptions& opt) {
  Vec r(kPhaseDim + kMultipliers);
  r.head(kPhaseDim) = x - flow_time_one(x, T, lambda, params, opt);
  r.tail(kMultipliers) = generators(x_ref, params).transpose() * (x - x_ref);
  return r;
}

Eigen::MatrixXd augmented_jacobian(const Eigen::VectorXd& x, const Multipliers& lambda, double T,
                                   const Eigen::VectorXd& x_ref, const ContinuationOptions& opt) {
  Mat J(kPhaseDim + kMultipliers, kUnknowns);
  J.topRows(kPhaseDim) = shooting_jacobian(y_pack(x, lambda, T), opt);
  J.bottomRows(kMultipliers) = section_rows(x_ref, opt.params);
  return J;
}

// Class of an orbit-type id, classifying the isotropy lattices on demand (the hinted label first).
// A type of another isotypical component is valid but has no fixed vectors in this one.
static int resolve_orbit_type(const std::string& id, int label_hint) {
  auto& reg = OrbitRegistry::circle();
  int c = reg.find(id);
  if (c < 0 && label_hint != 0) {
    isotropy_types(label_hint, 1, reg);
    c = reg.find(id);
  }
  for (int n : all_labels()) {
    if (c >= 0) break;
    isotropy_types(n, 1, reg);
    c = reg.find(id);
  }
  if (c < 0) throw DomainViolation("unknown orbit type " + id);
  return c;
}

Seed seed_from_mode(const LinearModes& modes, int j, double amplitude, const std::string& orbit_type_id) {
  const auto& ms = modes.spectrum.modes;
  if (j < 1 || j > static_cast<int>(ms.size())) throw DomainViolation("mode index out of range");
  if (!(amplitude > 0)) throw DomainViolation("amplitude must be positive");
  const SpectralMode& mode = ms[j - 1];
  auto& reg = OrbitRegistry::circle();
  const int c = resolve_orbit_type(orbit_type_id, mode.label);
  const OrbitGroup& H = reg[c].rep;
  if (H.whole) throw EmptyFixedSpace("the whole group fixes only the equilibrium");

  // Action on the eigenspace, then on its complexification with the O(2)-part acting on the phase.
  const Mat& W = mode.vectors;
  const auto d = W.cols();
  const auto& table = SymmetryTable::get();
  Mat C(2 * d * static_cast<Eigen::Index>(H.order()), 2 * d);
  for (std::size_t i = 0; i < H.order(); ++i) {
    const auto& e = H.elements[i];
    Mat R(d, d);
    for (Eigen::Index k = 0; k < d; ++k) R.col(k) = W.transpose() * table.apply(e.g, W.col(k));
    const double th = 2 * std::numbers::pi * static_cast<double>(e.t.numerator()) / static_cast<double>(e.t.denominator());
    const double cs = std::cos(th), sn = std::sin(th), f = e.flip ? -1.0 : 1.0;
    Mat A(2 * d, 2 * d);
    A << cs * R, -sn * f * R, sn * R, cs * f * R;
    C.middleRows(2 * d * static_cast<Eigen::Index>(i), 2 * d) = A - Mat::Identity(2 * d, 2 * d);
  }
  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullV);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-8) ++rank;
  const Mat Q = svd.matrixV().rightCols(2 * d - rank);
  if (Q.cols() == 0)
    throw EmptyFixedSpace("mode " + std::to_string(j) + " has no vectors fixed by " + orbit_type_id);

  Vec v = Q.col(0);
  if (Q.cols() > 1) {
    std::mt19937 rng(20240611u);
    std::normal_distribution<double> normal;
    Vec w(Q.cols());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = normal(rng);
    v = Q * w;
  }
  const Vec a = W * v.head(d), b = W * v.tail(d);
  // max_s |a cos s - b sin s|^2 is the top eigenvalue of the Gram matrix of (a, -b).
  Eigen::Matrix2d G;
  G << a.squaredNorm(), -a.dot(b), -a.dot(b), b.squaredNorm();
  const double scale = amplitude / std::sqrt(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(G).eigenvalues()(1));
  const double omega = std::sqrt(mode.mu);

  Seed s;
  s.j = j;
  s.label = mode.label;
  s.orbit_type = reg[c].id;
  s.group = H;
  s.x_eq = phase_state(modes.u0, Vec::Zero(kDim));
  s.x = phase_state(modes.u0 + scale * a, -scale * omega * b);
  s.T = 2 * std::numbers::pi / omega;
  s.amplitude = amplitude;
  return s;
}

PeriodicOrbit newton_correct(const Seed& seed, const ContinuationOptions& opt, NewtonStats* stats) {
  NewtonStats local;
  NewtonStats& st = stats ? *stats : local;
  const Vec y0 = y_pack(seed.x, Multipliers::Zero(), seed.T);
  Vec c = Vec::Zero(kUnknowns);
  c.head(kPhaseDim) = seed.x - seed.x_eq;
  if (c.norm() == 0) throw DomainViolation("seed coincides with the equilibrium");
  c.normalize();
  Corrector cache;
  // A converged point needs no Jacobian.
  Vec r = bordered_residual(y0, seed.x, c, y0, opt);
  ++st.residuals;
  if (f_norm(r) < opt.newton_tol)
    return make_orbit(y0, f_norm(r), 0, seed.orbit_type, seed.x_eq, opt);
  SolveResult res = solve_bordered(y0, seed.x, c, y0, seed.group, cache, opt, st, opt.max_iterations);
  if (!res.ok)
    throw NoConvergence("Newton did not converge from the mode " + std::to_string(seed.j) +
                        " seed (residual " + std::to_string(res.residual) + ")");
  return make_orbit(res.y, res.residual, res.iterations, seed.orbit_type, seed.x_eq, opt);
}

OrbitBranch start_branch(const Seed& seed, const PeriodicOrbit& first) {
  OrbitBranch b;
  b.j = seed.j;
  b.orbit_type = seed.orbit_type;
  b.x_eq = seed.x_eq;
  b.points.push_back(first);
  return b;
}

OrbitBranch arclength_continue(OrbitBranch branch, int n_steps, double ds, const ContinuationOptions& opt) {
  if (branch.points.empty()) throw MissingStage("branch has no converged point");
  if (ds == 0) throw DomainViolation("arclength step must be nonzero");
  auto pack = [](const PeriodicOrbit& o) { return y_pack(o.x, o.multipliers, o.T); };
  auto& reg = OrbitRegistry::circle();
  const int cls = resolve_orbit_type(branch.orbit_type, 0);
  const OrbitGroup& group = reg[cls].rep;
  Corrector cache;

  if (branch.tangent.size() != kUnknowns) {
    // Null vector of dF oriented away from the equilibrium.
    const Vec y = pack(branch.points.back());
    cache.shoot = shooting_jacobian(y, opt);
    cache.fresh = true;
    ++branch.stats.jacobians;
    Vec c = Vec::Zero(kUnknowns);
    c.head(kPhaseDim) = branch.points.back().x - branch.x_eq;
    c.normalize();
    Mat A(kUnknowns, kUnknowns);
    A.topRows(kPhaseDim) = cache.shoot;
    A.middleRows(kPhaseDim, kMultipliers) = section_rows(branch.points.back().x, opt.params);
    A.bottomRows(1) = c.transpose();
    Vec e = Vec::Zero(kUnknowns);
    e(kUnknowns - 1) = 1;
    branch.tangent = A.partialPivLu().solve(e).normalized();
  }

  for (int step = 0; step < n_steps; ++step) {
    const PeriodicOrbit& last = branch.points.back();
    const Vec y_prev = pack(last);
    double h = ds;
    SolveResult res;
    int halvings = 0;
    for (;;) {
      const Vec y_pred = y_prev + h * branch.tangent;
      try {
        res = solve_bordered(y_pred, last.x, branch.tangent, y_pred, group, cache, opt, branch.stats, 12);
      } catch (const NumericalError&) {
        res.ok = false;
      }
      if (res.ok) break;
      if (++halvings > opt.max_halvings)
        throw StepFailure("pseudo-arclength step failed after " + std::to_string(opt.max_halvings) + " halvings");
      h /= 2;
      cache.shoot.resize(0, 0);
    }
    PeriodicOrbit next = make_orbit(res.y, res.residual, res.iterations, branch.orbit_type, branch.x_eq, opt);
    const Vec secant = res.y - y_prev;
    branch.tangent = (h > 0 ? 1.0 : -1.0) * secant.normalized();
    if (branch.points.size() >= 2) {
      const double d1 = last.T - branch.points[branch.points.size() - 2].T, d2 = next.T - last.T;
      if (d1 * d2 < 0) branch.turning_points.push_back(static_cast<int>(branch.points.size()) - 1);
    }
    branch.steps.push_back(secant.norm());
    branch.points.push_back(std::move(next));
  }
  return branch;
}

double orbit_amplitude(const PeriodicOrbit& orbit, const Eigen::VectorXd& u0, const ContinuationOptions& opt,
                       int samples) {
  double a = 0;
  for (const auto& [t, x] : orbit_trajectory(orbit, opt, samples)) a = std::max(a, (head(x) - u0).norm());
  return a;
}

std::vector<std::pair<double, Eigen::VectorXd>> orbit_trajectory(const PeriodicOrbit& orbit,
                                                                 const ContinuationOptions& opt, int samples) {
  std::vector<double> times(samples + 1);
  for (int k = 0; k <= samples; ++k) times[k] = static_cast<double>(k) / samples;
  auto xs = flow_samples(orbit.x, orbit.T, orbit.multipliers, times, opt.params, opt.flow);
  std::vector<std::pair<double, Vec>> out;
  for (int k = 0; k < samples; ++k) out.emplace_back(times[k] * orbit.T, xs[k]);
  return out;
}

SymmetryReport verify_symmetry(const PeriodicOrbit& orbit, const std::string& orbit_type_id,
                               const ContinuationOptions& opt, double tol, int samples) {
  auto& reg = OrbitRegistry::circle();
  const int c = resolve_orbit_type(orbit_type_id, 0);
  const OrbitGroup& H = reg[c].rep;
  if (H.whole) throw DomainViolation("the whole group is not an orbit symmetry");
  if (samples % 2 != 0) throw DomainViolation("sample count must be even");

  std::vector<double> times(samples + 1);
  for (int k = 0; k <= samples; ++k) times[k] = static_cast<double>(k) / samples;
  const auto raw = flow_samples(orbit.x, orbit.T, orbit.multipliers, times, opt.params, opt.flow);
  auto wrap_index = [&](long k) { return static_cast<int>(((k % samples) + samples) % samples); };
  std::vector<long> shifts;
  for (const auto& e : H.elements) {
    const long num = e.t.numerator() * samples;
    if (num % e.t.denominator() != 0) throw DomainViolation("sample count does not resolve the time shifts");
    shifts.push_back(num / e.t.denominator());
  }

  auto rotated = [&](const Mat3& Q) {
    std::vector<Vec> xs(samples);
    for (int k = 0; k < samples; ++k) xs[k] = rotate_state(Q, raw[k]);
    return xs;
  };
  // Violations of every relation, stacked; `per` receives the sup norm of each relation.
  auto violations = [&](const std::vector<Vec>& xs, std::vector<double>* per) {
    Vec out(static_cast<Eigen::Index>(H.order()) * samples * kPhaseDim);
    Eigen::Index pos = 0;
    for (std::size_t i = 0; i < H.order(); ++i) {
      const auto& e = H.elements[i];
      double err = 0;
      for (int k = 0; k < samples; ++k) {
        // x(s) = h x(s + theta), or h x(-s - theta) with reversed momenta.
        const Vec d = act_phase(e, xs[wrap_index(e.flip ? -k - shifts[i] : k + shifts[i])]) - xs[k];
        err = std::max(err, d.cwiseAbs().maxCoeff());
        out.segment(pos, kPhaseDim) = d;
        pos += kPhaseDim;
      }
      if (per) per->push_back(err);
    }
    return out;
  };
  const Mat3 Q = best_alignment([&](const Mat3& R) { return violations(rotated(R), nullptr); });
  const std::vector<Vec> xs = rotated(Q);

  SymmetryReport rep;
  rep.orbit_type = reg[c].id;
  rep.samples = samples;
  rep.alignment_angle = Eigen::AngleAxisd(Q).angle();
  std::vector<double> per;
  violations(xs, &per);
  for (std::size_t i = 0; i < H.order(); ++i) {
    const auto& e = H.elements[i];
    std::string name = "(" + gamma_element(e.g).str() + (e.flip ? ", kappa" : "") + ", t=" +
                       std::to_string(e.t.numerator()) + "/" + std::to_string(e.t.denominator()) + ")";
    rep.relations.emplace_back(name, per[i]);
    rep.max_error = std::max(rep.max_error, per[i]);
    if (e.g == 0 && e.flip && shifts[i] % 2 == 0) {
      // Pure reflection: momenta vanish at s = -theta/2 and half a period later.
      const long half = shifts[i] / 2;
      const double b = std::max(tail(xs[wrap_index(-half)]).cwiseAbs().maxCoeff(),
                                tail(xs[wrap_index(-half + samples / 2)]).cwiseAbs().maxCoeff());
      rep.brake_error = std::max(rep.brake_error, b);
    }
  }
  if (rep.max_error > tol) {
    std::string worst;
    for (const auto& [n, e] : rep.relations)
      if (e > tol) worst += (worst.empty() ? "" : ", ") + n;
    throw SymmetryViolation("orbit violates " + worst + " of " + rep.orbit_type);
  }
  return rep;
}

}  // namespace c60
