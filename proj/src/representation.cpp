#include "c60/representation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "c60/equilibrium.hpp"
#include "c60/errors.hpp"

namespace c60 {

namespace {

const double kPhiPlus = (1 + std::sqrt(5.0)) / 2;
const double kPhiMinus = (1 - std::sqrt(5.0)) / 2;

// Rows chi_1..chi_5, columns: identity, involution, three-cycle, (12345), (13524).
const double kTable[5][5] = {{1, 1, 1, 1, 1},
                             {4, 0, 1, -1, -1},
                             {5, 1, -1, 0, 0},
                             {3, -1, 0, kPhiPlus, kPhiMinus},
                             {3, -1, 0, kPhiMinus, kPhiPlus}};

// Orthonormal basis of the complement of the all-ones vector in R^k.
Eigen::MatrixXd ones_complement(int k) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Ones(k, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(k - 1);
}

const std::vector<std::set<int>>& sylow5() {
  static const std::vector<std::set<int>> subs = [] {
    std::set<std::set<int>> s;
    for (const Perm5& p : a5_elements()) {
      if (p.order() != 5) continue;
      std::set<int> h;
      Perm5 q = Perm5::identity();
      for (int i = 0; i < 5; ++i, q = q * p) h.insert(a5_index(q));
      s.insert(h);
    }
    return std::vector<std::set<int>>(s.begin(), s.end());
  }();
  return subs;
}

Eigen::MatrixXd sylow_permutation(const Perm5& g) {
  const auto& subs = sylow5();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(6, 6);
  Perm5 gi = g.inverse();
  for (int i = 0; i < 6; ++i) {
    std::set<int> img;
    for (int e : subs[i]) img.insert(a5_index(g * a5_elements()[e] * gi));
    int j = static_cast<int>(std::find(subs.begin(), subs.end(), img) - subs.begin());
    P(j, i) = 1;
  }
  return P;
}

}  // namespace

int irrep_dim(int n) {
  static const int d[6] = {0, 1, 4, 5, 3, 3};
  if (!valid_label(n)) throw StructuralError("invalid isotypical label " + std::to_string(n));
  return d[std::abs(n)];
}

bool valid_label(int n) { return n != 0 && std::abs(n) <= 5; }

const std::vector<int>& all_labels() {
  static const std::vector<int> v{1, -1, 2, -2, 3, -3, 4, -4, 5, -5};
  return v;
}

int a5_class(const Perm5& p) {
  switch (p.order()) {
    case 1: return 0;
    case 2: return 1;
    case 3: return 2;
    default: return c4_index(p) >= 0 ? 3 : 4;
  }
}

double character(int n, const GroupElement& g) {
  double c = kTable[std::abs(n) - 1][a5_class(g.perm)];
  return (n < 0 && g.sign < 0) ? -c : c;
}

Eigen::MatrixXd irrep_matrix(int n, const GroupElement& g) {
  Eigen::MatrixXd M;
  const Perm5& s = g.perm;
  switch (std::abs(n)) {
    case 1:
      M = Eigen::MatrixXd::Identity(1, 1);
      break;
    case 2: {
      static const Eigen::MatrixXd Q = ones_complement(5);
      Eigen::MatrixXd P = Eigen::MatrixXd::Zero(5, 5);
      for (int k = 0; k < 5; ++k) P(s.img[k], k) = 1;
      M = Q.transpose() * P * Q;
      break;
    }
    case 3: {
      static const Eigen::MatrixXd Q = ones_complement(6);
      M = Q.transpose() * sylow_permutation(s) * Q;
      break;
    }
    case 4:
      M = rho(s);
      break;
    case 5: {
      static const Perm5 t = Perm5::parse("(12)");
      M = rho(t * s * t);
      break;
    }
    default:
      throw StructuralError("invalid isotypical label " + std::to_string(n));
  }
  if (n < 0 && g.sign < 0) M = -M;
  return M;
}

Eigen::VectorXd isotypical_projection(int n, const Eigen::VectorXd& v) {
  const auto& T = SymmetryTable::get();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (int g = 0; g < 120; ++g) {
    double c = character(n, gamma_element(g));
    if (c != 0) out += c * T.apply(g, v);
  }
  return out * (irrep_dim(n) / 120.0);
}

Eigen::MatrixXd isotypical_projector(int n) {
  const auto& T = SymmetryTable::get();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(kDim, kDim);
  for (int g = 0; g < 120; ++g) {
    double c = character(n, gamma_element(g));
    if (c == 0) continue;
    for (int i = 0; i < kAtoms; ++i) P.block<3, 3>(3 * i, 3 * T.source(g)[i]) += c * T.matrix(g);
  }
  return P * (irrep_dim(n) / 120.0);
}

Spectrum spectrum(const Eigen::VectorXd& u0, const ForceFieldParams& p, const SpectrumOptions& opt) {
  Eigen::MatrixXd H = hessian(u0, p, opt.hessian_step, opt.jobs);
  Eigen::MatrixXd Q = slice_basis(u0);
  Eigen::MatrixXd Hs = Q.transpose() * H * Q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Hs + Hs.transpose()));
  if (es.info() != Eigen::Success) throw NoConvergence("symmetric eigensolver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  Eigen::MatrixXd W = Q * es.eigenvectors();
  const int m = static_cast<int>(ev.size());

  std::map<int, Eigen::MatrixXd> proj;
  for (int n : all_labels()) proj[n] = isotypical_projector(n);

  Spectrum out;
  Eigen::MatrixXd R = rotation_fields(u0);
  int hi = m - 1;
  while (hi >= 0) {
    int lo = hi;
    while (lo > 0 && std::abs(ev[lo] - ev[lo - 1]) <= opt.cluster_gap * std::abs(ev[hi])) --lo;
    SpectralMode mode;
    mode.j = static_cast<int>(out.modes.size()) + 1;
    mode.multiplicity = hi - lo + 1;
    mode.mu = ev.segment(lo, mode.multiplicity).mean();
    mode.vectors = W.middleCols(lo, mode.multiplicity);
    double best = -1, total = 0, second = 0;
    for (int n : all_labels()) {
      double w = (proj[n] * mode.vectors).squaredNorm();
      total += w;
      if (w > best) {
        second = best;
        best = w;
        mode.label = n;
      } else {
        second = std::max(second, w);
      }
    }
    mode.dominance = best / total;
    if (mode.dominance < 0.99 || second / total > 0.01)
      throw ClusterAmbiguity("eigencluster " + std::to_string(mode.j) + " splits between labels");
    if (mode.multiplicity != irrep_dim(mode.label))
      throw ClusterAmbiguity("eigencluster " + std::to_string(mode.j) + " has multiplicity " +
                             std::to_string(mode.multiplicity) + " but label " + std::to_string(mode.label));
    if (mode.mu <= 0) throw StructuralError("non-positive slice eigenvalue");
    mode.lambda1 = 1 / std::sqrt(mode.mu);
    out.isotypic_leak =
        std::max(out.isotypic_leak, (mode.vectors - proj[mode.label] * mode.vectors).colwise().norm().maxCoeff());
    out.slice_orthogonality =
        std::max(out.slice_orthogonality, (R.transpose() * mode.vectors).cwiseAbs().maxCoeff());
    out.modes.push_back(std::move(mode));
    hi = lo - 1;
  }
  double best = -1;
  for (int n : all_labels()) {
    double w = (proj[n] * R).squaredNorm();
    if (w > best) best = w, out.rotation_label = n;
  }
  return out;
}

double linearized_block(double lambda, double mu, int l) {
  return 1 - (lambda * lambda * mu + 1) / (static_cast<double>(l) * l + 1);
}

ResonanceReport critical_numbers(const std::vector<double>& mu, double tolerance) {
  ResonanceReport r;
  r.tolerance = tolerance;
  double top = 0, bottom = 1e300;
  for (double m : mu) top = std::max(top, 1 / std::sqrt(m)), bottom = std::min(bottom, 1 / std::sqrt(m));
  for (std::size_t j = 0; j < mu.size(); ++j) {
    double l1 = 1 / std::sqrt(mu[j]);
    for (int l = 1; l * l1 <= top * (1 + 1e-12); ++l) {
      r.numbers.push_back({l * l1, static_cast<int>(j) + 1, l});
      r.l_max = std::max(r.l_max, l);
    }
  }
  std::sort(r.numbers.begin(), r.numbers.end(), [](auto& a, auto& b) { return a.lambda < b.lambda; });
  r.min_gap = 1e300;
  for (std::size_t i = 1; i < r.numbers.size(); ++i) {
    double gap = r.numbers[i].lambda - r.numbers[i - 1].lambda;
    if (gap < r.min_gap) r.min_gap = gap, r.gap_lo = r.numbers[i - 1], r.gap_hi = r.numbers[i];
  }
  r.resonant = r.min_gap <= tolerance;
  (void)bottom;
  return r;
}

int chain_position(const ResonanceReport& r, int j, int l) {
  for (std::size_t i = 0; i < r.numbers.size(); ++i)
    if (r.numbers[i].j == j && r.numbers[i].l == l) return static_cast<int>(i);
  return -1;
}

std::vector<ReferenceMode> load_reference_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingStage("cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::vector<ReferenceMode> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    ReferenceMode m;
    if (!(is >> m.j >> m.multiplicity >> m.mu >> m.lambda >> m.n)) throw ParseError("bad reference row: " + line);
    out.push_back(m);
  }
  return out;
}

}  // namespace c60
