#include "c60/degrees.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "c60/errors.hpp"
#include "c60/molecule.hpp"

namespace c60 {

long OrbitTypeElement::operator[](const std::string& id) const {
  auto it = coeffs.find(id);
  return it == coeffs.end() ? 0 : it->second;
}

void OrbitTypeElement::add(const std::string& id, long c) {
  if (c == 0) return;
  long& v = coeffs[id];
  v += c;
  if (v == 0) coeffs.erase(id);
}

OrbitTypeElement OrbitTypeElement::operator+(const OrbitTypeElement& o) const {
  OrbitTypeElement r = *this;
  for (const auto& [id, c] : o.coeffs) r.add(id, c);
  return r;
}

OrbitTypeElement OrbitTypeElement::operator-(const OrbitTypeElement& o) const { return *this + o * -1; }

OrbitTypeElement OrbitTypeElement::operator*(long k) const {
  OrbitTypeElement r;
  for (const auto& [id, c] : coeffs) r.add(id, k * c);
  return r;
}

std::string OrbitTypeElement::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [id, c] : coeffs) {
    if (!first) os << ' ';
    os << (c > 0 ? "+" : "") << c << ' ' << id;
    first = false;
  }
  return first ? "0" : os.str();
}

int fixed_space_dim(const OrbitGroup& h, int n, int l) {
  if (h.whole) return 0;
  double s = 0;
  for (const auto& e : h.elements)
    if (!e.flip) {
      double t = static_cast<double>(e.t.numerator()) / static_cast<double>(e.t.denominator());
      s += 2 * std::cos(2 * std::numbers::pi * l * t) * character(n, gamma_element(e.g));
    }
  s /= static_cast<double>(h.order());
  long r = std::lround(s);
  if (std::abs(s - static_cast<double>(r)) > 1e-8) throw StructuralError("non-integral fixed-space dimension");
  return static_cast<int>(r);
}

namespace {

using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

// Real 2d x 2d matrix of (gamma, rot(theta/(2 pi l)) kappa^flip) on V_{n,l} = C^d, coordinates (Re z, Im z).
Mat action_matrix(const Mat& M, double theta, bool flip) {
  const auto d = M.rows();
  const double c = std::cos(theta), s = std::sin(theta), f = flip ? -1.0 : 1.0;
  Mat A(2 * d, 2 * d);
  A.topLeftCorner(d, d) = c * M;
  A.topRightCorner(d, d) = -s * f * M;
  A.bottomLeftCorner(d, d) = s * M;
  A.bottomRightCorner(d, d) = c * f * M;
  return A;
}

Mat null_space(const Mat& A, double tol = 1e-9) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

std::vector<long> subspace_key(const Mat& Q) {
  Mat P = Q * Q.transpose();
  std::vector<long> k(P.size());
  for (Eigen::Index i = 0; i < P.size(); ++i) k[i] = std::lround(P.data()[i] * 1e6);
  return k;
}

struct RawElement {
  int g;
  bool flip;
  double t;  // turns
};

struct Standardized {
  OrbitGroup group;
  double shift = 0;  // rotation (in turns) conjugating the raw elements into `group`
};

// Full stabilizer of x in (A5 x Z2) x O(2) acting on V_{n,l}.
std::vector<RawElement> point_stabilizer(const Eigen::VectorXd& x, const std::vector<Mat>& M, int l) {
  const auto d = M[0].rows();
  CVec z(d);
  for (Eigen::Index i = 0; i < d; ++i) z(i) = {x(i), x(d + i)};
  const double zz = z.squaredNorm();
  std::vector<RawElement> raw;
  for (int g = 0; g < kGammaOrder; ++g)
    for (bool flip : {false, true}) {
      CVec y = M[g].cast<std::complex<double>>() * (flip ? CVec(z.conjugate()) : z);
      std::complex<double> c = z.dot(y) / zz;
      if ((y - c * z).norm() > 1e-8 * std::sqrt(zz) || std::abs(std::abs(c) - 1) > 1e-8) continue;
      double base = -std::arg(c) / (2 * std::numbers::pi);
      base -= std::floor(base);
      for (int k = 0; k < l; ++k) raw.push_back({g, flip, (base + k) / l});
    }
  return raw;
}

// Moves the first reflection to angle 0; all angles then sit on the 1/(60 l) grid.
Standardized standardize_raw(const std::vector<RawElement>& raw, int l) {
  double t0 = 0;
  bool any_flip = false;
  for (const auto& r : raw)
    if (r.flip && (!any_flip || r.t < t0)) {
      t0 = r.t;
      any_flip = true;
    }
  Standardized out;
  out.shift = -t0 / 2;
  const long grid = 60L * l;
  for (const auto& r : raw) {
    double t = r.flip ? r.t - t0 : r.t;
    t -= std::floor(t);
    double k = t * static_cast<double>(grid);
    long kr = std::lround(k);
    if (std::abs(k - static_cast<double>(kr)) > 1e-6) throw StructuralError("stabilizer angle off the 1/60l grid");
    out.group.elements.push_back({r.g, r.flip, wrap(Turn(kr, grid))});
  }
  std::sort(out.group.elements.begin(), out.group.elements.end());
  out.group.elements.erase(std::unique(out.group.elements.begin(), out.group.elements.end()), out.group.elements.end());
  if (!(generate(out.group.elements) == out.group)) throw StructuralError("stabilizer is not closed");
  return out;
}

std::vector<IsotropyType> compute_isotropy(int n, int l, OrbitRegistry& reg) {
  const int d = irrep_dim(n), D = 2 * d;
  std::vector<Mat> M(kGammaOrder);
  for (int g = 0; g < kGammaOrder; ++g) M[g] = irrep_matrix(n, gamma_element(g));

  // Distinct proper nonzero fixed subspaces of the grid group (A5 x Z2) x D_{60 l}.
  const int N = 60 * l;
  std::vector<Mat> fixed;  // projectors
  std::set<std::vector<long>> fixed_keys;
  for (int g = 0; g < kGammaOrder; ++g)
    for (int j = 0; j < N; ++j)
      for (bool flip : {false, true}) {
        Mat A = action_matrix(M[g], 2 * std::numbers::pi * l * j / N, flip) - Mat::Identity(D, D);
        Mat Q = null_space(A);
        if (Q.cols() == 0 || Q.cols() == D) continue;
        if (fixed_keys.insert(subspace_key(Q)).second) fixed.push_back(Q * Q.transpose());
      }

  // Nodes are subspaces W = Fix(P) typed by their standardized pointwise stabilizer P; the orbit type
  // reported for W is the stabilizer of a generic point, which may be larger when reflections move.
  std::mt19937 rng(20240611u);
  std::normal_distribution<double> normal;
  std::map<int, IsotropyType> types;
  std::set<int> node_types;
  std::vector<Mat> queue;
  auto visit = [&](const Mat& Q) {
    Eigen::VectorXd r(Q.cols());
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = normal(rng);
    const auto raw = point_stabilizer(Q * r, M, l);
    const auto generic = standardize_raw(raw, l);
    const int c = reg.classify(generic.group);
    if (!types.count(c)) {
      IsotropyType t;
      t.cls = c;
      t.id = reg[c].id;
      t.fixed_dim = fixed_space_dim(generic.group, n, l);
      t.finite_weyl = reg[c].finite_weyl;
      types[c] = t;
    }
    std::vector<RawElement> pointwise;
    for (const auto& e : raw) {
      Mat A = action_matrix(M[e.g], 2 * std::numbers::pi * l * e.t, e.flip);
      if ((A * Q - Q).cwiseAbs().maxCoeff() < 1e-8) pointwise.push_back(e);
    }
    const auto node = standardize_raw(pointwise, l);
    if (fixed_space_dim(node.group, n, l) != Q.cols()) throw StructuralError("subspace is not a fixed space");
    if (node_types.insert(reg.classify(node.group)).second)
      queue.push_back(action_matrix(Mat::Identity(d, d), 2 * std::numbers::pi * l * node.shift, false) * Q);
  };
  visit(Mat::Identity(D, D));
  std::set<std::vector<long>> seen;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const Mat Q = queue[i];
    for (const auto& P : fixed) {
      Mat c = null_space(Q - P * Q);
      if (c.cols() == 0 || c.cols() == Q.cols()) continue;
      Mat W = Q * c;
      if (seen.insert(subspace_key(W)).second) visit(W);
    }
  }

  std::vector<IsotropyType> out;
  for (auto& [c, t] : types) out.push_back(t);
  for (auto& t : out) {
    t.maximal = true;
    for (const auto& u : out)
      if (u.cls != t.cls && reg.subconjugate(t.cls, u.cls)) t.maximal = false;
  }
  IsotropyType origin;
  origin.cls = reg.classify(OrbitGroup{true, {}});
  origin.id = reg[origin.cls].id;
  origin.finite_weyl = true;
  out.push_back(origin);
  std::sort(out.begin(), out.end(), [&](const IsotropyType& a, const IsotropyType& b) {
    const auto& ra = reg[a.cls].rep;
    const auto& rb = reg[b.cls].rep;
    if (ra.whole != rb.whole) return ra.whole;
    if (ra.order() != rb.order()) return ra.order() > rb.order();
    return a.id < b.id;
  });
  return out;
}

}  // namespace

std::vector<IsotropyType> isotropy_types(int n, int l, OrbitRegistry& reg) {
  static std::map<std::tuple<std::uint64_t, int, int>, std::vector<IsotropyType>> cache;
  auto key = std::make_tuple(reg.serial(), n, l);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_isotropy(n, l, reg)).first;
  return it->second;
}

namespace {

bool above_any(int c, OrbitRegistry& reg, const std::vector<int>* above) {
  if (!above || reg.is_whole(c)) return true;
  for (int m : *above)
    if (reg.subconjugate(m, c)) return true;
  return false;
}

std::size_t min_order(OrbitRegistry& reg, const std::vector<int>* above) {
  if (!above) return 1;
  std::size_t m = SIZE_MAX;
  for (int c : *above) m = std::min(m, reg[c].rep.whole ? SIZE_MAX : reg[c].rep.order());
  return m;
}

}  // namespace

OrbitTypeElement burnside_generators(int a, int b, OrbitRegistry& reg, const std::vector<int>* above) {
  static std::map<std::tuple<std::uint64_t, int, int, std::vector<int>>, OrbitTypeElement> cache;
  auto key = std::make_tuple(reg.serial(), std::min(a, b), std::max(a, b), above ? *above : std::vector<int>{-1});
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  OrbitTypeElement out;
  if (reg.is_whole(a) || reg.is_whole(b)) {
    int c = reg.is_whole(a) ? b : a;
    if (above_any(c, reg, above)) out.add(reg[c].id, 1);
    return cache[key] = out;
  }
  if (!reg[a].finite_weyl || !reg[b].finite_weyl)
    throw UnsupportedPair("Burnside product of " + reg[a].id + " and " + reg[b].id);

  const OrbitGroup A = reg[a].rep, B = reg[b].rep;
  const std::size_t lo = min_order(reg, above);
  std::set<std::vector<ProductElement>> inters;
  for (int g = 0; g < kGammaOrder; ++g)
    for (const auto& o : reg.ambient().product_parts(A, B)) {
      OrbitGroup C = intersect(A, conjugate(B, {g, o.flip, o.t}));
      if (C.order() < lo || !reg.ambient().finite_weyl(C)) continue;
      inters.insert(C.elements);
    }
  std::set<int> cls;
  for (const auto& e : inters) {
    int c = reg.classify(OrbitGroup{false, e});
    if (above_any(c, reg, above)) cls.insert(c);
  }
  std::vector<int> order(cls.begin(), cls.end());
  std::sort(order.begin(), order.end(), [&](int x, int y) { return reg[x].rep.order() > reg[y].rep.order(); });

  const long wa = reg.weyl_order(a), wb = reg.weyl_order(b);
  std::vector<std::pair<int, long>> done;
  for (int L : order) {
    long num = reg.n_coefficient(L, a) * wa * reg.n_coefficient(L, b) * wb;
    for (auto [Lt, nLt] : done) num -= reg.n_coefficient(L, Lt) * nLt * reg.weyl_order(Lt);
    const long wl = reg.weyl_order(L);
    if (num % wl != 0) throw StructuralError("Burnside coefficient not integral for " + reg[L].id);
    long nl = num / wl;
    done.emplace_back(L, nl);
    out.add(reg[L].id, nl);
  }
  return cache[key] = out;
}

OrbitTypeElement burnside_multiply(const OrbitTypeElement& a, const OrbitTypeElement& b, OrbitRegistry& reg,
                                   const std::vector<int>* above) {
  OrbitTypeElement out;
  for (const auto& [ia, ca] : a.coeffs)
    for (const auto& [ib, cb] : b.coeffs) out = out + burnside_generators(reg.at_id(ia), reg.at_id(ib), reg, above) * (ca * cb);
  return out;
}

OrbitTypeElement brouwer_degree_neg_id(int n, int l, OrbitRegistry& reg) {
  OrbitTypeElement out;
  std::vector<std::pair<int, long>> done;
  for (const auto& t : isotropy_types(n, l, reg)) {
    if (!t.finite_weyl) continue;
    long num = (t.fixed_dim % 2 == 0) ? 1 : -1;
    for (auto [L, nL] : done) num -= nL * reg.n_coefficient(t.cls, L) * reg.weyl_order(L);
    const long w = reg.weyl_order(t.cls);
    if (num % w != 0) throw StructuralError("Brouwer coefficient not integral for " + t.id);
    done.emplace_back(t.cls, num / w);
    out.add(t.id, num / w);
  }
  return out;
}

OrbitTypeElement pi0(const OrbitTypeElement& e, OrbitRegistry& reg) {
  OrbitTypeElement out;
  for (const auto& [id, c] : e.coeffs)
    if (reg[reg.at_id(id)].finite_weyl) out.add(id, c);
  return out;
}

OrbitTypeElement lfold(const OrbitTypeElement& e, int l, OrbitRegistry& reg) {
  OrbitTypeElement out;
  for (const auto& [id, c] : e.coeffs) out.add(reg[reg.classify(lfold(reg[reg.at_id(id)].rep, l))].id, c);
  return out;
}

namespace {

std::vector<std::vector<std::string>> read_rows(const std::string& path, std::size_t width) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream is(line);
    std::vector<std::string> f;
    std::string w;
    while (is >> w) f.push_back(w);
    if (f.empty()) continue;
    if (f.size() != width) throw ParseError("expected " + std::to_string(width) + " fields in " + path + ": " + line);
    rows.push_back(f);
  }
  return rows;
}

}  // namespace

std::map<int, StoredDegree> load_basic_degrees(const std::string& path) {
  auto& reg = OrbitRegistry::circle();
  std::map<int, StoredDegree> out;
  for (const auto& f : read_rows(path, 8)) {
    StoredTerm t;
    int n = std::stoi(f[0]);
    t.coeff = std::stol(f[1]);
    t.red = f[2] == "1";
    t.name = {f[3], f[4], f[5], f[6], f[7]};
    t.id = reg[reg.classify(resolve(t.name))].id;
    auto& d = out[n];
    d.n = n;
    if (d.element[t.id] != 0) throw ParseError("orbit type listed twice for n=" + f[0] + ": " + t.name.str());
    d.element.add(t.id, t.coeff);
    if (t.red) d.red.push_back(t.id);
    d.terms.push_back(t);
  }
  return out;
}

std::map<int, std::set<std::string>> load_maximal_types(const std::string& path) {
  auto& reg = OrbitRegistry::circle();
  std::map<int, std::set<std::string>> out;
  for (const auto& f : read_rows(path, 6))
    out[std::stoi(f[0])].insert(reg[reg.classify(resolve({f[1], f[2], f[3], f[4], f[5]}))].id);
  return out;
}

OrbitTypeElement basic_gradient_degree(const std::map<int, StoredDegree>& table, int n, int l) {
  auto it = table.find(n);
  if (it == table.end()) throw MissingStage("no stored degree for label " + std::to_string(n));
  return lfold(it->second.element, l);
}

OrbitTypeElement psi_homomorphism(const OrbitTypeElement& e, OrbitRegistry& reg) {
  OrbitTypeElement out;
  std::map<std::string, OrbitGroup> named;
  auto put = [&](const OrbitGroup& g, long c) {
    std::string name = circle_name(g);
    auto [it, fresh] = named.emplace(name, g);
    if (!fresh && !circle_conjugate(it->second, g)) throw StructuralError("two circle subgroups named " + name);
    out.add(name, c);
  };
  for (const auto& [id, c] : e.coeffs) {
    const OrbitGroup& h = reg[reg.at_id(id)].rep;
    if (h.whole) {
      put(h, c);
    } else if (h.has_reflection()) {
      OrbitGroup k;
      for (const auto& x : h.elements)
        if (!x.flip) k.elements.push_back(x);
      put(k, c);
    } else {
      OrbitGroup kp = conjugate(h, o2_part(0, true));
      if (circle_conjugate(h, kp)) {
        put(h, 2 * c);
      } else {
        put(h, c);
        put(kp, c);
      }
    }
  }
  return out;
}

OrbitTypeElement load_circle_element(const std::string& path) {
  OrbitTypeElement out;
  for (const auto& f : read_rows(path, 2)) out.add(f[1], std::stol(f[0]));
  return out;
}

namespace {

// Terms of e on orbit types with finite Weyl group lying above one of the classes in `above`.
OrbitTypeElement truncate(const OrbitTypeElement& e, OrbitRegistry& reg, const std::vector<int>& above) {
  OrbitTypeElement out;
  for (const auto& [id, c] : e.coeffs) {
    int k = reg.at_id(id);
    if (reg[k].finite_weyl && above_any(k, reg, &above)) out.add(id, c);
  }
  return out;
}

}  // namespace

OmegaReport omega_invariant(int j0, const std::vector<int>& labels, const ResonanceReport& crit,
                            const std::map<int, StoredDegree>& table, OrbitRegistry& reg) {
  if (crit.resonant) throw ResonanceDetected("critical numbers are not separated");
  if (j0 < 1 || j0 > static_cast<int>(labels.size())) throw DomainViolation("mode index out of range");
  OmegaReport rep;
  rep.j = j0;
  rep.n = labels[j0 - 1];
  int pos = chain_position(crit, j0, 1);
  if (pos < 0) throw MissingStage("lambda_{j,1} missing from the critical numbers");
  const double lo = crit.numbers[pos].lambda;
  for (const auto& c : crit.numbers)
    if (c.lambda < lo) rep.factors.emplace_back(c.j, c.l);

  std::vector<int> max0, max1;
  for (const auto& t : isotropy_types(rep.n, 1, reg))
    if (t.maximal) {
      rep.maximal.push_back(t.id);
      (t.finite_weyl ? max0 : max1).push_back(t.cls);
    }

  const OrbitTypeElement deg0 = basic_gradient_degree(table, rep.n, 1);
  std::vector<OrbitTypeElement> factors;
  for (auto [j, l] : rep.factors) factors.push_back(basic_gradient_degree(table, labels[j - 1], l));

  OrbitTypeElement G;
  G.add(reg[reg.classify(OrbitGroup{true, {}})].id, 1);
  OrbitTypeElement P = G;
  for (const auto& f : factors) P = burnside_multiply(P, truncate(f, reg, max0), reg, &max0);
  rep.element = P - burnside_multiply(truncate(deg0, reg, max0), P, reg, &max0);

  // One-dimensional Weyl maximal types. Two such types lie in (A5 x Z2) x SO(2), where rotations are central,
  // so their product has only circle strata and vanishes; (G) is the unit.
  const std::string& whole = G.coeffs.begin()->first;
  auto coefficient = [&](const OrbitTypeElement& e, int h) {
    for (const auto& [tid, c] : e.coeffs) {
      int t = reg.at_id(tid);
      if (reg[t].finite_weyl && !reg.is_whole(t) && reg.subconjugate(h, t))
        throw UnsupportedPair("orbit type " + tid + " lies above " + reg[h].id);
    }
    return e[reg[h].id];
  };
  for (int h : max1) {
    long pg = 1, ph = 0;
    for (const auto& f : factors) {
      ph = pg * coefficient(f, h) + ph * f[whole];
      pg *= f[whole];
    }
    rep.element.add(reg[h].id, ph - (deg0[whole] * ph + coefficient(deg0, h) * pg));
  }
  for (const auto& id : rep.maximal)
    if (rep.element[id] != 0) rep.reported.push_back(id);
  std::sort(rep.reported.begin(), rep.reported.end());
  return rep;
}

}  // namespace c60
