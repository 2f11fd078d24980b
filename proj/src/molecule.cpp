#include "c60/molecule.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

#include "c60/errors.hpp"

namespace c60 {

Perm5 Perm5::parse(const std::string& s) {
  Perm5 p;
  std::vector<int> cyc;
  auto close = [&] {
    for (std::size_t i = 0; i < cyc.size(); ++i) p.img[cyc[i]] = static_cast<std::uint8_t>(cyc[(i + 1) % cyc.size()]);
    cyc.clear();
  };
  bool open = false;
  for (char c : s) {
    if (c == '(') {
      if (open) throw ParseError("nested cycle in " + s);
      open = true;
    } else if (c == ')') {
      if (!open) throw ParseError("unbalanced cycle in " + s);
      close();
      open = false;
    } else if (c >= '1' && c <= '5') {
      if (!open) throw ParseError("digit outside cycle in " + s);
      int k = c - '1';
      if (std::find(cyc.begin(), cyc.end(), k) != cyc.end()) throw ParseError("repeated point in " + s);
      cyc.push_back(k);
    } else if (c != ' ') {
      throw ParseError("bad character in permutation " + s);
    }
  }
  if (open) throw ParseError("unterminated cycle in " + s);
  std::array<bool, 5> seen{};
  for (auto v : p.img) {
    if (seen[v]) throw ParseError("overlapping cycles in " + s);
    seen[v] = true;
  }
  return p;
}

Perm5 Perm5::operator*(const Perm5& o) const {
  Perm5 r;
  for (int i = 0; i < 5; ++i) r.img[i] = img[o.img[i]];
  return r;
}

Perm5 Perm5::inverse() const {
  Perm5 r;
  for (int i = 0; i < 5; ++i) r.img[img[i]] = static_cast<std::uint8_t>(i);
  return r;
}

bool Perm5::is_even() const {
  int inv = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (img[i] > img[j]) ++inv;
  return inv % 2 == 0;
}

int Perm5::order() const {
  Perm5 q = *this;
  int n = 1;
  while (q != identity()) {
    q = q * *this;
    ++n;
  }
  return n;
}

std::string Perm5::str() const {
  std::string out;
  std::array<bool, 5> done{};
  for (int i = 0; i < 5; ++i) {
    if (done[i] || img[i] == i) continue;
    out += '(';
    int k = i;
    while (!done[k]) {
      done[k] = true;
      out += static_cast<char>('1' + k);
      k = img[k];
    }
    out += ')';
  }
  return out.empty() ? "(1)" : out;
}

namespace {

std::vector<Perm5> parse_list(std::initializer_list<const char*> l) {
  std::vector<Perm5> v;
  for (auto s : l) v.push_back(Perm5::parse(s));
  return v;
}

}  // namespace

const std::vector<Perm5>& c4_cycles() {
  static const auto v = parse_list({"(12345)", "(12453)", "(12534)", "(13254)", "(13542)", "(13425)", "(14235)",
                                    "(14352)", "(14523)", "(15243)", "(15432)", "(15324)"});
  return v;
}

const std::vector<Perm5>& c5_cycles() {
  static const auto v = parse_list({"(12354)", "(12435)", "(12543)", "(13245)", "(13524)", "(13452)", "(14253)",
                                    "(14325)", "(14532)", "(15234)", "(15423)", "(15342)"});
  return v;
}

int c4_index(const Perm5& p) {
  const auto& v = c4_cycles();
  auto it = std::find(v.begin(), v.end(), p);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

int c5_index(const Perm5& p) {
  const auto& v = c5_cycles();
  auto it = std::find(v.begin(), v.end(), p);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

std::string AtomIndex::str() const { return tau().str() + ":" + std::to_string(vertex); }

AtomIndex AtomIndex::parse(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ParseError("atom index needs ':' : " + s);
  int f = c4_index(Perm5::parse(s.substr(0, colon)));
  if (f < 0) throw ParseError("not a face cycle: " + s);
  int k = std::stoi(s.substr(colon + 1));
  if (k < 1 || k > 5) throw ParseError("vertex out of range: " + s);
  return {f, k};
}

std::string GroupElement::str() const { return "(" + perm.str() + "," + (sign > 0 ? "1" : "-1") + ")"; }

const std::vector<Perm5>& a5_elements() {
  static const std::vector<Perm5> v = [] {
    std::vector<Perm5> out;
    Perm5 p;
    do {
      if (p.is_even()) out.push_back(p);
    } while (std::next_permutation(p.img.begin(), p.img.end()));
    return out;  // identity is lexicographically first
  }();
  return v;
}

int a5_index(const Perm5& p) {
  const auto& v = a5_elements();
  auto it = std::lower_bound(v.begin(), v.end(), p);
  if (it == v.end() || *it != p) throw StructuralError("odd permutation " + p.str());
  return static_cast<int>(it - v.begin());
}

int gamma_index(const GroupElement& g) { return a5_index(g.perm) + (g.sign < 0 ? 60 : 0); }

GroupElement gamma_element(int idx) { return {a5_elements()[idx % 60], idx < 60 ? 1 : -1}; }

std::vector<AtomIndex> enumerate_atoms() {
  std::vector<AtomIndex> v;
  for (int i = 0; i < kAtoms; ++i) v.push_back(AtomIndex::from_linear(i));
  return v;
}

AtomIndex single_bond(const AtomIndex& i) { return {i.face, i.tau()(i.vertex)}; }

AtomIndex single_bond_inv(const AtomIndex& i) { return {i.face, i.tau().inverse()(i.vertex)}; }

AtomIndex double_bond(const AtomIndex& i) {
  const Perm5& t = i.tau();
  int k = i.vertex;
  int t1 = t(k), t2 = t(t1), t3 = t(t2), t4 = t(t3);
  std::string cyc = "(" + std::to_string(k) + std::to_string(t2) + std::to_string(t1) + std::to_string(t4) +
                    std::to_string(t3) + ")";
  int f = c4_index(Perm5::parse(cyc));
  if (f < 0) throw StructuralError("double bond leaves class C4 at " + i.str());
  return {f, k};
}

const std::array<std::array<int, 3>, kAtoms>& neighbor_table() {
  static const auto t = [] {
    std::array<std::array<int, 3>, kAtoms> n;
    for (int i = 0; i < kAtoms; ++i) {
      AtomIndex a = AtomIndex::from_linear(i);
      n[i] = {single_bond(a).linear(), single_bond_inv(a).linear(), double_bond(a).linear()};
    }
    return n;
  }();
  return t;
}

Perm5 gen_a() { return Perm5::parse("(23)(45)"); }
Perm5 gen_b() { return Perm5::parse("(12345)"); }

namespace {

Mat3 matrix_a() {
  const double r5 = std::sqrt(5.0);
  Mat3 A;
  A << -1 / r5, 0, 2 / r5, 0, -1, 0, 2 / r5, 0, 1 / r5;
  return A;
}

Mat3 matrix_b() {
  const double c = (-1 + std::sqrt(5.0)) / 4;
  const double s = std::sqrt((5 + std::sqrt(5.0)) / 8);
  Mat3 B;
  B << c, -s, 0, s, c, 0, 0, 0, 1;
  return B;
}

const std::vector<Mat3>& rho_table() {
  static const std::vector<Mat3> table = [] {
    const auto& el = a5_elements();
    std::vector<Mat3> m(60);
    std::vector<bool> have(60, false);
    const Perm5 a = gen_a(), b = gen_b();
    const Mat3 A = matrix_a(), B = matrix_b();
    std::queue<int> q;
    m[0] = Mat3::Identity();
    have[0] = true;
    q.push(0);
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      for (auto [g, G] : {std::pair{a, A}, std::pair{b, B}}) {
        int j = a5_index(el[i] * g);
        if (!have[j]) {
          m[j] = m[i] * G;
          have[j] = true;
          q.push(j);
        }
      }
    }
    for (int i = 0; i < 60; ++i)
      for (int j = 0; j < 60; ++j)
        if ((m[a5_index(el[i] * el[j])] - m[i] * m[j]).cwiseAbs().maxCoeff() > 1e-12)
          throw StructuralError("rho is not a homomorphism");
    return m;
  }();
  return table;
}

}  // namespace

Mat3 rho(const Perm5& p) { return rho_table()[a5_index(p)]; }

Mat3 rho(const GroupElement& g) { return g.sign * rho(g.perm); }

const std::array<Mat3, 3>& rotation_generators() {
  static const std::array<Mat3, 3> J = [] {
    std::array<Mat3, 3> j;
    j[0] << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    j[1] << 0, 0, -1, 0, 0, 0, 1, 0, 0;
    j[2] << 0, -1, 0, 1, 0, 0, 0, 0, 0;
    return j;
  }();
  return J;
}

int action_source(const GroupElement& g, int atom) {
  AtomIndex i = AtomIndex::from_linear(atom);
  Perm5 si = g.perm.inverse();
  Perm5 t = si * i.tau() * g.perm;
  if (g.sign < 0) t = t.inverse();
  int f = c4_index(t);
  if (f < 0) throw StructuralError("conjugation left class C4");
  return AtomIndex{f, si(i.vertex)}.linear();
}

Eigen::VectorXd act(const GroupElement& g, const Mat3& R, const Eigen::VectorXd& u) {
  Eigen::VectorXd out(kDim);
  for (int i = 0; i < kAtoms; ++i) {
    int s = action_source(g, i);
    out.segment<3>(3 * i) = R * u.segment<3>(3 * s);
  }
  return out;
}

Eigen::VectorXd act(const GroupElement& g, const Eigen::VectorXd& u) { return act(g, rho(g), u); }

SymmetryTable::SymmetryTable() : src_(120), mat_(120) {
  for (int g = 0; g < 120; ++g) {
    GroupElement e = gamma_element(g);
    for (int i = 0; i < kAtoms; ++i) src_[g][i] = action_source(e, i);
    mat_[g] = rho(e);
  }
}

const SymmetryTable& SymmetryTable::get() {
  static const SymmetryTable t;
  return t;
}

Eigen::VectorXd SymmetryTable::apply(int g, const Eigen::VectorXd& u) const {
  Eigen::VectorXd out(kDim);
  for (int i = 0; i < kAtoms; ++i) out.segment<3>(3 * i) = mat_[g] * u.segment<3>(3 * src_[g][i]);
  return out;
}

Eigen::MatrixXd SymmetryTable::dense(int g) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(kDim, kDim);
  for (int i = 0; i < kAtoms; ++i) M.block<3, 3>(3 * i, 3 * src_[g][i]) = mat_[g];
  return M;
}

Vec3 atom_position(const Eigen::VectorXd& u, int atom) { return u.segment<3>(3 * atom); }

Vec3 barycenter(const Eigen::VectorXd& u) {
  Vec3 c = Vec3::Zero();
  for (int i = 0; i < kAtoms; ++i) c += u.segment<3>(3 * i);
  return c / kAtoms;
}

std::string configuration_csv(const Eigen::VectorXd& u) {
  std::ostringstream os;
  os.precision(17);
  os << "face,vertex,x,y,z\n";
  for (int i = 0; i < kAtoms; ++i) {
    AtomIndex a = AtomIndex::from_linear(i);
    os << a.tau().str() << ',' << a.vertex << ',' << u[3 * i] << ',' << u[3 * i + 1] << ',' << u[3 * i + 2] << '\n';
  }
  return os.str();
}

}  // namespace c60
