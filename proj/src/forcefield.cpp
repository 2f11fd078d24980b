#include "c60/forcefield.hpp"

#include <cmath>
#include <sstream>

#include "c60/errors.hpp"
#include "c60/parallel.hpp"

namespace c60 {

namespace {

constexpr double kTiny = 1e-12;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError("bad boolean: " + v);
}

// Unit direction of u_a - u_b with an adjoint accumulator.
struct Dir {
  int a, b;
  Vec3 e;
  double len;
  Vec3 g = Vec3::Zero();

  Dir(const Eigen::VectorXd& u, int a_, int b_) : a(a_), b(b_) {
    Vec3 d = u.segment<3>(3 * a) - u.segment<3>(3 * b);
    len = d.norm();
    if (len < kTiny) throw DegenerateGeometry("coincident atoms " + std::to_string(a) + "," + std::to_string(b));
    e = d / len;
  }

  void flush(Eigen::VectorXd& grad) const {
    Vec3 gd = (g - g.dot(e) * e) / len;
    grad.segment<3>(3 * a) += gd;
    grad.segment<3>(3 * b) -= gd;
  }
};

struct Normal {
  Vec3 raw, n;
  double norm;
  bool unit;

  Normal(const Vec3& e1, const Vec3& e2, TorsionNormals mode) : unit(mode == TorsionNormals::Unit) {
    raw = e1.cross(e2);
    norm = raw.norm();
    if (norm < kTiny) throw DegenerateGeometry("collinear bonds in torsion normal");
    n = unit ? Vec3(raw / norm) : raw;
  }

  // Pushes the adjoint of n back onto the two directions.
  void backprop(const Vec3& gn, Dir& d1, Dir& d2) const {
    Vec3 graw = unit ? Vec3((gn - gn.dot(n) * n) / norm) : gn;
    d1.g += d2.e.cross(graw);
    d2.g += graw.cross(d1.e);
  }
};

double site_terms(const Eigen::VectorXd& u, int i, const ForceFieldParams& p, Eigen::VectorXd* grad,
                  SiteAngles* angles) {
  const auto [s, sm, d] = neighbor_table()[i];

  Dir is(u, i, s), ism(u, i, sm), id(u, i, d);
  Dir ds(u, d, s), dsm(u, d, sm);
  double E = 0;

  // Bond stretching: single bond to S(i), half of the double bond.
  E += morse(is.len, p) + 0.5 * morse(id.len, p);
  if (grad) {
    Vec3 f1 = morse_deriv(is.len, p) * is.e;
    Vec3 f2 = 0.5 * morse_deriv(id.len, p) * id.e;
    grad->segment<3>(3 * i) += f1 + f2;
    grad->segment<3>(3 * s) -= f1;
    grad->segment<3>(3 * d) -= f2;
  }

  // Bending at (S,S^-1), (D,S), (D,S^-1).
  std::array<std::pair<Dir*, Dir*>, 3> bends{{{&is, &ism}, {&id, &is}, {&id, &ism}}};
  for (int k = 0; k < 3; ++k) {
    auto [x, y] = bends[k];
    double c = x->e.dot(y->e);
    if (angles) angles->cos_theta[k] = c;
    E += bend_energy(c, p);
    double dc = p.k_theta * (c + 0.5);
    x->g += dc * y->e;
    y->g += dc * x->e;
  }

  // Torsions against the plane through u_D, u_S, u_{S^-1}.
  Normal n(ds.e, dsm.e, p.normals);
  std::array<std::pair<Dir*, Dir*>, 3> tors{{{&is, &ism}, {&id, &ism}, {&id, &is}}};
  Vec3 gn = Vec3::Zero();
  for (int k = 0; k < 3; ++k) {
    auto [x, y] = tors[k];
    Normal nk(x->e, y->e, p.normals);
    double c = n.n.dot(nk.n);
    if (angles) angles->cos_phi[k] = c;
    E += torsion_energy(c, p);
    double dc = -2.0 * p.k_phi * c;
    gn += dc * nk.n;
    nk.backprop(dc * n.n, *x, *y);
  }
  n.backprop(gn, ds, dsm);

  if (grad)
    for (Dir* x : {&is, &ism, &id, &ds, &dsm}) x->flush(*grad);
  return E;
}

}  // namespace

void ForceFieldParams::validate() const {
  if (!(E0 > 0 && beta > 0 && r0 > 0 && k_theta > 0 && k_phi > 0 && vdw_epsilon > 0 && vdw_sigma > 0))
    throw DomainViolation("force-field constants must be strictly positive");
}

ForceFieldParams ForceFieldParams::parse(const std::string& text) {
  ForceFieldParams p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value: " + line);
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k == "E0") p.E0 = std::stod(v);
    else if (k == "beta") p.beta = std::stod(v);
    else if (k == "r0") p.r0 = std::stod(v);
    else if (k == "k_theta") p.k_theta = std::stod(v);
    else if (k == "k_phi") p.k_phi = std::stod(v);
    else if (k == "vdw_enabled") p.vdw_enabled = parse_bool(v);
    else if (k == "vdw_epsilon") p.vdw_epsilon = std::stod(v);
    else if (k == "vdw_sigma") p.vdw_sigma = std::stod(v);
    else if (k == "torsion_normals") {
      if (v == "unit") p.normals = TorsionNormals::Unit;
      else if (v == "raw") p.normals = TorsionNormals::Raw;
      else throw ParseError("torsion_normals must be unit or raw");
    } else throw ParseError("unknown force-field key: " + k);
  }
  p.validate();
  return p;
}

std::string ForceFieldParams::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "E0 = " << E0 << "\nbeta = " << beta << "\nr0 = " << r0 << "\nk_theta = " << k_theta
     << "\nk_phi = " << k_phi << "\nvdw_enabled = " << (vdw_enabled ? "true" : "false")
     << "\nvdw_epsilon = " << vdw_epsilon << "\nvdw_sigma = " << vdw_sigma
     << "\ntorsion_normals = " << (normals == TorsionNormals::Unit ? "unit" : "raw") << "\n";
  return os.str();
}

double morse(double x, const ForceFieldParams& p) {
  double t = 1 - std::exp(-p.beta * (x - p.r0));
  return p.E0 * (t * t - 1);
}

double morse_deriv(double x, const ForceFieldParams& p) {
  double e = std::exp(-p.beta * (x - p.r0));
  return 2 * p.E0 * p.beta * (1 - e) * e;
}

double bend_energy(double c, const ForceFieldParams& p) { return 0.5 * p.k_theta * (c + 0.5) * (c + 0.5); }

double torsion_energy(double c, const ForceFieldParams& p) { return p.k_phi * (1 - c * c); }

double vdw_pair(double x, const ForceFieldParams& p) {
  double s6 = std::pow(p.vdw_sigma / x, 6);
  return p.vdw_epsilon * (s6 * s6 - 2 * s6);
}

double vdw_pair_deriv(double x, const ForceFieldParams& p) {
  double s6 = std::pow(p.vdw_sigma / x, 6);
  return p.vdw_epsilon * (-12 * s6 * s6 + 12 * s6) / x;
}

const std::vector<std::pair<int, int>>& vdw_pairs() {
  static const std::vector<std::pair<int, int>> pairs = [] {
    std::vector<std::pair<int, int>> v;
    for (int i = 0; i < kAtoms; ++i) {
      const auto [n1, n2, n3] = neighbor_table()[i];
      for (int j = i + 1; j < kAtoms; ++j)
        if (j != n1 && j != n2 && j != n3) v.emplace_back(i, j);
    }
    return v;
  }();
  return pairs;
}

SiteAngles site_angles(const Eigen::VectorXd& u, int atom, const ForceFieldParams& p) {
  SiteAngles a;
  site_terms(u, atom, p, nullptr, &a);
  return a;
}

double energy_gradient(const Eigen::VectorXd& u, const ForceFieldParams& p, Eigen::VectorXd& grad) {
  grad = Eigen::VectorXd::Zero(kDim);
  double E = 0;
  for (int i = 0; i < kAtoms; ++i) E += site_terms(u, i, p, &grad, nullptr);
  if (p.vdw_enabled) {
    for (auto [i, j] : vdw_pairs()) {
      Vec3 d = u.segment<3>(3 * i) - u.segment<3>(3 * j);
      double r = d.norm();
      if (r < kTiny) throw DegenerateGeometry("coincident atoms in van der Waals pair");
      E += vdw_pair(r, p);
      Vec3 f = vdw_pair_deriv(r, p) * d / r;
      grad.segment<3>(3 * i) += f;
      grad.segment<3>(3 * j) -= f;
    }
  }
  return E;
}

double energy(const Eigen::VectorXd& u, const ForceFieldParams& p) {
  Eigen::VectorXd g;
  return energy_gradient(u, p, g);
}

Eigen::VectorXd gradient(const Eigen::VectorXd& u, const ForceFieldParams& p) {
  Eigen::VectorXd g;
  energy_gradient(u, p, g);
  return g;
}

Eigen::MatrixXd hessian(const Eigen::VectorXd& u, const ForceFieldParams& p, double h, int jobs) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd H(n, n);
  auto column = [&](int j) {
    Eigen::VectorXd up = u, um = u;
    up[j] += h;
    um[j] -= h;
    H.col(j) = (gradient(up, p) - gradient(um, p)) / (2 * h);
  };
  parallel_for(n, jobs, column);
  return 0.5 * (H + H.transpose());
}

}  // namespace c60
