#include "c60/orbit_types.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>

#include "c60/errors.hpp"
#include "c60/molecule.hpp"
#include "c60/representation.hpp"

namespace c60 {

Turn wrap(Turn t) {
  std::int64_t n = t.numerator() % t.denominator();
  if (n < 0) n += t.denominator();
  return Turn(n, t.denominator());
}

bool operator==(const ProductElement& a, const ProductElement& b) {
  return a.g == b.g && a.flip == b.flip && a.t == b.t;
}

bool operator<(const ProductElement& a, const ProductElement& b) {
  if (a.g != b.g) return a.g < b.g;
  if (a.flip != b.flip) return a.flip < b.flip;
  return a.t < b.t;
}

ProductElement operator*(const ProductElement& a, const ProductElement& b) {
  return {GammaTable::get()(a.g, b.g), a.flip != b.flip, wrap(a.flip ? a.t - b.t : a.t + b.t)};
}

ProductElement inverse(const ProductElement& a) {
  return {GammaTable::get().inv[a.g], a.flip, a.flip ? a.t : wrap(-a.t)};
}

bool OrbitGroup::contains(const ProductElement& x) const {
  return whole || std::binary_search(elements.begin(), elements.end(), x);
}

bool OrbitGroup::has_reflection() const {
  if (whole) return true;
  return std::any_of(elements.begin(), elements.end(), [](const ProductElement& e) { return e.flip; });
}

int OrbitGroup::rotation_order() const {
  std::set<Turn> rot;
  for (const auto& e : elements)
    if (!e.flip) rot.insert(e.t);
  return static_cast<int>(rot.size());
}

SubgroupFinite OrbitGroup::projection() const {
  SubgroupFinite s;
  if (whole) return s.set();
  for (const auto& e : elements) s.set(e.g);
  return s;
}

SubgroupFinite OrbitGroup::kernel_side() const {
  SubgroupFinite s;
  if (whole) return s.set();
  for (const auto& e : elements)
    if (!e.flip && e.t.numerator() == 0) s.set(e.g);
  return s;
}

bool OrbitGroup::operator<(const OrbitGroup& o) const {
  if (whole != o.whole) return whole < o.whole;
  return elements < o.elements;
}

OrbitGroup generate(const std::vector<ProductElement>& gens) {
  std::set<ProductElement> seen{ProductElement{}};
  std::vector<ProductElement> list{ProductElement{}};
  for (std::size_t i = 0; i < list.size(); ++i)
    for (const auto& g : gens) {
      auto x = list[i] * g;
      if (seen.insert(x).second) list.push_back(x);
    }
  return {false, {seen.begin(), seen.end()}};
}

OrbitGroup conjugate(const OrbitGroup& s, const ProductElement& g) {
  if (s.whole) return s;
  OrbitGroup r;
  const auto gi = inverse(g);
  r.elements.reserve(s.elements.size());
  for (const auto& e : s.elements) r.elements.push_back(g * e * gi);
  std::sort(r.elements.begin(), r.elements.end());
  return r;
}

OrbitGroup intersect(const OrbitGroup& a, const OrbitGroup& b) {
  if (a.whole) return b;
  if (b.whole) return a;
  OrbitGroup r;
  std::set_intersection(a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end(),
                        std::back_inserter(r.elements));
  return r;
}

bool is_contained(const OrbitGroup& a, const OrbitGroup& b) {
  if (b.whole) return true;
  if (a.whole) return false;
  return std::includes(b.elements.begin(), b.elements.end(), a.elements.begin(), a.elements.end());
}

OrbitGroup standardize(const OrbitGroup& s, ProductElement* by) {
  if (by) *by = ProductElement{};
  if (s.whole || !s.has_reflection()) return s;
  Turn t0 = 1;
  for (const auto& e : s.elements)
    if (e.flip) t0 = std::min(t0, e.t);
  auto g = o2_part(-t0 / 2);
  if (by) *by = g;
  return conjugate(s, g);
}

OrbitGroup lfold(const OrbitGroup& s, int l) {
  if (s.whole || l == 1) return s;
  OrbitGroup r;
  for (const auto& e : s.elements)
    for (int j = 0; j < l; ++j) r.elements.push_back({e.g, e.flip, wrap((e.t + j) / l)});
  std::sort(r.elements.begin(), r.elements.end());
  return r;
}

OrbitGroup product_group(const SubgroupFinite& h, int m, bool dihedral) {
  OrbitGroup r;
  for (int g : members(h))
    for (int j = 0; j < m; ++j) {
      r.elements.push_back({g, false, Turn(j, m)});
      if (dihedral) r.elements.push_back({g, true, Turn(j, m)});
    }
  std::sort(r.elements.begin(), r.elements.end());
  return r;
}

std::string o2_name(int m, bool dihedral) { return (dihedral ? "D" : "Z") + std::to_string(m); }
std::string quotient_name(bool dihedral, int k) { return o2_name(k, dihedral); }

namespace {

// Index 1 when a 5-cycle of the class of (12345) maps to rotation by +-2pi/5 in L, 2 when by +-4pi/5.
std::string pentagonal_index(const OrbitGroup& s, int ker_rotations) {
  for (const auto& e : s.elements) {
    if (e.flip || e.g >= 60) continue;
    const Perm5& p = gamma_element(e.g).perm;
    if (p.order() != 5) continue;
    Turn a = wrap(e.t * ker_rotations) * 5;
    if (a.denominator() != 1) throw StructuralError("order-5 element with a non-pentagonal image");
    auto k = a.numerator();
    if (k == 0) continue;
    bool near = (k == 1 || k == 4);
    bool c4 = a5_class(p) == 3;
    return near == c4 ? "1" : "2";
  }
  return "";
}

}  // namespace

GoursatData goursat(const OrbitGroup& s) {
  if (s.whole) throw StructuralError("the whole group has no finite Goursat data");
  GoursatData d;
  d.H = s.projection();
  d.Z = s.kernel_side();
  std::set<Turn> rot;
  for (const auto& e : s.elements) {
    if (!e.flip) rot.insert(e.t);
    else d.dihedral = true;
  }
  d.m = static_cast<int>(rot.size());
  d.ker_rotations = 0;
  for (const auto& e : s.elements)
    if (e.g == 0) {
      if (e.flip) d.ker_reflection = true;
      else ++d.ker_rotations;
    }
  if (d.m % d.ker_rotations != 0) throw StructuralError("kernel rotations do not divide K");
  d.L_k = d.m / d.ker_rotations;
  d.L_dihedral = d.dihedral && !d.ker_reflection;
  std::size_t lorder = d.L_dihedral ? 2 * d.L_k : d.L_k;
  if (d.H.count() != lorder * d.Z.count()) throw StructuralError("Goursat order mismatch");
  if (d.L_dihedral && d.L_k == 2) {
    SubgroupFinite R;
    for (const auto& e : s.elements)
      if (!e.flip) R.set(e.g);
    d.slot = finite_class_name(R);
  } else if (d.L_k % 5 == 0) {
    d.slot = pentagonal_index(s, d.ker_rotations);
  }
  return d;
}

std::string canonical_id(const OrbitGroup& s) {
  if (s.whole) return "A5pxO2";
  auto d = goursat(s);
  std::string K = o2_name(d.m, d.dihedral);
  std::string H = finite_class_name(d.H);
  if (d.H == d.Z) return H + "x" + K;
  std::string id = H + "^{" + finite_class_name(d.Z) + "}x_{" + quotient_name(d.L_dihedral, d.L_k) + "}";
  if (!d.slot.empty()) id += "^{" + d.slot + "}";
  return id + K;
}

namespace {

std::vector<ProductElement> half_turn_grid(int m) {
  std::vector<ProductElement> v;
  for (int j = 0; j < m; ++j) {
    Turn a(j, 2 * m);
    v.push_back(o2_part(a));
    v.push_back(o2_part(a, true));
  }
  return v;
}

const std::vector<ProductElement>& identity_and_kappa() {
  static const std::vector<ProductElement> v{o2_part(0), o2_part(0, true)};
  return v;
}

}  // namespace

std::vector<ProductElement> CircleAmbient::transporters(const OrbitGroup& l, const OrbitGroup& k) const {
  if (k.whole) return {o2_part(0)};
  if (!l.has_reflection() || !k.has_reflection()) return identity_and_kappa();
  return half_turn_grid(k.rotation_order());
}

std::vector<ProductElement> CircleAmbient::normalizer_parts(const OrbitGroup& h) const {
  if (h.whole) return {o2_part(0)};
  if (!h.has_reflection()) return {};
  const int m = h.rotation_order();
  std::vector<ProductElement> v;
  for (int j = 0; j < 2 * m; ++j) {
    v.push_back(o2_part(Turn(j, 2 * m)));
    v.push_back(o2_part(Turn(j, 2 * m), true));
  }
  return v;
}

std::vector<ProductElement> CircleAmbient::product_parts(const OrbitGroup& a, const OrbitGroup& b) const {
  if (!a.has_reflection() || !b.has_reflection())
    throw UnsupportedPair("Burnside product needs two finite-Weyl orbit types");
  return half_turn_grid(std::lcm(a.rotation_order(), b.rotation_order()));
}

std::vector<ProductElement> DihedralAmbient::all() const {
  std::vector<ProductElement> v;
  for (int j = 0; j < N; ++j) {
    v.push_back(o2_part(Turn(j, N)));
    v.push_back(o2_part(Turn(j, N), true));
  }
  return v;
}

OrbitGroup DihedralAmbient::whole_group() const {
  SubgroupFinite all;
  all.set();
  return product_group(all, N, true);
}

OrbitRegistry::OrbitRegistry(std::shared_ptr<const Ambient> ambient) : ambient_(std::move(ambient)) {
  static std::atomic<std::uint64_t> next{0};
  serial_ = next++;
}

OrbitRegistry& OrbitRegistry::circle() {
  static OrbitRegistry r(std::make_shared<CircleAmbient>());
  return r;
}

bool OrbitRegistry::conjugate_groups(const OrbitGroup& a, const OrbitGroup& b) const {
  if (a.whole || b.whole) return a.whole == b.whole;
  if (a.order() != b.order()) return false;
  const SubgroupFinite ha = a.projection(), hb = b.projection();
  auto parts = ambient_->normalizer_parts(b);
  if (parts.empty()) parts = identity_and_kappa();
  for (int g = 0; g < kGammaOrder; ++g) {
    if (conjugate(ha, g) != hb) continue;
    for (const auto& o : parts) {
      ProductElement x{g, o.flip, o.t};
      bool ok = true;
      const auto xi = inverse(x);
      for (const auto& e : a.elements)
        if (!b.contains(x * e * xi)) {
          ok = false;
          break;
        }
      if (ok) return true;
    }
  }
  return false;
}

int OrbitRegistry::classify(const OrbitGroup& s) {
  OrbitGroup n = s.whole ? s : ambient_->normalize(s);
  std::string base = canonical_id(n);
  auto& bucket = by_base_[base];
  for (int c : bucket)
    if (conjugate_groups(classes_[c].rep, n)) return c;
  OrbitClass c;
  c.id = bucket.empty() ? base : base + "#" + std::to_string(bucket.size() + 1);
  if (!bucket.empty()) ++collisions_;
  c.rep = std::move(n);
  c.finite_weyl = ambient_->finite_weyl(c.rep);
  int idx = static_cast<int>(classes_.size());
  by_id_[c.id] = idx;
  classes_.push_back(std::move(c));
  bucket.push_back(idx);
  return idx;
}

int OrbitRegistry::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? -1 : it->second;
}

int OrbitRegistry::at_id(const std::string& id) const {
  int c = find(id);
  if (c < 0) throw StructuralError("unknown orbit type " + id);
  return c;
}

long OrbitRegistry::weyl_order(int c) {
  auto& cl = classes_[c];
  if (cl.weyl >= 0) return cl.weyl;
  if (cl.rep.whole) return cl.weyl = 1;
  if (!cl.finite_weyl) return cl.weyl = 0;
  const SubgroupFinite h = cl.rep.projection();
  long count = 0;
  for (int g = 0; g < kGammaOrder; ++g) {
    if (conjugate(h, g) != h) continue;
    for (const auto& o : ambient_->normalizer_parts(cl.rep))
      if (conjugate(cl.rep, {g, o.flip, o.t}) == cl.rep) ++count;
  }
  if (count % static_cast<long>(cl.rep.order()) != 0) throw StructuralError("normalizer order not divisible");
  return cl.weyl = count / static_cast<long>(cl.rep.order());
}

long OrbitRegistry::n_coefficient(int l, int k) {
  auto key = std::make_pair(l, k);
  if (auto it = n_cache_.find(key); it != n_cache_.end()) return it->second;
  const OrbitGroup& L = classes_[l].rep;
  const OrbitGroup& K = classes_[k].rep;
  long result = 0;
  if (K.whole) {
    result = 1;
  } else if (L.whole) {
    result = 0;
  } else {
    if (!ambient_->finite_weyl(L) && ambient_->finite_weyl(K))
      throw UnsupportedPair("infinitely many conjugates of " + classes_[k].id + " contain " + classes_[l].id);
    const SubgroupFinite hl = L.projection(), hk = K.projection();
    std::set<std::vector<ProductElement>> found;
    for (int g = 0; g < kGammaOrder; ++g) {
      if ((conjugate(hk, g) & hl) != hl) continue;
      for (const auto& o : ambient_->transporters(L, K)) {
        ProductElement x{g, o.flip, o.t};
        const auto xi = inverse(x);
        bool inside = std::all_of(L.elements.begin(), L.elements.end(),
                                  [&](const ProductElement& e) { return K.contains(xi * e * x); });
        if (inside) found.insert(conjugate(K, x).elements);
      }
    }
    result = static_cast<long>(found.size());
  }
  n_cache_[key] = result;
  return result;
}

bool OrbitRegistry::subconjugate(int l, int k) {
  const OrbitGroup& L = classes_[l].rep;
  const OrbitGroup& K = classes_[k].rep;
  if (K.whole) return true;
  if (L.whole || L.order() > K.order()) return false;
  const SubgroupFinite hl = L.projection(), hk = K.projection();
  for (int g = 0; g < kGammaOrder; ++g) {
    if ((conjugate(hk, g) & hl) != hl) continue;
    for (const auto& o : ambient_->transporters(L, K)) {
      ProductElement x{g, o.flip, o.t};
      const auto xi = inverse(x);
      if (std::all_of(L.elements.begin(), L.elements.end(),
                      [&](const ProductElement& e) { return K.contains(xi * e * x); }))
        return true;
    }
  }
  return false;
}

std::string TypeName::str() const {
  if (L == "-") return H + " x " + K;
  std::string s = H + " ^" + Z + " x_" + L;
  if (slot != "-") s += "^" + slot;
  return s + " " + K;
}

namespace {

struct O2Symbol {
  bool dihedral;
  int m;
};

O2Symbol parse_o2(const std::string& s) {
  if (s.size() < 2 || (s[0] != 'D' && s[0] != 'Z')) throw ParseError("bad O(2) subgroup symbol " + s);
  int m = std::stoi(s.substr(1));
  if (m < 1) throw ParseError("bad O(2) subgroup order in " + s);
  return {s[0] == 'D', m};
}

int finite_class(const std::string& name) {
  int c = FiniteLattice::get().find(name);
  if (c < 0) throw ParseError("unknown subgroup class " + name);
  return c;
}

}  // namespace

OrbitGroup resolve(const TypeName& name) {
  if (name.K == "O2") {
    if (name.H != "A5p" || name.L != "-") throw ParseError("only the whole group has O(2) part O2: " + name.str());
    return OrbitGroup{true, {}};
  }
  const auto& lat = FiniteLattice::get();
  const SubgroupFinite H = lat.classes[finite_class(name.H)].rep;
  const O2Symbol K = parse_o2(name.K);
  if (name.L == "-") return product_group(H, K.m, K.dihedral);

  const O2Symbol L = parse_o2(name.L);
  const int zc = finite_class(name.Z);
  // ker psi inside the standard K.
  if (K.m % L.m != 0 || (!K.dihedral && L.dihedral) || (K.dihedral && !L.dihedral && L.m > 2))
    throw ParseError("K has no quotient " + name.L + ": " + name.str());
  const bool ker_dihedral = K.dihedral && !L.dihedral;
  const int ker_m = K.m / L.m;
  const OrbitGroup Kg = product_group(generate_finite({}), K.m, K.dihedral);
  const OrbitGroup ker = product_group(generate_finite({}), ker_m, ker_dihedral);

  // Quotient K/ker, cosets keyed by their smallest element.
  std::map<ProductElement, int> coset_of;
  std::vector<ProductElement> coset_rep;
  for (const auto& k : Kg.elements) {
    ProductElement lo = k;
    for (const auto& z : ker.elements) lo = std::min(lo, k * z);
    if (!coset_of.count(lo)) {
      coset_of[lo] = static_cast<int>(coset_rep.size());
      coset_rep.push_back(lo);
    }
  }
  auto coset = [&](const ProductElement& k) {
    ProductElement lo = k;
    for (const auto& z : ker.elements) lo = std::min(lo, k * z);
    return coset_of.at(lo);
  };
  const int q = static_cast<int>(coset_rep.size());
  std::vector<std::vector<int>> qmul(q, std::vector<int>(q));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) qmul[a][b] = coset(coset_rep[a] * coset_rep[b]);
  const int qid = coset(o2_part(0));

  const auto gens = generators(H);
  const auto hm = members(H);
  std::set<int> classes_found;
  std::vector<OrbitGroup> found;
  for (int zi : lat.classes[zc].members) {
    const SubgroupFinite& Zs = lat.subgroups[zi];
    if ((Zs & H) != Zs || !is_normal_in(Zs, H)) continue;
    if (static_cast<int>(H.count() / Zs.count()) != q || H.count() % Zs.count() != 0) continue;
    std::vector<int> assign(gens.size(), 0);
    while (true) {
      // Extend the generator images to a map on H and test the homomorphism property.
      std::vector<int> phi(kGammaOrder, -1);
      phi[0] = qid;
      std::vector<int> list{0};
      bool ok = true;
      for (std::size_t i = 0; i < list.size() && ok; ++i)
        for (std::size_t j = 0; j < gens.size(); ++j) {
          int x = GammaTable::get()(list[i], gens[j]);
          int v = qmul[phi[list[i]]][assign[j]];
          if (phi[x] < 0) {
            phi[x] = v;
            list.push_back(x);
          } else if (phi[x] != v) {
            ok = false;
            break;
          }
        }
      if (ok) {
        std::set<int> image;
        SubgroupFinite kernel;
        for (int h : hm) {
          image.insert(phi[h]);
          if (phi[h] == qid) kernel.set(h);
        }
        if (kernel == Zs && static_cast<int>(image.size()) == q) {
          OrbitGroup g;
          for (int h : hm)
            for (const auto& k : Kg.elements)
              if (coset(k) == phi[h]) g.elements.push_back({h, k.flip, k.t});
          std::sort(g.elements.begin(), g.elements.end());
          auto d = goursat(g);
          if (name.slot == "-" || d.slot == name.slot) {
            int c = OrbitRegistry::circle().classify(g);
            if (classes_found.insert(c).second) found.push_back(g);
          }
        }
      }
      std::size_t p = 0;
      while (p < assign.size() && ++assign[p] == q) assign[p++] = 0;
      if (p == assign.size()) break;
    }
  }
  if (found.size() != 1)
    throw StructuralError(std::to_string(found.size()) + " orbit types match " + name.str());
  return found.front();
}

namespace {

std::string twist_tag(const OrbitGroup& s, const SubgroupFinite& h0, int k) {
  if (k == 2) return "-";
  if (k == 5) {
    for (const auto& e : s.elements)
      if (e.g < 60 && e.t == Turn(1, 5)) return a5_class(gamma_element(e.g).perm) == 3 ? "t1" : "t2";
  }
  if (k == 3 && h0.count() == 12) {
    const SubgroupFinite std_a4 =
        generate_finite({gamma_index({Perm5::parse("(123)"), 1}), gamma_index({Perm5::parse("(12)(34)"), 1})});
    const int c3 = gamma_index({Perm5::parse("(123)"), 1});
    const auto& T = GammaTable::get();
    for (int g = 0; g < 60; ++g) {
      if (conjugate(h0, g) != std_a4) continue;
      int x = T(T(T.inv[g], c3), g);
      for (const auto& e : s.elements)
        if (e.g == x) return e.t == Turn(1, 3) ? "t1" : "t2";
    }
  }
  if (k == 3) return "t";
  return "";
}

}  // namespace

std::string circle_name(const OrbitGroup& s) {
  if (s.whole) return "IxS1";
  SubgroupFinite h0;
  std::set<Turn> image;
  int ker_rot = 0;
  for (const auto& e : s.elements) {
    if (e.flip) throw StructuralError("reflection in a subgroup of A5 x Z2 x S^1");
    image.insert(e.t);
    if (e.g < 60) h0.set(e.g);
    if (e.g == 0) ++ker_rot;
  }
  const SubgroupFinite H = s.projection();
  if (image.size() == 1) return finite_class_name(H);
  const SubgroupFinite Z = s.kernel_side();
  const int k = static_cast<int>(image.size()) / ker_rot;
  if (ker_rot == 1 && Z[kMinusOne] && H[kMinusOne]) {
    std::string tag = twist_tag(s, h0, k);
    if (!tag.empty()) return finite_class_name(h0) + "^" + tag + "xZ2";
  }
  std::string id = finite_class_name(H) + "^{" + finite_class_name(Z) + "}x_{Z" + std::to_string(k) + "}Z" +
                   std::to_string(static_cast<int>(image.size()));
  return id;
}

bool circle_conjugate(const OrbitGroup& a, const OrbitGroup& b) {
  if (a.whole || b.whole) return a.whole == b.whole;
  if (a.order() != b.order()) return false;
  for (int g = 0; g < kGammaOrder; ++g)
    if (conjugate(a, {g, false, 0}) == b) return true;
  return false;
}

}  // namespace c60
