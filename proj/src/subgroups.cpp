#include "c60/subgroups.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "c60/errors.hpp"
#include "c60/molecule.hpp"

namespace c60 {

const GammaTable& GammaTable::get() {
  static const GammaTable t = [] {
    GammaTable g;
    for (int a = 0; a < kGammaOrder; ++a) {
      GroupElement ea = gamma_element(a);
      for (int b = 0; b < kGammaOrder; ++b) g.mul[a][b] = static_cast<std::uint8_t>(gamma_index(ea * gamma_element(b)));
      g.inv[a] = static_cast<std::uint8_t>(gamma_index(ea.inverse()));
    }
    return g;
  }();
  return t;
}

SubgroupFinite generate_finite(const std::vector<int>& gens) {
  const auto& T = GammaTable::get();
  SubgroupFinite s;
  s.set(0);
  std::vector<int> list{0};
  for (std::size_t i = 0; i < list.size(); ++i)
    for (int g : gens) {
      int x = T(list[i], g);
      if (!s[x]) {
        s.set(x);
        list.push_back(x);
      }
    }
  return s;
}

bool is_subgroup(const SubgroupFinite& s) {
  if (!s[0]) return false;
  const auto& T = GammaTable::get();
  auto m = members(s);
  for (int a : m)
    for (int b : m)
      if (!s[T(a, T.inv[b])]) return false;
  return true;
}

SubgroupFinite conjugate(const SubgroupFinite& s, int g) {
  const auto& T = GammaTable::get();
  SubgroupFinite r;
  for (int a = 0; a < kGammaOrder; ++a)
    if (s[a]) r.set(T(T(g, a), T.inv[g]));
  return r;
}

std::vector<int> members(const SubgroupFinite& s) {
  std::vector<int> v;
  for (int a = 0; a < kGammaOrder; ++a)
    if (s[a]) v.push_back(a);
  return v;
}

std::vector<int> generators(const SubgroupFinite& s) {
  std::vector<int> gens;
  SubgroupFinite cur;
  cur.set(0);
  // Elements of high order first keeps the list short.
  auto m = members(s);
  std::stable_sort(m.begin(), m.end(), [](int a, int b) {
    auto oa = gamma_element(a).perm.order(), ob = gamma_element(b).perm.order();
    return oa > ob;
  });
  for (int a : m)
    if (!cur[a]) {
      gens.push_back(a);
      cur = generate_finite(gens);
      if (cur == s) break;
    }
  return gens;
}

bool is_normal_in(const SubgroupFinite& n, const SubgroupFinite& h) {
  for (int g : members(h))
    if (conjugate(n, g) != n) return false;
  return true;
}

std::string finite_class_name(const SubgroupFinite& s) {
  SubgroupFinite proj, a5part;
  for (int a = 0; a < kGammaOrder; ++a)
    if (s[a]) {
      proj.set(a % 60);
      if (a < 60) a5part.set(a);
    }
  std::string base;
  switch (proj.count()) {
    case 1: base = "Z1"; break;
    case 2: base = "Z2"; break;
    case 3: base = "Z3"; break;
    case 4: base = "V4"; break;
    case 5: base = "Z5"; break;
    case 6: base = "D3"; break;
    case 10: base = "D5"; break;
    case 12: base = "A4"; break;
    case 60: base = "A5"; break;
    default: throw StructuralError("not a subgroup projection of order " + std::to_string(proj.count()));
  }
  if (s[kMinusOne]) return base + "p";
  if (a5part == proj) return base;
  return base + "z";
}

FiniteLattice FiniteLattice::build(const std::vector<int>& element_order) {
  FiniteLattice L;
  std::unordered_map<SubgroupFinite, int> seen;
  auto add = [&](const SubgroupFinite& s) {
    if (seen.count(s)) return;
    seen.emplace(s, static_cast<int>(L.subgroups.size()));
    L.subgroups.push_back(s);
  };
  add(generate_finite({}));
  for (std::size_t i = 0; i < L.subgroups.size(); ++i)
    for (int g : element_order)
      if (!L.subgroups[i][g]) {
        auto gens = generators(L.subgroups[i]);
        gens.push_back(g);
        add(generate_finite(gens));
      }

  // Conjugacy classes keyed by the smallest member under a fixed total order.
  auto key = [](const SubgroupFinite& s) { return s.to_string(); };
  std::map<std::string, std::vector<int>> orbits;
  for (std::size_t i = 0; i < L.subgroups.size(); ++i) {
    std::string best;
    for (int g = 0; g < kGammaOrder; ++g) {
      auto k = key(conjugate(L.subgroups[i], g));
      if (best.empty() || k < best) best = k;
    }
    orbits[best].push_back(static_cast<int>(i));
  }
  for (auto& [k, idx] : orbits) {
    FiniteClass c;
    c.rep = L.subgroups[*std::min_element(idx.begin(), idx.end(), [&](int a, int b) {
      return key(L.subgroups[a]) < key(L.subgroups[b]);
    })];
    c.name = finite_class_name(c.rep);
    c.order = static_cast<int>(c.rep.count());
    c.members = idx;
    for (int g = 0; g < kGammaOrder; ++g)
      if (conjugate(c.rep, g) == c.rep) ++c.normalizer_order;
    L.classes.push_back(c);
  }
  std::sort(L.classes.begin(), L.classes.end(),
            [](const FiniteClass& a, const FiniteClass& b) { return std::tie(a.order, a.name) < std::tie(b.order, b.name); });
  for (std::size_t i = 0; i + 1 < L.classes.size(); ++i)
    if (L.classes[i].name == L.classes[i + 1].name) throw StructuralError("two classes named " + L.classes[i].name);
  L.class_of_subgroup.assign(L.subgroups.size(), -1);
  for (std::size_t c = 0; c < L.classes.size(); ++c)
    for (int i : L.classes[c].members) L.class_of_subgroup[i] = static_cast<int>(c);
  // Canonical subgroup order inside each class.
  for (auto& c : L.classes)
    std::sort(c.members.begin(), c.members.end(),
              [&](int a, int b) { return key(L.subgroups[a]) < key(L.subgroups[b]); });

  const std::size_t n = L.classes.size();
  L.below.assign(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (int i : L.classes[a].members)
        if ((L.subgroups[i] & L.classes[b].rep) == L.subgroups[i]) {
          L.below[a][b] = true;
          break;
        }
  L.index_map_ = {};
  for (std::size_t i = 0; i < L.subgroups.size(); ++i) L.index_map_.emplace(L.subgroups[i], static_cast<int>(i));
  return L;
}

const FiniteLattice& FiniteLattice::get() {
  static const FiniteLattice L = [] {
    std::vector<int> order(kGammaOrder);
    std::iota(order.begin(), order.end(), 0);
    return build(order);
  }();
  return L;
}

int FiniteLattice::index_of(const SubgroupFinite& s) const {
  auto it = index_map_.find(s);
  if (it == index_map_.end()) throw StructuralError("not a subgroup of A5 x Z2");
  return it->second;
}

int FiniteLattice::class_of(const SubgroupFinite& s) const { return class_of_subgroup[index_of(s)]; }

int FiniteLattice::find(const std::string& name) const {
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (classes[c].name == name) return static_cast<int>(c);
  return -1;
}

}  // namespace c60
