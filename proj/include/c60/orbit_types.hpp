#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "c60/subgroups.hpp"

namespace c60 {

/// Angle as a fraction of a full turn, kept in [0,1).
using Turn = boost::rational<std::int64_t>;
Turn wrap(Turn t);

/// (gamma, rot(2 pi t) kappa^flip) in (A5 x Z2) x O(2); kappa acts first.
struct ProductElement {
  int g = 0;
  bool flip = false;
  Turn t = 0;
};
bool operator==(const ProductElement& a, const ProductElement& b);
bool operator<(const ProductElement& a, const ProductElement& b);
ProductElement operator*(const ProductElement& a, const ProductElement& b);
ProductElement inverse(const ProductElement& a);
inline ProductElement o2_part(Turn t, bool flip = false) { return {0, flip, wrap(t)}; }

/// Closed subgroup of (A5 x Z2) x O(2): either the whole group or a finite subgroup.
struct OrbitGroup {
  bool whole = false;
  std::vector<ProductElement> elements;  // sorted; finite case only

  bool contains(const ProductElement& x) const;
  std::size_t order() const { return elements.size(); }
  bool has_reflection() const;
  int rotation_order() const;  // m for an O(2)-projection D_m or Z_m
  SubgroupFinite projection() const;
  SubgroupFinite kernel_side() const;  // {g : (g, 1) in the group}
  bool operator==(const OrbitGroup& o) const { return whole == o.whole && elements == o.elements; }
  bool operator<(const OrbitGroup& o) const;
};

OrbitGroup generate(const std::vector<ProductElement>& gens);
OrbitGroup conjugate(const OrbitGroup& s, const ProductElement& g);  // g s g^-1
OrbitGroup intersect(const OrbitGroup& a, const OrbitGroup& b);
bool is_contained(const OrbitGroup& a, const OrbitGroup& b);
/// Rotation conjugate with a reflection at angle 0 when there is one; `by` receives the conjugator.
OrbitGroup standardize(const OrbitGroup& s, ProductElement* by = nullptr);
/// Preimage under rot(t) -> rot(l t), kappa -> kappa.
OrbitGroup lfold(const OrbitGroup& s, int l);
/// H x K for a subgroup H of A5 x Z2 and K = D_m (dihedral) or Z_m.
OrbitGroup product_group(const SubgroupFinite& h, int m, bool dihedral);

/// Goursat data of a finite subgroup: projections, kernels and the common quotient L.
struct GoursatData {
  SubgroupFinite H, Z;
  int m = 1;                // rotations in the O(2)-projection K
  bool dihedral = false;    // K = D_m rather than Z_m
  int ker_rotations = 1;    // rotations in ker psi
  bool ker_reflection = false;
  bool L_dihedral = false;  // L = D_k rather than Z_k
  int L_k = 1;
  std::string slot;         // R class for L = D2, epimorphism index for order-5 rotations in L
};
GoursatData goursat(const OrbitGroup& s);
std::string o2_name(int m, bool dihedral);
std::string quotient_name(bool dihedral, int k);
/// "H^{Z}x_{L}^{slot}K", or "HxK" when L is trivial.
std::string canonical_id(const OrbitGroup& s);

/// Search space of conjugating O(2)-parts; the analytic O(2) and finite D_N truncations differ only here.
struct Ambient {
  virtual ~Ambient() = default;
  virtual std::string name() const = 0;
  virtual OrbitGroup normalize(const OrbitGroup& s) const = 0;
  /// O(2)-parts reaching every conjugate of k that contains l.
  virtual std::vector<ProductElement> transporters(const OrbitGroup& l, const OrbitGroup& k) const = 0;
  /// O(2)-parts of a group containing the O(2)-projection of N(h); empty if N(h)/h is infinite.
  virtual std::vector<ProductElement> normalizer_parts(const OrbitGroup& h) const = 0;
  /// O(2)-parts g for which the intersections a ∩ g b g^-1 meet every finite-Weyl orbit type.
  virtual std::vector<ProductElement> product_parts(const OrbitGroup& a, const OrbitGroup& b) const = 0;
  virtual bool finite_weyl(const OrbitGroup& h) const = 0;
};

struct CircleAmbient final : Ambient {
  std::string name() const override { return "O2"; }
  OrbitGroup normalize(const OrbitGroup& s) const override { return standardize(s); }
  std::vector<ProductElement> transporters(const OrbitGroup& l, const OrbitGroup& k) const override;
  std::vector<ProductElement> normalizer_parts(const OrbitGroup& h) const override;
  std::vector<ProductElement> product_parts(const OrbitGroup& a, const OrbitGroup& b) const override;
  bool finite_weyl(const OrbitGroup& h) const override { return h.whole || h.has_reflection(); }
};

/// (A5 x Z2) x D_N as a finite group.
struct DihedralAmbient final : Ambient {
  int N;
  explicit DihedralAmbient(int n) : N(n) {}
  std::string name() const override { return "D" + std::to_string(N); }
  OrbitGroup normalize(const OrbitGroup& s) const override { return s; }
  std::vector<ProductElement> transporters(const OrbitGroup&, const OrbitGroup&) const override { return all(); }
  std::vector<ProductElement> normalizer_parts(const OrbitGroup&) const override { return all(); }
  std::vector<ProductElement> product_parts(const OrbitGroup&, const OrbitGroup&) const override { return all(); }
  bool finite_weyl(const OrbitGroup&) const override { return true; }
  std::vector<ProductElement> all() const;
  OrbitGroup whole_group() const;
};

struct OrbitClass {
  std::string id;
  OrbitGroup rep;
  bool finite_weyl = false;
  long weyl = -1;  // |W(H)|, 0 when infinite; filled on demand
};

/// Conjugacy classes of subgroups met so far, keyed by canonical id. Not thread-safe.
class OrbitRegistry {
 public:
  explicit OrbitRegistry(std::shared_ptr<const Ambient> ambient);
  /// The registry of the analytic group (A5 x Z2) x O(2).
  static OrbitRegistry& circle();

  int classify(const OrbitGroup& s);
  int find(const std::string& id) const;  // -1 if unknown
  int at_id(const std::string& id) const;  // throws if unknown
  const OrbitClass& operator[](int c) const { return classes_[c]; }
  std::size_t size() const { return classes_.size(); }
  std::size_t collisions() const { return collisions_; }
  const Ambient& ambient() const { return *ambient_; }

  bool conjugate_groups(const OrbitGroup& a, const OrbitGroup& b) const;
  long weyl_order(int c);
  /// Number of conjugates of class k containing a fixed member of class l.
  long n_coefficient(int l, int k);
  bool subconjugate(int l, int k);
  bool is_whole(int c) const { return classes_[c].rep.whole; }
  /// Distinct for every registry constructed in the process; keys caches that outlive a registry.
  std::uint64_t serial() const { return serial_; }

 private:
  std::uint64_t serial_;
  std::shared_ptr<const Ambient> ambient_;
  std::vector<OrbitClass> classes_;
  std::map<std::string, std::vector<int>> by_base_;
  std::map<std::string, int> by_id_;
  std::map<std::pair<int, int>, long> n_cache_;
  std::size_t collisions_ = 0;
};

/// Orbit type written in the slot notation H ^Z x_L^slot K of the stored tables.
struct TypeName {
  std::string H, K, L = "-", Z = "-", slot = "-";
  std::string str() const;
};
/// The unique class matching the slot notation; StructuralError if none or several.
OrbitGroup resolve(const TypeName& name);

/// Subgroups of (A5 x Z2) x S^1 met by the restriction homomorphism: finite or the whole group.
/// Names: the A5 x Z2 class for a trivial twist, "<base>^{t1|t2|->xZ2" for twisted groups containing -1.
std::string circle_name(const OrbitGroup& s);
bool circle_conjugate(const OrbitGroup& a, const OrbitGroup& b);

}  // namespace c60
