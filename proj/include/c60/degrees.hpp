#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "c60/orbit_types.hpp"
#include "c60/representation.hpp"

namespace c60 {

/// Finitely supported integer combination of orbit types, keyed by canonical id.
struct OrbitTypeElement {
  std::map<std::string, long> coeffs;

  long operator[](const std::string& id) const;
  void add(const std::string& id, long c);
  OrbitTypeElement operator+(const OrbitTypeElement& o) const;
  OrbitTypeElement operator-(const OrbitTypeElement& o) const;
  OrbitTypeElement operator*(long k) const;
  bool operator==(const OrbitTypeElement& o) const { return coeffs == o.coeffs; }
  bool empty() const { return coeffs.empty(); }
  std::string str() const;
};

/// dim V^H for V = V_{n,l}: averaged trace, reflections contribute nothing.
int fixed_space_dim(const OrbitGroup& h, int n, int l);

struct IsotropyType {
  int cls = -1;
  std::string id;
  int fixed_dim = 0;
  bool finite_weyl = false;
  bool maximal = false;  // maximal among the types of nonzero points
};

/// Orbit types of V_{n,l} (origin included as the whole group), descending order.
std::vector<IsotropyType> isotropy_types(int n, int l, OrbitRegistry& reg = OrbitRegistry::circle());

/// Generator product (a)*(b) in the Burnside ring. With `above`, only orbit types containing a conjugate
/// of one of the listed classes are kept; the kept coefficients are exact because that set is upward closed.
OrbitTypeElement burnside_generators(int a, int b, OrbitRegistry& reg, const std::vector<int>* above = nullptr);
OrbitTypeElement burnside_multiply(const OrbitTypeElement& a, const OrbitTypeElement& b,
                                   OrbitRegistry& reg = OrbitRegistry::circle(),
                                   const std::vector<int>* above = nullptr);

/// Equivariant Brouwer degree of -Id on the unit ball of V_{n,l}.
OrbitTypeElement brouwer_degree_neg_id(int n, int l, OrbitRegistry& reg = OrbitRegistry::circle());

/// Drops the orbit types with infinite Weyl group.
OrbitTypeElement pi0(const OrbitTypeElement& e, OrbitRegistry& reg = OrbitRegistry::circle());
/// Relabels each orbit type by its preimage under the l-fold cover of O(2).
OrbitTypeElement lfold(const OrbitTypeElement& e, int l, OrbitRegistry& reg = OrbitRegistry::circle());

struct StoredTerm {
  TypeName name;
  long coeff = 0;
  bool red = false;
  std::string id;
};

struct StoredDegree {
  int n = 0;
  std::vector<StoredTerm> terms;
  OrbitTypeElement element;
  std::vector<std::string> red;  // maximal types as marked in the table
};

std::map<int, StoredDegree> load_basic_degrees(const std::string& path);
/// Theorem lists of maximal orbit types per label, as canonical ids.
std::map<int, std::set<std::string>> load_maximal_types(const std::string& path);
/// Stored gradient degree for label n, refolded for mode l.
OrbitTypeElement basic_gradient_degree(const std::map<int, StoredDegree>& table, int n, int l);

/// Restriction to (A5 x Z2) x S^1, keyed by circle names.
OrbitTypeElement psi_homomorphism(const OrbitTypeElement& e, OrbitRegistry& reg = OrbitRegistry::circle());
/// "coefficient name" lines.
OrbitTypeElement load_circle_element(const std::string& path);

struct OmegaReport {
  int j = 0;
  int n = 0;
  std::vector<std::pair<int, int>> factors;  // (j,l) with lambda_{j,l} < lambda_{j0,1}
  OrbitTypeElement element;  // restricted to orbit types above the maximal ones
  std::vector<std::string> maximal;  // maximal types of V_{n,1}
  std::vector<std::string> reported;  // maximal types with nonzero coefficient
};

/// Jump of the gradient degree across lambda_{j0,1}; labels[j-1] is the label of mode j.
OmegaReport omega_invariant(int j0, const std::vector<int>& labels, const ResonanceReport& crit,
                            const std::map<int, StoredDegree>& table, OrbitRegistry& reg = OrbitRegistry::circle());

}  // namespace c60
