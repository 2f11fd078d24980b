#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace c60 {

/// Cayley table of A5 x Z2 on gamma indices (a5 index, +60 for sign -1).
struct GammaTable {
  std::array<std::array<std::uint8_t, 120>, 120> mul;
  std::array<std::uint8_t, 120> inv;
  static const GammaTable& get();
  int operator()(int a, int b) const { return mul[a][b]; }
};

constexpr int kGammaOrder = 120;
constexpr int kMinusOne = 60;  // gamma index of ((1), -1)

/// Subset of A5 x Z2 indexed by gamma index; subgroups are closed subsets.
using SubgroupFinite = std::bitset<kGammaOrder>;

SubgroupFinite generate_finite(const std::vector<int>& gens);
bool is_subgroup(const SubgroupFinite& s);
/// g s g^-1.
SubgroupFinite conjugate(const SubgroupFinite& s, int g);
std::vector<int> members(const SubgroupFinite& s);
/// Short list of elements generating s.
std::vector<int> generators(const SubgroupFinite& s);
bool is_normal_in(const SubgroupFinite& n, const SubgroupFinite& h);

/// Class name from the projection to A5, the sign part and the twist:
/// Z1 Z2 Z3 V4 Z5 D3 D5 A4 A5, suffix p when -1 is contained, z for the twisted index-2 graphs.
std::string finite_class_name(const SubgroupFinite& s);

struct FiniteClass {
  std::string name;
  SubgroupFinite rep;
  int order = 0;
  int normalizer_order = 0;
  std::vector<int> members;  // indices into FiniteLattice::subgroups
};

/// All subgroups of A5 x Z2 up to conjugacy.
struct FiniteLattice {
  std::vector<SubgroupFinite> subgroups;
  std::vector<int> class_of_subgroup;
  std::vector<FiniteClass> classes;  // ascending order, then name
  std::vector<std::vector<bool>> below;  // below[a][b]: class a is subconjugate to class b

  int index_of(const SubgroupFinite& s) const;
  int class_of(const SubgroupFinite& s) const;
  int find(const std::string& name) const;  // -1 if absent
  int weyl_order(int cls) const { return classes[cls].normalizer_order / classes[cls].order; }

  /// Builds the lattice adding candidate generators in the given element order.
  static FiniteLattice build(const std::vector<int>& element_order);
  static const FiniteLattice& get();

 private:
  std::unordered_map<SubgroupFinite, int> index_map_;
};

}  // namespace c60
