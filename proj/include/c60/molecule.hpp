#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace c60 {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr int kAtoms = 60;
constexpr int kDim = 3 * kAtoms;

/// Permutation of {1..5}, stored 0-based: img[i] is the image of i.
struct Perm5 {
  std::array<std::uint8_t, 5> img{0, 1, 2, 3, 4};

  static Perm5 identity() { return {}; }
  /// Parse cycle notation such as "(12345)", "(23)(45)" or "(1)".
  static Perm5 parse(const std::string& cycles);

  int operator()(int k1) const { return img[k1 - 1] + 1; }  // 1-based
  Perm5 operator*(const Perm5& o) const;                     // (this*o)(k) = this(o(k))
  Perm5 inverse() const;
  bool operator==(const Perm5& o) const { return img == o.img; }
  bool operator!=(const Perm5& o) const { return img != o.img; }
  bool operator<(const Perm5& o) const { return img < o.img; }
  bool is_even() const;
  int order() const;
  /// Cycle notation with each cycle starting at its smallest point; "(1)" for identity.
  std::string str() const;
};

/// The 12 cycles of class C4 (face labels) and C5, in table order.
const std::vector<Perm5>& c4_cycles();
const std::vector<Perm5>& c5_cycles();
/// Index of p in c4_cycles(), or -1.
int c4_index(const Perm5& p);
int c5_index(const Perm5& p);

/// Atom (tau, k): tau a 5-cycle of class C4 (the face), k in 1..5.
struct AtomIndex {
  int face = 0;    // index into c4_cycles()
  int vertex = 1;  // 1..5

  int linear() const { return 5 * face + (vertex - 1); }
  static AtomIndex from_linear(int i) { return {i / 5, i % 5 + 1}; }
  const Perm5& tau() const { return c4_cycles()[face]; }
  bool operator==(const AtomIndex& o) const { return face == o.face && vertex == o.vertex; }
  /// "(c1c2c3c4c5):k"
  std::string str() const;
  static AtomIndex parse(const std::string& s);
};

/// Element (sigma, sign) of A5 x Z2.
struct GroupElement {
  Perm5 perm;
  int sign = 1;
  GroupElement operator*(const GroupElement& o) const { return {perm * o.perm, sign * o.sign}; }
  GroupElement inverse() const { return {perm.inverse(), sign}; }
  bool operator==(const GroupElement& o) const { return perm == o.perm && sign == o.sign; }
  std::string str() const;
};

/// The 60 elements of A5, identity first, then lexicographic by images.
const std::vector<Perm5>& a5_elements();
int a5_index(const Perm5& p);
/// Index in 0..119: a5_index + 60 for sign -1.
int gamma_index(const GroupElement& g);
GroupElement gamma_element(int idx);

std::vector<AtomIndex> enumerate_atoms();
AtomIndex single_bond(const AtomIndex& i);
AtomIndex single_bond_inv(const AtomIndex& i);
AtomIndex double_bond(const AtomIndex& i);
/// Linear indices of S(i), S^-1(i), D(i) for every atom.
const std::array<std::array<int, 3>, kAtoms>& neighbor_table();

/// Generators a = (23)(45), b = (12345).
Perm5 gen_a();
Perm5 gen_b();
/// Image in O(3); rho((e,-1)) = -Id.
Mat3 rho(const GroupElement& g);
Mat3 rho(const Perm5& p);

/// Infinitesimal rotation generators J1, J2, J3.
const std::array<Mat3, 3>& rotation_generators();

/// Permutation part of the index action: (g.u)_i = R u_{source(g,i)}.
int action_source(const GroupElement& g, int atom);

/// (g, R) acting on a configuration in the shared 180-layout.
Eigen::VectorXd act(const GroupElement& g, const Mat3& R, const Eigen::VectorXd& u);
/// Diagonal action (g, rho(g)).
Eigen::VectorXd act(const GroupElement& g, const Eigen::VectorXd& u);

/// Precomputed diagonal action of all 120 elements of A5 x Z2.
class SymmetryTable {
 public:
  static const SymmetryTable& get();
  const std::array<int, kAtoms>& source(int g) const { return src_[g]; }
  const Mat3& matrix(int g) const { return mat_[g]; }
  Eigen::VectorXd apply(int g, const Eigen::VectorXd& u) const;
  /// Dense 180x180 matrix of the diagonal action.
  Eigen::MatrixXd dense(int g) const;

 private:
  SymmetryTable();
  std::vector<std::array<int, kAtoms>> src_;
  std::vector<Mat3> mat_;
};

Vec3 atom_position(const Eigen::VectorXd& u, int atom);
Vec3 barycenter(const Eigen::VectorXd& u);

/// CSV with columns face,vertex,x,y,z.
std::string configuration_csv(const Eigen::VectorXd& u);

}  // namespace c60
