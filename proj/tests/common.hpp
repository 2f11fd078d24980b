#pragma once

#include <random>
#include <string>

#include "c60/equilibrium.hpp"
#include "c60/representation.hpp"

namespace c60::test {

inline std::string data_path(const std::string& file) { return std::string(C60_DATA_DIR) + "/" + file; }

inline const Equilibrium& equilibrium() {
  static const Equilibrium eq = find_minimizer();
  return eq;
}

inline const Spectrum& slice_spectrum() {
  static const Spectrum s = spectrum(equilibrium().u0);
  return s;
}

inline Eigen::VectorXd random_vector(std::mt19937& rng, int n, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

inline Mat3 random_rotation(std::mt19937& rng) {
  std::normal_distribution<double> d;
  Eigen::Quaterniond q(d(rng), d(rng), d(rng), d(rng));
  return q.normalized().toRotationMatrix();
}

inline GroupElement random_element(std::mt19937& rng) {
  return gamma_element(std::uniform_int_distribution<int>(0, 119)(rng));
}

}  // namespace c60::test
