#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <vector>

#include "wsparse/dictionary.hpp"
#include "wsparse/rng.hpp"

namespace wsparse::testing {

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double value : values) v[i++] = value;
  return v;
}

// The running 3-atom example: two unit axes plus the length-2 diagonal atom.
inline Dictionary d0() {
  const double r = std::sqrt(2.0);
  return Dictionary::from_atoms({{1.0, 0.0}, {0.0, 1.0}, {r, r}});
}

inline Dictionary orthonormal_basis(int n) {
  return Dictionary(Eigen::MatrixXd::Identity(n, n));
}

// Identity basis with small off-axis leakage; low nonzero coherence in any
// dimension, so the s >= 2 selection guarantees fire on non-trivial fixtures.
inline Dictionary perturbed_identity(int n, double leak = 0.05) {
  Eigen::MatrixXd atoms = Eigen::MatrixXd::Identity(n, n);
  atoms.array() += leak;
  return Dictionary(std::move(atoms));
}

inline Eigen::VectorXd random_vector(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
  return v;
}

// s-sparse draw with magnitudes in [0.5, 2) and random signs.
inline Eigen::VectorXd random_sparse(int big_n, int s, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(big_n));
  for (int i = 0; i < big_n; ++i) pool[static_cast<std::size_t>(i)] = i;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(big_n);
  for (int k = 0; k < s; ++k) {
    const int pick = k + rng.index(big_n - k);
    std::swap(pool[k], pool[pick]);
    const double sign = (rng.next_u64() & 1u) ? 1.0 : -1.0;
    c[pool[k]] = sign * rng.uniform(0.5, 2.0);
  }
  return c;
}

}  // namespace wsparse::testing
