#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wsparse {

// A finite collection of atoms f_1..f_N spanning (a subspace of) R^n,
// stored as the columns of an n x N matrix. Atoms are kept exactly as
// given - they are NOT normalized - and the per-atom weights w_i = ||f_i||
// are cached at construction. Immutable after construction.
class Dictionary {
 public:
  // Atoms with Euclidean norm below this floor are rejected.
  static constexpr double kZeroNormFloor = 1e-12;

  // `atoms` holds the atoms as columns. Throws ZeroNormAtom if any column
  // norm is below the floor, DimensionMismatch on degenerate shapes.
  explicit Dictionary(Eigen::MatrixXd atoms);

  // Convenience constructor from a list of atoms (each of length n).
  static Dictionary from_atoms(const std::vector<std::vector<double>>& atoms);

  int ambient_dim() const { return static_cast<int>(atoms_.rows()); }
  int atom_count() const { return static_cast<int>(atoms_.cols()); }

  const Eigen::MatrixXd& atoms() const { return atoms_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::VectorXd atom(int j) const { return atoms_.col(j); }

 private:
  Eigen::MatrixXd atoms_;
  Eigen::VectorXd weights_;
};

// Synthesis operator: T c = sum_j c_j f_j.
Eigen::VectorXd synthesize(const Dictionary& dict, const Eigen::VectorXd& coef);

// Analysis operator: (Theta x)_j = <x, f_j>. Adjoint of the synthesis map.
Eigen::VectorXd analyze(const Dictionary& dict, const Eigen::VectorXd& x);

// Mutual coherence: max_{i != j} |<f_i, f_j>| / (||f_i|| ||f_j||).
double coherence(const Dictionary& dict);

// Universal lower bound sqrt((N - n) / (n (N - 1))) on the coherence of any
// N-atom system in dimension n; clamped to 0 when N <= n (vacuous there).
double welch_lower_bound(int n, int big_n);

// Union of the identity basis and the normalized Hadamard basis of R^n
// (n must be a power of two), giving coherence exactly 1/sqrt(n). With a
// seed, every atom is rescaled by an independent uniform draw from
// [0.5, 2.0]; coherence is unchanged by the rescaling.
Dictionary two_ortho_dictionary(int n, std::optional<std::uint64_t> weight_seed = {});

// Independent Gaussian atoms rescaled so that ||f_i|| is uniform in [lo, hi].
Dictionary random_dictionary(int n, int big_n, double lo, double hi,
                             std::uint64_t seed);

// JSON persistence. Schema: {"n": int, "N": int, "atoms": [[...], ...]} with
// the outer array atom-major (N arrays of n finite numbers each). Weights are
// recomputed on load, never stored. Throws ParseError on malformed input.
Dictionary load_dictionary_json(std::istream& in);
Dictionary load_dictionary_file(const std::string& path);
std::string dictionary_to_json(const Dictionary& dict);
void save_dictionary_file(const Dictionary& dict, const std::string& path);

}  // namespace wsparse
