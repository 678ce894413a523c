#include "wsparse/dictionary.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wsparse/errors.hpp"
#include "wsparse/rng.hpp"

namespace wsparse {

Dictionary::Dictionary(Eigen::MatrixXd atoms) : atoms_(std::move(atoms)) {
  if (atoms_.rows() < 1) {
    throw DimensionMismatch("dictionary needs ambient dimension n >= 1");
  }
  if (atoms_.cols() < 2) {
    throw DimensionMismatch("dictionary needs at least 2 atoms");
  }
  if (!atoms_.allFinite()) {
    throw ParseError("dictionary atoms must be finite");
  }
  weights_.resize(atoms_.cols());
  for (Eigen::Index j = 0; j < atoms_.cols(); ++j) {
    const double norm = atoms_.col(j).norm();
    if (norm < kZeroNormFloor) {
      throw ZeroNormAtom("atom " + std::to_string(j + 1) +
                         " has norm below 1e-12");
    }
    weights_[j] = norm;
  }
}

Dictionary Dictionary::from_atoms(const std::vector<std::vector<double>>& atoms) {
  if (atoms.empty()) throw DimensionMismatch("no atoms given");
  const std::size_t n = atoms.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].size() != n) {
      throw DimensionMismatch("atom " + std::to_string(j + 1) +
                              " has mismatched length");
    }
    for (std::size_t i = 0; i < n; ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = atoms[j][i];
    }
  }
  return Dictionary(std::move(m));
}

Eigen::VectorXd synthesize(const Dictionary& dict, const Eigen::VectorXd& coef) {
  if (coef.size() != dict.atom_count()) {
    throw DimensionMismatch("coefficient vector length != atom count");
  }
  return dict.atoms() * coef;
}

Eigen::VectorXd analyze(const Dictionary& dict, const Eigen::VectorXd& x) {
  if (x.size() != dict.ambient_dim()) {
    throw DimensionMismatch("signal length != ambient dimension");
  }
  return dict.atoms().transpose() * x;
}

double coherence(const Dictionary& dict) {
  const Eigen::MatrixXd& atoms = dict.atoms();
  const Eigen::VectorXd& w = dict.weights();
  double mu = 0.0;
  for (Eigen::Index i = 0; i < atoms.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < atoms.cols(); ++j) {
      const double corr = std::abs(atoms.col(i).dot(atoms.col(j))) / (w[i] * w[j]);
      mu = std::max(mu, corr);
    }
  }
  return mu;
}

double welch_lower_bound(int n, int big_n) {
  if (n < 1 || big_n < 2) {
    throw DimensionMismatch("welch bound needs n >= 1, N >= 2");
  }
  if (big_n <= n) return 0.0;
  return std::sqrt(static_cast<double>(big_n - n) /
                   (static_cast<double>(n) * (big_n - 1)));
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Sylvester construction: H_{2k} = [[H, H], [H, -H]].
Eigen::MatrixXd hadamard(int n) {
  Eigen::MatrixXd h(1, 1);
  h(0, 0) = 1.0;
  while (h.rows() < n) {
    const Eigen::Index k = h.rows();
    Eigen::MatrixXd next(2 * k, 2 * k);
    next.topLeftCorner(k, k) = h;
    next.topRightCorner(k, k) = h;
    next.bottomLeftCorner(k, k) = h;
    next.bottomRightCorner(k, k) = -h;
    h = std::move(next);
  }
  return h;
}

}  // namespace

Dictionary two_ortho_dictionary(int n, std::optional<std::uint64_t> weight_seed) {
  if (!is_power_of_two(n)) {
    throw InvalidDimension("two_ortho dimension must be a power of 2");
  }
  Eigen::MatrixXd atoms(n, 2 * n);
  atoms.leftCols(n) = Eigen::MatrixXd::Identity(n, n);
  atoms.rightCols(n) = hadamard(n) / std::sqrt(static_cast<double>(n));
  if (weight_seed) {
    Rng rng(*weight_seed);
    for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
      atoms.col(j) *= rng.uniform(0.5, 2.0);
    }
  }
  return Dictionary(std::move(atoms));
}

Dictionary random_dictionary(int n, int big_n, double lo, double hi,
                             std::uint64_t seed) {
  if (n < 1 || big_n < 2) {
    throw DimensionMismatch("random dictionary needs n >= 1, N >= 2");
  }
  if (!(lo > 0.0) || !(lo <= hi)) {
    throw InvalidRange("weight range must satisfy 0 < lo <= hi");
  }
  Rng rng(seed);
  Eigen::MatrixXd atoms(n, big_n);
  for (int j = 0; j < big_n; ++j) {
    Eigen::VectorXd g(n);
    do {
      for (int i = 0; i < n; ++i) g[i] = rng.gaussian();
    } while (g.norm() < Dictionary::kZeroNormFloor);
    atoms.col(j) = g * (rng.uniform(lo, hi) / g.norm());
  }
  return Dictionary(std::move(atoms));
}

Dictionary load_dictionary_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid dictionary JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("N") ||
      !doc.contains("atoms")) {
    throw ParseError("dictionary JSON must have fields n, N, atoms");
  }
  if (!doc["n"].is_number_integer() || !doc["N"].is_number_integer() ||
      !doc["atoms"].is_array()) {
    throw ParseError("dictionary JSON field types: n, N integers; atoms array");
  }
  const int n = doc["n"].get<int>();
  const int big_n = doc["N"].get<int>();
  const auto& rows = doc["atoms"];
  if (n < 1 || big_n < 2 || static_cast<int>(rows.size()) != big_n) {
    throw ParseError("dictionary JSON shape mismatch");
  }
  Eigen::MatrixXd atoms(n, big_n);
  for (int j = 0; j < big_n; ++j) {
    const auto& atom = rows[j];
    if (!atom.is_array() || static_cast<int>(atom.size()) != n) {
      throw ParseError("atom " + std::to_string(j + 1) + " has wrong length");
    }
    for (int i = 0; i < n; ++i) {
      if (!atom[i].is_number()) {
        throw ParseError("atom entries must be finite numbers");
      }
      const double value = atom[i].get<double>();
      if (!std::isfinite(value)) {
        throw ParseError("atom entries must be finite numbers");
      }
      atoms(i, j) = value;
    }
  }
  try {
    return Dictionary(std::move(atoms));
  } catch (const Error& e) {
    throw ParseError(std::string("invalid dictionary: ") + e.what());
  }
}

Dictionary load_dictionary_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dictionary file: " + path);
  return load_dictionary_json(in);
}

std::string dictionary_to_json(const Dictionary& dict) {
  nlohmann::json doc;
  doc["n"] = dict.ambient_dim();
  doc["N"] = dict.atom_count();
  auto rows = nlohmann::json::array();
  for (int j = 0; j < dict.atom_count(); ++j) {
    auto atom = nlohmann::json::array();
    for (int i = 0; i < dict.ambient_dim(); ++i) atom.push_back(dict.atoms()(i, j));
    rows.push_back(std::move(atom));
  }
  doc["atoms"] = std::move(rows);
  return doc.dump(2);
}

void save_dictionary_file(const Dictionary& dict, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << dictionary_to_json(dict) << "\n";
}

}  // namespace wsparse
