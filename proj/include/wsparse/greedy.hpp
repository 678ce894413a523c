#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "wsparse/dictionary.hpp"

namespace wsparse {

// Stopping rule for the pursuit: whichever of the two fires first. When
// residual_tol is unset it defaults to 1e-10 * ||y||.
struct OmpStop {
  std::optional<int> max_atoms;
  std::optional<double> residual_tol;
};

struct OmpTrace {
  std::vector<int> selected;           // atom indices in selection order, 0-based
  std::vector<double> residual_norms;  // ||y - Tc|| after each refit
  Eigen::VectorXd coefficients;        // final coefficients, length N

  // Indices are emitted 1-based.
  std::string to_json() const;
};

// Index maximizing the normalized absolute correlation |<r, f_j>| / ||f_j||;
// ties go to the lower index. Throws ZeroResidual on r = 0.
int select_index(const Dictionary& dict, const Eigen::VectorXd& r);

// Orthogonal matching pursuit: select, refit by least squares on the active
// atoms, update the residual. Selection is invariant under atom rescaling.
OmpTrace omp_recover(const Dictionary& dict, const Eigen::VectorXd& y,
                     const OmpStop& stop);

}  // namespace wsparse
