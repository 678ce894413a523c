#include "wsparse/greedy.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "wsparse/errors.hpp"

namespace wsparse {

int select_index(const Dictionary& dict, const Eigen::VectorXd& r) {
  if (r.size() != dict.ambient_dim()) {
    throw DimensionMismatch("residual length != ambient dimension");
  }
  if (r.isZero(0.0)) {
    throw ZeroResidual("cannot select an atom for a zero residual");
  }
  const Eigen::VectorXd correlations =
      (dict.atoms().transpose() * r).cwiseAbs().cwiseQuotient(dict.weights());
  int best = 0;
  for (int j = 1; j < dict.atom_count(); ++j) {
    if (correlations[j] > correlations[best]) best = j;
  }
  return best;
}

OmpTrace omp_recover(const Dictionary& dict, const Eigen::VectorXd& y,
                     const OmpStop& stop) {
  if (y.size() != dict.ambient_dim()) {
    throw DimensionMismatch("measurement length != ambient dimension");
  }
  if (stop.max_atoms && *stop.max_atoms < 1) {
    throw InvalidSparsity("max_atoms must be >= 1");
  }
  const int atom_budget =
      std::min(stop.max_atoms.value_or(dict.atom_count()),
               std::min(dict.ambient_dim(), dict.atom_count()));
  const double tol = stop.residual_tol.value_or(1e-10 * y.norm());

  OmpTrace trace;
  trace.coefficients = Eigen::VectorXd::Zero(dict.atom_count());
  Eigen::VectorXd residual = y;

  while (static_cast<int>(trace.selected.size()) < atom_budget &&
         residual.norm() > tol) {
    const int picked = select_index(dict, residual);
    if (std::find(trace.selected.begin(), trace.selected.end(), picked) !=
        trace.selected.end()) {
      break;  // residual is orthogonal to every atom; no further progress
    }
    trace.selected.push_back(picked);

    const int k = static_cast<int>(trace.selected.size());
    Eigen::MatrixXd active(dict.ambient_dim(), k);
    for (int i = 0; i < k; ++i) active.col(i) = dict.atom(trace.selected[i]);

    // Fresh least-squares solve on the active set; active sets stay tiny.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(active);
    if (qr.rank() < k) {
      throw RankDeficientActiveSet("active atoms are numerically dependent");
    }
    const Eigen::VectorXd fit = qr.solve(y);

    trace.coefficients.setZero();
    for (int i = 0; i < k; ++i) trace.coefficients[trace.selected[i]] = fit[i];
    residual = y - active * fit;
    trace.residual_norms.push_back(residual.norm());
  }
  return trace;
}

std::string OmpTrace::to_json() const {
  nlohmann::json doc;
  auto indices = nlohmann::json::array();
  for (int idx : selected) indices.push_back(idx + 1);
  doc["selected"] = std::move(indices);
  doc["residual_norms"] = residual_norms;
  doc["coefficients"] = std::vector<double>(
      coefficients.data(), coefficients.data() + coefficients.size());
  return doc.dump(2);
}

}  // namespace wsparse
