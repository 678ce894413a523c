#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "wsparse/dictionary.hpp"
#include "wsparse/guarantees.hpp"

namespace wsparse {

// Knobs for the (P_1w) solver. Step sizes are derived from a power-iteration
// estimate of ||T||: tau = step_scale * step_balance / ||T||,
// sigma = step_scale / (step_balance * ||T||), so tau * sigma * ||T||^2 =
// step_scale^2 <= 1. `seed` drives the noise draw in verify_recovery.
struct SolverConfig {
  int max_iters = 50000;
  double rel_tol = 1e-9;
  double feas_tol = 1e-8;
  double step_scale = 0.99;
  double step_balance = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  static SolverConfig from_json_text(const std::string& text);
};

struct SolveResult {
  Eigen::VectorXd coefficients;
  bool converged = false;  // false: iteration cap hit; best iterate returned
  int iterations = 0;
  double objective = 0.0;      // ||c||_{1,w} at the returned iterate
  double residual_norm = 0.0;  // ||y - Tc||_2 at the returned iterate
};

// Minimize ||c||_{1,w} subject to ||y - Tc||_2 <= eta, by a first-order
// primal-dual iteration: the objective enters through componentwise shrinkage
// of c_i by tau * w_i, the constraint through Euclidean projection onto the
// radius-eta ball centered at y.
SolveResult solve_p1w(const Dictionary& dict, const Eigen::VectorXd& y,
                      double eta, const SolverConfig& cfg = {});

// Brute-force minimizer for eta = 0 on desk-size instances: enumerate every
// linearly independent support of size <= n, keep the exact fits, return the
// cheapest in ||.||_{1,w}. An optimum of this piecewise-linear program sits at
// a vertex, and vertices are supported on independent atoms, so the sweep is
// exhaustive. Throws TooLarge for N > 12.
Eigen::VectorXd oracle_p1w(const Dictionary& dict, const Eigen::VectorXd& y);

// End-to-end check of the noisy recovery bound: draw z with ||z|| = eps in a
// uniformly random direction, form y = Tc_true + z, solve (P_1w), and compare
// the observed error ||c* - c_true||_{2,w} against C1 (eta+eps) + C2 e0.
// Also records whether ||c_true||_{1,w} >= ||c*||_{1,w} held, as it must when
// c_true is feasible. Requires eta >= eps >= 0.
GuaranteeReport verify_recovery(const Dictionary& dict,
                                const Eigen::VectorXd& c_true, int s,
                                double eps, double eta,
                                const SolverConfig& cfg = {});

}  // namespace wsparse
