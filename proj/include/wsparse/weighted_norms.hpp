#pragma once

#include <Eigen/Dense>
#include <vector>

namespace wsparse {

// Weighted lp norm (sum_i |c_i|^p w_i^p)^(1/p), 0 < p < inf.
double weighted_p_norm(const Eigen::VectorXd& c, const Eigen::VectorXd& w,
                       double p);

// Weighted bilinear form sum_i c_i d_i w_i^2.
double weighted_inner(const Eigen::VectorXd& c, const Eigen::VectorXd& d,
                      const Eigen::VectorXd& w);

// Indices with |c_i| > tol, sorted ascending, 0-based.
std::vector<int> support(const Eigen::VectorXd& c, double tol = 0.0);

// Support cardinality ||c||_0 at the given tolerance.
int l0(const Eigen::VectorXd& c, double tol = 0.0);

// Tolerance used when reading supports off floating-point solver output.
inline constexpr double kSolverSupportTol = 1e-10;

struct Truncation {
  Eigen::VectorXd truncated;  // c restricted to `kept`, zero elsewhere
  std::vector<int> kept;      // the s retained indices, sorted ascending
};

// Keep the s entries with the largest weighted magnitude w_i |c_i| and zero
// the rest. Ties go to the lower index, so the result is deterministic.
Truncation hard_truncate(const Eigen::VectorXd& c, const Eigen::VectorXd& w,
                         int s);

// Compressibility tail e0 = ||c - c_s||_{1,w} / sqrt(s).
double tail_e0(const Eigen::VectorXd& c, const Eigen::VectorXd& w, int s);

}  // namespace wsparse
