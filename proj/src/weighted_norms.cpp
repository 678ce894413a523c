#include "wsparse/weighted_norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wsparse/errors.hpp"

namespace wsparse {

namespace {

void check_lengths(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("vector lengths differ");
  }
}

}  // namespace

double weighted_p_norm(const Eigen::VectorXd& c, const Eigen::VectorXd& w,
                       double p) {
  check_lengths(c, w);
  if (!(p > 0.0)) throw InvalidExponent("p must be positive");
  if (p == 1.0) return c.cwiseAbs().dot(w);
  if (p == 2.0) return c.cwiseProduct(w).norm();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    sum += std::pow(std::abs(c[i]) * w[i], p);
  }
  return std::pow(sum, 1.0 / p);
}

double weighted_inner(const Eigen::VectorXd& c, const Eigen::VectorXd& d,
                      const Eigen::VectorXd& w) {
  check_lengths(c, d);
  check_lengths(c, w);
  return (c.array() * d.array() * w.array().square()).sum();
}

std::vector<int> support(const Eigen::VectorXd& c, double tol) {
  std::vector<int> indices;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > tol) indices.push_back(static_cast<int>(i));
  }
  return indices;
}

int l0(const Eigen::VectorXd& c, double tol) {
  return static_cast<int>(support(c, tol).size());
}

Truncation hard_truncate(const Eigen::VectorXd& c, const Eigen::VectorXd& w,
                         int s) {
  check_lengths(c, w);
  if (s < 0 || s > c.size()) {
    throw InvalidSparsity("truncation level outside [0, N]");
  }
  std::vector<int> order(static_cast<std::size_t>(c.size()));
  std::iota(order.begin(), order.end(), 0);
  // Stable sort keeps the lower index first among equal weighted magnitudes.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(c[a]) * w[a] > std::abs(c[b]) * w[b];
  });

  Truncation out;
  out.kept.assign(order.begin(), order.begin() + s);
  std::sort(out.kept.begin(), out.kept.end());
  out.truncated = Eigen::VectorXd::Zero(c.size());
  for (int idx : out.kept) out.truncated[idx] = c[idx];
  return out;
}

double tail_e0(const Eigen::VectorXd& c, const Eigen::VectorXd& w, int s) {
  if (s < 1 || s > c.size()) {
    throw InvalidSparsity("e0 needs 1 <= s <= N");
  }
  const Truncation trunc = hard_truncate(c, w, s);
  return weighted_p_norm(c - trunc.truncated, w, 1.0) /
         std::sqrt(static_cast<double>(s));
}

}  // namespace wsparse
