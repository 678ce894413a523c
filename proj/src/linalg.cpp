#include "wsparse/linalg.hpp"

#include <cmath>

#include "wsparse/rng.hpp"

namespace wsparse {

double operator_norm_power(const Eigen::MatrixXd& m, double rel_tol,
                           int max_iters) {
  if (m.size() == 0) return 0.0;
  // Iterate on the smaller Gram matrix; its top eigenvalue is ||m||^2.
  const bool use_cols = m.cols() <= m.rows();
  const Eigen::Index dim = use_cols ? m.cols() : m.rows();
  Eigen::MatrixXd gram(dim, dim);
  if (use_cols) {
    gram.noalias() = m.transpose() * m;
  } else {
    gram.noalias() = m * m.transpose();
  }

  Rng rng(0x9d2c5680u);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.uniform(-1.0, 1.0);
  v.normalize();

  double lambda = 0.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::VectorXd gv = gram * v;
    const double norm = gv.norm();
    if (norm == 0.0) return 0.0;  // started in the null space of a PSD matrix
    v = gv / norm;
    const double next = v.dot(gram * v);
    if (iter > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

Eigen::VectorXd sym_eigenvalues(Eigen::MatrixXd a, double tol) {
  const Eigen::Index dim = a.rows();
  if (dim == 1) return a.diagonal();

  const double scale = a.norm();
  if (scale == 0.0) return Eigen::VectorXd::Zero(dim);

  auto off_diagonal_norm = [&a, dim]() {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = i + 1; j < dim; ++j) sum += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(sum);
  };

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm() <= tol * scale) break;
    for (Eigen::Index p = 0; p < dim - 1; ++p) {
      for (Eigen::Index q = p + 1; q < dim; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(dim, dim);
        rot(p, p) = c;
        rot(q, q) = c;
        rot(p, q) = s;
        rot(q, p) = -s;
        a = rot.transpose() * a * rot;
      }
    }
  }
  return a.diagonal();
}

double sym_spectral_norm(const Eigen::MatrixXd& a, double tol) {
  if (a.size() == 0) return 0.0;
  return sym_eigenvalues(a, tol).cwiseAbs().maxCoeff();
}

}  // namespace wsparse
