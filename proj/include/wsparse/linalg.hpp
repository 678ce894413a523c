#pragma once

#include <Eigen/Dense>

namespace wsparse {

// Largest singular value of a general matrix, estimated by power iteration
// on the (smaller of the two) Gram matrices. `rel_tol` applies to the change
// of the squared-norm estimate between sweeps.
double operator_norm_power(const Eigen::MatrixXd& m, double rel_tol = 1e-10,
                           int max_iters = 100000);

// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
// Sweeps run until the off-diagonal mass drops below tol * ||a||_F.
Eigen::VectorXd sym_eigenvalues(Eigen::MatrixXd a, double tol = 1e-12);

// Spectral norm (max |eigenvalue|) of a symmetric matrix.
double sym_spectral_norm(const Eigen::MatrixXd& a, double tol = 1e-12);

}  // namespace wsparse
