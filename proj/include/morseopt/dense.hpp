#ifndef MORSEOPT_DENSE_HPP
#define MORSEOPT_DENSE_HPP

#include <Eigen/Core>

namespace morseopt::dense {

// Dense symmetric kernels used by the interior-point solver. All routines
// are deterministic; sizes stay at desk scale (<= ~100).

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns match values
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a);

// Lower-triangular Cholesky factor; returns false when a pivot is not
// strictly positive.
bool cholesky(const Eigen::MatrixXd& a, Eigen::MatrixXd& lower);

// Solves A x = rhs given the Cholesky factor of A.
Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& lower, const Eigen::VectorXd& rhs);

// Symmetric matrix powers built from the Jacobi decomposition; requires a
// positive-definite argument for negative or fractional exponents.
Eigen::MatrixXd symmetric_power(const SymmetricEigen& eig, double exponent);

double min_eigenvalue(const Eigen::MatrixXd& a);

bool is_symmetric(const Eigen::MatrixXd& a, double tol = 1e-12);

}  // namespace morseopt::dense

#endif
