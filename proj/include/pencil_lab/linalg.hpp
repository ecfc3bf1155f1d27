#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace pencil_lab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

namespace linalg {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns
};

/// Full symmetric eigendecomposition (LAPACK dsyevd). Only the lower
/// triangle of `m` is read. Throws NumericError on non-convergence.
SymmetricEigen symmetric_eigen(const Matrix& m);

/// Eigenvalues and right eigenvectors of a general real matrix (LAPACK
/// dgeev). Vectors are packed the LAPACK way: a complex pair (j, j+1) stores
/// Re in column j and Im in column j+1.
struct GeneralEigen {
  std::vector<std::complex<double>> values;
  Matrix packed_vectors;
  bool has_vectors = false;
  // Approximate error bounds eps ||M||_1 / rcond_i on each eigenvalue (LAPACK
  // dgeevx), empty unless requested.
  std::vector<double> error_bounds;

  ComplexVector vector(int index) const;
};

GeneralEigen general_eigen(const Matrix& m, bool want_vectors, bool want_error_bounds = false);

void symmetrize(Matrix& m);

double max_abs(const Matrix& m);

/// Tr(X Y) without forming the product.
double trace_of_product(const Matrix& x, const Matrix& y);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace linalg
}  // namespace pencil_lab
