#pragma once

#include <span>
#include <vector>

#include "pencil_lab/linalg.hpp"
#include "pencil_lab/polynomial.hpp"

namespace pencil_lab {

inline constexpr int kMaxTensorDim = 20000;

/// Scaled Hermite functions phi_j(t) = alpha^{1/2} h_j(alpha t), j < size.
struct HermiteBasis1D {
  int size;
  double alpha;

  HermiteBasis1D(int size, double alpha);
};

/// alpha = N^{(m-1)/(2(m+1))}: puts the basis length scale at the turning
/// point of t^{2m} for the N-th level.
double default_alpha(int size, int degree);

/// Tensor product of 1 to 3 Hermite bases; flat index is row-major in the
/// axis multi-index (last axis fastest), matching linalg::kron ordering.
class TensorBasis {
 public:
  explicit TensorBasis(std::vector<HermiteBasis1D> axes);

  const std::vector<HermiteBasis1D>& axes() const noexcept { return axes_; }
  int dimension() const noexcept { return static_cast<int>(axes_.size()); }
  int total_dim() const noexcept { return total_dim_; }

  std::vector<int> multi_index(int flat) const;
  int flat_index(std::span<const int> multi) const;

  bool operator==(const TensorBasis& other) const;

 private:
  std::vector<HermiteBasis1D> axes_;
  std::vector<int> strides_;
  int total_dim_;
};

/// Multiplication by t: tridiagonal, (j, j+1) = sqrt((j+1)/2) / alpha.
Matrix position_matrix(const HermiteBasis1D& basis);

/// -d^2/dt^2: diagonal alpha^2 (2j+1)/2, (j, j+2) = -alpha^2 sqrt((j+1)(j+2))/2.
Matrix laplacian_matrix(const HermiteBasis1D& basis);

/// Galerkin matrix of t^power, formed at size N + margin and cropped to N.
/// Exact (no truncation bias) whenever margin >= power.
Matrix position_power_matrix(const HermiteBasis1D& basis, int power, int margin);

/// Galerkin matrix of multiplication by P on the tensor basis.
Matrix multiplication_matrix(const HomogeneousPolynomial& poly, const TensorBasis& basis);

/// Sum of the axis Laplacians, tensorized.
Matrix tensor_laplacian(const TensorBasis& basis);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for weight exp(-t^2): Golub-Welsch nodes polished by
/// Newton, weights from the Christoffel function.
QuadratureRule gauss_hermite_rule(int order);

/// phi_0(t) .. phi_{N-1}(t) by the normalized three-term recurrence, with
/// running rescaling so large |t| neither overflows nor underflows early.
std::vector<double> hermite_functions(const HermiteBasis1D& basis, double t);

/// Pointwise values of sum_J c_J Phi_J(x) at each grid point.
std::vector<double> synthesize(std::span<const double> coeffs, const TensorBasis& basis,
                               const std::vector<std::vector<double>>& grid);

}  // namespace pencil_lab
