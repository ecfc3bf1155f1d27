#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "pencil_lab/basis.hpp"
#include "pencil_lab/linalg.hpp"
#include "pencil_lab/polynomial.hpp"

namespace pencil_lab {

/// Dense real matrix of an operator in a (tensor-)Hermite basis.
struct SpectralOperator {
  std::shared_ptr<const TensorBasis> basis;
  Matrix matrix;
  bool symmetric = false;

  SpectralOperator(std::shared_ptr<const TensorBasis> basis, Matrix matrix, bool symmetric);

  int dim() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// Eigendecomposition M = Q diag(eigenvalues) Q^T of a symmetric operator,
/// eigenvalues ascending.
struct SpdFactorization {
  std::shared_ptr<const TensorBasis> basis;
  Vector eigenvalues;
  Matrix eigenvectors;
};

SpectralOperator assemble_L(const HomogeneousPolynomial& poly,
                            std::shared_ptr<const TensorBasis> basis);

/// Full symmetric eigendecomposition. With require_positive, a nonpositive
/// eigenvalue raises DomainError.
SpdFactorization factorize(const SpectralOperator& op, bool require_positive = true);

/// Q Lambda^s Q^T, symmetrized.
SpectralOperator power(const SpdFactorization& fact, double s);

/// B = A^{1/2} P A^{1/2} with A^{1/2} = power(L_fact, -1/2).
SpectralOperator assemble_B(const SpdFactorization& L_fact, const SpectralOperator& P_mat);

/// Weighted pair on L = D^2 + t^{2m}:
///   A_w = L^{-1/2} t^{2 ell} L^{-1/2},  B_w = L^{-1/2} t^{m+ell} L^{-1/2}.
/// Requires 0 <= ell < m.
std::pair<SpectralOperator, SpectralOperator> assemble_weighted(int m, int ell,
                                                                const HermiteBasis1D& basis);

/// What a pencil problem is made of: the polynomial, an optional weight
/// exponent ell (1D monomials only) and an optional basis-scale override.
struct ProblemSpec {
  HomogeneousPolynomial poly;
  std::optional<int> ell;
  std::optional<double> alpha;

  int dimension() const noexcept { return poly.dimension(); }
  int degree() const noexcept { return poly.degree(); }
  bool weighted() const noexcept { return ell.has_value(); }
  std::string describe() const;
};

/// Validates a problem: weighted problems need P = t^m and 0 <= ell < m.
void validate(const ProblemSpec& spec);

std::shared_ptr<const TensorBasis> make_basis(const ProblemSpec& spec, int axis_size);

/// All operators of one problem at one truncation size, assembled eagerly and
/// immutable afterwards. One factorization of L feeds A, A^{1/2} and B.
class Discretization {
 public:
  Discretization(const ProblemSpec& spec, int axis_size);

  const ProblemSpec& spec() const noexcept { return spec_; }
  int axis_size() const noexcept { return axis_size_; }
  int dim() const noexcept { return basis_->total_dim(); }
  const std::shared_ptr<const TensorBasis>& basis() const noexcept { return basis_; }

  /// Galerkin matrix of P^2 (the potential part of L).
  const SpectralOperator& potential() const noexcept { return V_; }
  const SpectralOperator& L() const noexcept { return L_; }
  const SpdFactorization& L_factorization() const noexcept { return L_fact_; }
  const SpectralOperator& P() const noexcept { return P_; }
  const SpectralOperator& A() const noexcept { return A_; }
  const SpectralOperator& A_half() const noexcept { return A_half_; }
  const SpectralOperator& B() const noexcept { return B_; }

  /// Weighted pair; throws InputError on unweighted problems.
  const SpectralOperator& A_w() const;
  const SpectralOperator& B_w() const;

  /// The (A, B) of the pencil I - 2 lambda B + lambda^2 A: the weighted pair
  /// when ell is set, otherwise (A, B).
  const SpectralOperator& pencil_A() const { return weighted_ ? weighted_->first : A_; }
  const SpectralOperator& pencil_B() const { return weighted_ ? weighted_->second : B_; }

  /// Coupling and mass of the physical operator L - 2 lambda M + lambda^2 W.
  SpectralOperator physical_coupling() const;
  SpectralOperator physical_mass() const;

  /// Galerkin matrix of t^j (1D only), enlarged-then-cropped.
  SpectralOperator t_power(int j) const;

 private:
  ProblemSpec spec_;
  int axis_size_;
  std::shared_ptr<const TensorBasis> basis_;
  SpectralOperator V_;
  SpectralOperator L_;
  SpdFactorization L_fact_;
  SpectralOperator P_;
  SpectralOperator A_;
  SpectralOperator A_half_;
  SpectralOperator B_;
  std::optional<std::pair<SpectralOperator, SpectralOperator>> weighted_;
};

enum class ScalingMode { kIsospectral, kFixedBasis };

/// A_gamma = (-Delta + gamma P^2)^{-1}. Isospectral mode rescales the
/// eigenvalues of A by gamma^{-1/(m+1)} keeping its eigenvectors; fixed-basis
/// mode inverts -Delta + gamma P^2 on the unchanged basis.
SpectralOperator scale_gamma(const Discretization& problem, double gamma, ScalingMode mode);

std::string to_string(ScalingMode mode);
ScalingMode parse_scaling_mode(const std::string& text);

}  // namespace pencil_lab
