#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "pencil_lab/linalg.hpp"
#include "pencil_lab/operators.hpp"

namespace pencil_lab {

using Complex = std::complex<double>;

/// D = [[2B, A^{1/2}], [-A^{1/2}, 0]], 2d x 2d.
struct Linearization {
  Matrix block;

  int half_dim() const noexcept { return static_cast<int>(block.rows() / 2); }
};

Linearization build_linearization(const SpectralOperator& a_half, const SpectralOperator& b);

struct EigenCandidate {
  Complex mu;
  ComplexVector vector;      // empty when vectors were not requested
  double mu_error_bound = 0.0;  // eps ||D||_1 / rcond(mu); 0 when not computed
};

/// All eigenvalues of D (with right eigenvectors when asked), sorted by |mu|
/// descending, then real part descending, then imaginary part descending.
std::vector<EigenCandidate> eigensolve(const Linearization& lin, bool want_vectors = true,
                                       bool want_error_bounds = false);

inline constexpr double kDefaultMuFloor = 1e-6;
inline constexpr double kDefaultResidualTol = 1e-6;

struct PencilEigenpair {
  Complex mu;
  Complex lambda;
  ComplexVector u;
  double residual = 0.0;  // ||(I - 2 lambda B + lambda^2 A) u|| / ||u||
  int size = 0;
  double lambda_error_bound = 0.0;  // first-order roundoff bound on lambda
};

/// Keeps candidates with |mu| > floor * max|mu| whose first block u satisfies
/// the pencil equation to residual_tol. Order of `candidates` is preserved.
std::vector<PencilEigenpair> validate_pairs(const std::vector<EigenCandidate>& candidates,
                                            const SpectralOperator& a, const SpectralOperator& b,
                                            double residual_tol, int size = 0,
                                            double floor = kDefaultMuFloor);

/// Square root of pencil_A: A^{1/2}, or A_w^{1/2} on weighted problems.
SpectralOperator pencil_A_half(const Discretization& problem);

/// Pencil eigenpairs of one discretization (pencil_A, pencil_B).
std::vector<PencilEigenpair> solve_pencil(const Discretization& problem, double residual_tol);

struct PhysicalEigenfunction {
  ComplexVector coefficients;      // f = A^{1/2} u, normalized to unit norm
  double direct_residual = 0.0;    // ||(L - 2 lambda M + lambda^2 W) f|| / ||f||
  double tail_fraction = 0.0;      // coefficient norm on the last decile / total
  std::vector<std::vector<double>> grid;
  std::vector<Complex> samples;
};

/// Maps a validated pair back to the physical operator and samples f on the
/// grid (points given as coordinate vectors of the problem dimension).
PhysicalEigenfunction recover_physical_eigenfunction(const PencilEigenpair& pair,
                                                     const Discretization& problem,
                                                     const std::vector<std::vector<double>>& grid);

/// Norm of the coefficients on multi-indices with some component at or above
/// ceil(0.9 N), relative to the total norm.
double coefficient_tail_fraction(const ComplexVector& coeffs, const TensorBasis& basis);

/// Relative norm of the minority parity component of u under x -> -x.
double parity_contamination(const ComplexVector& u, const TensorBasis& basis);

/// Largest distance between a value and its matched conjugate partner (greedy
/// nearest matching, each value used once).
double conjugate_pairing_distance(const std::vector<Complex>& values);

/// Greedy nearest matching of `from` into `to`: `from` is visited by |value|
/// ascending (largest |mu| first for lambda lists), each entry of `to` is used
/// at most once. Result[i] is the index
/// matched to from[i], nullopt when `to` ran out.
std::vector<std::optional<std::size_t>> greedy_match(const std::vector<Complex>& from,
                                                     const std::vector<Complex>& to);

struct StabilityEntry {
  Complex lambda;
  double residual = 0.0;
  std::vector<std::optional<Complex>> trail;  // matched lambda per size, last = lambda
  std::optional<double> drift;                // |lambda - match at the previous size|
  double error_bound = 0.0;                   // conditioning bound on lambda
  bool certified = false;
  std::size_t pair_index = 0;                 // into the largest-size validated list
};

struct StabilityStudy {
  std::vector<int> sizes;
  double residual_tol = kDefaultResidualTol;
  std::vector<std::vector<PencilEigenpair>> validated;  // per size
  std::vector<StabilityEntry> entries;                  // one per pair at the largest size
  std::shared_ptr<const Discretization> largest;

  std::size_t certified_count() const;
  /// Certified entry with the largest |mu| (smallest |lambda|).
  const StabilityEntry* top_certified() const;
};

inline constexpr double kDriftFactor = 1e-4;

/// Validates pencil pairs at every size, chains them across consecutive sizes
/// and certifies the ones whose drift between the two largest sizes is below
/// 1e-4 (1 + |lambda|). The roundoff bound on lambda from the eigenvalue
/// condition number must stay below the same threshold: ill-conditioned
/// eigenvalues of the truncated non-normal D sit on the pseudospectral
/// boundary and do not converge even when their drift happens to be small.
StabilityStudy stability_study(const ProblemSpec& spec, const std::vector<int>& sizes,
                               double residual_tol = kDefaultResidualTol);

}  // namespace pencil_lab
