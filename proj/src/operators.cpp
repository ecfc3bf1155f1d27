#include "pencil_lab/operators.hpp"

#include <cmath>
#include <sstream>

#include "pencil_lab/errors.hpp"

namespace pencil_lab {

namespace {

Matrix conjugate(const Matrix& outer, const Matrix& inner) {
  Matrix tmp = outer * inner;
  Matrix out = tmp * outer;
  linalg::symmetrize(out);
  return out;
}

}  // namespace

SpectralOperator::SpectralOperator(std::shared_ptr<const TensorBasis> b, Matrix m, bool sym)
    : basis(std::move(b)), matrix(std::move(m)), symmetric(sym) {
  if (matrix.rows() != matrix.cols()) throw InputError("operator matrix is not square");
  if (basis && matrix.rows() != basis->total_dim()) {
    throw InputError("operator matrix size does not match basis dimension");
  }
  if (symmetric) linalg::symmetrize(matrix);
}

SpectralOperator assemble_L(const HomogeneousPolynomial& poly,
                            std::shared_ptr<const TensorBasis> basis) {
  Matrix l = tensor_laplacian(*basis) + multiplication_matrix(poly.square(), *basis);
  SpectralOperator op(std::move(basis), std::move(l), true);
  // Positive definiteness is checked by the factorization that always follows;
  // callers that only need the matrix can skip it.
  return op;
}

SpdFactorization factorize(const SpectralOperator& op, bool require_positive) {
  if (!op.symmetric) throw InputError("factorize needs a symmetric operator");
  auto eig = linalg::symmetric_eigen(op.matrix);
  if (!eig.values.allFinite()) throw NumericError("eigendecomposition produced non-finite values");
  if (require_positive && eig.values.size() > 0 && !(eig.values[0] > 0.0)) {
    std::ostringstream os;
    os << "operator is not positive definite (lowest eigenvalue " << eig.values[0]
       << "); try a larger basis or a different alpha";
    throw DomainError(os.str());
  }
  return {op.basis, std::move(eig.values), std::move(eig.vectors)};
}

SpectralOperator power(const SpdFactorization& fact, double s) {
  const Eigen::Index d = fact.eigenvalues.size();
  if (s != std::round(s) && d > 0 && !(fact.eigenvalues[0] > 0.0)) {
    throw DomainError("fractional power of an operator with nonpositive eigenvalues");
  }
  Vector scaled(d);
  for (Eigen::Index i = 0; i < d; ++i) scaled[i] = std::pow(fact.eigenvalues[i], s);
  Matrix m = fact.eigenvectors * scaled.asDiagonal() * fact.eigenvectors.transpose();
  return SpectralOperator(fact.basis, std::move(m), true);
}

SpectralOperator assemble_B(const SpdFactorization& L_fact, const SpectralOperator& P_mat) {
  if (L_fact.eigenvalues.size() != P_mat.dim()) throw InputError("assemble_B: dimension mismatch");
  const SpectralOperator a_half = power(L_fact, -0.5);
  return SpectralOperator(L_fact.basis, conjugate(a_half.matrix, P_mat.matrix), true);
}

std::pair<SpectralOperator, SpectralOperator> assemble_weighted(int m, int ell,
                                                                const HermiteBasis1D& basis) {
  if (ell < 0 || ell >= m) {
    throw InputError("weighted operators need 0 <= ell < m (got ell=" + std::to_string(ell) +
                     ", m=" + std::to_string(m) + ")");
  }
  auto tb = std::make_shared<const TensorBasis>(std::vector<HermiteBasis1D>{basis});
  const auto poly = HomogeneousPolynomial::monomial(m);
  const auto L = assemble_L(poly, tb);
  const auto fact = factorize(L);
  const Matrix a_half = power(fact, -0.5).matrix;
  const int margin = 2 * m;
  const Matrix t_mass = position_power_matrix(basis, 2 * ell, margin);
  const Matrix t_coupling = position_power_matrix(basis, m + ell, margin);
  return {SpectralOperator(tb, conjugate(a_half, t_mass), true),
          SpectralOperator(tb, conjugate(a_half, t_coupling), true)};
}

std::string ProblemSpec::describe() const {
  std::ostringstream os;
  os << "P = " << to_string(poly) << " (n=" << dimension() << ", m=" << degree();
  if (ell) os << ", ell=" << *ell;
  if (alpha) os << ", alpha=" << *alpha;
  os << ")";
  return os.str();
}

void validate(const ProblemSpec& spec) {
  if (spec.ell) {
    const auto& terms = spec.poly.terms();
    if (spec.dimension() != 1 || terms.size() != 1 || terms.begin()->second != 1.0) {
      throw InputError("weighted problems require P = t^m in one dimension");
    }
    if (*spec.ell < 0 || *spec.ell >= spec.degree()) {
      throw InputError("weighted problems need 0 <= ell < m");
    }
  }
  if (spec.alpha && !(*spec.alpha > 0.0)) throw InputError("alpha override must be positive");
}

std::shared_ptr<const TensorBasis> make_basis(const ProblemSpec& spec, int axis_size) {
  const double alpha = spec.alpha.value_or(default_alpha(axis_size, spec.degree()));
  std::vector<HermiteBasis1D> axes(spec.dimension(), HermiteBasis1D(axis_size, alpha));
  return std::make_shared<const TensorBasis>(std::move(axes));
}

Discretization::Discretization(const ProblemSpec& spec, int axis_size)
    : spec_((validate(spec), spec)),
      axis_size_(axis_size),
      basis_(make_basis(spec_, axis_size)),
      V_(basis_, multiplication_matrix(spec_.poly.square(), *basis_), true),
      L_(basis_, tensor_laplacian(*basis_) + V_.matrix, true),
      L_fact_(factorize(L_)),
      P_(basis_, multiplication_matrix(spec_.poly, *basis_), true),
      A_(power(L_fact_, -1.0)),
      A_half_(power(L_fact_, -0.5)),
      B_(basis_, conjugate(A_half_.matrix, P_.matrix), true) {
  if (spec_.ell) {
    const auto& axis = basis_->axes()[0];
    const int m = spec_.degree();
    const int margin = 2 * m;
    weighted_.emplace(
        SpectralOperator(basis_,
                         conjugate(A_half_.matrix, position_power_matrix(axis, 2 * *spec_.ell, margin)),
                         true),
        SpectralOperator(basis_,
                         conjugate(A_half_.matrix, position_power_matrix(axis, m + *spec_.ell, margin)),
                         true));
  }
}

const SpectralOperator& Discretization::A_w() const {
  if (!weighted_) throw InputError("A_w requested on an unweighted problem");
  return weighted_->first;
}

const SpectralOperator& Discretization::B_w() const {
  if (!weighted_) throw InputError("B_w requested on an unweighted problem");
  return weighted_->second;
}

SpectralOperator Discretization::physical_coupling() const {
  if (!spec_.ell) return P_;
  return t_power(spec_.degree() + *spec_.ell);
}

SpectralOperator Discretization::physical_mass() const {
  if (!spec_.ell) return SpectralOperator(basis_, Matrix::Identity(dim(), dim()), true);
  return t_power(2 * *spec_.ell);
}

SpectralOperator Discretization::t_power(int j) const {
  if (basis_->dimension() != 1) throw InputError("t-power factors are only defined in 1D");
  if (j < 0) throw InputError("t-power exponent must be nonnegative");
  return SpectralOperator(basis_, position_power_matrix(basis_->axes()[0], j, j), true);
}

SpectralOperator scale_gamma(const Discretization& problem, double gamma, ScalingMode mode) {
  if (!(gamma > 0.0)) throw InputError("gamma must be positive");
  const int m = problem.spec().degree();
  if (mode == ScalingMode::kIsospectral) {
    const double factor = std::pow(gamma, -1.0 / (m + 1));
    SpdFactorization scaled = problem.L_factorization();
    scaled.eigenvalues /= factor;
    return power(scaled, -1.0);
  }
  const auto& basis = problem.basis();
  Matrix l = tensor_laplacian(*basis) + gamma * multiplication_matrix(problem.spec().poly.square(), *basis);
  const auto fact = factorize(SpectralOperator(basis, std::move(l), true));
  return power(fact, -1.0);
}

std::string to_string(ScalingMode mode) {
  return mode == ScalingMode::kIsospectral ? "isospectral" : "fixed_basis";
}

ScalingMode parse_scaling_mode(const std::string& text) {
  if (text == "isospectral") return ScalingMode::kIsospectral;
  if (text == "fixed_basis" || text == "fixed-basis") return ScalingMode::kFixedBasis;
  throw InputError("unknown scaling mode '" + text + "' (expected isospectral or fixed_basis)");
}

}  // namespace pencil_lab
