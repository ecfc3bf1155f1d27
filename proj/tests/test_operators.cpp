#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pencil_lab/errors.hpp"
#include "pencil_lab/operators.hpp"

using namespace pencil_lab;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

ProblemSpec monomial(int m, std::optional<int> ell = std::nullopt, std::optional<double> alpha = std::nullopt) {
  return {HomogeneousPolynomial::monomial(m), ell, alpha};
}

}  // namespace

TEST_CASE("harmonic oscillator L is diagonal with odd integers") {
  const Discretization d(monomial(1), 30);
  const Matrix expected = Vector::LinSpaced(30, 1.0, 59.0).asDiagonal();
  CHECK(max_diff(d.L().matrix, expected) < 1e-12);
  CHECK(max_diff(d.A().matrix, Matrix(expected.inverse())) < 1e-14);
}

TEST_CASE("A, A^{1/2} and B come from one consistent factorization") {
  const Discretization d(monomial(3), 60);
  const Matrix& a = d.A().matrix;
  const Matrix& ah = d.A_half().matrix;
  const Matrix& l = d.L().matrix;
  CHECK(max_diff(ah * ah, a) < 1e-12 * a.norm());
  CHECK(max_diff(l * a, Matrix::Identity(60, 60)) < 1e-8);
  CHECK(max_diff(d.B().matrix, ah * d.P().matrix * ah) < 1e-12);
  CHECK(max_diff(d.B().matrix, d.B().matrix.transpose()) == 0.0);
  CHECK(d.L_factorization().eigenvalues.minCoeff() > 0.0);
  CHECK(d.dim() == 60);
}

TEST_CASE("weighted pair with ell = 0 reduces to (A, B)") {
  const Discretization d(monomial(4, 0), 50);
  CHECK(max_diff(d.A_w().matrix, d.A().matrix) < 1e-12);
  CHECK(max_diff(d.B_w().matrix, d.B().matrix) < 1e-12);
  CHECK_THROWS_AS(Discretization(monomial(4), 20).A_w(), InputError);
}

TEST_CASE("weighted problems are validated") {
  CHECK_THROWS_AS(validate(monomial(3, 3)), InputError);
  CHECK_THROWS_AS(validate({HomogeneousPolynomial::radial(2, 1), 1, std::nullopt}), InputError);
  CHECK_NOTHROW(validate(monomial(5, 1)));
}

TEST_CASE("factorize refuses an indefinite operator") {
  auto basis = make_basis(monomial(1), 3);
  const SpectralOperator op(basis, Matrix(Vector::LinSpaced(3, -1.0, 1.0).asDiagonal()), true);
  CHECK_THROWS_AS(factorize(op), DomainError);
  CHECK_NOTHROW(factorize(op, false));
}

TEST_CASE("isospectral scaling rescales the spectrum exactly") {
  const Discretization d(monomial(2), 40);
  const double gamma = 3.0;
  const auto scaled = scale_gamma(d, gamma, ScalingMode::kIsospectral);
  CHECK(scaled.matrix.trace() == doctest::Approx(std::pow(gamma, -1.0 / 3.0) * d.A().matrix.trace()).epsilon(1e-13));
  CHECK(parse_scaling_mode("fixed-basis") == ScalingMode::kFixedBasis);
  CHECK_THROWS_AS(parse_scaling_mode("sideways"), InputError);
}

TEST_CASE("alpha override changes the basis but not the low spectrum of L") {
  const Discretization a(monomial(2), 120);
  const Discretization b(monomial(2, std::nullopt, 1.1 * default_alpha(120, 2)), 120);
  CHECK(a.basis()->axes()[0].alpha != b.basis()->axes()[0].alpha);
  for (int k = 0; k < 5; ++k) {
    CHECK(a.L_factorization().eigenvalues[k] == doctest::Approx(b.L_factorization().eigenvalues[k]).epsilon(1e-9));
  }
}

TEST_CASE("anharmonic ground state energy") {
  // -u'' + t^4 u: ground state 1.0603620904841829 (quartic oscillator).
  const Discretization d(monomial(2), 120);
  CHECK(d.L_factorization().eigenvalues[0] == doctest::Approx(1.0603620904841829).epsilon(1e-10));
}
