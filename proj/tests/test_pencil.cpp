#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pencil_lab/errors.hpp"
#include "pencil_lab/pencil.hpp"

using namespace pencil_lab;

namespace {

ProblemSpec monomial(int m, std::optional<double> alpha = std::nullopt) {
  return {HomogeneousPolynomial::monomial(m), std::nullopt, alpha};
}

std::shared_ptr<const TensorBasis> basis_of(int n) {
  return std::make_shared<const TensorBasis>(std::vector<HermiteBasis1D>{HermiteBasis1D(n, 1.0)});
}

SpectralOperator scalar(double v) {
  return {basis_of(1), Matrix::Constant(1, 1, v), true};
}

std::vector<Complex> mus(const std::vector<EigenCandidate>& c) {
  std::vector<Complex> out;
  for (const auto& e : c) out.push_back(e.mu);
  return out;
}

}  // namespace

TEST_CASE("one-dimensional pencil matches the quadratic formula") {
  // 1 - 2 lambda b + lambda^2 a = 0.
  const double a = 0.5, b = 0.2;
  const auto lin = build_linearization(scalar(std::sqrt(a)), scalar(b));
  const auto cands = eigensolve(lin);
  const auto pairs = validate_pairs(cands, scalar(a), scalar(b), 1e-12);
  REQUIRE(pairs.size() == 2);
  const Complex disc = std::sqrt(Complex(b * b - a, 0.0));
  const Complex r1 = (b + disc) / a, r2 = (b - disc) / a;
  for (const auto& p : pairs) {
    CHECK(std::min(std::abs(p.lambda - r1), std::abs(p.lambda - r2)) < 1e-12);
    CHECK(p.residual < 1e-14);
  }
}

TEST_CASE("companion case with roots 1 and 2") {
  // a (lambda - 1)(lambda - 2) with a = 1/2 gives b = 3/4; mu = 1/lambda.
  const auto lin = build_linearization(scalar(std::sqrt(0.5)), scalar(0.75));
  const auto m = mus(eigensolve(lin, false));
  REQUIRE(m.size() == 2);
  CHECK(std::abs(m[0] - Complex(1.0, 0.0)) < 1e-13);
  CHECK(std::abs(m[1] - Complex(0.5, 0.0)) < 1e-13);
}

TEST_CASE("B = 0 and A^{1/2} = I give lambda = +-i") {
  const int n = 3;
  const SpectralOperator id(basis_of(n), Matrix::Identity(n, n), true);
  const SpectralOperator zero(basis_of(n), Matrix::Zero(n, n), true);
  const auto cands = eigensolve(build_linearization(id, zero));
  const auto pairs = validate_pairs(cands, id, zero, 1e-12);
  CHECK(pairs.size() == 2 * n);
  for (const auto& p : pairs) CHECK(std::abs(std::abs(p.lambda.imag()) - 1.0) < 1e-13);
  CHECK(conjugate_pairing_distance(mus(cands)) < 1e-13);
}

TEST_CASE("validated pairs make the pencil determinant vanish") {
  const int n = 6;
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = std::sin(1.0 + 3 * i + 7 * j);
  const Matrix ah_m = (g * g.transpose() + Matrix::Identity(n, n)) / 10.0;
  Matrix bm = (g + g.transpose()) / 7.0;
  const SpectralOperator ah(basis_of(n), ah_m, true);
  const SpectralOperator a(basis_of(n), ah_m * ah_m, true);
  const SpectralOperator b(basis_of(n), ah_m * bm * ah_m, true);
  const auto pairs = validate_pairs(eigensolve(build_linearization(ah, b)), a, b, 1e-9);
  CHECK(pairs.size() == 2 * n);
  for (const auto& p : pairs) {
    const ComplexMatrix q = ComplexMatrix::Identity(n, n) - 2.0 * p.lambda * b.matrix.cast<Complex>() +
                            p.lambda * p.lambda * a.matrix.cast<Complex>();
    const double smallest = Eigen::JacobiSVD<ComplexMatrix>(q).singularValues().minCoeff();
    CHECK(smallest < 1e-9 * (1.0 + std::norm(p.lambda)));
  }
}

TEST_CASE("linearization rejects mismatched blocks") {
  CHECK_THROWS_AS(build_linearization(scalar(1.0), SpectralOperator(basis_of(2), Matrix::Zero(2, 2), true)),
                  InputError);
}

TEST_CASE("greedy matching visits small values first and uses targets once") {
  const auto m = greedy_match({Complex(1.0), Complex(3.0)}, {Complex(2.9), Complex(1.1), Complex(10.0)});
  CHECK(*m[0] == 1);
  CHECK(*m[1] == 0);
  const auto contested = greedy_match({Complex(1.05), Complex(1.0)}, {Complex(1.04)});
  CHECK_FALSE(contested[0].has_value());
  CHECK(*contested[1] == 0);
  CHECK(conjugate_pairing_distance({Complex(1, 2), Complex(1, -2.001)}) == doctest::Approx(0.001));
}

TEST_CASE("quartic pencil: certified eigenvalues, parity and decay") {
  const auto study = stability_study(monomial(2), {100, 200, 400});
  REQUIRE(study.certified_count() > 4);
  const auto* top = study.top_certified();
  REQUIRE(top);
  const auto& pair = study.validated.back()[top->pair_index];
  const auto& basis = *study.largest->basis();
  CHECK(parity_contamination(pair.u, basis) < 1e-8);

  const double turning = std::pow(std::abs(top->lambda), 0.5);
  const double far = 3.0 * turning;
  std::vector<std::vector<double>> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back({-far + 2.0 * far * i / 200});
  const auto f = recover_physical_eigenfunction(pair, *study.largest, grid);
  double peak = 0.0;
  for (const auto& s : f.samples) peak = std::max(peak, std::abs(s));
  CHECK(std::abs(f.samples.front()) < 1e-3 * peak);
  CHECK(std::abs(f.samples.back()) < 1e-3 * peak);
  CHECK(f.direct_residual < 1e-4);
  CHECK(f.tail_fraction < 1e-6);
}

TEST_CASE("certified eigenvalues do not depend on the basis scale") {
  const std::vector<int> sizes = {100, 200, 400};
  const auto reference = stability_study(monomial(3), sizes);
  const double alpha = default_alpha(400, 3);
  for (double factor : {0.8, 1.2}) {
    const auto other = stability_study(monomial(3, factor * alpha), sizes);
    std::vector<Complex> ref, alt;
    for (const auto& e : reference.entries)
      if (e.certified && std::abs(e.lambda) < 5.0) ref.push_back(e.lambda);
    for (const auto& e : other.entries)
      if (e.certified) alt.push_back(e.lambda);
    REQUIRE(!ref.empty());
    const auto match = greedy_match(ref, alt);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      REQUIRE(match[i].has_value());
      CHECK(std::abs(ref[i] - alt[*match[i]]) < 1e-6 * (1.0 + std::abs(ref[i])));
    }
  }
}

TEST_CASE("harmonic problem certifies nothing") {
  CHECK(stability_study(monomial(1), {100, 200, 400}).certified_count() == 0);
}
