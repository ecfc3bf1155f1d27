#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pencil_lab/basis.hpp"
#include "pencil_lab/errors.hpp"

using namespace pencil_lab;

namespace {

// Physicists' Hermite polynomial H_n(t) by the plain recurrence.
double hermite_poly(int n, double t) {
  double h0 = 1.0, h1 = 2.0 * t;
  if (n == 0) return h0;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * t * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// h_j(t) from the closed form H_j(t) e^{-t^2/2} / sqrt(2^j j! sqrt(pi)), small j only.
double hermite_function_closed(int j, double t) {
  const double norm = std::sqrt(std::pow(2.0, j) * std::tgamma(j + 1.0) * std::sqrt(std::numbers::pi));
  return hermite_poly(j, t) * std::exp(-0.5 * t * t) / norm;
}

}  // namespace

TEST_CASE("Gauss-Hermite nodes are roots of H_n and moments are exact") {
  for (int order : {5, 12, 30}) {
    const auto rule = gauss_hermite_rule(order);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));
    // Newton polish from each node should not move it.
    for (double x : rule.nodes) {
      double z = x;
      for (int it = 0; it < 5; ++it) z -= hermite_poly(order, z) / (2.0 * order * hermite_poly(order - 1, z));
      CHECK(z == doctest::Approx(x).epsilon(1e-12).scale(1.0));
    }
    // int t^{2k} e^{-t^2} = Gamma(k + 1/2), exact for 2k <= 2 order - 1.
    for (int k = 0; 2 * k <= 2 * order - 1 && k <= 8; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
      CHECK(sum == doctest::Approx(std::tgamma(k + 0.5)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Hermite functions match the closed form and stay finite far out") {
  const HermiteBasis1D basis(8, 1.3);
  for (double t : {-2.1, -0.4, 0.0, 0.7, 3.3}) {
    const auto phi = hermite_functions(basis, t);
    for (int j = 0; j < 8; ++j) {
      CHECK(phi[j] == doctest::Approx(std::sqrt(1.3) * hermite_function_closed(j, 1.3 * t)).epsilon(1e-12).scale(1e-3));
    }
  }
  const auto far = hermite_functions(HermiteBasis1D(400, 1.0), 40.0);
  for (double v : far) CHECK(std::isfinite(v));
}

TEST_CASE("position and Laplacian matrices agree with quadrature and finite differences") {
  const int n = 20;
  const double alpha = 1.7;
  const HermiteBasis1D basis(n, alpha);
  const auto rule = gauss_hermite_rule(40);
  const Matrix x = position_matrix(basis);
  Matrix quad = Matrix::Zero(n, n);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double t = rule.nodes[q] / alpha;  // phi_i phi_j dt = alpha h_i h_j(alpha t) dt
    const auto phi = hermite_functions(basis, t);
    const double w = rule.weights[q] * std::exp(rule.nodes[q] * rule.nodes[q]) / alpha;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) quad(i, j) += w * phi[i] * phi[j] * t;
  }
  CHECK((x - quad).cwiseAbs().maxCoeff() < 1e-12);

  const Matrix lap = laplacian_matrix(basis);
  const double h = 1e-3;
  for (double t : {-1.2, 0.3, 2.0}) {
    const auto p0 = hermite_functions(basis, t);
    const auto pm = hermite_functions(basis, t - h);
    const auto pp = hermite_functions(basis, t + h);
    for (int j = 0; j < n - 2; ++j) {
      const double fd = -(pp[j] - 2.0 * p0[j] + pm[j]) / (h * h);
      double expansion = 0.0;
      for (int i = 0; i < n; ++i) expansion += lap(i, j) * p0[i];
      CHECK(expansion == doctest::Approx(fd).epsilon(1e-4).scale(std::pow(alpha, 2) * (2 * j + 1)));
    }
  }
}

TEST_CASE("enlarged-then-cropped powers equal cropped products of a larger position matrix") {
  const HermiteBasis1D basis(15, 0.8);
  const HermiteBasis1D big(40, 0.8);
  const Matrix xb = position_matrix(big);
  Matrix power = Matrix::Identity(40, 40);
  for (int k = 1; k <= 6; ++k) {
    power = power * xb;
    const Matrix cropped = power.topLeftCorner(15, 15);
    CHECK((position_power_matrix(basis, k, k) - cropped).cwiseAbs().maxCoeff() < 1e-10);
  }
  // The square of the cropped matrix differs in the last corner entry.
  const Matrix x = position_matrix(basis);
  const Matrix naive = x * x;
  const Matrix exact = position_power_matrix(basis, 2, 2);
  CHECK(std::abs(naive(14, 14) - exact(14, 14)) > 1.0);
  CHECK((naive.topLeftCorner(14, 14) - exact.topLeftCorner(14, 14)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tensor indexing and multiplication matrices") {
  const TensorBasis basis({HermiteBasis1D(4, 1.0), HermiteBasis1D(3, 1.0), HermiteBasis1D(5, 1.0)});
  CHECK(basis.total_dim() == 60);
  for (int f = 0; f < 60; ++f) CHECK(basis.flat_index(basis.multi_index(f)) == f);
  CHECK(basis.multi_index(1) == std::vector<int>{0, 0, 1});

  const TensorBasis plane({HermiteBasis1D(6, 1.2), HermiteBasis1D(6, 1.2)});
  const auto p = HomogeneousPolynomial::radial(2, 1);
  const Matrix x2 = position_power_matrix(plane.axes()[0], 2, 2);
  const Matrix id = Matrix::Identity(6, 6);
  const Matrix expected = linalg::kron(x2, id) + linalg::kron(id, x2);
  CHECK((multiplication_matrix(p, plane) - expected).cwiseAbs().maxCoeff() < 1e-12);
  const Matrix lap = tensor_laplacian(plane);
  const Matrix l1 = laplacian_matrix(plane.axes()[0]);
  CHECK((lap - linalg::kron(l1, id) - linalg::kron(id, l1)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("synthesis satisfies Parseval") {
  const TensorBasis basis({HermiteBasis1D(10, 1.4)});
  std::vector<double> c(10);
  for (int j = 0; j < 10; ++j) c[j] = std::cos(1.0 + j) / (1.0 + j);
  const auto rule = gauss_hermite_rule(40);
  std::vector<std::vector<double>> grid;
  for (double x : rule.nodes) grid.push_back({x / 1.4});
  const auto f = synthesize(c, basis, grid);
  double integral = 0.0;
  for (std::size_t q = 0; q < grid.size(); ++q)
    integral += rule.weights[q] * std::exp(rule.nodes[q] * rule.nodes[q]) / 1.4 * f[q] * f[q];
  double norm2 = 0.0;
  for (double v : c) norm2 += v * v;
  CHECK(integral == doctest::Approx(norm2).epsilon(1e-12));
}

TEST_CASE("default alpha and size limits") {
  CHECK(default_alpha(100, 1) == doctest::Approx(1.0));
  CHECK(default_alpha(100, 3) == doctest::Approx(std::pow(100.0, 0.25)));
  CHECK_THROWS_AS(HermiteBasis1D(0, 1.0), InputError);
  CHECK_THROWS_AS(HermiteBasis1D(5, -1.0), InputError);
  CHECK_THROWS_AS(TensorBasis({HermiteBasis1D(30, 1.0), HermiteBasis1D(30, 1.0), HermiteBasis1D(30, 1.0)}),
                  InputError);
}
