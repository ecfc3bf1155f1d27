#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <vector>

#include "pencil_lab/errors.hpp"
#include "pencil_lab/polynomial.hpp"

using namespace pencil_lab;
using Rational = boost::multiprecision::cpp_rational;

namespace {

std::vector<std::vector<Rational>> rational_points(int n) {
  const std::vector<Rational> values = {Rational(1, 3), Rational(-2, 7), Rational(5, 4), Rational(-1)};
  std::vector<std::vector<Rational>> points;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<Rational> p;
    for (int a = 0; a < n; ++a) p.push_back(values[(i + a) % values.size()]);
    points.push_back(p);
  }
  return points;
}

}  // namespace

TEST_CASE("presets build the expected terms") {
  const auto p = HomogeneousPolynomial::radial(2, 2);  // (x^2 + y^2)^2
  CHECK(p.degree() == 4);
  CHECK(p.terms().size() == 3);
  CHECK(p.terms().at({2, 2}) == 2.0);
  CHECK(parse_polynomial_preset("monomial:5") == HomogeneousPolynomial::monomial(5));
  CHECK(parse_polynomial_preset("radial:3:1").dimension() == 3);
  CHECK(HomogeneousPolynomial::saddle(1).degree() == 4);
}

TEST_CASE("invalid polynomials are rejected") {
  CHECK_THROWS_AS(HomogeneousPolynomial(2, {{{2, 0}, 1.0}, {{1, 0}, 1.0}}), InputError);
  CHECK_THROWS_AS(HomogeneousPolynomial(4, {{{1, 0, 0, 0}, 1.0}}), InputError);
  CHECK_THROWS_AS(HomogeneousPolynomial(1, {{{2}, 0.0}}), InputError);
  CHECK_THROWS_AS(HomogeneousPolynomial(1, {{{0}, 1.0}}), InputError);
  CHECK_THROWS_AS(parse_polynomial_preset("monomial:x"), InputError);
  CHECK_THROWS_AS(parse_polynomial_preset("cubic:2"), InputError);
}

TEST_CASE("homogeneity holds exactly in rational arithmetic") {
  for (const auto& p : {HomogeneousPolynomial::radial(2, 3), HomogeneousPolynomial::saddle(1),
                        HomogeneousPolynomial(3, {{{1, 1, 1}, 3.0}, {{3, 0, 0}, -0.5}, {{0, 1, 2}, 0.25}})}) {
    const Rational r(3, 5);
    for (const auto& x : rational_points(p.dimension())) {
      std::vector<Rational> rx;
      for (const auto& v : x) rx.push_back(r * v);
      Rational rm(1);
      for (int i = 0; i < p.degree(); ++i) rm *= r;
      CHECK(p.evaluate_as<Rational>(rx) == rm * p.evaluate_as<Rational>(x));
    }
  }
}

TEST_CASE("square matches pointwise squaring exactly") {
  const HomogeneousPolynomial p(2, {{{3, 0}, 1.0}, {{1, 2}, -3.0}, {{0, 3}, 0.5}});
  const auto q = p.square();
  CHECK(q.degree() == 6);
  for (const auto& x : rational_points(2)) {
    const Rational v = p.evaluate_as<Rational>(x);
    CHECK(q.evaluate_as<Rational>(x) == v * v);
  }
  const double pt[] = {0.3, -1.7};
  CHECK(q.evaluate(pt) == doctest::Approx(std::pow(p.evaluate(pt), 2)).epsilon(1e-14));
}

TEST_CASE("ellipticity and sign on the sphere") {
  CHECK(is_elliptic(HomogeneousPolynomial::radial(2, 1)));
  CHECK(is_elliptic(HomogeneousPolynomial::monomial(3)));
  CHECK_FALSE(is_elliptic(HomogeneousPolynomial::saddle(1)));
  CHECK(sign_on_sphere(HomogeneousPolynomial::radial(3, 1)) == 1);
  CHECK(sign_on_sphere(HomogeneousPolynomial::monomial(3)) == 0);
  CHECK(sign_on_sphere(HomogeneousPolynomial(2, {{{2, 0}, -1.0}, {{0, 2}, -2.0}})) == -1);
  // x^2 - 4xy + 5y^2 = (x - 2y)^2 + y^2 has minimum (3 - sqrt 8) on the circle.
  const HomogeneousPolynomial q(2, {{{2, 0}, 1.0}, {{1, 1}, -4.0}, {{0, 2}, 5.0}});
  CHECK(ellipticity_margin(q, 1 << 14) == doctest::Approx(3.0 - std::sqrt(8.0)).epsilon(1e-6));
}

TEST_CASE("sphere samples lie on the sphere and nest in 2D") {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& s : sphere_sample(n, 64)) {
      double r2 = 0;
      for (double v : s) r2 += v * v;
      CHECK(r2 == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  const auto coarse = sphere_sample(2, 16);
  const auto fine = sphere_sample(2, 32);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    CHECK(coarse[i][0] == doctest::Approx(fine[2 * i][0]));
    CHECK(coarse[i][1] == doctest::Approx(fine[2 * i][1]));
  }
}
