#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pencil_lab/errors.hpp"
#include "pencil_lab/symbolcalc.hpp"

using namespace pencil_lab;

TEST_CASE("membership follows M p + (k + l) n < 0") {
  // A for m = 2, n = 1: M = -2, k = 1/2, l = 1, so C_p exactly for p > 3/4.
  const auto a = operator_class(-2.0, 2, 1);
  CHECK(a.x_weight == doctest::Approx(0.5));
  CHECK(*min_schatten_index(a) == doctest::Approx(0.75));
  CHECK(schatten_member(a, 1.0));
  CHECK_THROWS_AS(schatten_member(a, 0.5), InputError);
  // A for m = 1 is not trace class: harmonic oscillator eigenvalues 1/(2j+1).
  const auto harmonic = operator_class(-2.0, 1, 1);
  CHECK_FALSE(schatten_member(harmonic, 1.0));
  CHECK(schatten_member(harmonic, 1.01));
  CHECK(truncation_tail_exponent(harmonic) == doctest::Approx(0.0));
  // B in two dimensions with m = 4: M = -1, (k + l) n = 2.5.
  CHECK(*min_schatten_index(operator_class(-1.0, 4, 2)) == doctest::Approx(2.5));
  CHECK_FALSE(min_schatten_index(operator_class(2.0, 2, 1)).has_value());
}

TEST_CASE("composition adds orders and keeps weights") {
  const auto a = operator_class(-2.0, 3, 1);
  const auto b = operator_class(-1.0, 3, 1);
  const auto c = compose_order(a, b);
  CHECK(c.order == doctest::Approx(-3.0));
  CHECK(c.x_weight == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(compose_order(a, operator_class(-1.0, 2, 1)), InputError);
}

TEST_CASE("tail exponent of A^2 for m = 1") {
  // Tr A^2 - Tr_N A^2 = sum_{j >= N} (2j+1)^{-2} ~ 1/(4N).
  CHECK(truncation_tail_exponent(operator_class(-4.0, 1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("Hilbert-Schmidt estimate against closed forms") {
  // n = 1, P = t: (2 pi)^{-1} int int (s + xi^2 + x^2)^{-2} = 1 / (2 s).
  for (double s : {0.5, 1.0, 4.0}) {
    CHECK(hs_estimate_shifted_inverse(HomogeneousPolynomial::monomial(1), s) ==
          doctest::Approx(std::sqrt(0.5 / s)).epsilon(1e-5));
  }
  // n = 2, P = |x|^2: (2 pi)^{-2} pi int dx / (s + |x|^4) = pi / (8 sqrt s).
  const double s = 2.0;
  CHECK(hs_estimate_shifted_inverse(HomogeneousPolynomial::radial(2, 1), s) ==
        doctest::Approx(std::sqrt(std::numbers::pi / (8.0 * std::sqrt(s)))).epsilon(1e-5));
}

TEST_CASE("Hilbert-Schmidt estimate rejects a non-elliptic symbol") {
  CHECK_THROWS_AS(hs_estimate_shifted_inverse(HomogeneousPolynomial::saddle(0), 1.0), Error);
}

TEST_CASE("the boundary case is excluded despite roundoff") {
  // Weighted A for m = 3, ell = 1: order -2 + 2/3, (k + l) n = 4/3.
  CHECK_FALSE(schatten_member(operator_class(-2.0 + 2.0 / 3.0, 3, 1), 1.0));
  CHECK(schatten_member(operator_class(-2.0 + 2.0 / 3.0, 3, 1), 1.0 + 1e-9));
}

TEST_CASE("Hilbert-Schmidt estimate decreases with the shift") {
  const auto p = HomogeneousPolynomial::monomial(1);
  CHECK(hs_estimate_shifted_inverse(p, 2.0) < hs_estimate_shifted_inverse(p, 1.0));
}
