#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pencil_lab/errors.hpp"
#include "pencil_lab/traces.hpp"

using namespace pencil_lab;

namespace {

ProblemSpec monomial(int m) { return {HomogeneousPolynomial::monomial(m), std::nullopt, std::nullopt}; }

double harmonic_partial(int n, int power) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += std::pow(2.0 * j + 1.0, -power);
  return s;
}

}  // namespace

TEST_CASE("word parsing") {
  CHECK(parse_word("BA").size() == 2);
  CHECK(parse_word("(PA)^3").size() == 6);
  CHECK(parse_word("B^2 A").size() == 3);
  CHECK(parse_word("Ah P Ah").size() == 3);
  CHECK(parse_word("T4 A").factors()[0].exponent == 4);
  CHECK(to_string(parse_word("B B A")) == to_string(parse_word("B^2A")));
  CHECK_THROWS_AS(parse_word(""), InputError);
  CHECK_THROWS_AS(parse_word("AQ"), InputError);
  CHECK_THROWS_AS(parse_word("(AB"), InputError);
  CHECK_THROWS_AS(parse_word("A^13"), InputError);
}

TEST_CASE("harmonic oscillator traces equal partial odd harmonic sums") {
  const Discretization d(monomial(1), 50);
  CHECK(trace_word(parse_word("A"), d) == doctest::Approx(harmonic_partial(50, 1)).epsilon(1e-13));
  CHECK(trace_word(parse_word("A^2"), d) == doctest::Approx(harmonic_partial(50, 2)).epsilon(1e-13));
  CHECK(trace_word(parse_word("A^3"), d) == doctest::Approx(harmonic_partial(50, 3)).epsilon(1e-13));
}

TEST_CASE("trace words match direct products and are rotation invariant") {
  const Discretization d(monomial(3), 40);
  const Matrix& a = d.A().matrix;
  const Matrix& b = d.B().matrix;
  const Matrix& p = d.P().matrix;
  CHECK(trace_word(parse_word("BBA"), d) == doctest::Approx((b * b * a).trace()).epsilon(1e-12));
  CHECK(trace_word(parse_word("PAPA"), d) == doctest::Approx((p * a * p * a).trace()).epsilon(1e-12));
  const auto w = parse_word("B A P A B");
  const double base = trace_word(w, d);
  for (std::size_t s = 1; s < w.size(); ++s) CHECK(trace_word(w.rotated(s), d) == doctest::Approx(base).epsilon(1e-10));
  CHECK(trace_word(w.reversed(), d) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("word orders follow the symbol calculus") {
  const auto spec = monomial(4);
  CHECK(*word_order(parse_word("A"), spec) == doctest::Approx(-2.0));
  CHECK(*word_order(parse_word("BBA"), spec) == doctest::Approx(-4.0));
  CHECK(*word_order(parse_word("PA"), spec) == doctest::Approx(-1.0));
  CHECK(*word_order(parse_word("T2 A"), spec) == doctest::Approx(-1.5));
}

TEST_CASE("extrapolation with a known rate recovers synthetic limits") {
  const std::vector<int> sizes = {100, 200, 400};
  std::vector<double> values;
  for (int n : sizes) values.push_back(2.5 + 3.0 * std::pow(n, -1.5) - 7.0 * std::pow(n, -2.5));
  const auto r = extrapolate(sizes, values, 1.5);
  CHECK(r.fitted);
  CHECK(r.model == "known-rate");
  CHECK(r.extrapolated == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("free-rate extrapolation and the no-fit flag") {
  const std::vector<int> sizes = {50, 100, 200};
  std::vector<double> values;
  for (int n : sizes) values.push_back(-1.0 + 0.4 * std::pow(n, -0.8));
  const auto r = extrapolate(sizes, values);
  CHECK(r.fitted);
  CHECK(r.extrapolated == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(*empirical_rate(sizes, values) == doctest::Approx(0.8).epsilon(1e-9));

  const auto bad = extrapolate(sizes, {1.0, 1.2, 1.0});
  CHECK_FALSE(bad.fitted);
  CHECK(bad.model == "no-fit");
  CHECK(bad.extrapolated == 1.0);
  CHECK(bad.error_estimate == doctest::Approx(0.2));
}

TEST_CASE("Tr A^2 for the harmonic oscillator extrapolates to pi^2/8") {
  const auto reports = sweep(monomial(1), {100, 200, 400}, {{"A^2", {{1.0, parse_word("A^2")}}}});
  CHECK(std::abs(reports[0].extrapolated - std::numbers::pi * std::numbers::pi / 8.0) < 1e-6);
}

TEST_CASE("scaling and derivative identities") {
  const Discretization d(monomial(2), 200);
  for (double gamma : {0.5, 2.0, 10.0}) {
    CHECK(scaling_identity_check(d, 2, gamma, ScalingMode::kIsospectral).rel_error < 1e-12);
  }
  CHECK(derivative_identity_sweep(3, {200, 300, 400}).rel_error < 1e-4);
}

TEST_CASE("Cauchy-Schwarz for Hilbert-Schmidt pairs") {
  Matrix c(3, 3), e(3, 3);
  c << 1, 2, 0, -1, 3, 1, 0, 0, 2;
  e << 0, 1, 1, 2, -1, 0, 1, 1, 1;
  const auto cs = cauchy_schwarz_check(c, e);
  CHECK(cs.holds);
  CHECK(cs.lhs == doctest::Approx((c * e.transpose()).trace()));
  CHECK(cs.rhs == doctest::Approx(c.norm() * e.norm()));
  CHECK(cauchy_schwarz_check(c, 2.0 * c).lhs == doctest::Approx(cauchy_schwarz_check(c, 2.0 * c).rhs));
  CHECK(cauchy_schwarz_gap(Discretization(monomial(3), 80)) >= 0.0);
}

TEST_CASE("rank-2 criterion for P = t^2 is negative") {
  const auto r = evaluate_criterion(2, monomial(2), {100, 200, 400});
  CHECK(r.hypothesis_ok);
  CHECK(r.verdict == "satisfied (negative)");
  const auto harmonic = evaluate_criterion(2, monomial(1), {100, 200, 400});
  CHECK_FALSE(harmonic.traces_defined);
  CHECK(harmonic.verdict == "hypothesis violated");
}
