#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pencil_lab {

using MultiIndex = std::vector<int>;

/// Homogeneous polynomial P on R^n (1 <= n <= 3) of degree m, stored as a
/// sparse map from exponent multi-index to coefficient. Immutable.
///
/// Every stored multi-index has entry-sum exactly m, at least one term is
/// present and no stored coefficient is zero; the constructor enforces this.
class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial(int dimension, std::map<MultiIndex, double> terms);

  /// Single monomial t^degree in one variable.
  static HomogeneousPolynomial monomial(int degree);
  /// (x_1^2 + ... + x_n^2)^k.
  static HomogeneousPolynomial radial(int dimension, int k);
  /// x_1 x_2 (x_1^2 + x_2^2)^k, a non-elliptic example in two variables.
  static HomogeneousPolynomial saddle(int k);

  int dimension() const noexcept { return dimension_; }
  int degree() const noexcept { return degree_; }
  const std::map<MultiIndex, double>& terms() const noexcept { return terms_; }

  double evaluate(std::span<const double> point) const;

  /// Evaluation over any field-like scalar (used with exact rationals in tests).
  template <typename Scalar>
  Scalar evaluate_as(std::span<const Scalar> point) const;

  /// P^2, degree 2m. Coefficients are convolved in exact rational arithmetic
  /// and rounded once.
  HomogeneousPolynomial square() const;

  bool operator==(const HomogeneousPolynomial&) const = default;

 private:
  int dimension_;
  int degree_;
  std::map<MultiIndex, double> terms_;
};

double evaluate(const HomogeneousPolynomial& poly, std::span<const double> point);
HomogeneousPolynomial square(const HomogeneousPolynomial& poly);

/// Deterministic quasi-uniform sample of the unit sphere S^{n-1}.
/// n=1: {-1, +1}. n=2: 2^k equally spaced angles with 2^k >= samples (so
/// doubling `samples` gives a nested family). n=3: Fibonacci lattice.
std::vector<std::vector<double>> sphere_sample(int dimension, int samples);

/// min |P(sigma)| over sphere_sample(n, samples). Requires samples >= 8.
double ellipticity_margin(const HomogeneousPolynomial& poly, int samples);

inline constexpr double kEllipticityThreshold = 1e-8;
inline constexpr int kDefaultSphereSamples = 1024;

bool is_elliptic(const HomogeneousPolynomial& poly, int samples = kDefaultSphereSamples);

/// +1 if P > 0 on the sphere sample, -1 if P < 0 there, 0 if P changes sign
/// or vanishes somewhere on the sample.
int sign_on_sphere(const HomogeneousPolynomial& poly, int samples = kDefaultSphereSamples);

/// Parses a preset: "monomial:m", "radial:n:k", "saddle:k".
HomogeneousPolynomial parse_polynomial_preset(const std::string& text);

std::string to_string(const HomogeneousPolynomial& poly);

// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar HomogeneousPolynomial::evaluate_as(std::span<const Scalar> point) const {
  Scalar total(0);
  for (const auto& [exponents, coeff] : terms_) {
    Scalar term(coeff);
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      for (int e = 0; e < exponents[i]; ++e) term *= point[i];
    }
    total += term;
  }
  return total;
}

}  // namespace pencil_lab
