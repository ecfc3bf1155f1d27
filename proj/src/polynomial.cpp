#include "pencil_lab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "pencil_lab/errors.hpp"

namespace pencil_lab {

namespace {

using Rational = boost::multiprecision::cpp_rational;

long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int parse_int(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("invalid integer '" + s + "' in polynomial preset '" + context + "'");
  }
}

}  // namespace

HomogeneousPolynomial::HomogeneousPolynomial(int dimension, std::map<MultiIndex, double> terms)
    : dimension_(dimension), degree_(0) {
  if (dimension < 1 || dimension > 3) {
    throw InputError("polynomial dimension must be 1, 2 or 3 (got " + std::to_string(dimension) +
                     ")");
  }
  for (const auto& [exponents, coeff] : terms) {
    if (coeff == 0.0) continue;
    if (!std::isfinite(coeff)) throw InputError("polynomial coefficient is not finite");
    if (static_cast<int>(exponents.size()) != dimension) {
      throw InputError("multi-index length does not match polynomial dimension");
    }
    if (std::any_of(exponents.begin(), exponents.end(), [](int e) { return e < 0; })) {
      throw InputError("negative exponent in polynomial term");
    }
    terms_.emplace(exponents, coeff);
  }
  if (terms_.empty()) throw InputError("polynomial has no nonzero terms");

  auto degree_of = [](const MultiIndex& e) {
    int s = 0;
    for (int v : e) s += v;
    return s;
  };
  degree_ = degree_of(terms_.begin()->first);
  for (const auto& [exponents, coeff] : terms_) {
    if (degree_of(exponents) != degree_) throw InputError("polynomial is not homogeneous");
  }
  if (degree_ < 1) throw InputError("polynomial degree must be positive");
}

HomogeneousPolynomial HomogeneousPolynomial::monomial(int degree) {
  if (degree < 1) throw InputError("monomial degree must be positive");
  return HomogeneousPolynomial(1, {{MultiIndex{degree}, 1.0}});
}

HomogeneousPolynomial HomogeneousPolynomial::radial(int dimension, int k) {
  if (k < 1) throw InputError("radial exponent k must be positive");
  // Multinomial expansion of (x_1^2 + ... + x_n^2)^k.
  std::map<MultiIndex, double> terms;
  if (dimension == 1) {
    terms[{2 * k}] = 1.0;
  } else if (dimension == 2) {
    for (int i = 0; i <= k; ++i) terms[{2 * i, 2 * (k - i)}] = static_cast<double>(binomial(k, i));
  } else if (dimension == 3) {
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; i + j <= k; ++j) {
        const double c = static_cast<double>(binomial(k, i) * binomial(k - i, j));
        terms[{2 * i, 2 * j, 2 * (k - i - j)}] = c;
      }
    }
  }
  return HomogeneousPolynomial(dimension, std::move(terms));
}

HomogeneousPolynomial HomogeneousPolynomial::saddle(int k) {
  if (k < 0) throw InputError("saddle exponent k must be nonnegative");
  std::map<MultiIndex, double> terms;
  for (int i = 0; i <= k; ++i) {
    terms[{2 * i + 1, 2 * (k - i) + 1}] = static_cast<double>(binomial(k, i));
  }
  return HomogeneousPolynomial(2, std::move(terms));
}

double HomogeneousPolynomial::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dimension_) {
    throw InputError("evaluation point has length " + std::to_string(point.size()) +
                     ", polynomial dimension is " + std::to_string(dimension_));
  }
  return evaluate_as<double>(point);
}

HomogeneousPolynomial HomogeneousPolynomial::square() const {
  std::map<MultiIndex, Rational> exact;
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : terms_) {
      MultiIndex e(e1.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      // double -> rational is exact (every double is a dyadic rational)
      exact[e] += Rational(c1) * Rational(c2);
    }
  }
  std::map<MultiIndex, double> rounded;
  for (const auto& [e, c] : exact) {
    if (c != 0) rounded.emplace(e, c.convert_to<double>());
  }
  return HomogeneousPolynomial(dimension_, std::move(rounded));
}

double evaluate(const HomogeneousPolynomial& poly, std::span<const double> point) {
  return poly.evaluate(point);
}

HomogeneousPolynomial square(const HomogeneousPolynomial& poly) { return poly.square(); }

std::vector<std::vector<double>> sphere_sample(int dimension, int samples) {
  std::vector<std::vector<double>> pts;
  if (dimension == 1) {
    pts = {{-1.0}, {1.0}};
  } else if (dimension == 2) {
    int count = 1;
    while (count < samples) count *= 2;
    pts.reserve(count);
    for (int j = 0; j < count; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / count;
      pts.push_back({std::cos(theta), std::sin(theta)});
    }
  } else if (dimension == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    pts.reserve(samples);
    for (int j = 0; j < samples; ++j) {
      const double z = 1.0 - 2.0 * (j + 0.5) / samples;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * j;
      pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  } else {
    throw InputError("sphere sampling supports dimensions 1 to 3");
  }
  return pts;
}

double ellipticity_margin(const HomogeneousPolynomial& poly, int samples) {
  if (samples < 8) throw InputError("ellipticity_margin needs at least 8 samples");
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& p : sphere_sample(poly.dimension(), samples)) {
    margin = std::min(margin, std::abs(poly.evaluate(p)));
  }
  return margin;
}

bool is_elliptic(const HomogeneousPolynomial& poly, int samples) {
  return ellipticity_margin(poly, samples) > kEllipticityThreshold;
}

int sign_on_sphere(const HomogeneousPolynomial& poly, int samples) {
  bool pos = false;
  bool neg = false;
  for (const auto& p : sphere_sample(poly.dimension(), samples)) {
    const double v = poly.evaluate(p);
    if (std::abs(v) <= kEllipticityThreshold) return 0;
    (v > 0 ? pos : neg) = true;
  }
  if (pos && neg) return 0;
  return pos ? 1 : -1;
}

HomogeneousPolynomial parse_polynomial_preset(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw InputError("empty polynomial preset");
  const std::string& kind = parts[0];
  if (kind == "monomial" && parts.size() == 2) {
    return HomogeneousPolynomial::monomial(parse_int(parts[1], text));
  }
  if (kind == "radial" && parts.size() == 3) {
    return HomogeneousPolynomial::radial(parse_int(parts[1], text), parse_int(parts[2], text));
  }
  if (kind == "saddle" && parts.size() == 2) {
    return HomogeneousPolynomial::saddle(parse_int(parts[1], text));
  }
  throw InputError("unknown polynomial preset '" + text +
                   "' (expected monomial:m, radial:n:k or saddle:k)");
}

std::string to_string(const HomogeneousPolynomial& poly) {
  static const char* names[] = {"x1", "x2", "x3"};
  std::ostringstream os;
  bool first = true;
  for (const auto& [exponents, coeff] : poly.terms()) {
    if (!first) os << (coeff < 0 ? " - " : " + ");
    else if (coeff < 0) os << "-";
    first = false;
    const double a = std::abs(coeff);
    bool wrote = false;
    if (a != 1.0) {
      os << a;
      wrote = true;
    }
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      if (exponents[i] == 0) continue;
      if (wrote) os << "*";
      os << (poly.dimension() == 1 ? "t" : names[i]);
      if (exponents[i] > 1) os << "^" << exponents[i];
      wrote = true;
    }
    if (!wrote) os << "1";
  }
  return os.str();
}

}  // namespace pencil_lab
