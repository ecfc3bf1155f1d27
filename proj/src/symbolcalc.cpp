#include "pencil_lab/symbolcalc.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pencil_lab/errors.hpp"

namespace pencil_lab {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kPi = std::numbers::pi;

// int_{R^n} (|xi|^2 + c)^{-2} dxi = c^{n/2 - 2} kappa_n
double kappa(int n) {
  switch (n) {
    case 1: return kPi / 2.0;
    case 2: return kPi;
    case 3: return kPi * kPi;
    default: throw InputError("HS estimate supports dimensions 1 to 3");
  }
}

template <typename F>
double integrate_checked(F&& f, double a, double b, const QuadratureOptions& quad,
                         const char* what) {
  double error = 0.0;
  const double value = gauss_kronrod<double, 31>::integrate(f, a, b, quad.max_depth,
                                                            quad.relative_tolerance, &error);
  if (!std::isfinite(value) || error > quad.relative_tolerance * std::abs(value) * 10.0) {
    throw NumericError(std::string("quadrature did not converge (") + what + ")");
  }
  return value;
}

}  // namespace

SymbolClassSpec::SymbolClassSpec(double order, double x_weight, double xi_weight, int dimension)
    : order(order), x_weight(x_weight), xi_weight(xi_weight), dimension(dimension) {
  if (!(x_weight > 0.0) || !(xi_weight > 0.0)) throw InputError("symbol weights must be positive");
  if (dimension < 1) throw InputError("symbol dimension must be >= 1");
}

SymbolClassSpec operator_class(double order, int degree, int dimension) {
  if (degree < 1) throw InputError("degree must be positive");
  return SymbolClassSpec(order, 1.0 / degree, 1.0, dimension);
}

bool schatten_member(const SymbolClassSpec& spec, double p) {
  if (!(p >= 1.0)) throw InputError("Schatten index p must be >= 1");
  // Orders like -2 + 2/3 land on the boundary only up to roundoff; the
  // boundary itself is excluded.
  const double margin = spec.order * p + (spec.x_weight + spec.xi_weight) * spec.dimension;
  const double scale = std::abs(spec.order * p) + (spec.x_weight + spec.xi_weight) * spec.dimension;
  return margin < -1e-12 * scale;
}

SymbolClassSpec compose_order(const SymbolClassSpec& a, const SymbolClassSpec& b) {
  if (a.x_weight != b.x_weight || a.xi_weight != b.xi_weight || a.dimension != b.dimension) {
    throw InputError("compose_order: symbol classes have different weights or dimension");
  }
  return SymbolClassSpec(a.order + b.order, a.x_weight, a.xi_weight, a.dimension);
}

std::optional<double> min_schatten_index(const SymbolClassSpec& spec) {
  if (spec.order >= 0.0) return std::nullopt;
  return (spec.x_weight + spec.xi_weight) * spec.dimension / -spec.order;
}

double truncation_tail_exponent(const SymbolClassSpec& spec) {
  return -spec.order / (spec.x_weight + spec.xi_weight) - spec.dimension;
}

double hs_estimate_shifted_inverse(const HomogeneousPolynomial& poly, double shift,
                                   const QuadratureOptions& quad) {
  if (!(shift > 0.0)) throw InputError("HS estimate needs a positive shift");
  const int n = poly.dimension();
  const int m = poly.degree();
  const double exponent = n / 2.0 - 2.0;

  // int_0^inf r^{n-1} (shift + r^{2m} P(sigma)^2)^{n/2-2} dr
  auto radial = [&](const std::vector<double>& sigma) {
    const double p = poly.evaluate(sigma);
    const double c = p * p;
    auto integrand = [&](double r) {
      if (r == 0.0) return n == 1 ? std::pow(shift, exponent) : 0.0;
      return std::pow(r, n - 1) * std::pow(shift + std::pow(r, 2 * m) * c, exponent);
    };
    // Split at the natural length scale so the adaptive rule sees the knee.
    const double scale = c > 0.0 ? std::pow(shift / c, 1.0 / (2 * m)) : 1.0;
    return integrate_checked(integrand, 0.0, scale, quad, "radial, inner") +
           integrate_checked(integrand, scale, std::numeric_limits<double>::infinity(), quad,
                             "radial, tail");
  };

  double angular = 0.0;
  if (n == 1) {
    angular = radial({1.0}) + radial({-1.0});
  } else if (n == 2) {
    auto f = [&](double theta) { return radial({std::cos(theta), std::sin(theta)}); };
    angular = integrate_checked(f, 0.0, 2.0 * kPi, quad, "angular");
  } else if (n == 3) {
    auto outer = [&](double theta) {
      auto inner = [&](double phi) {
        return radial({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                       std::cos(theta)});
      };
      return std::sin(theta) * integrate_checked(inner, 0.0, 2.0 * kPi, quad, "azimuthal");
    };
    angular = integrate_checked(outer, 0.0, kPi, quad, "polar");
  } else {
    throw InputError("HS estimate supports dimensions 1 to 3");
  }
  const double squared = std::pow(2.0 * kPi, -n) * kappa(n) * angular;
  return std::sqrt(squared);
}

}  // namespace pencil_lab
