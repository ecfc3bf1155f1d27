#pragma once

#include <optional>
#include <string>

#include "pencil_lab/polynomial.hpp"

namespace pencil_lab {

/// Anisotropic symbol class S^M_{k,l}: symbols quasi-homogeneous of order M
/// under (x, xi) -> (rho^k x, rho^l xi) on R^n x R^n.
struct SymbolClassSpec {
  double order;     // M
  double x_weight;  // k
  double xi_weight; // l
  int dimension;    // n

  SymbolClassSpec(double order, double x_weight, double xi_weight, int dimension);
};

/// Class of the operators built from -Delta + P^2 with deg P = m: weights
/// (1/m, 1) and the given order (L: 2, A = L^{-1}: -2, P: 1, t^j: j/m).
SymbolClassSpec operator_class(double order, int degree, int dimension);

/// Op S^M_{k,l} is in the Schatten class C_p iff M p + (k + l) n < 0.
bool schatten_member(const SymbolClassSpec& spec, double p);

SymbolClassSpec compose_order(const SymbolClassSpec& a, const SymbolClassSpec& b);

/// (k + l) n / (-M) for M < 0; membership holds for every p strictly above
/// it. nullopt for M >= 0.
std::optional<double> min_schatten_index(const SymbolClassSpec& spec);

/// Rate q in Tr_N(X) = Tr(X) + c N^{-q} + ... for an operator X of the given
/// class, truncated to N basis functions per axis: q = -M/(k+l) - n.
/// Nonpositive q means the trace diverges.
double truncation_tail_exponent(const SymbolClassSpec& spec);

struct QuadratureOptions {
  double relative_tolerance = 1e-6;
  int max_depth = 15;
};

/// Hilbert-Schmidt norm of Op^w(a) for the leading symbol
/// a = (shift + |xi|^2 + P(x)^2)^{-1}, using the Plancherel normalisation
/// ||Op^w(a)||_2^2 = (2 pi)^{-n} int int |a|^2. The xi integral is done in
/// closed form, the x integral by adaptive Gauss-Kronrod in polar
/// coordinates. Throws NumericError when the quadrature does not converge
/// (e.g. the symbol is not square integrable).
double hs_estimate_shifted_inverse(const HomogeneousPolynomial& poly, double shift,
                                   const QuadratureOptions& quad = {});

}  // namespace pencil_lab
