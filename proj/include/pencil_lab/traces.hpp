#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pencil_lab/linalg.hpp"
#include "pencil_lab/operators.hpp"
#include "pencil_lab/symbolcalc.hpp"

namespace pencil_lab {

// ---------------------------------------------------------------------------
// Words

enum class FactorKind { kA, kB, kP, kAHalf, kL, kAw, kBw, kTPow, kPotential, kCustom };

/// One letter of a trace word. kPotential is the Galerkin matrix of P^2 (the
/// potential inside L), kTPow carries its exponent, kCustom its own matrix.
struct Factor {
  FactorKind kind;
  int exponent = 0;
  std::shared_ptr<const Matrix> custom;

  Factor(FactorKind k, int e = 0, std::shared_ptr<const Matrix> c = nullptr)
      : kind(k), exponent(e), custom(std::move(c)) {}

  static Factor tpow(int j) { return {FactorKind::kTPow, j, nullptr}; }
  static Factor matrix(Matrix m) {
    return {FactorKind::kCustom, 0, std::make_shared<const Matrix>(std::move(m))};
  }
};

inline constexpr std::size_t kMaxWordLength = 12;

class TraceWord {
 public:
  explicit TraceWord(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }

  TraceWord rotated(std::size_t shift) const;
  TraceWord reversed() const;

 private:
  std::vector<Factor> factors_;
};

/// Parses words such as "BA", "PAA", "(PA)^3", "B^2 A", "Ah P Ah", "T4 A".
/// Tokens: A B P L V (potential P^2) Ah (A^{1/2}) Aw Bw T<j>; groups in
/// parentheses; postfix ^k repeats the preceding token or group.
TraceWord parse_word(const std::string& text);

std::string to_string(const TraceWord& word);

/// Symbol-class order of the word (sum of factor orders) for the problem,
/// nullopt when a custom factor is present.
std::optional<double> word_order(const TraceWord& word, const ProblemSpec& spec);

Matrix realize(const Factor& factor, const Discretization& problem);

/// Tr of the left-to-right product of the realized factors.
double trace_word(const TraceWord& word, const Discretization& problem);

/// Linear combination sum_i c_i Tr(w_i).
struct TraceExpression {
  std::string label;
  std::vector<std::pair<double, TraceWord>> terms;
};

double evaluate(const TraceExpression& expr, const Discretization& problem);

/// Common order of all terms, nullopt when terms disagree or are custom.
std::optional<double> expression_order(const TraceExpression& expr, const ProblemSpec& spec);

// ---------------------------------------------------------------------------
// Extrapolation over truncation sweeps

struct TraceReport {
  std::string word;
  std::vector<int> sizes;
  std::vector<double> values;
  double extrapolated = 0.0;
  double error_estimate = 0.0;
  bool fitted = false;           // false: the "no-fit" flag
  std::string model;             // "constant", "known-rate", "free-rate", "no-fit"
  std::optional<double> rate;    // exponent q used in the fit
};

/// Extrapolates values(N) -> N = infinity from the last three sizes.
///
/// With a known leading rate q (from the symbol order), solves exactly for
/// v + c1 N^{-q} + c2 N^{-q-1}. Without one, fits v + c N^{-q} with q >= 1/2
/// (free exponent when the data give q >= 1/2, least squares at q = 1/2
/// otherwise). A tail that is not monotone or does not contract (empirical
/// exponent <= 0) yields the no-fit flag: extrapolated = last value and
/// error_estimate = largest successive difference. Otherwise error_estimate
/// = |extrapolated - last value|, a heuristic Richardson residual.
TraceReport extrapolate(std::vector<int> sizes, std::vector<double> values,
                        std::optional<double> leading_rate = std::nullopt);

/// Empirical exponent q from the last three points, solving
/// (v1-v2)/(v2-v3) = (n1^-q - n2^-q)/(n2^-q - n3^-q); nullopt when the tail
/// is non-monotone or q <= 0.
std::optional<double> empirical_rate(const std::vector<int>& sizes,
                                     const std::vector<double>& values);

/// Builds one Discretization per size (in parallel, bounded by
/// worker_count()) and evaluates every expression; one report per expression.
std::vector<TraceReport> sweep(const ProblemSpec& spec, const std::vector<int>& sizes,
                               const std::vector<TraceExpression>& expressions);

// ---------------------------------------------------------------------------
// Criteria

/// Tr(2B^2 - A), Tr(4B^3 - 3BA), Tr(8B^4 - 8B^2A + A^2) on the pencil pair.
TraceExpression rank_expression(int rank, const ProblemSpec& spec);

double rank2_criterion(const Discretization& problem);
double rank3_criterion(const Discretization& problem);
double rank4_criterion(const Discretization& problem);

inline constexpr double kDefaultVerdictFactor = 5.0;

struct CriterionResult {
  int rank = 0;
  TraceReport report;
  bool traces_defined = false;   // Schatten predictor says the traces exist
  bool hypothesis_ok = false;    // traces_defined and the sign-lemma hypotheses
  std::vector<std::string> warnings;
  std::string verdict;           // "satisfied (negative|positive)", "inconclusive", "hypothesis violated"

  bool satisfied() const { return verdict.rfind("satisfied", 0) == 0; }
};

struct Hypotheses {
  bool traces_defined = false;
  bool lemma = false;
  std::vector<std::string> warnings;
};

Hypotheses rank_hypotheses(int rank, const ProblemSpec& spec);

std::string verdict_for(const TraceReport& report, const Hypotheses& hyp, double verdict_factor);

CriterionResult evaluate_criterion(int rank, const ProblemSpec& spec, const std::vector<int>& sizes,
                                   double verdict_factor = kDefaultVerdictFactor);

// ---------------------------------------------------------------------------
// Identities and inequalities

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_error = 0.0;
};

IdentityCheck make_identity(double lhs, double rhs);

/// Tr A_gamma^ell against gamma^{-ell/(m+1)} Tr A^ell at one size.
IdentityCheck scaling_identity_check(const Discretization& problem, int ell_exp, double gamma,
                                     ScalingMode mode);

/// Same, with both sides extrapolated over a size sweep.
IdentityCheck scaling_identity_sweep(const ProblemSpec& spec, const std::vector<int>& sizes,
                                     int ell_exp, double gamma, ScalingMode mode);

/// Tr(A t^{2m} A) against Tr(A)/(m+1) for P = t^m at one size.
IdentityCheck derivative_identity_check(int m, int size);

/// Same with extrapolation of both sides over the sweep.
IdentityCheck derivative_identity_sweep(int m, const std::vector<int>& sizes);

/// Tr((PA)^3 P^2 A) against (1/2)(m+2)/(m+1) Tr(PA)^3, with P^2 realized as
/// the Galerkin potential of L.
IdentityCheck potential_identity_check(const Discretization& problem);

struct CauchySchwarz {
  double lhs = 0.0;  // Tr(C D^T)
  double rhs = 0.0;  // ||C||_HS ||D||_HS
  bool holds = false;
};

CauchySchwarz cauchy_schwarz_check(const Matrix& c, const Matrix& d);

/// Hilbert-Schmidt gap Tr(C C^T) - Tr(C^2) for C = t^m A (1D monomial problems).
double cauchy_schwarz_gap(const Discretization& problem);

}  // namespace pencil_lab
