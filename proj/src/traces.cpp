#include "pencil_lab/traces.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "pencil_lab/errors.hpp"
#include "pencil_lab/parallel.hpp"

namespace pencil_lab {

// ---------------------------------------------------------------------------
// Words

TraceWord::TraceWord(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InputError("trace word must have at least one factor");
  if (factors_.size() > kMaxWordLength) {
    throw InputError("trace word longer than " + std::to_string(kMaxWordLength) + " factors");
  }
  for (const auto& f : factors_) {
    if (f.kind == FactorKind::kCustom && !f.custom) throw InputError("custom factor without matrix");
    if (f.kind == FactorKind::kTPow && f.exponent < 0) throw InputError("negative t-power");
  }
}

TraceWord TraceWord::rotated(std::size_t shift) const {
  std::vector<Factor> out(factors_);
  std::rotate(out.begin(), out.begin() + static_cast<long>(shift % out.size()), out.end());
  return TraceWord(std::move(out));
}

TraceWord TraceWord::reversed() const {
  std::vector<Factor> out(factors_.rbegin(), factors_.rend());
  for (auto& f : out) {
    if (f.kind == FactorKind::kCustom) {
      f.custom = std::make_shared<const Matrix>(f.custom->transpose());
    }
  }
  return TraceWord(std::move(out));
}

namespace {

class WordParser {
 public:
  explicit WordParser(const std::string& text) : text_(text) {}

  std::vector<Factor> parse() {
    auto out = sequence();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (out.empty()) fail("empty word");
    return out;
  }

 private:
  std::vector<Factor> sequence() {
    std::vector<Factor> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] == ')') break;
      auto item = atom();
      const int times = repeat();
      for (int i = 0; i < times; ++i) out.insert(out.end(), item.begin(), item.end());
      if (out.size() > kMaxWordLength) fail("word longer than " + std::to_string(kMaxWordLength));
    }
    return out;
  }

  std::vector<Factor> atom() {
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = sequence();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("missing ')'");
      ++pos_;
      if (inner.empty()) fail("empty group");
      return inner;
    }
    if (c == '*') {
      ++pos_;
      skip_space();
      if (pos_ >= text_.size()) fail("dangling '*'");
      return atom();
    }
    ++pos_;
    auto next_is = [&](char ch) { return pos_ < text_.size() && text_[pos_] == ch; };
    switch (c) {
      case 'A':
        if (text_.compare(pos_, 5, "_half") == 0) {
          pos_ += 5;
          return {{FactorKind::kAHalf}};
        }
        if (next_is('h')) { ++pos_; return {{FactorKind::kAHalf}}; }
        if (next_is('w')) { ++pos_; return {{FactorKind::kAw}}; }
        return {{FactorKind::kA}};
      case 'B':
        if (next_is('w')) { ++pos_; return {{FactorKind::kBw}}; }
        return {{FactorKind::kB}};
      case 'P': return {{FactorKind::kP}};
      case 'L': return {{FactorKind::kL}};
      case 'V': return {{FactorKind::kPotential}};
      case 'T': {
        const int j = number();
        return {Factor::tpow(j)};
      }
      default: fail("unknown factor '" + std::string(1, c) + "'");
    }
    return {};
  }

  int repeat() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      const int k = number();
      if (k < 1) fail("exponent must be >= 1");
      return k;
    }
    return 1;
  }

  int number() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoi(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("cannot parse trace word '" + text_ + "': " + what);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

TraceWord parse_word(const std::string& text) { return TraceWord(WordParser(text).parse()); }

std::string to_string(const TraceWord& word) {
  std::ostringstream os;
  bool first = true;
  for (const auto& f : word.factors()) {
    if (!first) os << ' ';
    first = false;
    switch (f.kind) {
      case FactorKind::kA: os << "A"; break;
      case FactorKind::kB: os << "B"; break;
      case FactorKind::kP: os << "P"; break;
      case FactorKind::kAHalf: os << "Ah"; break;
      case FactorKind::kL: os << "L"; break;
      case FactorKind::kAw: os << "Aw"; break;
      case FactorKind::kBw: os << "Bw"; break;
      case FactorKind::kTPow: os << "T" << f.exponent; break;
      case FactorKind::kPotential: os << "V"; break;
      case FactorKind::kCustom: os << "C"; break;
    }
  }
  return os.str();
}

std::optional<double> word_order(const TraceWord& word, const ProblemSpec& spec) {
  const double m = spec.degree();
  const double ell = spec.ell.value_or(0);
  double order = 0.0;
  for (const auto& f : word.factors()) {
    switch (f.kind) {
      case FactorKind::kA: order += -2.0; break;
      case FactorKind::kB: order += -1.0; break;
      case FactorKind::kP: order += 1.0; break;
      case FactorKind::kAHalf: order += -1.0; break;
      case FactorKind::kL: order += 2.0; break;
      case FactorKind::kPotential: order += 2.0; break;
      case FactorKind::kAw: order += -2.0 + 2.0 * ell / m; break;
      case FactorKind::kBw: order += -1.0 + ell / m; break;
      case FactorKind::kTPow: order += f.exponent / m; break;
      case FactorKind::kCustom: return std::nullopt;
    }
  }
  return order;
}

Matrix realize(const Factor& factor, const Discretization& problem) {
  switch (factor.kind) {
    case FactorKind::kA: return problem.A().matrix;
    case FactorKind::kB: return problem.B().matrix;
    case FactorKind::kP: return problem.P().matrix;
    case FactorKind::kAHalf: return problem.A_half().matrix;
    case FactorKind::kL: return problem.L().matrix;
    case FactorKind::kPotential: return problem.potential().matrix;
    case FactorKind::kAw: return problem.A_w().matrix;
    case FactorKind::kBw: return problem.B_w().matrix;
    case FactorKind::kTPow: return problem.t_power(factor.exponent).matrix;
    case FactorKind::kCustom:
      if (factor.custom->rows() != problem.dim() || factor.custom->cols() != problem.dim()) {
        throw InputError("custom factor does not match the basis dimension");
      }
      return *factor.custom;
  }
  throw InputError("unknown factor kind");
}

namespace {

// Realized factors of one discretization, shared across the words of an
// expression so each operator is materialized once.
class FactorCache {
 public:
  explicit FactorCache(const Discretization& problem) : problem_(problem) {}

  const Matrix& get(const Factor& f) {
    if (f.kind == FactorKind::kCustom) {
      realize(f, problem_);  // validates shape
      return *f.custom;
    }
    const auto key = std::make_pair(static_cast<int>(f.kind), f.exponent);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, realize(f, problem_)).first;
    return it->second;
  }

 private:
  const Discretization& problem_;
  std::map<std::pair<int, int>, Matrix> cache_;
};

double trace_with(const TraceWord& word, FactorCache& cache) {
  const auto& fs = word.factors();
  if (fs.size() == 1) return cache.get(fs[0]).trace();
  Matrix acc = cache.get(fs[0]);
  for (std::size_t i = 1; i + 1 < fs.size(); ++i) {
    Matrix next = acc * cache.get(fs[i]);
    acc.swap(next);
  }
  return linalg::trace_of_product(acc, cache.get(fs.back()));
}

}  // namespace

double trace_word(const TraceWord& word, const Discretization& problem) {
  FactorCache cache(problem);
  return trace_with(word, cache);
}

double evaluate(const TraceExpression& expr, const Discretization& problem) {
  FactorCache cache(problem);
  double total = 0.0;
  for (const auto& [coeff, word] : expr.terms) total += coeff * trace_with(word, cache);
  return total;
}

std::optional<double> expression_order(const TraceExpression& expr, const ProblemSpec& spec) {
  std::optional<double> order;
  for (const auto& [coeff, word] : expr.terms) {
    const auto o = word_order(word, spec);
    if (!o) return std::nullopt;
    if (order && std::abs(*order - *o) > 1e-12) return std::nullopt;
    order = o;
  }
  return order;
}

// ---------------------------------------------------------------------------
// Extrapolation

namespace {

double shape_ratio(double n1, double n2, double n3, double q) {
  return (std::pow(n1, -q) - std::pow(n2, -q)) / (std::pow(n2, -q) - std::pow(n3, -q));
}

double max_successive_difference(const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    worst = std::max(worst, std::abs(values[i] - values[i - 1]));
  }
  return worst;
}

}  // namespace

std::optional<double> empirical_rate(const std::vector<int>& sizes,
                                     const std::vector<double>& values) {
  const std::size_t k = sizes.size();
  if (k < 3) return std::nullopt;
  const double n1 = sizes[k - 3], n2 = sizes[k - 2], n3 = sizes[k - 1];
  const double d1 = values[k - 2] - values[k - 3];
  const double d2 = values[k - 1] - values[k - 2];
  if (d1 == 0.0 || d2 == 0.0 || (d1 > 0) != (d2 > 0)) return std::nullopt;
  const double target = d1 / d2;
  // shape_ratio increases with q from ln(n2/n1)/ln(n3/n2) at q -> 0.
  const double at_zero = std::log(n2 / n1) / std::log(n3 / n2);
  if (!(target > at_zero)) return std::nullopt;
  double lo = 1e-9, hi = 1.0;
  while (shape_ratio(n1, n2, n3, hi) < target) {
    hi *= 2.0;
    if (hi > 1e3) return hi;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shape_ratio(n1, n2, n3, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TraceReport extrapolate(std::vector<int> sizes, std::vector<double> values,
                        std::optional<double> leading_rate) {
  if (sizes.size() != values.size()) throw InputError("extrapolate: sizes and values differ in length");
  if (sizes.size() < 3) throw InputError("extrapolate needs at least 3 sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw InputError("extrapolate: sizes must be strictly increasing");
  }
  if (sizes.front() <= 0) throw InputError("extrapolate: sizes must be positive");
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError("extrapolate: non-finite trace value");
  }

  TraceReport r;
  r.sizes = std::move(sizes);
  r.values = std::move(values);
  const std::size_t k = r.sizes.size();
  const double last = r.values.back();

  auto no_fit = [&] {
    r.fitted = false;
    r.model = "no-fit";
    r.extrapolated = last;
    r.error_estimate = max_successive_difference(r.values);
    r.rate.reset();
    return r;
  };

  const double d1 = r.values[k - 2] - r.values[k - 3];
  const double d2 = r.values[k - 1] - r.values[k - 2];
  const double scale = std::max({std::abs(r.values[k - 3]), std::abs(r.values[k - 2]), std::abs(last)});
  if (std::abs(d1) <= 1e-15 * scale && std::abs(d2) <= 1e-15 * scale) {
    r.fitted = true;
    r.model = "constant";
    r.extrapolated = last;
    r.error_estimate = std::max(std::abs(d1), std::abs(d2));
    return r;
  }

  const auto empirical = empirical_rate(r.sizes, r.values);
  if (!empirical) return no_fit();

  const double n1 = r.sizes[k - 3], n2 = r.sizes[k - 2], n3 = r.sizes[k - 1];
  const Eigen::Vector3d v(r.values[k - 3], r.values[k - 2], last);

  if (leading_rate) {
    const double q = *leading_rate;
    if (!(q > 0.0)) return no_fit();
    Eigen::Matrix3d m;
    m << 1.0, std::pow(n1, -q), std::pow(n1, -q - 1.0),
         1.0, std::pow(n2, -q), std::pow(n2, -q - 1.0),
         1.0, std::pow(n3, -q), std::pow(n3, -q - 1.0);
    const Eigen::Vector3d coef = m.fullPivLu().solve(v);
    r.model = "known-rate";
    r.rate = q;
    r.extrapolated = coef[0];
  } else if (*empirical >= 0.5) {
    const double q = *empirical;
    const double c = (v[1] - v[2]) / (std::pow(n2, -q) - std::pow(n3, -q));
    r.model = "free-rate";
    r.rate = q;
    r.extrapolated = last - c * std::pow(n3, -q);
  } else {
    // Constrained fit at the boundary q = 1/2, least squares on 3 points.
    const double q = 0.5;
    Eigen::Matrix<double, 3, 2> m;
    m << 1.0, std::pow(n1, -q), 1.0, std::pow(n2, -q), 1.0, std::pow(n3, -q);
    const Eigen::Vector2d coef = m.colPivHouseholderQr().solve(v);
    r.model = "free-rate";
    r.rate = q;
    r.extrapolated = coef[0];
  }
  if (!std::isfinite(r.extrapolated)) return no_fit();
  r.fitted = true;
  r.error_estimate = std::abs(r.extrapolated - last);
  return r;
}

std::vector<TraceReport> sweep(const ProblemSpec& spec, const std::vector<int>& sizes,
                               const std::vector<TraceExpression>& expressions) {
  std::vector<std::vector<double>> values(expressions.size(), std::vector<double>(sizes.size()));
  parallel_for(sizes.size(), [&](std::size_t i) {
    const Discretization problem(spec, sizes[i]);
    for (std::size_t e = 0; e < expressions.size(); ++e) {
      values[e][i] = evaluate(expressions[e], problem);
    }
  });
  std::vector<TraceReport> reports;
  reports.reserve(expressions.size());
  for (std::size_t e = 0; e < expressions.size(); ++e) {
    std::optional<double> rate;
    if (const auto order = expression_order(expressions[e], spec)) {
      rate = truncation_tail_exponent(operator_class(*order, spec.degree(), spec.dimension()));
    }
    if (sizes.size() >= 3) {
      reports.push_back(extrapolate(sizes, values[e], rate));
    } else {
      TraceReport r;
      r.sizes = sizes;
      r.values = values[e];
      r.extrapolated = values[e].back();
      r.error_estimate = max_successive_difference(values[e]);
      r.model = "no-fit";
      reports.push_back(std::move(r));
    }
    reports.back().word = expressions[e].label;
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Criteria

TraceExpression rank_expression(int rank, const ProblemSpec& spec) {
  const Factor a{spec.weighted() ? FactorKind::kAw : FactorKind::kA};
  const Factor b{spec.weighted() ? FactorKind::kBw : FactorKind::kB};
  auto w = [](std::initializer_list<Factor> fs) { return TraceWord(std::vector<Factor>(fs)); };
  switch (rank) {
    case 2: return {"Tr(2B^2 - A)", {{2.0, w({b, b})}, {-1.0, w({a})}}};
    case 3: return {"Tr(4B^3 - 3BA)", {{4.0, w({b, b, b})}, {-3.0, w({b, a})}}};
    case 4:
      return {"Tr(8B^4 - 8B^2A + A^2)", {{8.0, w({b, b, b, b})}, {-8.0, w({b, b, a})}, {1.0, w({a, a})}}};
    default: throw InputError("criterion rank must be 2, 3 or 4");
  }
}

double rank2_criterion(const Discretization& problem) {
  return evaluate(rank_expression(2, problem.spec()), problem);
}

double rank3_criterion(const Discretization& problem) {
  return evaluate(rank_expression(3, problem.spec()), problem);
}

double rank4_criterion(const Discretization& problem) {
  return evaluate(rank_expression(4, problem.spec()), problem);
}

Hypotheses rank_hypotheses(int rank, const ProblemSpec& spec) {
  Hypotheses h;
  const int n = spec.dimension();
  const int m = spec.degree();
  const double ell = spec.ell.value_or(0);
  const double order_a = spec.weighted() ? -2.0 + 2.0 * ell / m : -2.0;
  const double order_b = spec.weighted() ? -1.0 + ell / m : -1.0;
  auto member = [&](double order, double p) {
    return schatten_member(operator_class(order, m, n), p);
  };

  const bool elliptic = is_elliptic(spec.poly);
  if (!elliptic) h.warnings.push_back("P is not elliptic on the sphere sample; the Schatten predictor does not apply");

  switch (rank) {
    case 2:
      h.traces_defined = member(order_a, 1.0) && member(order_b, 2.0);
      if (spec.weighted()) {
        h.lemma = 2 * ell + 1 < m;
        if (!h.lemma) h.warnings.push_back("weighted sign bound needs 2*ell + 1 < m");
      } else {
        h.lemma = m > 1 && n == 1;
        if (n != 1) h.warnings.push_back("rank-2 sign bound is established for n = 1 only");
      }
      break;
    case 3: {
      h.traces_defined = member(1.5 * order_a, 1.0) && member(3.0 * order_b, 1.0);
      const int sign = sign_on_sphere(spec.poly);
      h.lemma = !spec.weighted() && n == 2 && m >= 4 && sign > 0;
      if (spec.weighted()) h.warnings.push_back("rank-3 bound is not established for weighted problems");
      if (n != 2 || m < 4) h.warnings.push_back("rank-3 sign bound needs n = 2 and m >= 4");
      if (sign < 0) h.warnings.push_back("P is negative on the sphere; rerun with -P");
      if (sign == 0 && elliptic) h.warnings.push_back("P changes sign on the sphere sample");
      break;
    }
    case 4:
      h.traces_defined = member(order_a, 2.0) && member(2.0 * order_b, 2.0);
      h.lemma = !spec.weighted() && n <= 3 && m >= 6;
      if (spec.weighted()) h.warnings.push_back("rank-4 bound is not established for weighted problems");
      if (m < 6) h.warnings.push_back("rank-4 sign bound needs m >= 6");
      if (n == 1) h.warnings.push_back("n = 1: rank-4 value reported for completeness; the rank-2 criterion is the relevant one");
      break;
    default: throw InputError("criterion rank must be 2, 3 or 4");
  }
  if (!elliptic) h.traces_defined = false;
  if (!h.traces_defined) h.warnings.push_back("Schatten predictor: the traces are not defined in the continuum");
  return h;
}

std::string verdict_for(const TraceReport& report, const Hypotheses& hyp, double verdict_factor) {
  if (!hyp.traces_defined || !hyp.lemma) return "hypothesis violated";
  if (!report.fitted || !(std::abs(report.extrapolated) > verdict_factor * report.error_estimate)) {
    return "inconclusive";
  }
  return report.extrapolated < 0 ? "satisfied (negative)" : "satisfied (positive)";
}

CriterionResult evaluate_criterion(int rank, const ProblemSpec& spec, const std::vector<int>& sizes,
                                   double verdict_factor) {
  CriterionResult out;
  out.rank = rank;
  out.report = sweep(spec, sizes, {rank_expression(rank, spec)}).front();
  auto hyp = rank_hypotheses(rank, spec);
  out.traces_defined = hyp.traces_defined;
  out.hypothesis_ok = hyp.traces_defined && hyp.lemma;
  out.verdict = verdict_for(out.report, hyp, verdict_factor);
  out.warnings = std::move(hyp.warnings);
  return out;
}

// ---------------------------------------------------------------------------
// Identities and inequalities

IdentityCheck make_identity(double lhs, double rhs) {
  IdentityCheck c{lhs, rhs, 0.0};
  if (lhs != rhs) c.rel_error = std::abs(lhs - rhs) / std::abs(rhs);
  return c;
}

namespace {

double trace_of_power(const Matrix& m, int k) {
  if (k == 1) return m.trace();
  Matrix acc = m;
  for (int i = 2; i < k; ++i) {
    Matrix next = acc * m;
    acc.swap(next);
  }
  return linalg::trace_of_product(acc, m);
}

ProblemSpec unweighted(const ProblemSpec& spec) {
  ProblemSpec out = spec;
  out.ell.reset();
  return out;
}

}  // namespace

IdentityCheck scaling_identity_check(const Discretization& problem, int ell_exp, double gamma,
                                     ScalingMode mode) {
  if (ell_exp < 1) throw InputError("scaling identity needs ell >= 1");
  const int m = problem.spec().degree();
  const auto a_gamma = scale_gamma(problem, gamma, mode);
  const double lhs = trace_of_power(a_gamma.matrix, ell_exp);
  const double rhs = std::pow(gamma, -static_cast<double>(ell_exp) / (m + 1)) *
                     trace_of_power(problem.A().matrix, ell_exp);
  return make_identity(lhs, rhs);
}

IdentityCheck scaling_identity_sweep(const ProblemSpec& spec, const std::vector<int>& sizes,
                                     int ell_exp, double gamma, ScalingMode mode) {
  if (ell_exp < 1) throw InputError("scaling identity needs ell >= 1");
  const auto base = unweighted(spec);
  std::vector<double> lhs(sizes.size()), rhs(sizes.size());
  const int m = spec.degree();
  parallel_for(sizes.size(), [&](std::size_t i) {
    const Discretization problem(base, sizes[i]);
    lhs[i] = trace_of_power(scale_gamma(problem, gamma, mode).matrix, ell_exp);
    rhs[i] = std::pow(gamma, -static_cast<double>(ell_exp) / (m + 1)) *
             trace_of_power(problem.A().matrix, ell_exp);
  });
  if (sizes.size() < 3) return make_identity(lhs.back(), rhs.back());
  const double rate =
      truncation_tail_exponent(operator_class(-2.0 * ell_exp, m, spec.dimension()));
  return make_identity(extrapolate(sizes, lhs, rate).extrapolated,
                       extrapolate(sizes, rhs, rate).extrapolated);
}

IdentityCheck derivative_identity_check(int m, int size) {
  const Discretization problem(ProblemSpec{HomogeneousPolynomial::monomial(m), {}, {}}, size);
  const Matrix& a = problem.A().matrix;
  const Matrix av = a * problem.potential().matrix;
  return make_identity(linalg::trace_of_product(av, a), a.trace() / (m + 1));
}

IdentityCheck derivative_identity_sweep(int m, const std::vector<int>& sizes) {
  const ProblemSpec spec{HomogeneousPolynomial::monomial(m), {}, {}};
  const TraceExpression numerator{"Tr(A V A)", {{1.0, parse_word("A V A")}}};
  const TraceExpression trace_a{"Tr(A)", {{1.0, parse_word("A")}}};
  const auto reports = sweep(spec, sizes, {numerator, trace_a});
  return make_identity(reports[0].extrapolated, reports[1].extrapolated / (m + 1));
}

IdentityCheck potential_identity_check(const Discretization& problem) {
  const int m = problem.spec().degree();
  const Matrix pa = problem.P().matrix * problem.A().matrix;
  const Matrix pa2 = pa * pa;
  const Matrix pa3 = pa2 * pa;
  const Matrix va = problem.potential().matrix * problem.A().matrix;
  const double lhs = linalg::trace_of_product(pa3, va);
  const double rhs = 0.5 * (m + 2.0) / (m + 1.0) * pa3.trace();
  return make_identity(lhs, rhs);
}

CauchySchwarz cauchy_schwarz_check(const Matrix& c, const Matrix& d) {
  if (c.rows() != d.rows() || c.cols() != d.cols()) {
    throw InputError("cauchy_schwarz_check: matrices differ in shape");
  }
  CauchySchwarz out;
  out.lhs = c.cwiseProduct(d).sum();
  out.rhs = c.norm() * d.norm();
  out.holds = out.lhs <= out.rhs + 1e-12 * std::max(out.rhs, std::numeric_limits<double>::min());
  return out;
}

double cauchy_schwarz_gap(const Discretization& problem) {
  if (problem.spec().dimension() != 1) throw InputError("cauchy_schwarz_gap is defined for 1D problems");
  const Matrix c = problem.P().matrix * problem.A().matrix;
  return c.squaredNorm() - linalg::trace_of_product(c, c);
}

}  // namespace pencil_lab
