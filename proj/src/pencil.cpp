#include "pencil_lab/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pencil_lab/errors.hpp"
#include "pencil_lab/parallel.hpp"

namespace pencil_lab {

Linearization build_linearization(const SpectralOperator& a_half, const SpectralOperator& b) {
  if (a_half.dim() != b.dim()) throw InputError("build_linearization: A^{1/2} and B differ in size");
  if (a_half.basis && b.basis && !(*a_half.basis == *b.basis)) {
    throw InputError("build_linearization: A^{1/2} and B live on different bases");
  }
  const Eigen::Index d = b.dim();
  Linearization lin;
  lin.block = Matrix::Zero(2 * d, 2 * d);
  lin.block.topLeftCorner(d, d) = 2.0 * b.matrix;
  lin.block.topRightCorner(d, d) = a_half.matrix;
  lin.block.bottomLeftCorner(d, d) = -a_half.matrix.transpose();
  return lin;
}

std::vector<EigenCandidate> eigensolve(const Linearization& lin, bool want_vectors,
                                       bool want_error_bounds) {
  const auto eig = linalg::general_eigen(lin.block, want_vectors, want_error_bounds);
  const int n = static_cast<int>(eig.values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    const Complex a = eig.values[i], b = eig.values[j];
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  std::vector<EigenCandidate> out;
  out.reserve(n);
  for (int i : order) {
    out.push_back({eig.values[i], want_vectors ? eig.vector(i) : ComplexVector(),
                   want_error_bounds ? eig.error_bounds[i] : 0.0});
  }
  return out;
}

namespace {

// X * U for real X and complex U, without promoting X.
ComplexMatrix real_times(const Matrix& x, const ComplexMatrix& u) {
  const Matrix re = x * u.real();
  const Matrix im = x * u.imag();
  ComplexMatrix out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

}  // namespace

std::vector<PencilEigenpair> validate_pairs(const std::vector<EigenCandidate>& candidates,
                                            const SpectralOperator& a, const SpectralOperator& b,
                                            double residual_tol, int size, double floor) {
  if (!(residual_tol > 0.0)) throw InputError("residual tolerance must be positive");
  if (a.dim() != b.dim()) throw InputError("validate_pairs: A and B differ in size");
  const int d = b.dim();
  double max_mu = 0.0;
  for (const auto& c : candidates) max_mu = std::max(max_mu, std::abs(c.mu));
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (!(std::abs(c.mu) > floor * max_mu)) continue;
    if (c.vector.size() != 2 * d) throw InputError("validate_pairs: candidate has no eigenvector of size 2d");
    if (c.vector.head(d).norm() == 0.0) continue;
    kept.push_back(i);
  }
  if (kept.empty()) return {};

  ComplexMatrix u(d, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) u.col(k) = candidates[kept[k]].vector.head(d);
  const ComplexMatrix bu = real_times(b.matrix, u);
  const ComplexMatrix au = real_times(a.matrix, u);

  std::vector<PencilEigenpair> out;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Complex mu = candidates[kept[k]].mu;
    const Complex lambda = 1.0 / mu;
    const ComplexVector r = u.col(k) - 2.0 * lambda * bu.col(k) + lambda * lambda * au.col(k);
    const double residual = r.norm() / u.col(k).norm();
    if (!(residual < residual_tol)) continue;
    const double bound = candidates[kept[k]].mu_error_bound / std::norm(mu);
    out.push_back({mu, lambda, u.col(k), residual, size, bound});
  }
  return out;
}

SpectralOperator pencil_A_half(const Discretization& problem) {
  if (!problem.spec().weighted()) return problem.A_half();
  // A_w is only positive semidefinite after roundoff; clip before the root.
  const auto fact = factorize(problem.pencil_A(), false);
  const Vector root = fact.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  Matrix a_half = fact.eigenvectors * root.asDiagonal() * fact.eigenvectors.transpose();
  return SpectralOperator(problem.basis(), std::move(a_half), true);
}

std::vector<PencilEigenpair> solve_pencil(const Discretization& problem, double residual_tol) {
  const auto lin = build_linearization(pencil_A_half(problem), problem.pencil_B());
  return validate_pairs(eigensolve(lin, true, true), problem.pencil_A(), problem.pencil_B(), residual_tol,
                        problem.axis_size());
}

double coefficient_tail_fraction(const ComplexVector& coeffs, const TensorBasis& basis) {
  if (coeffs.size() != basis.total_dim()) throw InputError("coefficient vector does not match basis");
  const double total = coeffs.norm();
  if (total == 0.0) return 0.0;
  double tail = 0.0;
  for (int flat = 0; flat < basis.total_dim(); ++flat) {
    const auto multi = basis.multi_index(flat);
    bool in_tail = false;
    for (int a = 0; a < basis.dimension(); ++a) {
      const int cut = static_cast<int>(std::ceil(0.9 * basis.axes()[a].size));
      if (multi[a] >= cut) in_tail = true;
    }
    if (in_tail) tail += std::norm(coeffs[flat]);
  }
  return std::sqrt(tail) / total;
}

double parity_contamination(const ComplexVector& u, const TensorBasis& basis) {
  if (u.size() != basis.total_dim()) throw InputError("vector does not match basis");
  double even = 0.0, odd = 0.0;
  for (int flat = 0; flat < basis.total_dim(); ++flat) {
    const auto multi = basis.multi_index(flat);
    const int degree = std::accumulate(multi.begin(), multi.end(), 0);
    (degree % 2 == 0 ? even : odd) += std::norm(u[flat]);
  }
  const double total = even + odd;
  if (total == 0.0) return 0.0;
  return std::sqrt(std::min(even, odd) / total);
}

PhysicalEigenfunction recover_physical_eigenfunction(const PencilEigenpair& pair,
                                                     const Discretization& problem,
                                                     const std::vector<std::vector<double>>& grid) {
  const int d = problem.dim();
  if (pair.u.size() != d) throw InputError("eigenpair size does not match the discretization");
  PhysicalEigenfunction out;
  ComplexMatrix u(d, 1);
  u.col(0) = pair.u;
  ComplexVector f = real_times(problem.A_half().matrix, u).col(0);
  f /= f.norm();
  out.coefficients = f;

  ComplexMatrix fm(d, 1);
  fm.col(0) = f;
  const Complex lambda = pair.lambda;
  const ComplexVector r = real_times(problem.L().matrix, fm).col(0) -
                          2.0 * lambda * real_times(problem.physical_coupling().matrix, fm).col(0) +
                          lambda * lambda * real_times(problem.physical_mass().matrix, fm).col(0);
  out.direct_residual = r.norm();
  out.tail_fraction = coefficient_tail_fraction(f, *problem.basis());

  out.grid = grid;
  if (!grid.empty()) {
    const Vector re = f.real();
    const Vector im = f.imag();
    const auto sr = synthesize(std::span<const double>(re.data(), re.size()), *problem.basis(), grid);
    const auto si = synthesize(std::span<const double>(im.data(), im.size()), *problem.basis(), grid);
    out.samples.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.samples[i] = {sr[i], si[i]};
  }
  return out;
}

double conjugate_pairing_distance(const std::vector<Complex>& values) {
  const std::vector<Complex>& from = values;
  std::vector<Complex> conj(values.size());
  std::transform(values.begin(), values.end(), conj.begin(), [](Complex z) { return std::conj(z); });
  const auto match = greedy_match(from, conj);
  double worst = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (!match[i]) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(from[i] - conj[*match[i]]));
  }
  return worst;
}

std::vector<std::optional<std::size_t>> greedy_match(const std::vector<Complex>& from,
                                                     const std::vector<Complex>& to) {
  std::vector<std::size_t> order(from.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(from[i]) < std::abs(from[j]); });
  std::vector<bool> used(to.size(), false);
  std::vector<std::optional<std::size_t>> out(from.size());
  for (std::size_t i : order) {
    double best = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> pick;
    for (std::size_t j = 0; j < to.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(from[i] - to[j]);
      if (dist < best) {
        best = dist;
        pick = j;
      }
    }
    if (pick) used[*pick] = true;
    out[i] = pick;
  }
  return out;
}

std::size_t StabilityStudy::certified_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.certified; }));
}

const StabilityEntry* StabilityStudy::top_certified() const {
  // entries follow the eigensolve order, so the first certified one has the largest |mu|.
  for (const auto& e : entries) {
    if (e.certified) return &e;
  }
  return nullptr;
}

StabilityStudy stability_study(const ProblemSpec& spec, const std::vector<int>& sizes,
                               double residual_tol) {
  if (sizes.size() < 2) throw InputError("stability study needs at least 2 sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw InputError("sizes must be strictly increasing");
  }
  StabilityStudy study;
  study.sizes = sizes;
  study.residual_tol = residual_tol;
  study.validated.resize(sizes.size());
  std::vector<std::shared_ptr<const Discretization>> problems(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    auto problem = std::make_shared<const Discretization>(spec, sizes[i]);
    study.validated[i] = solve_pencil(*problem, residual_tol);
    if (i + 1 == sizes.size()) problems[i] = std::move(problem);
  });
  study.largest = problems.back();

  auto lambdas = [&](std::size_t i) {
    std::vector<Complex> out;
    for (const auto& p : study.validated[i]) out.push_back(p.lambda);
    return out;
  };

  const std::size_t last = sizes.size() - 1;
  const auto& top = study.validated[last];
  // trail[k] for every pair at the largest size, walking down the sizes.
  std::vector<std::vector<std::optional<Complex>>> trails(top.size(),
                                                          std::vector<std::optional<Complex>>(sizes.size()));
  std::vector<std::optional<std::size_t>> current(top.size());
  for (std::size_t k = 0; k < top.size(); ++k) {
    trails[k][last] = top[k].lambda;
    current[k] = k;
  }
  for (std::size_t i = last; i > 0; --i) {
    const auto here = lambdas(i);
    const auto below = lambdas(i - 1);
    const auto match = greedy_match(here, below);
    for (std::size_t k = 0; k < top.size(); ++k) {
      if (!current[k]) continue;
      current[k] = match[*current[k]];
      if (current[k]) trails[k][i - 1] = below[*current[k]];
    }
  }

  for (std::size_t k = 0; k < top.size(); ++k) {
    StabilityEntry e;
    e.lambda = top[k].lambda;
    e.residual = top[k].residual;
    e.trail = std::move(trails[k]);
    e.pair_index = k;
    if (e.trail[last - 1]) e.drift = std::abs(e.lambda - *e.trail[last - 1]);
    e.error_bound = top[k].lambda_error_bound;
    const double threshold = kDriftFactor * (1.0 + std::abs(e.lambda));
    e.certified = e.drift && *e.drift < threshold && e.error_bound < threshold &&
                  e.residual < residual_tol;
    study.entries.push_back(std::move(e));
  }
  return study;
}

}  // namespace pencil_lab
