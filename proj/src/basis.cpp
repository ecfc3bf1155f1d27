#include "pencil_lab/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pencil_lab/errors.hpp"

namespace pencil_lab {

HermiteBasis1D::HermiteBasis1D(int size, double alpha) : size(size), alpha(alpha) {
  if (size < 1) throw InputError("Hermite basis size must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("Hermite basis alpha must be > 0");
}

double default_alpha(int size, int degree) {
  return std::pow(static_cast<double>(size),
                  static_cast<double>(degree - 1) / (2.0 * (degree + 1)));
}

TensorBasis::TensorBasis(std::vector<HermiteBasis1D> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3) throw InputError("tensor basis needs 1 to 3 axes");
  long long total = 1;
  for (const auto& a : axes_) total *= a.size;
  if (total > kMaxTensorDim) {
    throw InputError("tensor basis dimension " + std::to_string(total) + " exceeds the cap of " +
                     std::to_string(kMaxTensorDim));
  }
  total_dim_ = static_cast<int>(total);
  strides_.assign(axes_.size(), 1);
  for (int i = static_cast<int>(axes_.size()) - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * axes_[i + 1].size;
  }
}

std::vector<int> TensorBasis::multi_index(int flat) const {
  if (flat < 0 || flat >= total_dim_) throw InputError("flat index out of range");
  std::vector<int> multi(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    multi[i] = flat / strides_[i];
    flat %= strides_[i];
  }
  return multi;
}

int TensorBasis::flat_index(std::span<const int> multi) const {
  if (multi.size() != axes_.size()) throw InputError("multi-index length mismatch");
  int flat = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (multi[i] < 0 || multi[i] >= axes_[i].size) throw InputError("multi-index out of range");
    flat += multi[i] * strides_[i];
  }
  return flat;
}

bool TensorBasis::operator==(const TensorBasis& other) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].size != other.axes_[i].size || axes_[i].alpha != other.axes_[i].alpha) {
      return false;
    }
  }
  return true;
}

Matrix position_matrix(const HermiteBasis1D& basis) {
  const int n = basis.size;
  Matrix x = Matrix::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    const double v = std::sqrt((j + 1) / 2.0) / basis.alpha;
    x(j, j + 1) = v;
    x(j + 1, j) = v;
  }
  return x;
}

Matrix laplacian_matrix(const HermiteBasis1D& basis) {
  const int n = basis.size;
  const double a2 = basis.alpha * basis.alpha;
  Matrix k = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    k(j, j) = a2 * (2.0 * j + 1.0) / 2.0;
    if (j + 2 < n) {
      const double v = -a2 * std::sqrt((j + 1.0) * (j + 2.0)) / 2.0;
      k(j, j + 2) = v;
      k(j + 2, j) = v;
    }
  }
  return k;
}

Matrix position_power_matrix(const HermiteBasis1D& basis, int power, int margin) {
  if (power < 0) throw InputError("negative power of t");
  const int n = basis.size;
  if (power == 0) return Matrix::Identity(n, n);
  const int big = n + margin;
  // Off-diagonal of the enlarged position matrix.
  std::vector<double> off(big > 0 ? big - 1 : 0);
  for (int j = 0; j + 1 < big; ++j) off[j] = std::sqrt((j + 1) / 2.0) / basis.alpha;

  // Apply X to the first n columns of the identity `power` times; column c of
  // X^k is supported on rows |r - c| <= k, so only a band is touched.
  Matrix r = Matrix::Zero(big, n);
  for (int c = 0; c < n; ++c) r(c, c) = 1.0;
  Vector col(big), next(big);
  for (int c = 0; c < n; ++c) {
    col = r.col(c);
    for (int k = 0; k < power; ++k) {
      const int lo = std::max(0, c - k - 1);
      const int hi = std::min(big - 1, c + k + 1);
      next.segment(lo, hi - lo + 1).setZero();
      for (int row = lo; row <= hi; ++row) {
        double s = 0.0;
        if (row > 0) s += off[row - 1] * col[row - 1];
        if (row + 1 < big) s += off[row] * col[row + 1];
        next[row] = s;
      }
      col.segment(lo, hi - lo + 1) = next.segment(lo, hi - lo + 1);
    }
    r.col(c) = col;
  }
  Matrix out = r.topRows(n);
  linalg::symmetrize(out);
  return out;
}

Matrix multiplication_matrix(const HomogeneousPolynomial& poly, const TensorBasis& basis) {
  if (poly.dimension() != basis.dimension()) {
    throw InputError("polynomial dimension " + std::to_string(poly.dimension()) +
                     " does not match basis dimension " + std::to_string(basis.dimension()));
  }
  const int d = basis.total_dim();
  const int margin = poly.degree();
  Matrix out = Matrix::Zero(d, d);
  for (const auto& [exponents, coeff] : poly.terms()) {
    Matrix term = coeff * position_power_matrix(basis.axes()[0], exponents[0], margin);
    for (int axis = 1; axis < basis.dimension(); ++axis) {
      term = linalg::kron(term, position_power_matrix(basis.axes()[axis], exponents[axis], margin));
    }
    out += term;
  }
  linalg::symmetrize(out);
  return out;
}

Matrix tensor_laplacian(const TensorBasis& basis) {
  const int d = basis.total_dim();
  Matrix out = Matrix::Zero(d, d);
  for (int axis = 0; axis < basis.dimension(); ++axis) {
    Matrix term(1, 1);
    term(0, 0) = 1.0;
    for (int other = 0; other < basis.dimension(); ++other) {
      const auto& ax = basis.axes()[other];
      term = linalg::kron(term, other == axis ? laplacian_matrix(ax)
                                              : Matrix(Matrix::Identity(ax.size, ax.size)));
    }
    out += term;
  }
  return out;
}

QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1) throw InputError("Gauss-Hermite order must be >= 1");
  Matrix jacobi = Matrix::Zero(order, order);
  for (int j = 1; j < order; ++j) {
    jacobi(j, j - 1) = std::sqrt(j / 2.0);
    jacobi(j - 1, j) = jacobi(j, j - 1);
  }
  const auto eig = linalg::symmetric_eigen(jacobi);
  // Orthonormal polynomials for exp(-t^2): p_{k+1} = (t p_k - sqrt(k/2) p_{k-1}) / sqrt((k+1)/2).
  const auto evaluate = [order](double t, double& pn, double& pn1, double& sum_sq) {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    sum_sq = 0.0;
    for (int k = 0; k < order; ++k) {
      sum_sq += cur * cur;
      const double next = (t * cur - std::sqrt(k / 2.0) * prev) / std::sqrt((k + 1) / 2.0);
      prev = cur;
      cur = next;
    }
    pn = cur;
    pn1 = prev;
  };
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    // Newton polish on p_n (p_n' = sqrt(2n) p_{n-1}), then the Christoffel
    // weight 1 / sum p_k^2, which keeps full relative accuracy in the tails
    // where the eigenvector-based weight does not.
    double t = eig.values[i];
    double pn = 0.0, pn1 = 0.0, sum_sq = 0.0;
    for (int it = 0; it < 3; ++it) {
      evaluate(t, pn, pn1, sum_sq);
      if (pn1 == 0.0) break;
      t -= pn / (std::sqrt(2.0 * order) * pn1);
    }
    evaluate(t, pn, pn1, sum_sq);
    rule.nodes[i] = t;
    rule.weights[i] = 1.0 / sum_sq;
  }
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double weight = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -node;
    rule.nodes[j] = node;
    rule.weights[i] = rule.weights[j] = weight;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

std::vector<double> hermite_functions(const HermiteBasis1D& basis, double t) {
  const int n = basis.size;
  const double s = basis.alpha * t;
  std::vector<double> h(n);
  // Recurrence on h_j(s) exp(s^2/2); the Gaussian factor is applied at the end
  // together with the accumulated log-scale.
  double log_scale = 0.0;
  std::vector<double> log_of(n, 0.0);
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  h[0] = cur;
  for (int j = 0; j + 1 < n; ++j) {
    double next = std::sqrt(2.0 / (j + 1)) * s * cur - std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      prev *= 1e-150;
      cur *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
    }
    h[j + 1] = cur;
    log_of[j + 1] = log_scale;
  }
  const double gauss = -0.5 * s * s;
  const double norm = std::sqrt(basis.alpha);
  for (int j = 0; j < n; ++j) {
    // Values stored before a rescale carry their own log-scale.
    h[j] = h[j] == 0.0 ? 0.0 : norm * std::copysign(std::exp(std::log(std::abs(h[j])) + log_of[j] + gauss), h[j]);
  }
  return h;
}

std::vector<double> synthesize(std::span<const double> coeffs, const TensorBasis& basis,
                               const std::vector<std::vector<double>>& grid) {
  if (static_cast<int>(coeffs.size()) != basis.total_dim()) {
    throw InputError("coefficient vector length does not match basis dimension");
  }
  const int dims = basis.dimension();
  std::vector<double> out;
  out.reserve(grid.size());
  for (const auto& point : grid) {
    if (static_cast<int>(point.size()) != dims) {
      throw InputError("grid point dimension does not match basis dimension");
    }
    std::vector<std::vector<double>> tables(dims);
    for (int a = 0; a < dims; ++a) tables[a] = hermite_functions(basis.axes()[a], point[a]);
    double total = 0.0;
    for (int flat = 0; flat < basis.total_dim(); ++flat) {
      const auto multi = basis.multi_index(flat);
      double phi = 1.0;
      for (int a = 0; a < dims; ++a) phi *= tables[a][multi[a]];
      total += coeffs[flat] * phi;
    }
    out.push_back(total);
  }
  return out;
}

}  // namespace pencil_lab
