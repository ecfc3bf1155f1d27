#include "pencil_lab/linalg.hpp"

#include <lapacke.h>

#include <limits>
#include <string>

#include "pencil_lab/errors.hpp"

namespace pencil_lab::linalg {

SymmetricEigen symmetric_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("symmetric_eigen: matrix is not square");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  SymmetricEigen out;
  out.vectors = m;
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n,
                                         out.values.data());
  if (info != 0) {
    throw NumericError("dsyevd failed (info=" + std::to_string(info) + ") at size " +
                       std::to_string(n));
  }
  return out;
}

ComplexVector GeneralEigen::vector(int index) const {
  const Eigen::Index n = packed_vectors.rows();
  ComplexVector v(n);
  const double im = values[index].imag();
  if (im == 0.0) {
    v = packed_vectors.col(index).cast<std::complex<double>>();
    return v;
  }
  // Conjugate pairs are stored consecutively with positive imaginary part first.
  const bool first = im > 0;
  const int re_col = first ? index : index - 1;
  const double sign = first ? 1.0 : -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = {packed_vectors(i, re_col), sign * packed_vectors(i, re_col + 1)};
  }
  return v;
}

GeneralEigen general_eigen(const Matrix& m, bool want_vectors, bool want_error_bounds) {
  if (m.rows() != m.cols()) throw InputError("general_eigen: matrix is not square");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Matrix work = m;
  std::vector<double> wr(n), wi(n);
  GeneralEigen out;
  out.has_vectors = want_vectors;
  if (want_vectors) out.packed_vectors.resize(n, n);
  double dummy = 0.0;
  lapack_int info = 0;
  if (want_error_bounds) {
    // Eigenvalue condition numbers need both left and right vectors.
    Matrix left(n, n);
    Matrix right(n, n);
    std::vector<double> scale(n), rconde(n), rcondv(n);
    lapack_int ilo = 0, ihi = 0;
    double abnrm = 0.0;
    info = LAPACKE_dgeevx(LAPACK_COL_MAJOR, 'B', 'V', 'V', 'E', n, work.data(), n, wr.data(),
                          wi.data(), left.data(), n, right.data(), n, &ilo, &ihi, scale.data(),
                          &abnrm, rconde.data(), rcondv.data());
    if (info == 0) {
      out.error_bounds.resize(n);
      const double eps = std::numeric_limits<double>::epsilon();
      for (lapack_int i = 0; i < n; ++i) {
        out.error_bounds[i] = rconde[i] > 0.0 ? eps * abnrm / rconde[i]
                                              : std::numeric_limits<double>::infinity();
      }
      if (want_vectors) out.packed_vectors = std::move(right);
    }
  } else {
    info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, work.data(), n,
                         wr.data(), wi.data(), &dummy, 1,
                         want_vectors ? out.packed_vectors.data() : &dummy, want_vectors ? n : 1);
  }
  if (info != 0) {
    throw NumericError("nonsymmetric eigensolver failed to converge (info=" + std::to_string(info) +
                       ") at size " + std::to_string(n));
  }
  out.values.resize(n);
  for (lapack_int i = 0; i < n; ++i) out.values[i] = {wr[i], wi[i]};
  return out;
}

void symmetrize(Matrix& m) {
  Matrix t = m.transpose();
  m = 0.5 * (m + t);
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double trace_of_product(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.rows() || x.rows() != y.cols()) {
    throw InputError("trace_of_product: incompatible shapes");
  }
  return x.cwiseProduct(y.transpose()).sum();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace pencil_lab::linalg
