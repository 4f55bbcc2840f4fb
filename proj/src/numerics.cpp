// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "dbp/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "dbp/error.hpp"

namespace dbp {

namespace {

constexpr double kPivotFloor = 1e-14;
constexpr double kHermitianTol = 1e-10;

void require_square(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.empty())
    fail(ErrorCode::DimensionMismatch, "matrix must be square and non-empty");
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix t(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) t.data_[i] = std::conj(data_[i]);
  return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
  return t;
}

ComplexMatrix ComplexMatrix::row_block(std::size_t first, std::size_t count) const {
  if (first + count > rows_)
    fail(ErrorCode::DimensionMismatch, "row block exceeds matrix");
  ComplexMatrix b(count, cols_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
              count * cols_, b.data_.begin());
  return b;
}

ComplexMatrix gram(const ComplexMatrix& h) {
  const std::size_t u = h.cols();
  ComplexMatrix g(u, u);
  for (std::size_t b = 0; b < h.rows(); ++b) {
    auto row = h.row(b);
    for (std::size_t i = 0; i < u; ++i) {
      const cplx hi = std::conj(row[i]);
      for (std::size_t j = 0; j <= i; ++j) g(i, j) += hi * row[j];
    }
  }
  for (std::size_t i = 0; i < u; ++i) {
    g(i, i) = cplx(g(i, i).real(), 0.0);
    for (std::size_t j = 0; j < i; ++j) g(j, i) = std::conj(g(i, j));
  }
  return g;
}

ComplexMatrix cholesky(const ComplexMatrix& a) {
  require_square(a);
  const std::size_t n = a.rows();

  double max_entry = 0.0;
  double max_diag = 0.0;
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, a(i, i).real());
    for (std::size_t j = 0; j < n; ++j) {
      max_entry = std::max(max_entry, std::abs(a(i, j)));
      asym = std::max(asym, std::abs(a(i, j) - std::conj(a(j, i))));
    }
  }
  if (asym > kHermitianTol * max_entry)
    fail(ErrorCode::InvalidParameter, "cholesky: matrix is not Hermitian");

  const double floor = kPivotFloor * max_diag;
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > floor))
      fail(ErrorCode::NotPositiveDefinite,
           "cholesky: pivot " + std::to_string(j) + " is not positive");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

ComplexVector forward_substitute(const ComplexMatrix& l, std::span<const cplx> b) {
  const std::size_t n = l.rows();
  if (l.cols() != n || b.size() != n)
    fail(ErrorCode::DimensionMismatch, "forward substitution: size mismatch");
  ComplexVector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = b[i];
    auto row = l.row(i);
    for (std::size_t k = 0; k < i; ++k) s -= row[k] * z[k];
    z[i] = s / row[i].real();
  }
  return z;
}

ComplexVector backward_substitute_adjoint(const ComplexMatrix& l,
                                          std::span<const cplx> z) {
  const std::size_t n = l.rows();
  if (l.cols() != n || z.size() != n)
    fail(ErrorCode::DimensionMismatch, "backward substitution: size mismatch");
  ComplexVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    cplx s = z[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x[k];
    x[ii] = s / l(ii, ii).real();
  }
  return x;
}

ComplexVector solve_cholesky(const ComplexMatrix& l, std::span<const cplx> b) {
  return backward_substitute_adjoint(l, forward_substitute(l, b));
}

namespace {

// Inverse of a lower-triangular factor, itself lower triangular.
ComplexMatrix invert_lower(const ComplexMatrix& l) {
  const std::size_t n = l.rows();
  ComplexMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    inv(j, j) = 1.0 / l(j, j).real();
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t k = j; k < i; ++k) s -= l(i, k) * inv(k, j);
      inv(i, j) = s / l(i, i).real();
    }
  }
  return inv;
}

}  // namespace

ComplexMatrix inverse_from_cholesky(const ComplexMatrix& l) {
  require_square(l);
  const std::size_t n = l.rows();
  const ComplexMatrix li = invert_lower(l);
  // A^-1 = L^-H L^-1; lower triangle then mirror.
  ComplexMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cplx s = 0.0;
      for (std::size_t k = i; k < n; ++k) s += std::conj(li(k, i)) * li(k, j);
      inv(i, j) = s;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    inv(i, i) = cplx(inv(i, i).real(), 0.0);
    for (std::size_t j = 0; j < i; ++j) inv(j, i) = std::conj(inv(i, j));
  }
  return inv;
}

RealVector inverse_diagonal_from_cholesky(const ComplexMatrix& l) {
  require_square(l);
  const std::size_t n = l.rows();
  const ComplexMatrix li = invert_lower(l);
  RealVector d(n, 0.0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t k = u; k < n; ++k) d[u] += std::norm(li(k, u));
  return d;
}

ComplexMatrix hermitian_inverse(const ComplexMatrix& a) {
  return inverse_from_cholesky(cholesky(a));
}

ComplexVector multiply(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size())
    fail(ErrorCode::DimensionMismatch, "matrix-vector product: size mismatch");
  ComplexVector y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    cplx s = 0.0;
    auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

ComplexVector adjoint_multiply(const ComplexMatrix& a, std::span<const cplx> y) {
  if (a.rows() != y.size())
    fail(ErrorCode::DimensionMismatch, "adjoint product: size mismatch");
  ComplexVector x(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto row = a.row(r);
    const cplx yr = y[r];
    for (std::size_t c = 0; c < a.cols(); ++c) x[c] += std::conj(row[c]) * yr;
  }
  return x;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    fail(ErrorCode::DimensionMismatch, "matrix product: size mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

ComplexMatrix add_scaled_identity(const ComplexMatrix& a, double rho) {
  require_square(a);
  ComplexMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i) r(i, i) += rho;
  return r;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const cplx& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

double squared_norm(std::span<const cplx> x) {
  double s = 0.0;
  for (const cplx& v : x) s += std::norm(v);
  return s;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::DimensionMismatch, "max_abs_diff: shape mismatch");
  return max_abs_diff(a.data(), b.data());
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size())
    fail(ErrorCode::DimensionMismatch, "max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace dbp
