// SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DBP_NUMERICS_HPP
#define DBP_NUMERICS_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dbp {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;
using RealVector = std::vector<double>;

// Dense row-major complex matrix in double precision.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix adjoint() const;

  // Copy of rows [first, first + count).
  ComplexMatrix row_block(std::size_t first, std::size_t count) const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

// G = H^H H. Lower triangle is accumulated in ascending row order of H and
// mirrored, so the result is exactly Hermitian.
ComplexMatrix gram(const ComplexMatrix& h);

// Lower-triangular L with real positive diagonal such that A = L L^H.
// Throws NotPositiveDefinite when a pivot falls to 1e-14 * max diag(A) or
// below, DimensionMismatch when A is not square, InvalidParameter when A is
// not Hermitian to 1e-10 relative.
ComplexMatrix cholesky(const ComplexMatrix& a);

// Solves L L^H x = b by forward then backward substitution.
ComplexVector solve_cholesky(const ComplexMatrix& l, std::span<const cplx> b);

ComplexVector forward_substitute(const ComplexMatrix& l, std::span<const cplx> b);
ComplexVector backward_substitute_adjoint(const ComplexMatrix& l,
                                          std::span<const cplx> z);

ComplexMatrix hermitian_inverse(const ComplexMatrix& a);
// (L L^H)^-1 from an existing factor; exactly Hermitian.
ComplexMatrix inverse_from_cholesky(const ComplexMatrix& l);
// diag((L L^H)^-1) without forming the full inverse.
RealVector inverse_diagonal_from_cholesky(const ComplexMatrix& l);

// Small dense helpers.
ComplexVector multiply(const ComplexMatrix& a, std::span<const cplx> x);
ComplexVector adjoint_multiply(const ComplexMatrix& a, std::span<const cplx> y);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add_scaled_identity(const ComplexMatrix& a, double rho);

double frobenius_norm(const ComplexMatrix& a);
double squared_norm(std::span<const cplx> x);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace dbp

#endif  // DBP_NUMERICS_HPP
