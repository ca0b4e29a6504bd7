#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "phifn/common.hpp"

namespace phifn {

// Column-major dense matrix over double or complex<double>.
// Immutable by convention once handed to an algorithm; the arithmetic helpers
// below return fresh matrices and leave their inputs untouched.
template <typename T>
class DenseMatrix {
  static_assert(is_supported_scalar<T>, "DenseMatrix supports double and complex<double>");

 public:
  using value_type = T;

  DenseMatrix() : rows_(0), cols_(0) {}
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, T{}) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  // Validating entry point for external data (file parsers, user arrays).
  static DenseMatrix from_data(std::size_t rows, std::size_t cols, std::vector<T> column_major) {
    if (column_major.size() != rows * cols)
      throw ShapeError("from_data: entry count does not match rows*cols");
    DenseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.entries_ = std::move(column_major);
    m.require_finite();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return entries_[i + j * rows_]; }
  const T& operator()(std::size_t i, std::size_t j) const { return entries_[i + j * rows_]; }

  T* data() { return entries_.data(); }
  const T* data() const { return entries_.data(); }
  T* col(std::size_t j) { return entries_.data() + j * rows_; }
  const T* col(std::size_t j) const { return entries_.data() + j * rows_; }

  void require_finite() const {
    for (const T& v : entries_) {
      if constexpr (scalar_traits<T>::is_complex) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw DomainError("matrix has non-finite entries");
      } else {
        if (!std::isfinite(v)) throw DomainError("matrix has non-finite entries");
      }
    }
  }

  bool operator==(const DenseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> entries_;
};

// C = A*B, exact floating point, deterministic axpy order (k ascending per
// output column, i ascending within). One matmul on the counter.
template <typename T>
DenseMatrix<T> mat_mul(const DenseMatrix<T>& a, const DenseMatrix<T>& b, OpCounter& counter) {
  if (a.cols() != b.rows()) throw ShapeError("mat_mul: inner dimensions disagree");
  DenseMatrix<T> c(a.rows(), b.cols());
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < b.cols(); ++j) {
    T* __restrict cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T bkj = b(k, j);
      const T* __restrict ak = a.col(k);
      for (std::size_t i = 0; i < n; ++i) cj[i] += ak[i] * bkj;
    }
  }
  ++counter.matmul_count;
  return c;
}

template <typename T>
double one_norm(const DenseMatrix<T>& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += scalar_traits<T>::abs(a(i, j));
    if (s > best) best = s;
  }
  return best;
}

template <typename T>
DenseMatrix<T> add(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("add: shape mismatch");
  DenseMatrix<T> c = a;
  for (std::size_t j = 0; j < c.cols(); ++j)
    for (std::size_t i = 0; i < c.rows(); ++i) c(i, j) += b(i, j);
  return c;
}

template <typename T>
DenseMatrix<T> sub(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("sub: shape mismatch");
  DenseMatrix<T> c = a;
  for (std::size_t j = 0; j < c.cols(); ++j)
    for (std::size_t i = 0; i < c.rows(); ++i) c(i, j) -= b(i, j);
  return c;
}

template <typename T, typename S>
DenseMatrix<T> scale(const DenseMatrix<T>& a, S alpha) {
  DenseMatrix<T> c = a;
  for (std::size_t j = 0; j < c.cols(); ++j)
    for (std::size_t i = 0; i < c.rows(); ++i) c(i, j) *= alpha;
  return c;
}

// A + alpha*I without forming an identity.
template <typename T, typename S>
DenseMatrix<T> add_scaled_identity(const DenseMatrix<T>& a, S alpha) {
  if (!a.square()) throw ShapeError("add_scaled_identity: square matrix required");
  DenseMatrix<T> c = a;
  for (std::size_t i = 0; i < c.rows(); ++i) c(i, i) += T{1} * alpha;
  return c;
}

namespace detail {

// Uncounted kernels shared by the norm estimator and the counted wrappers.
// Column-axpy order: every y_i accumulates its terms with j ascending, the
// same per-entry order as a CSR row sweep over sorted column indices.
template <typename T>
void apply_dense(const DenseMatrix<T>& a, const T* x, T* y) {
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) y[i] = T{};
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const T xj = x[j];
    const T* __restrict aj = a.col(j);
    for (std::size_t i = 0; i < n; ++i) y[i] += aj[i] * xj;
  }
}

// y = A^H x (conjugate transpose; plain transpose in the real case).
template <typename T>
void apply_dense_herm(const DenseMatrix<T>& a, const T* x, T* y) {
  for (std::size_t j = 0; j < a.cols(); ++j) {
    T s{};
    const T* __restrict aj = a.col(j);
    for (std::size_t i = 0; i < a.rows(); ++i) s += scalar_traits<T>::conj(aj[i]) * x[i];
    y[j] = s;
  }
}

}  // namespace detail

// Dense counterpart of sp_matvec; one matvec on the counter.
template <typename T>
std::vector<T> mat_vec(const DenseMatrix<T>& a, const std::vector<T>& v, OpCounter& counter) {
  if (a.cols() != v.size()) throw ShapeError("mat_vec: dimension mismatch");
  std::vector<T> y(a.rows());
  detail::apply_dense(a, v.data(), y.data());
  ++counter.matvec_count;
  return y;
}

}  // namespace phifn
