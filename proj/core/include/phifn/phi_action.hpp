#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "phifn/common.hpp"
#include "phifn/dense_matrix.hpp"
#include "phifn/norm_est.hpp"
#include "phifn/param_select.hpp"
#include "phifn/sparse_matrix.hpp"
#include "phifn/theta_table.hpp"

namespace phifn {

// phi: sum_{k=0}^{m} X^k v / (k+1)!   (m matvecs per column)
// exp: sum_{k=0}^{m+1} X^k v / k!     (m+1 matvecs per column)
enum class TaylorVariant { phi, exp };

namespace detail {

template <typename T>
void apply_any(const DenseMatrix<T>& a, const T* x, T* y) {
  apply_dense(a, x, y);
}
template <typename T>
void apply_any(const SparseMatrix<T>& a, const T* x, T* y) {
  apply_sparse(a, x, y);
}

template <typename T>
DenseMatrix<T> scaled_copy(const DenseMatrix<T>& a, double t) {
  return scale(a, t);
}
template <typename T>
SparseMatrix<T> scaled_copy(const SparseMatrix<T>& a, double t) {
  return a.scaled(t);
}

// One matvec per column of v.
template <typename Matrix, typename T = typename Matrix::value_type>
DenseMatrix<T> apply_block(const Matrix& a, const DenseMatrix<T>& v, OpCounter& counter) {
  if (a.cols() != v.rows()) throw ShapeError("apply_block: inner dimensions disagree");
  DenseMatrix<T> out(a.rows(), v.cols());
  for (std::size_t j = 0; j < v.cols(); ++j) {
    apply_any(a, v.col(j), out.col(j));
    ++counter.matvec_count;
  }
  return out;
}

}  // namespace detail

// Incremental evaluation of the truncated series applied to a block:
// w <- scale*(A w), acc += c_k w, with running coefficients. No Horner here —
// powers of A are never formed, only matvecs. With early_stop the column's
// sum is cut short once two consecutive terms fall below roundoff relative
// to the accumulated value; off by default because the cost contracts
// (s(m+1)-1 matvecs) assume the full degree.
template <typename Matrix, typename T = typename Matrix::value_type>
DenseMatrix<T> apply_T(const Matrix& a, const DenseMatrix<T>& v, int m, double scale,
                       TaylorVariant variant, OpCounter& counter, bool early_stop = false) {
  if (!a.square()) throw ShapeError("apply_T: square matrix required");
  if (a.cols() != v.rows()) throw ShapeError("apply_T: block height must equal matrix order");
  if (m < 0) throw ParameterError("apply_T: degree must be >= 0");

  const int degree = variant == TaylorVariant::phi ? m : m + 1;
  const std::size_t n = v.rows();
  DenseMatrix<T> acc = v;  // c_0 = 1 for both variants
  std::vector<T> w(n), t(n);
  for (std::size_t j = 0; j < v.cols(); ++j) {
    const T* vj = v.col(j);
    std::copy(vj, vj + n, w.begin());
    double c = 1.0;
    T* accj = acc.col(j);
    int small_streak = 0;
    for (int k = 1; k <= degree; ++k) {
      detail::apply_any(a, w.data(), t.data());
      ++counter.matvec_count;
      for (std::size_t i = 0; i < n; ++i) w[i] = t[i] * scale;
      c /= variant == TaylorVariant::phi ? k + 1 : k;
      double term_max = 0.0, acc_max = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        accj[i] += w[i] * c;
        if (early_stop) {
          term_max = std::max(term_max, scalar_traits<T>::abs(w[i]) * std::abs(c));
          acc_max = std::max(acc_max, scalar_traits<T>::abs(accj[i]));
        }
      }
      if (early_stop) {
        small_streak = term_max <= 0x1p-53 * acc_max ? small_streak + 1 : 0;
        if (small_streak >= 2) break;
      }
    }
  }
  return acc;
}

// phi(A)b via the 1/s splitting: b_1 = T_m(A/s)b, b_{i+1} = T~_m(A/s)b_i,
// result (1/s) sum b_i. Per column: m + (s-1)(m+1) = s(m+1) - 1 matvecs.
template <typename Matrix, typename T = typename Matrix::value_type>
DenseMatrix<T> phi_action(const Matrix& a, const DenseMatrix<T>& b, const ThetaTable& theta,
                          OpCounter& counter, int m_max = kDefaultActionMMax,
                          const EstimatorOptions& estimator = {},
                          PhiParams<T>* params_out = nullptr, bool early_stop = false) {
  if (!a.square()) throw ShapeError("phi_action: square matrix required");
  if (a.cols() != b.rows()) throw ShapeError("phi_action: b must have matrix-order rows");
  if (b.cols() < 1) throw ShapeError("phi_action: b must have at least one column");

  PhiParams<T> params = select_action(a, theta, m_max, counter, estimator);
  const double inv_s = 1.0 / static_cast<double>(params.s);

  DenseMatrix<T> bi = apply_T(a, b, params.m, inv_s, TaylorVariant::phi, counter, early_stop);
  DenseMatrix<T> f = bi;
  for (long i = 1; i < params.s; ++i) {
    bi = apply_T(a, bi, params.m, inv_s, TaylorVariant::exp, counter, early_stop);
    f = add(f, bi);
  }
  if (params_out) *params_out = std::move(params);
  return scale(f, inv_s);
}

// e^{tA}b0 + t*phi(tA)b1, reduced to one phi_action via e^z = z phi(z) + 1:
// b0 + t*phi(tA)(A b0 + b1). One extra matvec per column over phi_action.
template <typename Matrix, typename T = typename Matrix::value_type>
DenseMatrix<T> phi_combo(const Matrix& a, double t, const DenseMatrix<T>& b0,
                         const DenseMatrix<T>& b1, const ThetaTable& theta, OpCounter& counter,
                         int m_max = kDefaultActionMMax, const EstimatorOptions& estimator = {},
                         PhiParams<T>* params_out = nullptr) {
  if (!a.square()) throw ShapeError("phi_combo: square matrix required");
  if (a.cols() != b0.rows() || b0.rows() != b1.rows() || b0.cols() != b1.cols())
    throw ShapeError("phi_combo: b0, b1 must both have matrix-order rows and equal widths");
  if (t == 0.0) return b0;

  DenseMatrix<T> w = add(detail::apply_block(a, b0, counter), b1);
  DenseMatrix<T> v =
      phi_action(detail::scaled_copy(a, t), w, theta, counter, m_max, estimator, params_out);
  return add(b0, scale(v, t));
}

}  // namespace phifn
