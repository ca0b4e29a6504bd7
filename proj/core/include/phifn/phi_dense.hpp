#pragma once

#include "phifn/common.hpp"
#include "phifn/dense_matrix.hpp"
#include "phifn/norm_est.hpp"
#include "phifn/param_select.hpp"
#include "phifn/taylor.hpp"
#include "phifn/theta_table.hpp"

namespace phifn {

enum class Strategy { sequential, costmin };

// The coupled doubling recurrence: from T = T_m(X) and T_tilde = T_tilde_m(X)
// with X = 2^{-s}A, produce phi(A). Performs 2s - 1 multiplies; together with
// the one multiply that assembled T_tilde this is the "+2s" tail of the cost.
// The step order (square first, then the Y update) is kept verbatim so the
// counter can be audited against the predicted cost.
template <typename T>
DenseMatrix<T> modified_squaring(const DenseMatrix<T>& t, const DenseMatrix<T>& t_tilde, long s,
                                 OpCounter& counter) {
  if (!t.square() || t.rows() != t_tilde.rows() || t.cols() != t_tilde.cols())
    throw ShapeError("modified_squaring: T and T~ must be square and same shape");
  if (s < 1) throw ParameterError("modified_squaring: s must be >= 1 (s = 0 bypasses)");

  DenseMatrix<T> tt = t_tilde;
  DenseMatrix<T> y = add_scaled_identity(tt, 1.0);
  for (long i = 1; i < s; ++i) {
    tt = mat_mul(tt, tt, counter);
    y = scale(mat_mul(y, add_scaled_identity(tt, 1.0), counter), 0.5);
  }
  return scale(mat_mul(t, y, counter), 0.5);
}

// phi(A) for dense A: pick (m, s), evaluate T_m(2^{-s}A) from the selector's
// rescaled powers, and double s times. Total multiplies: pi_m + 2s.
template <typename T>
DenseMatrix<T> phi_dense(const DenseMatrix<T>& a, Strategy strategy, OpCounter& counter,
                         const ThetaTable& theta = ThetaTable::builtin(),
                         const EstimatorOptions& estimator = {},
                         PhiParams<T>* params_out = nullptr) {
  if (!a.square()) throw ShapeError("phi_dense: square matrix required");
  a.require_finite();

  PhiParams<T> params = strategy == Strategy::sequential
                            ? select_sequential(a, theta, counter)
                            : select_costmin(a, theta, counter, estimator);
  const PSPlan plan = ps_plan(params.m);
  extend_powers(params.powers, plan.q, counter);  // no-op for both selectors

  DenseMatrix<T> t = eval_T(params.powers, plan, counter);
  DenseMatrix<T> result =
      params.s == 0
          ? t
          : modified_squaring(t, eval_T_tilde(params.powers[1], t, counter), params.s, counter);
  if (params_out) *params_out = std::move(params);
  return result;
}

}  // namespace phifn
