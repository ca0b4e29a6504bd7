#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "phifn/common.hpp"
#include "phifn/dense_matrix.hpp"

namespace phifn {

// Evaluation plan for T_m(X) = sum_{k=0}^m X^k/(1+k)! in q-blocks:
// T_m = sum_{k=0}^r B_k (X^q)^k with q = ceil(sqrt(m)), r = floor(m/q),
// B_k = sum_i X^i/(1+qk+i)! over the block's width.
struct PSPlan {
  int m = 0;
  int q = 0;
  int r = 0;
  // blocks[k][i] multiplies X^i inside block k; block r may be narrower.
  std::vector<std::vector<double>> blocks;

  // Total matmuls to evaluate T_m when powers X^2..X^q are formed fresh:
  // q-1 for the powers, r-1 Horner steps when the tail block is a scalar
  // multiple of I (m == q*r, true for every m in the optimal set), r otherwise.
  int matmuls() const { return (q - 1) + (r - 1) + (m > q * r ? 1 : 0); }
};

inline PSPlan ps_plan(int m) {
  if (m < 1) throw ParameterError("ps_plan: m must be >= 1");
  PSPlan plan;
  plan.m = m;
  plan.q = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
  plan.r = m / plan.q;

  // 1/(1+k)! for k = 0..m, built by running division.
  std::vector<double> invfact(static_cast<std::size_t>(m) + 1);
  invfact[0] = 1.0;
  for (int k = 1; k <= m; ++k) invfact[k] = invfact[k - 1] / static_cast<double>(k + 1);

  plan.blocks.resize(static_cast<std::size_t>(plan.r) + 1);
  for (int k = 0; k <= plan.r; ++k) {
    const int width = (k < plan.r) ? plan.q : (m - plan.q * plan.r + 1);
    auto& blk = plan.blocks[k];
    blk.resize(width);
    for (int i = 0; i < width; ++i) blk[i] = invfact[plan.q * k + i];
  }
  return plan;
}

namespace detail {

// Block sum accumulated from the smallest coefficient upward (largest power
// first) to keep rounding error down.
template <typename T>
DenseMatrix<T> ps_block(const std::vector<DenseMatrix<T>>& x_powers,
                        const std::vector<double>& coeffs) {
  const std::size_t top = coeffs.size() - 1;
  DenseMatrix<T> b = scale(x_powers[top], coeffs[top]);
  for (std::size_t i = top; i-- > 0;) {
    const DenseMatrix<T>& xp = x_powers[i];
    for (std::size_t jj = 0; jj < b.cols(); ++jj)
      for (std::size_t ii = 0; ii < b.rows(); ++ii) b(ii, jj) += xp(ii, jj) * coeffs[i];
  }
  return b;
}

}  // namespace detail

// Forms [I, X, X^2, ..., X^q]; q-1 counted matmuls.
template <typename T>
std::vector<DenseMatrix<T>> make_powers(const DenseMatrix<T>& x, int q, OpCounter& counter) {
  if (!x.square()) throw ShapeError("make_powers: square matrix required");
  std::vector<DenseMatrix<T>> powers;
  powers.reserve(static_cast<std::size_t>(q) + 1);
  powers.push_back(DenseMatrix<T>::identity(x.rows()));
  powers.push_back(x);
  for (int i = 2; i <= q; ++i) powers.push_back(mat_mul(powers.back(), x, counter));
  return powers;
}

// Grows an existing power list [I, X, ...] up to X^q.
template <typename T>
void extend_powers(std::vector<DenseMatrix<T>>& powers, int q, OpCounter& counter) {
  while (powers.size() < static_cast<std::size_t>(q) + 1)
    powers.push_back(mat_mul(powers.back(), powers[1], counter));
}

// T_m(X) by Horner over the plan's blocks. x_powers must hold exactly
// I, X, ..., X^q. Matmul increments beyond the supplied powers: r-1 when the
// tail block is scalar (the first Horner step is a cheap scalar*X^q), else r.
template <typename T>
DenseMatrix<T> eval_T(const std::vector<DenseMatrix<T>>& x_powers, const PSPlan& plan,
                      OpCounter& counter) {
  if (x_powers.size() != static_cast<std::size_t>(plan.q) + 1)
    throw ParameterError("eval_T: power list must hold I..X^q");
  for (const auto& p : x_powers)
    if (!p.square() || p.rows() != x_powers[0].rows())
      throw ShapeError("eval_T: inconsistent power shapes");

  const DenseMatrix<T>& xq = x_powers[static_cast<std::size_t>(plan.q)];
  DenseMatrix<T> acc;
  int k_next;
  if (plan.m == plan.q * plan.r) {
    // Scalar tail: fold c_r * X^q into the first Horner step for free.
    acc = add(scale(xq, plan.blocks[static_cast<std::size_t>(plan.r)][0]),
              detail::ps_block(x_powers, plan.blocks[static_cast<std::size_t>(plan.r) - 1]));
    k_next = plan.r - 2;
  } else {
    acc = detail::ps_block(x_powers, plan.blocks[static_cast<std::size_t>(plan.r)]);
    k_next = plan.r - 1;
  }
  for (int k = k_next; k >= 0; --k)
    acc = add(mat_mul(acc, xq, counter), detail::ps_block(x_powers, plan.blocks[k]));
  return acc;
}

// T~_m = X*T_m + I; exactly one matmul.
template <typename T>
DenseMatrix<T> eval_T_tilde(const DenseMatrix<T>& x, const DenseMatrix<T>& t, OpCounter& counter) {
  if (!x.square() || x.rows() != t.rows() || x.cols() != t.cols())
    throw ShapeError("eval_T_tilde: shape mismatch");
  return add_scaled_identity(mat_mul(x, t, counter), 1.0);
}

}  // namespace phifn
