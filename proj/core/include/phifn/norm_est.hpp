#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "phifn/common.hpp"
#include "phifn/dense_matrix.hpp"
#include "phifn/sparse_matrix.hpp"

namespace phifn {

// Result of the block power-method 1-norm estimate of ||A^p||_1.
// `value` is an attained lower bound: it is ||A^p x||_1 for some actual x
// with ||x||_1 = 1, so value <= ||A^p||_1 always holds.
struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  long products_used = 0;
};

struct EstimatorOptions {
  int block_width = 2;
  int max_iter = 5;
  unsigned seed = 1;
};

namespace detail {

template <typename T>
T unit_sign(const T& y) {
  if constexpr (scalar_traits<T>::is_complex) {
    double a = std::abs(y);
    return a == 0.0 ? T{1} : y / a;
  } else {
    return y >= 0.0 ? 1.0 : -1.0;
  }
}

// Shared engine; Apply/ApplyHerm map a length-n vector through A / A^H.
template <typename T, typename Apply, typename ApplyHerm>
NormEstimate normest_impl(std::size_t n, int p, const EstimatorOptions& opt, Apply&& apply,
                          ApplyHerm&& apply_herm) {
  if (p < 1) throw ParameterError("normest_power: p must be >= 1");
  if (opt.block_width < 1 || opt.max_iter < 1)
    throw ParameterError("normest_power: block_width and max_iter must be >= 1");

  NormEstimate out;
  std::vector<T> work(n), work2(n);
  auto apply_power = [&](std::vector<T>& col) {
    for (int k = 0; k < p; ++k) {
      apply(col.data(), work.data());
      col.swap(work);
    }
    out.products_used += p;
  };
  auto apply_power_herm = [&](std::vector<T>& col) {
    for (int k = 0; k < p; ++k) {
      apply_herm(col.data(), work.data());
      col.swap(work);
    }
    out.products_used += p;
  };
  auto col_norm1 = [&](const std::vector<T>& col) {
    double s = 0.0;
    for (const T& v : col) s += scalar_traits<T>::abs(v);
    return s;
  };

  const std::size_t t = static_cast<std::size_t>(opt.block_width);

  // Exhaustive case: n columns fit in the block, so compute A^p exactly
  // column by column and return the true norm.
  if (n <= t) {
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<T> e(n, T{});
      e[j] = T{1};
      apply_power(e);
      best = std::max(best, col_norm1(e));
    }
    out.value = best;
    out.iterations = 1;
    return out;
  }

  // Start block: averaging column plus random +-1/n columns, fixed seed.
  std::mt19937 gen(opt.seed);
  std::vector<std::vector<T>> X(t, std::vector<T>(n));
  for (std::size_t i = 0; i < n; ++i) X[0][i] = T{1.0 / static_cast<double>(n)};
  for (std::size_t j = 1; j < t; ++j)
    for (std::size_t i = 0; i < n; ++i)
      X[j][i] = T{((gen() & 1u) ? 1.0 : -1.0) / static_cast<double>(n)};

  std::vector<char> visited(n, 0);
  double est_prev = 0.0;
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    out.iterations = iter;
    double est = 0.0;
    for (std::size_t j = 0; j < t; ++j) {
      apply_power(X[j]);
      est = std::max(est, col_norm1(X[j]));
    }
    if (iter > 1 && est <= est_prev) {
      out.value = est_prev;
      return out;
    }
    est_prev = est;
    if (iter == opt.max_iter) break;

    // Steer towards heavy rows: Z = (A^H)^p sign(Y), pick the largest rows.
    std::vector<double> h(n, 0.0);
    for (std::size_t j = 0; j < t; ++j) {
      for (std::size_t i = 0; i < n; ++i) work2[i] = unit_sign(X[j][i]);
      std::vector<T> z = work2;
      apply_power_herm(z);
      for (std::size_t i = 0; i < n; ++i) h[i] = std::max(h[i], scalar_traits<T>::abs(z[i]));
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return h[a] > h[b]; });

    std::size_t taken = 0;
    for (std::size_t i = 0; i < n && taken < t; ++i) {
      if (visited[order[i]]) continue;
      std::fill(X[taken].begin(), X[taken].end(), T{});
      X[taken][order[i]] = T{1};
      visited[order[i]] = 1;
      ++taken;
    }
    if (taken == 0) break;  // index pattern repeated: nothing fresh to probe
    // Pad with previously best columns if fewer than t fresh indices remain.
    for (; taken < t; ++taken) std::fill(X[taken].begin(), X[taken].end(), T{});
  }
  out.value = est_prev;
  return out;
}

}  // namespace detail

template <typename T>
NormEstimate normest_power(const DenseMatrix<T>& a, int p, const EstimatorOptions& opt = {}) {
  if (!a.square()) throw ShapeError("normest_power: square matrix required");
  return detail::normest_impl<T>(
      a.rows(), p, opt, [&](const T* x, T* y) { detail::apply_dense(a, x, y); },
      [&](const T* x, T* y) { detail::apply_dense_herm(a, x, y); });
}

template <typename T>
NormEstimate normest_power(const SparseMatrix<T>& a, int p, const EstimatorOptions& opt = {}) {
  if (!a.square()) throw ShapeError("normest_power: square matrix required");
  return detail::normest_impl<T>(
      a.rows(), p, opt, [&](const T* x, T* y) { detail::apply_sparse(a, x, y); },
      [&](const T* x, T* y) { detail::apply_sparse_herm(a, x, y); });
}

}  // namespace phifn
