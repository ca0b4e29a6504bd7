#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <vector>

#include "phifn/common.hpp"
#include "phifn/dense_matrix.hpp"

namespace phifn {

// Compressed sparse row matrix. Rows hold strictly increasing column indices;
// duplicate coordinates in the construction input are summed (Matrix Market
// convention).
template <typename T>
class SparseMatrix {
  static_assert(is_supported_scalar<T>, "SparseMatrix supports double and complex<double>");

 public:
  using value_type = T;
  using index_type = std::int64_t;
  struct Triplet {
    index_type row;
    index_type col;
    T value;
  };

  SparseMatrix() : rows_(0), cols_(0), row_ptr_(1, 0) {}

  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets) {
    for (const Triplet& t : triplets) {
      if (t.row < 0 || t.col < 0 || t.row >= static_cast<index_type>(rows) ||
          t.col >= static_cast<index_type>(cols))
        throw ShapeError("from_triplets: index out of range");
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });

    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    for (std::size_t k = 0; k < triplets.size();) {
      std::size_t k2 = k;
      T sum{};
      while (k2 < triplets.size() && triplets[k2].row == triplets[k].row &&
             triplets[k2].col == triplets[k].col) {
        sum += triplets[k2].value;
        ++k2;
      }
      m.col_idx_.push_back(triplets[k].col);
      m.values_.push_back(sum);
      ++m.row_ptr_[triplets[k].row + 1];
      k = k2;
    }
    std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<index_type>& row_ptr() const { return row_ptr_; }
  const std::vector<index_type>& col_idx() const { return col_idx_; }
  const std::vector<T>& values() const { return values_; }

  DenseMatrix<T> to_dense() const {
    DenseMatrix<T> d(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (index_type k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        d(i, static_cast<std::size_t>(col_idx_[k])) = values_[k];
    return d;
  }

  // Values rescaled by a scalar; the structure is shared work, nnz copy only.
  template <typename S>
  SparseMatrix scaled(S alpha) const {
    SparseMatrix m = *this;
    for (T& v : m.values_) v *= alpha;
    return m;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<index_type> row_ptr_;
  std::vector<index_type> col_idx_;
  std::vector<T> values_;
};

namespace detail {

template <typename T>
void apply_sparse(const SparseMatrix<T>& a, const T* x, T* y) {
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& vv = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T s{};
    for (auto k = rp[i]; k < rp[i + 1]; ++k) s += vv[k] * x[ci[k]];
    y[i] = s;
  }
}

// y = A^H x via a scatter over the rows of A; no transpose is materialized.
template <typename T>
void apply_sparse_herm(const SparseMatrix<T>& a, const T* x, T* y) {
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& vv = a.values();
  for (std::size_t j = 0; j < a.cols(); ++j) y[j] = T{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (auto k = rp[i]; k < rp[i + 1]; ++k)
      y[ci[k]] += scalar_traits<T>::conj(vv[k]) * x[i];
}

}  // namespace detail

// y_i = sum_j a_ij v_j, row sweep in ascending column order; one matvec.
template <typename T>
std::vector<T> sp_matvec(const SparseMatrix<T>& a, const std::vector<T>& v, OpCounter& counter) {
  if (a.cols() != v.size()) throw ShapeError("sp_matvec: dimension mismatch");
  std::vector<T> y(a.rows());
  detail::apply_sparse(a, v.data(), y.data());
  ++counter.matvec_count;
  return y;
}

template <typename T>
double one_norm(const SparseMatrix<T>& a) {
  std::vector<double> colsum(a.cols(), 0.0);
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& vv = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (auto k = rp[i]; k < rp[i + 1]; ++k) colsum[ci[k]] += scalar_traits<T>::abs(vv[k]);
  double best = 0.0;
  for (double s : colsum) best = std::max(best, s);
  return best;
}

}  // namespace phifn
