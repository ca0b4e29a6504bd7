#include "phifn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "phifn/common.hpp"
#include "phifn/detail/dd.hpp"

namespace phifn {
namespace {

using detail::dd;
using detail::dd_div_d;
using detail::dd_from;

// Square matrix held as separate hi/lo column-major planes.
struct DDMat {
  std::size_t n = 0;
  std::vector<double> hi, lo;
  DDMat() = default;
  explicit DDMat(std::size_t order) : n(order), hi(order * order, 0.0), lo(order * order, 0.0) {}
  void zero() {
    std::fill(hi.begin(), hi.end(), 0.0);
    std::fill(lo.begin(), lo.end(), 0.0);
  }
};

// C += sign * A * B. Tiled over columns of C so A is streamed once per tile;
// zero B entries are skipped (the augmented matrices have whole zero blocks).
void gemm_acc(DDMat& c, const DDMat& a, const DDMat& b, double sign) {
  const std::size_t n = c.n;
  constexpr std::size_t tile = 16;
  for (std::size_t j0 = 0; j0 < n; j0 += tile) {
    const std::size_t j1 = std::min(j0 + tile, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double* ahi = a.hi.data() + k * n;
      const double* alo = a.lo.data() + k * n;
      for (std::size_t j = j0; j < j1; ++j) {
        const double shi = b.hi[k + j * n] * sign;
        const double slo = b.lo[k + j * n] * sign;
        if (shi == 0.0 && slo == 0.0) continue;
        detail::dd_axpy(n, shi, slo, ahi, alo, c.hi.data() + j * n, c.lo.data() + j * n);
      }
    }
  }
}

struct DDCMat {
  DDMat re, im;
  DDCMat() = default;
  explicit DDCMat(std::size_t order) : re(order), im(order) {}
};

struct RealOps {
  using Mat = DDMat;
  static std::size_t order(const Mat& m) { return m.n; }
  static void gemm(Mat& out, const Mat& a, const Mat& b) {
    out.zero();
    gemm_acc(out, a, b, 1.0);
  }
  static void axpy(Mat& y, dd c, const Mat& x) {
    detail::dd_axpy(y.n * y.n, c.hi, c.lo, x.hi.data(), x.lo.data(), y.hi.data(), y.lo.data());
  }
  static void add_scaled_identity(Mat& y, dd c) {
    for (std::size_t i = 0; i < y.n; ++i) {
      dd v = detail::dd_add({y.hi[i * (y.n + 1)], y.lo[i * (y.n + 1)]}, c);
      y.hi[i * (y.n + 1)] = v.hi;
      y.lo[i * (y.n + 1)] = v.lo;
    }
  }
};

struct CplxOps {
  using Mat = DDCMat;
  static std::size_t order(const Mat& m) { return m.re.n; }
  static void gemm(Mat& out, const Mat& a, const Mat& b) {
    out.re.zero();
    gemm_acc(out.re, a.re, b.re, 1.0);
    gemm_acc(out.re, a.im, b.im, -1.0);
    out.im.zero();
    gemm_acc(out.im, a.re, b.im, 1.0);
    gemm_acc(out.im, a.im, b.re, 1.0);
  }
  static void axpy(Mat& y, dd c, const Mat& x) {
    RealOps::axpy(y.re, c, x.re);
    RealOps::axpy(y.im, c, x.im);
  }
  static void add_scaled_identity(Mat& y, dd c) { RealOps::add_scaled_identity(y.re, c); }
};

// e^X for pre-scaled ||X||_1 <= 1/8: degree-40 Taylor by Paterson-Stockmeyer
// (truncation (1/8)^41/41! ~ 3e-87, far below dd resolution), then k_sq
// repeated squarings.
template <typename Ops>
typename Ops::Mat expm_dd(const typename Ops::Mat& x, int k_sq) {
  using Mat = typename Ops::Mat;
  constexpr int m = 40, q = 7;
  constexpr int r = m / q;  // 5; tail block r has width m - q*r + 1 = 6
  const std::size_t n = Ops::order(x);

  dd coeff[m + 1];
  coeff[0] = dd_from(1.0);
  for (int k = 1; k <= m; ++k) coeff[k] = dd_div_d(coeff[k - 1], static_cast<double>(k));

  std::vector<Mat> pw;
  pw.reserve(q + 1);
  pw.emplace_back(n);  // unused slot for X^0
  pw.push_back(x);
  for (int i = 2; i <= q; ++i) {
    pw.emplace_back(n);
    Ops::gemm(pw[i], pw[i - 1], x);
  }

  auto build_block = [&](int j) {
    const int width = j == r ? m - q * r + 1 : q;
    Mat b(n);
    Ops::add_scaled_identity(b, coeff[q * j]);
    for (int i = 1; i < width; ++i) Ops::axpy(b, coeff[q * j + i], pw[i]);
    return b;
  };

  Mat acc = build_block(r);
  Mat tmp(n);
  for (int j = r - 1; j >= 0; --j) {
    Ops::gemm(tmp, acc, pw[q]);
    std::swap(acc, tmp);
    Mat b = build_block(j);
    Ops::axpy(acc, dd_from(1.0), b);
  }
  for (int i = 0; i < k_sq; ++i) {
    Ops::gemm(tmp, acc, acc);
    std::swap(acc, tmp);
  }
  return acc;
}

int scaling_exponent(double nrm) {
  if (!(nrm >= 0.0) || nrm > 1e30)
    throw DomainError("oracle: 1-norm out of range for the reference exponential");
  if (nrm <= 0.125) return 0;
  return static_cast<int>(std::ceil(std::log2(nrm * 8.0)));
}

// Loaders: scaling by a power of two is exact, so lo planes start at zero.
void load_scaled(DDMat& dst, std::size_t offr, std::size_t offc, const DenseMatrix<double>& a,
                 double pow2) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      dst.hi[(offr + i) + (offc + j) * dst.n] = a(i, j) * pow2;
}

void load_scaled(DDCMat& dst, std::size_t offr, std::size_t offc,
                 const DenseMatrix<std::complex<double>>& a, double pow2) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) {
      dst.re.hi[(offr + i) + (offc + j) * dst.re.n] = a(i, j).real() * pow2;
      dst.im.hi[(offr + i) + (offc + j) * dst.re.n] = a(i, j).imag() * pow2;
    }
}

void set_entry(DDMat& dst, std::size_t i, std::size_t j, double v) {
  dst.hi[i + j * dst.n] = v;
}
void set_entry(DDCMat& dst, std::size_t i, std::size_t j, double v) {
  dst.re.hi[i + j * dst.re.n] = v;
}

DenseMatrix<double> store_block(const DDMat& src, std::size_t offr, std::size_t offc,
                                std::size_t rows, std::size_t cols, double pow2 = 1.0) {
  DenseMatrix<double> out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) {
      std::size_t idx = (offr + i) + (offc + j) * src.n;
      out(i, j) = (src.hi[idx] + src.lo[idx]) * pow2;
    }
  return out;
}

DenseMatrix<std::complex<double>> store_block(const DDCMat& src, std::size_t offr,
                                              std::size_t offc, std::size_t rows,
                                              std::size_t cols, double pow2 = 1.0) {
  DenseMatrix<std::complex<double>> out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) {
      std::size_t idx = (offr + i) + (offc + j) * src.re.n;
      out(i, j) = std::complex<double>((src.re.hi[idx] + src.re.lo[idx]) * pow2,
                                       (src.im.hi[idx] + src.im.lo[idx]) * pow2);
    }
  return out;
}

template <typename Ops, typename T>
DenseMatrix<T> expm_ref_impl(const DenseMatrix<T>& a) {
  if (!a.square()) throw ShapeError("expm_ref: square matrix required");
  if (a.rows() > kOracleMaxN) throw ParameterError("expm_ref: oracle capped at N <= 1024");
  a.require_finite();
  const std::size_t n = a.rows();
  const int k = scaling_exponent(one_norm(a));
  typename Ops::Mat x(n);
  load_scaled(x, 0, 0, a, std::ldexp(1.0, -k));
  return store_block(expm_dd<Ops>(x, k), 0, 0, n, n);
}

template <typename Ops, typename T>
std::pair<DenseMatrix<T>, DenseMatrix<T>> phi_exp_ref_impl(const DenseMatrix<T>& a) {
  if (!a.square()) throw ShapeError("phi_exp_ref: square matrix required");
  if (a.rows() > kOracleMaxN / 2) throw ParameterError("phi_exp_ref: oracle capped at N <= 512");
  a.require_finite();
  const std::size_t n = a.rows();
  const int k = scaling_exponent(std::max(one_norm(a), 1.0));
  // M = [[A, I], [0, 0]]: e^M = [[e^A, phi(A)], [0, I]], and the repeated
  // squaring of the augmented matrix reproduces the phi doubling with the
  // 2^-k factors cancelling exactly.
  typename Ops::Mat m(2 * n);
  const double pow2 = std::ldexp(1.0, -k);
  load_scaled(m, 0, 0, a, pow2);
  for (std::size_t i = 0; i < n; ++i) set_entry(m, i, n + i, pow2);
  auto e = expm_dd<Ops>(m, k);
  return {store_block(e, 0, 0, n, n), store_block(e, 0, n, n, n)};
}

template <typename Ops, typename T>
DenseMatrix<T> phi_action_ref_impl(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (!a.square()) throw ShapeError("phi_action_ref: square matrix required");
  if (a.rows() != b.rows()) throw ShapeError("phi_action_ref: b must have matrix-order rows");
  if (a.rows() + b.cols() > kOracleMaxN)
    throw ParameterError("phi_action_ref: oracle capped at N + cols <= 1024");
  a.require_finite();
  b.require_finite();
  const std::size_t n = a.rows(), w = b.cols();

  // Normalize each column by a power of two (exact) so b cannot inflate the
  // augmented norm and with it the squaring count.
  std::vector<double> beta(w, 0.0);
  DenseMatrix<T> bhat = b;
  for (std::size_t j = 0; j < w; ++j) {
    double cn = 0.0;
    for (std::size_t i = 0; i < n; ++i) cn += std::abs(b(i, j));
    if (cn == 0.0) continue;
    beta[j] = std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(cn))));
    for (std::size_t i = 0; i < n; ++i) bhat(i, j) = b(i, j) / beta[j];
  }

  const int k = scaling_exponent(std::max(one_norm(a), 1.0));
  typename Ops::Mat m(n + w);
  const double pow2 = std::ldexp(1.0, -k);
  load_scaled(m, 0, 0, a, pow2);
  load_scaled(m, 0, n, bhat, pow2);
  auto e = expm_dd<Ops>(m, k);

  DenseMatrix<T> out(n, w);
  for (std::size_t j = 0; j < w; ++j) {
    DenseMatrix<T> col = store_block(e, 0, n + j, n, 1, beta[j]);
    for (std::size_t i = 0; i < n; ++i) out(i, j) = col(i, 0);
  }
  return out;
}

template <typename T>
double rel_err_1_impl(const DenseMatrix<T>& x, const DenseMatrix<T>& y) {
  const double num = one_norm(sub(x, y));
  const double den = one_norm(y);
  if (den == 0.0) throw DomainError("rel_err_1: reference is zero");
  return num / den;
}

template <typename T>
double rel_err_2_impl(const DenseMatrix<T>& x, const DenseMatrix<T>& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ShapeError("rel_err_2: shapes must agree");
  double num = 0.0, den = 0.0;
  const T* xp = x.data();
  const T* yp = y.data();
  for (std::size_t i = 0; i < x.rows() * x.cols(); ++i) {
    const double d = std::abs(xp[i] - yp[i]);
    const double v = std::abs(yp[i]);
    num += d * d;
    den += v * v;
  }
  if (den == 0.0) throw DomainError("rel_err_2: reference is zero");
  return std::sqrt(num / den);
}

}  // namespace

DenseMatrix<double> expm_ref(const DenseMatrix<double>& a) {
  return expm_ref_impl<RealOps>(a);
}
DenseMatrix<std::complex<double>> expm_ref(const DenseMatrix<std::complex<double>>& a) {
  return expm_ref_impl<CplxOps>(a);
}

std::pair<DenseMatrix<double>, DenseMatrix<double>> phi_exp_ref(const DenseMatrix<double>& a) {
  return phi_exp_ref_impl<RealOps>(a);
}
std::pair<DenseMatrix<std::complex<double>>, DenseMatrix<std::complex<double>>> phi_exp_ref(
    const DenseMatrix<std::complex<double>>& a) {
  return phi_exp_ref_impl<CplxOps>(a);
}

DenseMatrix<double> phi_ref(const DenseMatrix<double>& a) { return phi_exp_ref(a).second; }
DenseMatrix<std::complex<double>> phi_ref(const DenseMatrix<std::complex<double>>& a) {
  return phi_exp_ref(a).second;
}

DenseMatrix<double> phi_action_ref(const DenseMatrix<double>& a, const DenseMatrix<double>& b) {
  return phi_action_ref_impl<RealOps>(a, b);
}
DenseMatrix<std::complex<double>> phi_action_ref(const DenseMatrix<std::complex<double>>& a,
                                                 const DenseMatrix<std::complex<double>>& b) {
  return phi_action_ref_impl<CplxOps>(a, b);
}

double rel_err_1(const DenseMatrix<double>& x, const DenseMatrix<double>& y) {
  return rel_err_1_impl(x, y);
}
double rel_err_1(const DenseMatrix<std::complex<double>>& x,
                 const DenseMatrix<std::complex<double>>& y) {
  return rel_err_1_impl(x, y);
}

double rel_err_2(const DenseMatrix<double>& x, const DenseMatrix<double>& y) {
  return rel_err_2_impl(x, y);
}
double rel_err_2(const DenseMatrix<std::complex<double>>& x,
                 const DenseMatrix<std::complex<double>>& y) {
  return rel_err_2_impl(x, y);
}

}  // namespace phifn
