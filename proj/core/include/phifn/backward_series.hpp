#pragma once

#include <memory>
#include <string>

#include "phifn/common.hpp"
#include "phifn/theta_table.hpp"

namespace phifn {

// Coefficients c_k of h_{m+2}(x) = log(e^{-x} T~_m(x)) = sum_{k>=m+2} c_k x^k,
// truncated at order K. The coefficients are exact rationals internally
// (series product and series logarithm carried out without rounding), exposed
// here as canonical strings plus |c_k| rounded to double. All bound
// evaluations happen at 256-bit precision behind h_tilde/solve_theta.
class BackwardSeries {
 public:
  int degree() const;      // m
  int truncation() const;  // K

  // |c_k| rounded to double; 0 for k outside [m+2, K].
  double coeff_abs(int k) const;

  // Exact c_k in lowest terms as "num/den" (den > 0), e.g. "-1/24".
  std::string coeff_rational(int k) const;

  struct Impl;

 private:
  friend BackwardSeries derive_series(int m, int K);
  friend double h_tilde(const BackwardSeries& series, double x);
  friend double solve_theta(const BackwardSeries& series, double tol, bool* saturated);
  std::shared_ptr<const Impl> impl_;
};

// Empirical convergence-radius guard for evaluating h~ (the truncated sum is
// a polynomial and always finite, but beyond this point it no longer says
// anything about h).
inline constexpr double kHTildeGuard = 20.0;

// Exact-series derivation of h_{m+2} through order K (K >= m+10 required).
BackwardSeries derive_series(int m, int K);

// h~_{m+2}(x) = sum_{k=m+2}^{K} |c_k| x^{k-1}, evaluated at 256-bit precision
// and rounded to double. Requires 0 <= x <= kHTildeGuard.
double h_tilde(const BackwardSeries& series, double x);

// Largest theta in [0, guard] with h~(theta) <= tol, by bisection to relative
// width 1e-6. If h~(guard) <= tol the guard itself is returned and
// *saturated (when given) is set.
double solve_theta(const BackwardSeries& series, double tol, bool* saturated = nullptr);

// theta_m for m = 1..m_max at the given tolerance, K = m+150 per degree.
ThetaTable build_theta_table(int m_max, double tol);

}  // namespace phifn
