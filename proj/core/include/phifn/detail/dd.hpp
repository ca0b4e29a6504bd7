#pragma once

// Double-double primitives (~106-bit significand) for the reference oracle.
// All branch-free; the error-extraction identities require that the compiler
// not contract a*b +/- c into fma behind our back, so the translation units
// using these are built with -ffp-contract=off (explicit std::fma is still
// emitted as a fused instruction).

#include <cmath>

namespace phifn::detail {

struct dd {
  double hi = 0.0;
  double lo = 0.0;
};

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// requires |a| >= |b| or a == 0
inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd dd_from(double a) { return {a, 0.0}; }

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }

inline dd dd_add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul(dd a, dd b) {
  double p = a.hi * b.hi;
  double e = std::fma(a.hi, b.hi, -p);
  e = std::fma(a.hi, b.lo, e);
  e = std::fma(a.lo, b.hi, e);
  return quick_two_sum(p, e);
}

inline dd dd_mul_d(dd a, double b) {
  double p = a.hi * b;
  double e = std::fma(a.hi, b, -p);
  e = std::fma(a.lo, b, e);
  return quick_two_sum(p, e);
}

inline dd dd_div_d(dd a, double b) {
  double q1 = a.hi / b;
  dd p = two_prod(q1, b);
  double q2 = (((a.hi - p.hi) - p.lo) + a.lo) / b;
  return quick_two_sum(q1, q2);
}

inline double dd_to_double(dd a) { return a.hi + a.lo; }

// y[i] += s * x[i] over hi/lo planes; the accumulate uses a single two_sum
// with folded low-order terms (costs ~1 ulp of dd per step, which the oracle
// tolerances dwarf) so the loop stays straight-line and vectorizes.
inline void dd_axpy(std::size_t n, double shi, double slo, const double* __restrict xhi,
                    const double* __restrict xlo, double* __restrict yhi,
                    double* __restrict ylo) {
  for (std::size_t i = 0; i < n; ++i) {
    double p = xhi[i] * shi;
    double e = std::fma(xhi[i], shi, -p);
    e = std::fma(xhi[i], slo, e);
    e = std::fma(xlo[i], shi, e);
    double s = yhi[i] + p;
    double bb = s - yhi[i];
    double err = (yhi[i] - (s - bb)) + (p - bb);
    err += ylo[i] + e;
    double hi = s + err;
    ylo[i] = err - (hi - s);
    yhi[i] = hi;
  }
}

}  // namespace phifn::detail
