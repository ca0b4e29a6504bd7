#include "phifn/backward_series.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace phifn {

struct BackwardSeries::Impl {
  int m = 0;
  int K = 0;
  std::vector<mpq_class> c;  // c[k], zero below m+2; exact rationals
};

namespace {

constexpr int kMpfrBits = 256;

// Scoped 256-bit MPFR value.
class Big {
 public:
  Big() { mpfr_init2(v_, kMpfrBits); }
  explicit Big(double x) : Big() { mpfr_set_d(v_, x, MPFR_RNDN); }
  ~Big() { mpfr_clear(v_); }
  Big(const Big&) = delete;
  Big& operator=(const Big&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// h~(x) = sum_{k=m+2}^{K} |c_k| x^{k-1} as a 256-bit value into `out`.
void h_tilde_big(const BackwardSeries::Impl& s, double x, mpfr_ptr out) {
  Big xx(x), term;
  mpfr_set_zero(out, 1);
  mpq_class a;
  for (int k = s.K; k >= s.m + 2; --k) {
    mpfr_mul(out, out, xx.get(), MPFR_RNDN);
    a = abs(s.c[static_cast<std::size_t>(k)]);
    mpfr_set_q(term.get(), a.get_mpq_t(), MPFR_RNDN);
    mpfr_add(out, out, term.get(), MPFR_RNDN);
  }
  mpfr_pow_ui(term.get(), xx.get(), static_cast<unsigned long>(s.m) + 1, MPFR_RNDN);
  mpfr_mul(out, out, term.get(), MPFR_RNDN);
}

// Per-step contraction factor of the |c_k| envelope near the truncation
// point. Individual coefficients can dip far below the trend when the
// log-series convolution cancels, so single consecutive-term ratios are
// useless: a dip at the numerator deflates, at the denominator inflates.
// Geometric means over 8..24-step windows see only their endpoints, and
// the median across window anchors and widths shrugs off isolated dips in
// either direction. Done in MPFR: raw |c_k| underflow double for large m.
double envelope_step_ratio(const BackwardSeries::Impl& s) {
  Big r;
  std::vector<double> samples;
  for (int hi = s.K; hi > s.K - 3 && hi > s.m + 2; --hi) {
    const mpq_class& chi = s.c[static_cast<std::size_t>(hi)];
    if (chi == 0) continue;
    for (int w = 8; w <= 24; w += 8) {
      int lo = hi - w;
      if (lo < s.m + 2) break;
      const mpq_class& clo = s.c[static_cast<std::size_t>(lo)];
      if (clo == 0) continue;
      mpq_class q = abs(mpq_class(chi / clo));
      mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDN);
      mpfr_rootn_ui(r.get(), r.get(), static_cast<unsigned long>(w), MPFR_RNDN);
      samples.push_back(mpfr_get_d(r.get(), MPFR_RNDN));
    }
  }
  if (samples.size() < 3)
    throw DomainError("solve_theta: cannot estimate tail decay (degenerate coefficients)");
  auto mid = samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2);
  std::nth_element(samples.begin(), mid, samples.end());
  return *mid;
}

// Tail estimate at x = theta for the truncation of `s`, using `ext`: the
// same series carried further out. The terms of `ext` beyond s.K are summed
// outright, and the remainder past ext.K is bounded geometrically by
// head * r/(1-r), with r the empirical envelope contraction per step at
// the far anchor and head an envelope bound on the last kept term. The
// far anchor matters: around k = K the coefficient envelope is still
// pre-asymptotic and for the largest degrees barely contracts at theta,
// even though the terms there are already vanishingly small. The whole
// estimate must stay below tol*1e-3 for theta to be accepted.
void verify_tail(const BackwardSeries::Impl& s, const BackwardSeries::Impl& ext, double theta,
                 double tol) {
  if (theta == 0.0) return;
  double r = envelope_step_ratio(ext) * theta;
  if (r >= 0.9)
    throw DomainError("solve_theta: truncation K insufficient at theta (non-contracting tail)");

  Big tail, term, t;
  mpfr_set_zero(tail.get(), 1);
  for (int k = s.K + 1; k <= ext.K; ++k) {
    mpq_class a = abs(ext.c[static_cast<std::size_t>(k)]);
    if (a == 0) continue;
    mpfr_set_q(term.get(), a.get_mpq_t(), MPFR_RNDN);
    mpfr_set_d(t.get(), theta, MPFR_RNDN);
    mpfr_pow_ui(t.get(), t.get(), static_cast<unsigned long>(k) - 1, MPFR_RNDN);
    mpfr_mul(term.get(), term.get(), t.get(), MPFR_RNDN);
    mpfr_add(tail.get(), tail.get(), term.get(), MPFR_RNDN);
  }

  // max over the last few kept terms |c_k| theta^{k-1}: overestimates the
  // anchor term whenever c_K itself sits in a cancellation dip.
  Big head;
  mpfr_set_zero(head.get(), 1);
  for (int k = ext.K; k > ext.K - 3 && k >= ext.m + 2; --k) {
    mpq_class a = abs(ext.c[static_cast<std::size_t>(k)]);
    if (a == 0) continue;
    mpfr_set_q(term.get(), a.get_mpq_t(), MPFR_RNDN);
    mpfr_set_d(t.get(), theta, MPFR_RNDN);
    mpfr_pow_ui(t.get(), t.get(), static_cast<unsigned long>(k) - 1, MPFR_RNDN);
    mpfr_mul(term.get(), term.get(), t.get(), MPFR_RNDN);
    if (mpfr_cmp(term.get(), head.get()) > 0) mpfr_set(head.get(), term.get(), MPFR_RNDN);
  }
  mpfr_mul_d(head.get(), head.get(), r / (1.0 - r), MPFR_RNDN);
  mpfr_add(tail.get(), tail.get(), head.get(), MPFR_RNDN);
  if (mpfr_cmp_d(tail.get(), tol * 1e-3) > 0)
    throw DomainError("solve_theta: truncation K insufficient at theta (tail too large)");
}

}  // namespace

int BackwardSeries::degree() const { return impl_->m; }
int BackwardSeries::truncation() const { return impl_->K; }

double BackwardSeries::coeff_abs(int k) const {
  if (k < impl_->m + 2 || k > impl_->K) return 0.0;
  return std::abs(impl_->c[static_cast<std::size_t>(k)].get_d());
}

std::string BackwardSeries::coeff_rational(int k) const {
  if (k < 0 || k > impl_->K) throw ParameterError("coeff_rational: k beyond truncation");
  mpq_class v = (k < impl_->m + 2) ? mpq_class(0) : impl_->c[static_cast<std::size_t>(k)];
  std::string s = v.get_str();
  if (s.find('/') == std::string::npos) s += "/1";
  return s;
}

BackwardSeries derive_series(int m, int K) {
  if (m < 1) throw ParameterError("derive_series: m must be >= 1");
  if (K < m + 10) throw ParameterError("derive_series: K must be >= m+10");

  auto impl = std::make_shared<BackwardSeries::Impl>();
  impl->m = m;
  impl->K = K;
  impl->c.assign(static_cast<std::size_t>(K) + 1, mpq_class(0));

  // w = e^{-x} T~_m(x) - 1. Convolving the two series and telescoping the
  // alternating binomial partial sums gives the closed form
  //   w_k = (-1)^{k-m-1} C(k-1, m+1) / k!,   k >= m+2   (zero below).
  // In particular w_{m+2} = -1/(m+2)!.
  std::vector<mpq_class> w(static_cast<std::size_t>(K) + 1, mpq_class(0));
  mpz_class kfact = 1;
  for (int i = 2; i <= m + 1; ++i) kfact *= i;
  for (int k = m + 2; k <= K; ++k) {
    kfact *= k;
    mpz_class bin;
    mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(k) - 1,
                 static_cast<unsigned long>(m) + 1);
    mpq_class wk(bin, kfact);
    wk.canonicalize();
    if ((k - m - 1) % 2 != 0) wk = -wk;
    w[static_cast<std::size_t>(k)] = wk;
  }

  // h = log(1 + w) through the logarithmic-derivative identity
  // (1+w) h' = w', i.e. k h_k = k w_k - sum_i i h_i w_{k-i}; both factor
  // series start at order m+2 so the convolution kicks in at k >= 2(m+2).
  for (int k = m + 2; k <= K; ++k) {
    mpq_class acc = w[static_cast<std::size_t>(k)] * k;
    for (int i = m + 2; i <= k - m - 2; ++i)
      acc -= impl->c[static_cast<std::size_t>(i)] * i * w[static_cast<std::size_t>(k - i)];
    acc /= k;
    impl->c[static_cast<std::size_t>(k)] = acc;
  }

  BackwardSeries out;
  out.impl_ = std::move(impl);
  return out;
}

double h_tilde(const BackwardSeries& series, double x) {
  if (!(x >= 0.0)) throw DomainError("h_tilde: x must be nonnegative");
  if (x > kHTildeGuard) throw DomainError("h_tilde: x beyond the series guard");
  Big v;
  h_tilde_big(*series.impl_, x, v.get());
  return mpfr_get_d(v.get(), MPFR_RNDN);
}

double solve_theta(const BackwardSeries& series, double tol, bool* saturated) {
  if (!(tol > 0.0)) throw ParameterError("solve_theta: tol must be positive");
  if (saturated) *saturated = false;

  if (h_tilde(series, kHTildeGuard) <= tol) {
    // Saturated: the whole guarded interval satisfies the bound. The tail
    // estimate is meaningless out here, which is exactly what the flag says.
    if (saturated) *saturated = true;
    return kHTildeGuard;
  }

  double lo = 0.0, hi = kHTildeGuard;
  while (hi - lo > 1e-6 * std::max(lo, 1e-300)) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h_tilde(series, mid) <= tol ? lo : hi) = mid;
  }
  BackwardSeries ext = derive_series(series.impl_->m, series.impl_->K + 60);
  verify_tail(*series.impl_, *ext.impl_, lo, tol);
  return lo;
}

ThetaTable build_theta_table(int m_max, double tol) {
  if (m_max < 1) throw ParameterError("build_theta_table: m_max must be >= 1");
  std::map<int, double> values;
  double prev = 0.0;
  bool prev_saturated = false;
  for (int m = 1; m <= m_max; ++m) {
    BackwardSeries s = derive_series(m, m + 150);
    bool sat = false;
    double th = solve_theta(s, tol, &sat);
    if (th < prev || (!prev_saturated && m > 1 && th <= prev))
      throw DomainError("build_theta_table: theta failed to increase at m=" + std::to_string(m));
    values.emplace(m, th);
    prev = th;
    prev_saturated = sat;
  }
  return ThetaTable(tol, std::move(values));
}

}  // namespace phifn
