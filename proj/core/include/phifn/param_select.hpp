#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "phifn/common.hpp"
#include "phifn/dense_matrix.hpp"
#include "phifn/norm_est.hpp"
#include "phifn/sparse_matrix.hpp"
#include "phifn/taylor.hpp"
#include "phifn/theta_table.hpp"

namespace phifn {

// Candidate degrees for the dense path; the cost curve is minimized no later
// than 25 for every alpha, so larger degrees never pay off there.
inline constexpr int kDenseDegrees[] = {2, 4, 6, 9, 12, 16, 20, 25};

// Action-path defaults: m_max = 55, hence p_max = 8 (largest p(p-1) <= 57).
inline constexpr int kDefaultActionMMax = 55;

// Beyond this the dense scaling 2^{-s} has thrown away every bit of A.
inline constexpr long kScalingCap = 60;

// The norm quantities that justified a parameter choice:
// d[i] = ||A^{i+1}||_1^{1/(i+1)} (exact or estimated), alpha[i] = alpha_{i+1},
// eta | the Algorithm-dependent minima, and p = the index backing the
// backward-error bound for the returned (m, s).
struct SelectionEvidence {
  std::vector<double> d;
  std::vector<double> alpha;
  std::vector<double> eta;
  int p = 0;
};

template <typename T>
struct PhiParams {
  int m = 0;
  long s = 0;     // power-of-two exponent (dense path) / divisor (action path)
  long cost = 0;  // predicted matmuls pi_m + 2s (dense) / matvecs s(m+1)-1 (action)
  std::vector<DenseMatrix<T>> powers;  // I, X, X^2, ... rescaled by the selector
  SelectionEvidence evidence;
};

// alpha_p = max(d_p, d_{p+1}) for every p with both roots present.
inline std::map<int, double> alpha_p(const std::map<int, double>& norm_roots) {
  std::map<int, double> out;
  for (const auto& [p, dp] : norm_roots) {
    auto next = norm_roots.find(p + 1);
    if (next != norm_roots.end()) out.emplace(p, std::max(dp, next->second));
  }
  if (out.empty())
    throw ParameterError("alpha_p: need d_p and d_{p+1} for at least one p");
  return out;
}

namespace detail {

inline long ceil_log2(double ratio) {
  // ratio > 0; exact powers of two land on themselves.
  return static_cast<long>(std::ceil(std::log2(ratio)));
}

inline long ceil_div_theta(double x, double theta) {
  return static_cast<long>(std::ceil(x / theta));
}

template <typename T>
void rescale_powers(std::vector<DenseMatrix<T>>& powers, long s) {
  for (std::size_t i = 1; i < powers.size(); ++i)
    powers[i] = scale(powers[i], std::ldexp(1.0, static_cast<int>(-static_cast<long>(i) * s)));
}

}  // namespace detail

// Sequential-threshold choice: walk m through the dense candidates with
// lazily exact powers and bound products, first hit wins with s = 0;
// otherwise m = 25 and s from eta_4. Powers A^2..A^5 formed along the walk
// are returned (rescaled) for reuse by the evaluator.
template <typename T>
PhiParams<T> select_sequential(const DenseMatrix<T>& a, const ThetaTable& theta,
                               OpCounter& counter) {
  if (!a.square()) throw ShapeError("select_sequential: square matrix required");
  const double inf = std::numeric_limits<double>::infinity();

  PhiParams<T> out;
  auto& powers = out.powers;  // [I, A, A^2, ...]
  powers.push_back(DenseMatrix<T>::identity(a.rows()));
  powers.push_back(a);

  auto done = [&](int m, int p) {
    out.m = m;
    out.s = 0;
    out.cost = ps_plan(m).matmuls();
    out.evidence.p = p;
    return out;
  };

  powers.push_back(mat_mul(a, a, counter));  // A_2
  double d1 = one_norm(a);
  double d2 = one_norm(powers[2]);
  double d3 = d1 * d2;  // bound placeholder, refined once A_3 exists
  double d4 = inf, d5 = inf, d6 = inf;
  double alpha1 = d1;
  double alpha2 = std::max(std::sqrt(d2), std::cbrt(d3));
  out.evidence.d = {d1, d2};
  out.evidence.alpha = {alpha1, alpha2};

  double eta1 = alpha2;
  out.evidence.eta = {eta1};
  if (eta1 <= theta.at(2)) return done(2, 2);
  if (eta1 <= theta.at(4)) return done(4, 2);

  powers.push_back(mat_mul(powers[1], powers[2], counter));  // A_3 = A_1 A_2
  d3 = one_norm(powers[3]);
  d4 = std::min(d1 * d3, d4);
  alpha2 = std::max(std::sqrt(d2), std::cbrt(d3));
  double alpha3 = std::max(std::cbrt(d3), std::pow(d4, 0.25));
  double eta2 = std::min(alpha2, alpha3);
  out.evidence.d = {d1, d2, d3};
  out.evidence.alpha = {alpha1, alpha2, alpha3};
  out.evidence.eta = {eta1, eta2};
  if (eta2 <= theta.at(6)) return done(6, alpha2 <= alpha3 ? 2 : 3);
  if (eta2 <= theta.at(9)) return done(9, alpha2 <= alpha3 ? 2 : 3);

  powers.push_back(mat_mul(powers[2], powers[2], counter));  // A_4 = A_2^2
  d4 = one_norm(powers[4]);
  d5 = std::min(d1 * d4, d2 * d3);
  alpha3 = std::max(std::cbrt(d3), std::pow(d4, 0.25));
  double alpha4 = std::max(std::pow(d4, 0.25), std::pow(d5, 0.2));
  double eta3 = std::min({alpha2, alpha3, alpha4});
  out.evidence.d = {d1, d2, d3, d4};
  out.evidence.alpha = {alpha1, alpha2, alpha3, alpha4};
  out.evidence.eta = {eta1, eta2, eta3};
  auto argp3 = [&] { return eta3 == alpha2 ? 2 : (eta3 == alpha3 ? 3 : 4); };
  if (eta3 <= theta.at(12)) return done(12, argp3());
  if (eta3 <= theta.at(16)) return done(16, argp3());

  powers.push_back(mat_mul(powers[1], powers[4], counter));  // A_5 = A_1 A_4
  d5 = one_norm(powers[5]);
  d6 = std::min({d1 * d5, d2 * d4, d3 * d3});
  alpha4 = std::max(std::pow(d4, 0.25), std::pow(d5, 0.2));
  double alpha5 = std::max(std::pow(d5, 0.2), std::pow(d6, 1.0 / 6.0));
  double eta4 = std::min({alpha2, alpha3, alpha4, alpha5});
  out.evidence.d = {d1, d2, d3, d4, d5};
  out.evidence.alpha = {alpha1, alpha2, alpha3, alpha4, alpha5};
  out.evidence.eta = {eta1, eta2, eta3, eta4};
  auto argp4 = [&] {
    return eta4 == alpha2 ? 2 : (eta4 == alpha3 ? 3 : (eta4 == alpha4 ? 4 : 5));
  };
  if (eta4 <= theta.at(20)) return done(20, argp4());
  if (eta4 <= theta.at(25)) return done(25, argp4());

  out.m = 25;
  out.s = detail::ceil_log2(eta4 / theta.at(25));
  if (out.s > kScalingCap)
    throw ScalingOverflowError("select_sequential: scaling exponent beyond 2^-60");
  out.cost = ps_plan(25).matmuls() + 2 * out.s;
  out.evidence.p = argp4();
  detail::rescale_powers(out.powers, out.s);
  return out;
}

// Cost-minimizing choice (dense): estimate d_p for p = 2..6, build the
// alpha/eta ladder, and take the m minimizing pi_m + 2 s_m. Powers up to
// X^q are formed and rescaled here so the evaluator can reuse them.
template <typename T>
PhiParams<T> select_costmin(const DenseMatrix<T>& a, const ThetaTable& theta, OpCounter& counter,
                            const EstimatorOptions& estimator = {}) {
  if (!a.square()) throw ShapeError("select_costmin: square matrix required");
  constexpr int p_max = 5;

  std::vector<double> d(p_max + 2, 0.0);  // d[p], p = 1..6
  d[1] = one_norm(a);
  for (int p = 2; p <= p_max + 1; ++p) {
    NormEstimate est = normest_power(a, p, estimator);
    ++counter.norm_est_count;
    d[p] = std::pow(est.value, 1.0 / p);
  }

  std::vector<double> alpha(p_max + 1, 0.0);  // alpha[p], p = 1..5
  alpha[1] = d[1];
  for (int p = 2; p <= p_max; ++p) alpha[p] = std::max(d[p], d[p + 1]);

  std::vector<double> eta(p_max + 1, 0.0);  // eta[p], p = 1..5
  eta[1] = alpha[2];
  for (int p = 2; p <= p_max; ++p) eta[p] = std::min(eta[p - 1], alpha[p]);

  auto eta_index = [](int m) { return m == 2 ? 2 : (m <= 9 ? 3 : (m <= 16 ? 4 : 5)); };

  int best_m = 0;
  long best_s = 0, best_cost = std::numeric_limits<long>::max();
  for (int m : kDenseDegrees) {
    const double e = eta[eta_index(m)];
    const double th = theta.at(m);
    long sm = e > 0.0 ? std::max(detail::ceil_log2(e / th), 0L) : 0L;
    long cm = ps_plan(m).matmuls() + 2 * sm;
    if (cm < best_cost) {
      best_cost = cm;
      best_m = m;
      best_s = sm;
    }
  }
  if (best_s > kScalingCap)
    throw ScalingOverflowError("select_costmin: scaling exponent beyond 2^-60");

  PhiParams<T> out;
  out.m = best_m;
  out.s = best_s;
  out.cost = best_cost;
  out.evidence.d.assign(d.begin() + 1, d.end());
  out.evidence.alpha.assign(alpha.begin() + 1, alpha.end());
  out.evidence.eta.assign(eta.begin() + 1, eta.end());
  out.evidence.p = eta_index(best_m);

  const int q = ps_plan(best_m).q;
  out.powers.push_back(DenseMatrix<T>::identity(a.rows()));
  out.powers.push_back(a);
  extend_powers(out.powers, q, counter);
  detail::rescale_powers(out.powers, out.s);
  return out;
}

// Action-path choice per the matvec cost model. Cheap matrices take the
// ||A||_1 branch (estimating alpha_p would cost more than it saves, the
// 4*p_max*(p_max+3)+1 threshold); otherwise minimize over the (m, p) grid
// with p(p-1)-2 <= m. The ceil(alpha/theta) factor is clamped to >= 1, which
// is what the returned s has to satisfy anyway.
template <typename Matrix>
PhiParams<typename Matrix::value_type> select_action(const Matrix& a, const ThetaTable& theta,
                                                     int m_max, OpCounter& counter,
                                                     const EstimatorOptions& estimator = {}) {
  using T = typename Matrix::value_type;
  if (!a.square()) throw ShapeError("select_action: square matrix required");
  if (m_max < 2) throw ParameterError("select_action: m_max must be >= 2");

  int p_max = 2;
  while ((p_max + 1) * p_max <= m_max + 2) ++p_max;

  PhiParams<T> out;
  const double d1 = one_norm(a);
  out.evidence.d = {d1};

  const double cheap = theta.at(m_max) * (4.0 * p_max * (p_max + 3) + 1.0) / m_max;
  if (d1 <= cheap) {
    long best_cost = std::numeric_limits<long>::max();
    for (int m = 1; m <= m_max; ++m) {
      if (!theta.has(m)) continue;
      long sm = std::max(detail::ceil_div_theta(d1, theta.at(m)), 1L);
      long cm = static_cast<long>(m + 1) * sm - 1;
      if (cm < best_cost) {
        best_cost = cm;
        out.m = m;
        out.s = sm;
      }
    }
    out.cost = best_cost;
    out.evidence.p = 1;
    return out;
  }

  std::vector<double> d(p_max + 2, 0.0);
  d[1] = d1;
  for (int p = 2; p <= p_max + 1; ++p) {
    NormEstimate est = normest_power(a, p, estimator);
    ++counter.norm_est_count;
    d[p] = std::pow(est.value, 1.0 / p);
  }
  std::vector<double> alpha(p_max + 1, 0.0);
  alpha[1] = d[1];
  for (int p = 2; p <= p_max; ++p) alpha[p] = std::max(d[p], d[p + 1]);

  long best_cost = std::numeric_limits<long>::max();
  for (int m = 1; m <= m_max; ++m) {
    if (!theta.has(m)) continue;
    for (int p = 2; p <= p_max; ++p) {
      if (p * (p - 1) - 2 > m) continue;
      long sm = std::max(detail::ceil_div_theta(alpha[p], theta.at(m)), 1L);
      long cm = static_cast<long>(m + 1) * sm - 1;
      if (cm < best_cost) {
        best_cost = cm;
        out.m = m;
        out.s = sm;
        out.evidence.p = p;
      }
    }
  }
  out.cost = best_cost;
  out.evidence.d.assign(d.begin() + 1, d.end());
  out.evidence.alpha.assign(alpha.begin() + 1, alpha.end());
  return out;
}

}  // namespace phifn
