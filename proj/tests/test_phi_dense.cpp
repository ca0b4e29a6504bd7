#include <cmath>
#include <complex>
#include <limits>

#include "doctest.h"
#include "phifn/oracle.hpp"
#include "phifn/phi_dense.hpp"
#include "test_support.hpp"

using namespace phifn;

namespace {

// T and T~ of a 1x1 matrix [x] at degree m, for driving modified_squaring
// directly.
std::pair<DenseMatrix<double>, DenseMatrix<double>> scalar_taylor(double x, int m,
                                                                  OpCounter& counter) {
  PSPlan plan = ps_plan(m);
  auto xm = DenseMatrix<double>::from_data(1, 1, {x});
  auto powers = make_powers(xm, plan.q, counter);
  auto t = eval_T(powers, plan, counter);
  auto tt = eval_T_tilde(xm, t, counter);
  return {t, tt};
}

double rel_dist_1(const DenseMatrix<double>& a, const DenseMatrix<double>& b) {
  return one_norm(sub(a, b)) / one_norm(b);
}

}  // namespace

TEST_CASE("modified_squaring guards") {
  OpCounter counter;
  auto t = DenseMatrix<double>::identity(2);
  auto rect = DenseMatrix<double>::from_data(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK_THROWS_AS(modified_squaring(rect, rect, 1, counter), ShapeError);
  CHECK_THROWS_AS(modified_squaring(t, DenseMatrix<double>::identity(3), 1, counter), ShapeError);
  CHECK_THROWS_AS(modified_squaring(t, t, 0, counter), ParameterError);
}

TEST_CASE("modified_squaring s=1 is a single halving step") {
  auto g = testsup::make_rng(2);
  auto t = testsup::random_dense(5, g);
  auto tt = testsup::random_dense(5, g);
  OpCounter c1, c2;
  auto got = modified_squaring(t, tt, 1, c1);
  auto want = scale(mat_mul(t, add_scaled_identity(tt, 1.0), c2), 0.5);
  CHECK(got == want);  // same op sequence, bitwise
  CHECK(c1.matmul_count == 1);
}

TEST_CASE("modified_squaring recovers phi(4) from the quarter argument") {
  OpCounter counter;
  auto [t, tt] = scalar_taylor(1.0, 25, counter);  // X = 2^-2 * 4
  OpCounter op_counter;
  auto y = modified_squaring(t, tt, 2, op_counter);
  double want = std::expm1(4.0) / 4.0;  // 13.399537508286059
  CHECK(std::abs(y(0, 0) - want) <= 1e-13 * want);
  CHECK(op_counter.matmul_count == 3);  // 2s-1 for the recurrence itself
}

TEST_CASE("squaring tail costs 2s multiplies including the T~ assembly") {
  auto g = testsup::make_rng(6);
  auto x = testsup::random_dense(4, g, 0.5);
  OpCounter setup;
  PSPlan plan = ps_plan(9);
  auto powers = make_powers(x, plan.q, setup);
  auto t = eval_T(powers, plan, setup);
  OpCounter tail;
  auto tt = eval_T_tilde(x, t, tail);
  modified_squaring(t, tt, 3, tail);
  CHECK(tail.matmul_count == 6);
}

TEST_CASE("phi_dense special values") {
  for (Strategy strategy : {Strategy::sequential, Strategy::costmin}) {
    OpCounter counter;
    auto zero = DenseMatrix<double>::from_data(2, 2, {0, 0, 0, 0});
    CHECK(phi_dense(zero, strategy, counter) == DenseMatrix<double>::identity(2));

    auto nil = DenseMatrix<double>::from_data(2, 2, {0, 0, 1, 0});
    auto yn = phi_dense(nil, strategy, counter);
    CHECK(yn(0, 0) == 1.0);
    CHECK(yn(0, 1) == 0.5);
    CHECK(yn(1, 0) == 0.0);
    CHECK(yn(1, 1) == 1.0);

    auto two = scale(DenseMatrix<double>::identity(2), 2.0);
    auto y2 = phi_dense(two, strategy, counter);
    double want2 = std::expm1(2.0) / 2.0;  // 3.19452804946533
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        if (i == j)
          CHECK(y2(i, j) == doctest::Approx(want2).epsilon(1e-14));
        else
          CHECK(y2(i, j) == 0.0);
      }

    auto d = DenseMatrix<double>::from_data(2, 2, {1, 0, 0, -1});
    auto yd = phi_dense(d, strategy, counter);
    CHECK(yd(0, 0) == doctest::Approx(std::expm1(1.0)).epsilon(1e-14));
    CHECK(yd(1, 1) == doctest::Approx(-std::expm1(-1.0)).epsilon(1e-14));
  }
}

TEST_CASE("phi_dense on 1x1 matches the scalar formula") {
  for (double x : {-30.0, -4.0, -0.7, 1e-8, 0.3, 2.0, 17.0, 49.0}) {
    OpCounter counter;
    auto y = phi_dense(DenseMatrix<double>::from_data(1, 1, {x}), Strategy::sequential, counter);
    double want = std::expm1(x) / x;
    CHECK(y(0, 0) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("phi_dense counter equals the predicted cost") {
  auto g = testsup::make_rng(14);
  for (double norm : {1e-7, 0.01, 0.3, 1.0, 4.0, 22.0}) {
    auto a = testsup::random_dense(6, g, norm);
    for (Strategy strategy : {Strategy::sequential, Strategy::costmin}) {
      OpCounter counter;
      PhiParams<double> params;
      phi_dense(a, strategy, counter, ThetaTable::builtin(), {}, &params);
      CHECK(counter.matmul_count == params.cost);
      CHECK(counter.matmul_count == ps_plan(params.m).matmuls() + 2 * params.s);
      CHECK(counter.matvec_count == 0);
      if (strategy == Strategy::costmin) CHECK(counter.norm_est_count == 5);
    }
  }
}

TEST_CASE("phi_dense satisfies the defining identity against the oracle") {
  auto g = testsup::make_rng(23);
  OpCounter scratch;
  for (std::size_t n : {3, 8, 17, 33, 64}) {
    for (double norm : {0.5, 3.0, 20.0, 50.0}) {
      auto a = testsup::random_dense(n, g, norm);
      auto [ea, pa] = phi_exp_ref(a);
      auto y = phi_dense(a, Strategy::sequential, scratch);

      // A*phi(A) = e^A - I
      auto lhs = mat_mul(a, y, scratch);
      auto rhs = sub(ea, DenseMatrix<double>::identity(n));
      CHECK(one_norm(sub(lhs, rhs)) <= 1e-12 * one_norm(ea));

      // and phi itself against the extended-precision reference
      CHECK(rel_err_1(y, pa) <= 1e-11);
    }
  }
}

TEST_CASE("phi_dense halving recurrence and strategy agreement") {
  auto g = testsup::make_rng(29);
  OpCounter scratch;
  for (std::size_t n : {4, 12, 40}) {
    for (double norm : {0.8, 6.0, 37.0}) {
      auto a = testsup::random_dense(n, g, norm);
      auto y = phi_dense(a, Strategy::sequential, scratch);

      // phi(A) = 1/2 phi(A/2) (e^{A/2} + I)
      auto half = scale(a, 0.5);
      auto yh = phi_dense(half, Strategy::sequential, scratch);
      auto recon =
          scale(mat_mul(yh, add_scaled_identity(expm_ref(half), 1.0), scratch), 0.5);
      CHECK(one_norm(sub(y, recon)) <= 1e-11 * one_norm(y));

      auto yc = phi_dense(a, Strategy::costmin, scratch);
      CHECK(rel_dist_1(yc, y) <= 1e-11);
    }
  }
}

TEST_CASE("phi_dense complex matches the oracle") {
  auto g = testsup::make_rng(37);
  OpCounter counter;
  for (double norm : {0.4, 2.5, 9.0}) {
    auto a = testsup::random_cdense(12, g, norm);
    auto y = phi_dense(a, Strategy::sequential, counter);
    CHECK(rel_err_1(y, phi_ref(a)) <= 1e-12);
  }
}

TEST_CASE("phi_dense input guards") {
  OpCounter counter;
  auto rect = DenseMatrix<double>::from_data(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK_THROWS_AS(phi_dense(rect, Strategy::sequential, counter), ShapeError);
  DenseMatrix<double> bad(2, 2);  // from_data would reject the infinity at construction
  bad(0, 0) = 1.0;
  bad(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(phi_dense(bad, Strategy::sequential, counter), DomainError);
}
