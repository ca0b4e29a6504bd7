#include <complex>
#include <string>
#include <variant>

#include "doctest.h"
#include "phifn/matrix_market.hpp"
#include "test_support.hpp"

using namespace phifn;
using C = std::complex<double>;

namespace {

const SparseMatrix<double>& as_sparse(const AnyMatrix& m) {
  return std::get<SparseMatrix<double>>(m);
}
const DenseMatrix<double>& as_dense(const AnyMatrix& m) { return std::get<DenseMatrix<double>>(m); }

}  // namespace

TEST_CASE("coordinate real general") {
  AnyMatrix m = read_matrix_market_text(
      "%%MatrixMarket matrix coordinate real general\n"
      "% a comment\n"
      "2 2 3\n"
      "1 1 1.5\n"
      "2 1 -2\n"
      "2 2 3.25\n",
      "mem");
  CHECK(any_rows(m) == 2);
  CHECK(any_cols(m) == 2);
  CHECK(any_nnz(m) == 3);
  CHECK_FALSE(any_is_complex(m));
  const auto& s = as_sparse(m);
  auto d = s.to_dense();
  CHECK(d(0, 0) == 1.5);
  CHECK(d(0, 1) == 0.0);
  CHECK(d(1, 0) == -2.0);
  CHECK(d(1, 1) == 3.25);
}

TEST_CASE("unsorted duplicates are summed into canonical order") {
  AnyMatrix m = read_matrix_market_text(
      "%%MatrixMarket matrix coordinate real general\n"
      "3 3 4\n"
      "3 3 5\n"
      "1 1 1\n"
      "3 3 2.5\n"
      "2 3 -1\n",
      "mem");
  const auto& s = as_sparse(m);
  CHECK(s.nnz() == 3);
  auto d = s.to_dense();
  CHECK(d(2, 2) == 7.5);
  CHECK(d(0, 0) == 1.0);
  CHECK(d(1, 2) == -1.0);
}

TEST_CASE("symmetric storage mirrors off-diagonal entries") {
  AnyMatrix m = read_matrix_market_text(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 1\n"
      "2 1 4.5\n",
      "mem");
  const auto& s = as_sparse(m);
  CHECK(s.nnz() == 2);
  auto d = s.to_dense();
  CHECK(d(1, 0) == 4.5);
  CHECK(d(0, 1) == 4.5);

  // Diagonal entries are stored once.
  AnyMatrix md = read_matrix_market_text(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 2\n"
      "1 1 3\n"
      "2 1 4.5\n",
      "mem");
  CHECK(as_sparse(md).nnz() == 3);
}

TEST_CASE("skew-symmetric mirrors with negation, diagonal untouched") {
  AnyMatrix m = read_matrix_market_text(
      "%%MatrixMarket matrix coordinate real skew-symmetric\n"
      "3 3 2\n"
      "2 1 4\n"
      "3 3 9\n",
      "mem");
  const auto& s = as_sparse(m);
  CHECK(s.nnz() == 3);  // mirrored off-diagonal + kept diagonal
  auto d = s.to_dense();
  CHECK(d(1, 0) == 4.0);
  CHECK(d(0, 1) == -4.0);
  CHECK(d(2, 2) == 9.0);
}

TEST_CASE("hermitian mirrors with conjugation and requires complex") {
  AnyMatrix m = read_matrix_market_text(
      "%%MatrixMarket matrix coordinate complex hermitian\n"
      "2 2 2\n"
      "1 1 5 0\n"
      "2 1 1 -2\n",
      "mem");
  const auto& s = std::get<SparseMatrix<C>>(m);
  CHECK(any_is_complex(m));
  CHECK(s.nnz() == 3);
  auto d = s.to_dense();
  CHECK(d(1, 0) == C(1, -2));
  CHECK(d(0, 1) == C(1, 2));
  CHECK(d(0, 0) == C(5, 0));

  CHECK_THROWS_AS(read_matrix_market_text(
                      "%%MatrixMarket matrix coordinate real hermitian\n2 2 1\n2 1 1\n", "mem"),
                  ParseError);
}

TEST_CASE("pattern entries read as unit values") {
  AnyMatrix m = read_matrix_market_text(
      "%%MatrixMarket matrix coordinate pattern general\n"
      "2 2 2\n"
      "1 2\n"
      "2 2\n",
      "mem");
  auto d = as_sparse(m).to_dense();
  CHECK(d(0, 1) == 1.0);
  CHECK(d(1, 1) == 1.0);

  CHECK_THROWS_AS(
      read_matrix_market_text("%%MatrixMarket matrix array pattern general\n2 2\n", "mem"),
      ParseError);
}

TEST_CASE("integer field parses as real values") {
  AnyMatrix m = read_matrix_market_text(
      "%%MatrixMarket matrix coordinate integer general\n"
      "2 2 1\n"
      "1 2 -7\n",
      "mem");
  CHECK(as_sparse(m).to_dense()(0, 1) == -7.0);
}

TEST_CASE("array formats") {
  AnyMatrix m = read_matrix_market_text(
      "%%MatrixMarket matrix array real general\n"
      "2 3 \n"
      "1\n2\n3\n4\n5\n6\n",
      "mem");
  const auto& d = as_dense(m);
  CHECK(any_nnz(m) == 6);  // dense reports rows*cols
  // column-major fill
  CHECK(d(0, 0) == 1.0);
  CHECK(d(1, 0) == 2.0);
  CHECK(d(0, 1) == 3.0);
  CHECK(d(1, 2) == 6.0);

  AnyMatrix ms = read_matrix_market_text(
      "%%MatrixMarket matrix array real symmetric\n"
      "2 2\n"
      "1\n7\n4\n",  // lower triangle by columns: a11 a21 a22
      "mem");
  const auto& s = as_dense(ms);
  CHECK(s(0, 0) == 1.0);
  CHECK(s(1, 0) == 7.0);
  CHECK(s(0, 1) == 7.0);
  CHECK(s(1, 1) == 4.0);

  AnyMatrix mk = read_matrix_market_text(
      "%%MatrixMarket matrix array real skew-symmetric\n"
      "2 2\n"
      "3\n",  // strictly lower: a21 only, diagonal implicit zero
      "mem");
  const auto& k = as_dense(mk);
  CHECK(k(1, 0) == 3.0);
  CHECK(k(0, 1) == -3.0);
  CHECK(k(0, 0) == 0.0);
  CHECK(k(1, 1) == 0.0);

  AnyMatrix mc = read_matrix_market_text(
      "%%MatrixMarket matrix array complex general\n"
      "1 1\n"
      "1.5 -2.5\n",
      "mem");
  CHECK(std::get<DenseMatrix<C>>(mc)(0, 0) == C(1.5, -2.5));
}

TEST_CASE("complex coordinate entries carry both parts") {
  AnyMatrix m = read_matrix_market_text(
      "%%MatrixMarket matrix coordinate complex general\n"
      "2 2 1\n"
      "1 2 3.5 -1.25\n",
      "mem");
  CHECK(std::get<SparseMatrix<C>>(m).to_dense()(0, 1) == C(3.5, -1.25));
}

TEST_CASE("malformed input fails with origin and line number") {
  auto expect_parse_error = [](const std::string& text, const std::string& needle) {
    CHECK_THROWS_WITH_AS(read_matrix_market_text(text, "mem"),
                         doctest::Contains(needle.c_str()), ParseError);
  };

  expect_parse_error("%%NotMatrixMarket matrix coordinate real general\n1 1 0\n", "mem:1:");
  expect_parse_error("%%MatrixMarket matrix coordinate quaternion general\n1 1 0\n", "mem:1:");
  expect_parse_error("%%MatrixMarket matrix coordinate real diagonal\n1 1 0\n", "mem:1:");
  // index out of range on the first data line (line 3)
  expect_parse_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", "mem:3:");
  // truncated body: only one of two declared entries
  expect_parse_error("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n",
                     "truncated");
  // trailing characters after the value
  expect_parse_error("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0 junk\n",
                     "mem:3:");
  // extra rows past the declared count
  expect_parse_error("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1.0\n1 1 2.0\n",
                     "extra data");
  // malformed value
  expect_parse_error("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 abc\n", "mem:3:");
}

TEST_CASE("file round trip is exact") {
  testsup::ScratchDir tmp("mm");
  auto p = tmp.file("a.mtx",
                    "%%MatrixMarket matrix coordinate real symmetric\n"
                    "3 3 4\n"
                    "1 1 0.1\n"
                    "3 1 -7.25e-3\n"
                    "2 2 0.30000000000000004\n"
                    "3 2 11\n");
  AnyMatrix first = read_matrix_market(p);
  auto q = tmp.path() / "b.mtx";
  write_matrix_market(q, first);
  AnyMatrix second = read_matrix_market(q);

  const auto& s1 = as_sparse(first);
  const auto& s2 = as_sparse(second);
  CHECK(s2.nnz() == s1.nnz());
  CHECK(s2.row_ptr() == s1.row_ptr());
  CHECK(s2.col_idx() == s1.col_idx());
  CHECK(s2.values() == s1.values());

  // Dense array round trip, exact through %.17g.
  auto g = testsup::make_rng(79);
  AnyMatrix dense = testsup::random_dense(5, g, 3.0);
  auto r = tmp.path() / "c.mtx";
  write_matrix_market(r, dense);
  CHECK(as_dense(read_matrix_market(r)) == as_dense(dense));

  CHECK_THROWS_AS(read_matrix_market(tmp.path() / "missing.mtx"), ParseError);
}
