#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "phifn/dense_matrix.hpp"
#include "phifn/sparse_matrix.hpp"

namespace phifn {

using AnyMatrix = std::variant<SparseMatrix<double>, SparseMatrix<std::complex<double>>,
                               DenseMatrix<double>, DenseMatrix<std::complex<double>>>;

// Matrix Market text: coordinate -> sparse, array -> dense; real/integer/
// pattern -> double, complex -> complex<double>; symmetric, skew-symmetric
// and hermitian storage is expanded on read. Duplicate coordinates are
// summed. Malformed input raises ParseError tagged "<origin>:<line>".
AnyMatrix read_matrix_market(const std::filesystem::path& path);
AnyMatrix read_matrix_market_text(std::string_view text, const std::string& origin);

// Writes expanded (general) form, entries in canonical row-major order,
// %.17g values: reading the result reproduces the matrix exactly.
void write_matrix_market(const std::filesystem::path& path, const AnyMatrix& m);
std::string write_matrix_market_text(const AnyMatrix& m);

std::size_t any_rows(const AnyMatrix& m);
std::size_t any_cols(const AnyMatrix& m);
std::size_t any_nnz(const AnyMatrix& m);       // dense: rows*cols
bool any_is_complex(const AnyMatrix& m);

}  // namespace phifn
