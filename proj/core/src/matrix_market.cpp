#include "phifn/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "phifn/common.hpp"

namespace phifn {
namespace {

enum class Layout { coordinate, array };
enum class Field { real, integer, complex_, pattern };
enum class Symmetry { general, symmetric, skew, hermitian };

struct Header {
  Layout layout;
  Field field;
  Symmetry symmetry;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + what);
}

class LineReader {
 public:
  LineReader(std::string_view text, const std::string& origin) : text_(text), origin_(origin) {}

  // Next non-empty, non-comment line; false at end of input.
  bool next(std::string& out) {
    while (pos_ < text_.size()) {
      std::size_t eol = text_.find('\n', pos_);
      if (eol == std::string_view::npos) eol = text_.size();
      std::string_view line = text_.substr(pos_, eol - pos_);
      pos_ = eol + 1;
      ++line_no_;
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.remove_suffix(1);
      std::size_t start = line.find_first_not_of(" \t");
      if (start == std::string_view::npos) continue;
      if (line[start] == '%') continue;
      out.assign(line.substr(start));
      return true;
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }
  const std::string& origin() const { return origin_; }

 private:
  std::string_view text_;
  std::string origin_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

Header parse_header(std::string_view text, const std::string& origin) {
  std::size_t eol = text.find('\n');
  std::string first(text.substr(0, eol == std::string_view::npos ? text.size() : eol));
  std::istringstream iss(first);
  std::string banner, object, layout, field, symmetry;
  iss >> banner >> object >> layout >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket") fail(origin, 1, "missing %%MatrixMarket banner");
  if (lower(object) != "matrix") fail(origin, 1, "unsupported object '" + object + "'");

  Header h{};
  const std::string lay = lower(layout), fld = lower(field), sym = lower(symmetry);
  if (lay == "coordinate")
    h.layout = Layout::coordinate;
  else if (lay == "array")
    h.layout = Layout::array;
  else
    fail(origin, 1, "unsupported format '" + layout + "'");

  if (fld == "real")
    h.field = Field::real;
  else if (fld == "integer")
    h.field = Field::integer;
  else if (fld == "complex")
    h.field = Field::complex_;
  else if (fld == "pattern")
    h.field = Field::pattern;
  else
    fail(origin, 1, "unsupported field '" + field + "'");

  if (sym == "general")
    h.symmetry = Symmetry::general;
  else if (sym == "symmetric")
    h.symmetry = Symmetry::symmetric;
  else if (sym == "skew-symmetric")
    h.symmetry = Symmetry::skew;
  else if (sym == "hermitian")
    h.symmetry = Symmetry::hermitian;
  else
    fail(origin, 1, "unsupported symmetry '" + symmetry + "'");

  if (h.field == Field::pattern && h.layout == Layout::array)
    fail(origin, 1, "pattern field requires coordinate format");
  if (h.field == Field::pattern &&
      (h.symmetry == Symmetry::skew || h.symmetry == Symmetry::hermitian))
    fail(origin, 1, "pattern field allows only general or symmetric symmetry");
  if (h.field != Field::complex_ && h.symmetry == Symmetry::hermitian)
    fail(origin, 1, "hermitian symmetry requires complex field");
  return h;
}

// strtod consumes the longest valid prefix; require full consumption.
double parse_value(const char*& p, LineReader& rd) {
  char* end = nullptr;
  double v = std::strtod(p, &end);
  if (end == p) fail(rd.origin(), rd.line_no(), "malformed numeric value");
  p = end;
  return v;
}

long parse_index(const char*& p, LineReader& rd) {
  char* end = nullptr;
  long v = std::strtol(p, &end, 10);
  if (end == p) fail(rd.origin(), rd.line_no(), "malformed index");
  p = end;
  return v;
}

void expect_end(const char* p, LineReader& rd) {
  while (*p == ' ' || *p == '\t') ++p;
  if (*p != '\0') fail(rd.origin(), rd.line_no(), "trailing characters on data line");
}

template <typename T>
void push_mirrored(std::vector<typename SparseMatrix<T>::Triplet>& trips, long i, long j, T v,
                   Symmetry sym) {
  trips.push_back({i, j, v});
  if (i == j || sym == Symmetry::general) return;
  if (sym == Symmetry::symmetric)
    trips.push_back({j, i, v});
  else if (sym == Symmetry::skew)
    trips.push_back({j, i, -v});
  else
    trips.push_back({j, i, scalar_traits<T>::conj(v)});
}

template <typename T>
AnyMatrix read_coordinate(LineReader& rd, const Header& h, long rows, long cols, long nnz) {
  std::vector<typename SparseMatrix<T>::Triplet> trips;
  trips.reserve(static_cast<std::size_t>(h.symmetry == Symmetry::general ? nnz : 2 * nnz));
  std::string line;
  for (long e = 0; e < nnz; ++e) {
    if (!rd.next(line)) fail(rd.origin(), rd.line_no(), "truncated body: expected " +
                                                            std::to_string(nnz) + " entries");
    const char* p = line.c_str();
    long i = parse_index(p, rd), j = parse_index(p, rd);
    if (i < 1 || i > rows || j < 1 || j > cols)
      fail(rd.origin(), rd.line_no(), "index out of range");
    T v;
    if constexpr (scalar_traits<T>::is_complex) {
      double re = parse_value(p, rd);
      double im = parse_value(p, rd);
      v = T(re, im);
    } else {
      v = h.field == Field::pattern ? 1.0 : parse_value(p, rd);
    }
    expect_end(p, rd);
    push_mirrored<T>(trips, i - 1, j - 1, v, h.symmetry);
  }
  if (rd.next(line)) fail(rd.origin(), rd.line_no(), "extra data past declared entry count");
  return SparseMatrix<T>::from_triplets(static_cast<std::size_t>(rows),
                                        static_cast<std::size_t>(cols), trips);
}

template <typename T>
AnyMatrix read_array(LineReader& rd, const Header& h, long rows, long cols) {
  DenseMatrix<T> out(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  const bool lower_only = h.symmetry != Symmetry::general;
  if (lower_only && rows != cols)
    fail(rd.origin(), rd.line_no(), "symmetric array storage requires a square matrix");
  std::string line;
  for (long j = 0; j < cols; ++j) {
    long i0 = lower_only ? (h.symmetry == Symmetry::skew ? j + 1 : j) : 0;
    for (long i = i0; i < rows; ++i) {
      if (!rd.next(line)) fail(rd.origin(), rd.line_no(), "truncated body");
      const char* p = line.c_str();
      T v;
      if constexpr (scalar_traits<T>::is_complex) {
        double re = parse_value(p, rd);
        double im = parse_value(p, rd);
        v = T(re, im);
      } else {
        v = parse_value(p, rd);
      }
      expect_end(p, rd);
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
      if (lower_only && i != j) {
        T mirror = h.symmetry == Symmetry::symmetric
                       ? v
                       : (h.symmetry == Symmetry::skew ? -v : scalar_traits<T>::conj(v));
        out(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = mirror;
      }
    }
  }
  if (rd.next(line)) fail(rd.origin(), rd.line_no(), "extra data past declared size");
  return out;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
void write_sparse(std::string& out, const SparseMatrix<T>& m) {
  out += "%%MatrixMarket matrix coordinate ";
  out += scalar_traits<T>::is_complex ? "complex" : "real";
  out += " general\n";
  out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
         std::to_string(m.nnz()) + "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (auto k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      out += std::to_string(i + 1) + " " + std::to_string(m.col_idx()[k] + 1) + " ";
      if constexpr (scalar_traits<T>::is_complex)
        out += format_value(m.values()[k].real()) + " " + format_value(m.values()[k].imag());
      else
        out += format_value(m.values()[k]);
      out += "\n";
    }
  }
}

template <typename T>
void write_dense(std::string& out, const DenseMatrix<T>& m) {
  out += "%%MatrixMarket matrix array ";
  out += scalar_traits<T>::is_complex ? "complex" : "real";
  out += " general\n";
  out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if constexpr (scalar_traits<T>::is_complex)
        out += format_value(m(i, j).real()) + " " + format_value(m(i, j).imag());
      else
        out += format_value(m(i, j));
      out += "\n";
    }
}

}  // namespace

AnyMatrix read_matrix_market_text(std::string_view text, const std::string& origin) {
  Header h = parse_header(text, origin);
  LineReader rd(text, origin);  // skips the banner and comments on its own
  std::string line;
  if (!rd.next(line)) fail(origin, rd.line_no(), "missing size line");
  const char* p = line.c_str();
  long rows = parse_index(p, rd), cols = parse_index(p, rd);
  long nnz = h.layout == Layout::coordinate ? parse_index(p, rd) : 0;
  expect_end(p, rd);
  if (rows < 0 || cols < 0 || nnz < 0) fail(origin, rd.line_no(), "negative size");

  if (h.layout == Layout::coordinate) {
    if (h.field == Field::complex_)
      return read_coordinate<std::complex<double>>(rd, h, rows, cols, nnz);
    return read_coordinate<double>(rd, h, rows, cols, nnz);
  }
  if (h.field == Field::complex_) return read_array<std::complex<double>>(rd, h, rows, cols);
  return read_array<double>(rd, h, rows, cols);
}

AnyMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_matrix_market_text(ss.str(), path.string());
}

std::string write_matrix_market_text(const AnyMatrix& m) {
  std::string out;
  std::visit(
      [&out](const auto& mat) {
        using M = std::decay_t<decltype(mat)>;
        if constexpr (std::is_same_v<M, SparseMatrix<double>> ||
                      std::is_same_v<M, SparseMatrix<std::complex<double>>>)
          write_sparse(out, mat);
        else
          write_dense(out, mat);
      },
      m);
  return out;
}

void write_matrix_market(const std::filesystem::path& path, const AnyMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  out << write_matrix_market_text(m);
  if (!out) throw ParseError(path.string() + ": write failed");
}

std::size_t any_rows(const AnyMatrix& m) {
  return std::visit([](const auto& mat) { return mat.rows(); }, m);
}
std::size_t any_cols(const AnyMatrix& m) {
  return std::visit([](const auto& mat) { return mat.cols(); }, m);
}
std::size_t any_nnz(const AnyMatrix& m) {
  return std::visit(
      [](const auto& mat) -> std::size_t {
        using M = std::decay_t<decltype(mat)>;
        if constexpr (std::is_same_v<M, SparseMatrix<double>> ||
                      std::is_same_v<M, SparseMatrix<std::complex<double>>>)
          return mat.nnz();
        else
          return mat.rows() * mat.cols();
      },
      m);
}
bool any_is_complex(const AnyMatrix& m) {
  return std::visit(
      [](const auto& mat) {
        return scalar_traits<typename std::decay_t<decltype(mat)>::value_type>::is_complex;
      },
      m);
}

}  // namespace phifn
