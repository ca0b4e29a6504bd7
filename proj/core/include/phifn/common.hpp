#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace phifn {

// Error taxonomy. Everything user-visible derives from Error so the CLI can
// map "any numerical/domain problem" to one exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An argument is outside its documented range (m == 0, missing d_p, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A value is outside the mathematical domain of the operation
// (series guard exceeded, zero reference norm, oracle asked beyond its scale).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The dense selector wanted s beyond the cap where 2^{-s} loses all meaning.
class ScalingOverflowError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; message carries "path:line:".
class ParseError : public Error {
 public:
  using Error::Error;
};

// Network/cache failure in the matrix fetcher.
class FetchError : public Error {
 public:
  using Error::Error;
};

// Cached artifact does not match its recorded checksum.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Tally of the countable operations of one top-level evaluation.
// Estimator traffic is kept out of matvec_count on purpose: the cost
// contracts (pi_m + 2s matmuls, s(m+1)-1 matvecs) describe the evaluation
// recurrences only, and the estimator reports its own products_used.
struct OpCounter {
  std::int64_t matmul_count = 0;
  std::int64_t matvec_count = 0;
  std::int64_t norm_est_count = 0;
};

template <typename T>
inline constexpr bool is_supported_scalar =
    std::is_same_v<T, double> || std::is_same_v<T, std::complex<double>>;

template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  using real_type = double;
  static constexpr bool is_complex = false;
  static double conj(double x) { return x; }
  static double abs(double x) { return x < 0 ? -x : x; }
};

template <>
struct scalar_traits<std::complex<double>> {
  using real_type = double;
  static constexpr bool is_complex = true;
  static std::complex<double> conj(const std::complex<double>& x) {
    return std::conj(x);
  }
  static double abs(const std::complex<double>& x) { return std::abs(x); }
};

}  // namespace phifn
