#pragma once

#include <map>
#include <string>

#include "phifn/common.hpp"

namespace phifn {

// Immutable map m -> theta_m at a fixed tolerance. theta_m is the largest x
// with the backward-error bound h~_{m+2}(x) <= tol; the selectors consume it
// read-only. Partial tables are allowed (sub-ranges of m), which the selectors
// honor by skipping absent degrees.
class ThetaTable {
 public:
  ThetaTable() = default;
  ThetaTable(double tolerance, std::map<int, double> values)
      : tolerance_(tolerance), theta_(std::move(values)) {}

  double tolerance() const { return tolerance_; }
  bool has(int m) const { return theta_.count(m) != 0; }
  double at(int m) const {
    auto it = theta_.find(m);
    if (it == theta_.end()) throw ParameterError("ThetaTable: no entry for m=" + std::to_string(m));
    return it->second;
  }
  int max_degree() const {
    if (theta_.empty()) throw ParameterError("ThetaTable: empty table");
    return theta_.rbegin()->first;
  }
  const std::map<int, double>& values() const { return theta_; }

  // Shipped constants (m = 1..60 at tol = 2^-53), generated offline by the
  // `theta` maintenance command so the runtime never needs extended precision.
  static const ThetaTable& builtin();

  // Plain-text constants file: a '#' header carrying the tolerance and the
  // truncation policy, then `m<TAB>theta` lines at 17 significant digits.
  static ThetaTable load(const std::string& path);
  std::string to_text() const;
  void save(const std::string& path) const;

 private:
  double tolerance_ = 0.0;
  std::map<int, double> theta_;
};

namespace detail {
// Used by the generated constants unit; not part of the public surface.
struct ThetaEntry {
  int m;
  double theta;
};
}  // namespace detail

}  // namespace phifn
