#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phifn/param_select.hpp"

namespace phifn {

// One CLI/bench run in machine-readable form.
struct RunReport {
  std::string name;
  std::size_t n = 0;
  std::size_t nnz = 0;
  int m = 0;
  long s = 0;
  std::int64_t matmuls = 0;
  std::int64_t matvecs = 0;
  double seconds = 0.0;
  std::optional<double> rel_err;  // only when --check ran
  SelectionEvidence evidence;
};

// {name, n, nnz, m, s, matmuls, matvecs, seconds, rel_err?, evidence:{d,alpha,eta}}
std::string to_json(const RunReport& r);
std::string to_json(const std::vector<RunReport>& rows);

}  // namespace phifn
