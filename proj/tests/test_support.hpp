#pragma once

// Shared helpers for the test suite: seeded random matrices, CLI subprocess
// capture, and scratch files. Everything deterministic under a fixed seed.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "phifn/dense_matrix.hpp"
#include "phifn/sparse_matrix.hpp"

namespace testsup {

using phifn::DenseMatrix;
using phifn::SparseMatrix;
using complexd = std::complex<double>;

inline std::mt19937_64 make_rng(unsigned seed) { return std::mt19937_64(seed); }

inline DenseMatrix<double> random_dense(std::size_t n, std::mt19937_64& g, double norm1 = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix<double> a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a(i, j) = u(g);
  if (norm1 > 0.0) a = scale(a, norm1 / one_norm(a));
  return a;
}

inline DenseMatrix<complexd> random_cdense(std::size_t n, std::mt19937_64& g, double norm1 = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix<complexd> a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a(i, j) = complexd(u(g), u(g));
  if (norm1 > 0.0) a = scale(a, norm1 / one_norm(a));
  return a;
}

inline SparseMatrix<double> random_sparse(std::size_t n, double density, std::mt19937_64& g,
                                          double norm1 = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<SparseMatrix<double>::Triplet> trips;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (keep(g)) trips.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), u(g)});
  if (trips.empty()) trips.push_back({0, 0, u(g)});
  auto a = SparseMatrix<double>::from_triplets(n, n, std::move(trips));
  if (norm1 > 0.0) a = a.scaled(norm1 / one_norm(a));
  return a;
}

inline DenseMatrix<double> column(std::vector<double> v) {
  const std::size_t n = v.size();  // before the move: argument order is unspecified
  return DenseMatrix<double>::from_data(n, 1, std::move(v));
}

// Largest per-entry ulp distance between two equal-shaped matrices.
inline double max_ulp_distance(const DenseMatrix<double>& a, const DenseMatrix<double>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double x = a(i, j), y = b(i, j);
      if (x == y) continue;
      double ref = std::max(std::abs(x), std::abs(y));
      double ulp = std::nextafter(ref, 2 * ref) - ref;
      worst = std::max(worst, std::abs(x - y) / ulp);
    }
  return worst;
}

struct CliResult {
  int exit_code = -1;
  std::string out;  // stdout and stderr interleaved
};

// Runs the installed CLI with the given argument string, capturing output.
inline CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(PHIFN_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int status = pclose(p);
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return r;
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("phifn_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path file(const std::string& name, const std::string& contents) const {
    auto p = dir_ / name;
    std::ofstream(p) << contents;
    return p;
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace testsup
