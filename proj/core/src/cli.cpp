#include "phifn/cli.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phifn/backward_series.hpp"
#include "phifn/common.hpp"
#include "phifn/fetch.hpp"
#include "phifn/matrix_market.hpp"
#include "phifn/oracle.hpp"
#include "phifn/phi_action.hpp"
#include "phifn/phi_dense.hpp"
#include "phifn/report.hpp"
#include "phifn/theta_table.hpp"

namespace phifn {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double parse_tol(const std::string& s) {
  if (s.rfind("2^", 0) == 0) return std::ldexp(1.0, std::stoi(s.substr(2)));
  return std::stod(s);
}

template <typename T>
const DenseMatrix<T>& densify(const DenseMatrix<T>& a) {
  return a;
}
template <typename T>
DenseMatrix<T> densify(const SparseMatrix<T>& a) {
  return a.to_dense();
}

template <typename T>
DenseMatrix<T> convert_block(const DenseMatrix<double>& d) {
  if constexpr (std::is_same_v<T, double>) {
    return d;
  } else {
    DenseMatrix<T> out(d.rows(), d.cols());
    for (std::size_t j = 0; j < d.cols(); ++j)
      for (std::size_t i = 0; i < d.rows(); ++i) out(i, j) = T(d(i, j));
    return out;
  }
}

// ones | e1 | e1en | <matrix-market file of shape n x 1>
template <typename T>
DenseMatrix<T> make_block(const std::string& spec, std::size_t n) {
  DenseMatrix<T> v(n, 1);
  if (spec == "ones") {
    for (std::size_t i = 0; i < n; ++i) v(i, 0) = T(1.0);
    return v;
  }
  if (spec == "e1") {
    if (n) v(0, 0) = T(1.0);
    return v;
  }
  if (spec == "e1en") {
    if (n) {
      v(0, 0) = T(1.0);
      v(n - 1, 0) += T(1.0);
    }
    return v;
  }
  AnyMatrix any = read_matrix_market(spec);
  if (any_rows(any) != n || any_cols(any) != 1)
    throw ShapeError(spec + ": vector file must be " + std::to_string(n) + "x1");
  return std::visit(
      [&](const auto& m) -> DenseMatrix<T> {
        using S = typename std::decay_t<decltype(m)>::value_type;
        if constexpr (std::is_same_v<S, T>) {
          return densify(m);
        } else if constexpr (std::is_same_v<S, double>) {
          return convert_block<T>(densify(m));  // promote real vector
        } else {
          throw ParseError(spec + ": complex vector incompatible with a real matrix");
        }
      },
      any);
}

void emit_report(const RunReport& r, const std::string& json_path) {
  std::printf("%s  n=%zu  nnz=%zu  m=%d  s=%ld  matmuls=%lld  matvecs=%lld  seconds=%.3f",
              r.name.c_str(), r.n, r.nnz, r.m, r.s, static_cast<long long>(r.matmuls),
              static_cast<long long>(r.matvecs), r.seconds);
  if (r.rel_err) std::printf("  rel_err=%.3e", *r.rel_err);
  std::printf("\n");
  if (json_path.empty()) return;
  if (json_path == "-") {
    std::printf("%s\n", to_json(r).c_str());
  } else {
    std::ofstream out(json_path);
    out << to_json(r) << "\n";
    if (!out) throw ParseError(json_path + ": write failed");
  }
}

struct PhiOpts {
  std::string input;
  std::string strategy = "sequential";
  bool check = false;
  std::string json;
};

struct ActionOpts {
  std::string input;
  std::string vec = "ones";   // phiv
  std::string b0 = "ones";    // combo
  std::string b1 = "ones";
  double t = 1.0;
  int mmax = kDefaultActionMMax;
  bool check = false;
  std::string json;
};

template <typename T>
void run_phi_typed(const DenseMatrix<T>& a, const std::string& name, std::size_t nnz,
                   const PhiOpts& o) {
  OpCounter counter;
  PhiParams<T> params;
  const Strategy strat =
      o.strategy == "costmin" ? Strategy::costmin : Strategy::sequential;
  const auto t0 = Clock::now();
  DenseMatrix<T> y = phi_dense(a, strat, counter, ThetaTable::builtin(), {}, &params);
  RunReport r;
  r.seconds = seconds_since(t0);
  r.name = name;
  r.n = a.rows();
  r.nnz = nnz;
  r.m = params.m;
  r.s = params.s;
  r.matmuls = counter.matmul_count;
  r.matvecs = counter.matvec_count;
  r.evidence = params.evidence;
  if (o.check) {
    if (a.rows() > kOracleMaxN / 2)
      throw DomainError("--check: the oracle is capped at N <= 512 for phi");
    r.rel_err = rel_err_1(y, phi_ref(a));
  }
  emit_report(r, o.json);
}

void run_phi(const PhiOpts& o) {
  AnyMatrix any = read_matrix_market(o.input);
  const std::string name = std::filesystem::path(o.input).stem().string();
  const std::size_t nnz = any_nnz(any);
  std::visit([&](const auto& m) { run_phi_typed(densify(m), name, nnz, o); }, any);
}

template <typename MatT>
void run_phiv_typed(const MatT& a, const std::string& name, std::size_t nnz,
                    const ActionOpts& o) {
  using T = typename MatT::value_type;
  DenseMatrix<T> b = make_block<T>(o.vec, a.rows());
  MatT at = detail::scaled_copy(a, o.t);
  OpCounter counter;
  PhiParams<T> params;
  const auto t0 = Clock::now();
  DenseMatrix<T> y = phi_action(at, b, ThetaTable::builtin(), counter, o.mmax, {}, &params);
  RunReport r;
  r.seconds = seconds_since(t0);
  r.name = name;
  r.n = a.rows();
  r.nnz = nnz;
  r.m = params.m;
  r.s = params.s;
  r.matmuls = counter.matmul_count;
  r.matvecs = counter.matvec_count;
  r.evidence = params.evidence;
  if (o.check) {
    if (a.rows() + b.cols() > kOracleMaxN)
      throw DomainError("--check: the oracle is capped at N + columns <= 1024");
    r.rel_err = rel_err_2(y, phi_action_ref(densify(at), b));
  }
  emit_report(r, o.json);
}

void run_phiv(const ActionOpts& o) {
  AnyMatrix any = read_matrix_market(o.input);
  const std::string name = std::filesystem::path(o.input).stem().string();
  const std::size_t nnz = any_nnz(any);
  std::visit([&](const auto& m) { run_phiv_typed(m, name, nnz, o); }, any);
}

template <typename MatT>
void run_combo_typed(const MatT& a, const std::string& name, std::size_t nnz,
                     const ActionOpts& o) {
  using T = typename MatT::value_type;
  DenseMatrix<T> b0 = make_block<T>(o.b0, a.rows());
  DenseMatrix<T> b1 = make_block<T>(o.b1, a.rows());
  OpCounter counter;
  PhiParams<T> params;
  const auto t0 = Clock::now();
  DenseMatrix<T> y =
      phi_combo(a, o.t, b0, b1, ThetaTable::builtin(), counter, o.mmax, {}, &params);
  RunReport r;
  r.seconds = seconds_since(t0);
  r.name = name;
  r.n = a.rows();
  r.nnz = nnz;
  r.m = params.m;
  r.s = params.s;
  r.matmuls = counter.matmul_count;
  r.matvecs = counter.matvec_count;
  r.evidence = params.evidence;
  if (o.check) {
    if (a.rows() + 1 > kOracleMaxN)
      throw DomainError("--check: the oracle is capped at N + 1 <= 1024");
    DenseMatrix<T> ref = b0;
    if (o.t != 0.0) {
      OpCounter scratch;
      DenseMatrix<T> w = add(detail::apply_block(a, b0, scratch), b1);
      ref = add(b0, scale(phi_action_ref(densify(detail::scaled_copy(a, o.t)), w), o.t));
    }
    r.rel_err = rel_err_2(y, ref);
  }
  emit_report(r, o.json);
}

void run_combo(const ActionOpts& o) {
  AnyMatrix any = read_matrix_market(o.input);
  const std::string name = std::filesystem::path(o.input).stem().string();
  const std::size_t nnz = any_nnz(any);
  std::visit([&](const auto& m) { run_combo_typed(m, name, nnz, o); }, any);
}

struct ThetaOpts {
  int mmax = 55;
  std::string tol = "2^-53";
  std::string out;
  std::string emit_cpp;
};

void run_theta(const ThetaOpts& o) {
  ThetaTable table = build_theta_table(o.mmax, parse_tol(o.tol));
  if (!o.out.empty()) table.save(o.out);
  if (!o.emit_cpp.empty()) {
    std::ofstream f(o.emit_cpp);
    if (!f) throw ParseError(o.emit_cpp + ": cannot open for writing");
    char buf[64];
    f << "// Shipped theta constants. Regenerated by `phifn theta --mmax "
      << o.mmax << " --emit-cpp <path>`; do not edit by hand.\n\n"
      << "#include <cmath>\n#include <map>\n#include <utility>\n#include <vector>\n\n"
      << "#include \"phifn/backward_series.hpp\"\n"
      << "#include \"phifn/theta_table.hpp\"\n\n"
      << "namespace phifn {\nnamespace detail {\n\n";
    std::snprintf(buf, sizeof buf, "%.17g", table.tolerance());
    f << "const double kBuiltinThetaTol = " << buf << ";\n"
      << "const std::vector<ThetaEntry> kBuiltinTheta = {\n";
    for (const auto& [m, th] : table.values()) {
      std::snprintf(buf, sizeof buf, "%.17g", th);
      f << "    {" << m << ", " << buf << "},\n";
    }
    f << "};\n\n}  // namespace detail\n\n"
      << "const ThetaTable& ThetaTable::builtin() {\n"
      << "  static const ThetaTable table = [] {\n"
      << "    if (detail::kBuiltinTheta.empty())  // bootstrap fallback\n"
      << "      return build_theta_table(60, std::ldexp(1.0, -53));\n"
      << "    std::map<int, double> values;\n"
      << "    for (const auto& e : detail::kBuiltinTheta) values.emplace(e.m, e.theta);\n"
      << "    return ThetaTable(detail::kBuiltinThetaTol, std::move(values));\n"
      << "  }();\n"
      << "  return table;\n"
      << "}\n\n}  // namespace phifn\n";
    if (!f) throw ParseError(o.emit_cpp + ": write failed");
  }
  if (o.out.empty() && o.emit_cpp.empty()) std::fputs(table.to_text().c_str(), stdout);
}

struct BenchOpts {
  std::string cache_dir;
  bool offline = false;
  bool large = false;
  bool check = false;
  std::string json;
};

void run_bench(const BenchOpts& o) {
  struct Preset {
    const char* name;
    double t;
    const char* vec;
    bool large_only;
  };
  const Preset presets[] = {
      {"orani678", 10.0, "ones", false},
      {"bcspwr10", 2.0, "e1en", false},
      {"gr_30_30", 2.0, "ones", false},
      {"helm2d03", 2.0, "ones", true},
  };
  const std::filesystem::path cache =
      o.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(o.cache_dir);

  std::vector<RunReport> rows;
  for (const Preset& p : presets) {
    if (p.large_only && !o.large) continue;
    const auto path = fetch_suite(p.name, cache, o.offline);
    AnyMatrix any = read_matrix_market(path);
    const auto* a = std::get_if<SparseMatrix<double>>(&any);
    if (!a) throw ParseError(path.string() + ": bench expects a real sparse matrix");
    DenseMatrix<double> b = make_block<double>(p.vec, a->rows());
    const bool can_check = o.check && !p.large_only && a->rows() + 1 <= kOracleMaxN;

    {
      SparseMatrix<double> at = a->scaled(p.t);
      OpCounter counter;
      PhiParams<double> params;
      const auto t0 = Clock::now();
      DenseMatrix<double> y =
          phi_action(at, b, ThetaTable::builtin(), counter, kDefaultActionMMax, {}, &params);
      RunReport r;
      r.seconds = seconds_since(t0);
      r.name = std::string(p.name) + ".phiv";
      r.n = a->rows();
      r.nnz = a->nnz();
      r.m = params.m;
      r.s = params.s;
      r.matmuls = counter.matmul_count;
      r.matvecs = counter.matvec_count;
      r.evidence = params.evidence;
      if (can_check) r.rel_err = rel_err_2(y, phi_action_ref(at.to_dense(), b));
      emit_report(r, "");
      rows.push_back(std::move(r));
    }
    {
      OpCounter counter;
      PhiParams<double> params;
      const auto t0 = Clock::now();
      DenseMatrix<double> y = phi_combo(*a, p.t, b, b, ThetaTable::builtin(), counter,
                                        kDefaultActionMMax, {}, &params);
      RunReport r;
      r.seconds = seconds_since(t0);
      r.name = std::string(p.name) + ".combo";
      r.n = a->rows();
      r.nnz = a->nnz();
      r.m = params.m;
      r.s = params.s;
      r.matmuls = counter.matmul_count;
      r.matvecs = counter.matvec_count;
      r.evidence = params.evidence;
      if (can_check) {
        OpCounter scratch;
        DenseMatrix<double> w = add(detail::apply_block(*a, b, scratch), b);
        DenseMatrix<double> ref =
            add(b, scale(phi_action_ref(a->scaled(p.t).to_dense(), w), p.t));
        r.rel_err = rel_err_2(y, ref);
      }
      emit_report(r, "");
      rows.push_back(std::move(r));
    }
  }
  if (!o.json.empty()) {
    if (o.json == "-") {
      std::printf("%s\n", to_json(rows).c_str());
    } else {
      std::ofstream out(o.json);
      out << to_json(rows) << "\n";
      if (!out) throw ParseError(o.json + ": write failed");
    }
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Matrix phi-function toolkit: phi(A) dense, phi(A)b sparse-action"};
  app.require_subcommand(1);

  PhiOpts phi_o;
  auto* phi_cmd = app.add_subcommand("phi", "Dense phi(A) from a Matrix Market file");
  phi_cmd->add_option("--input", phi_o.input, "matrix file (.mtx)")->required();
  phi_cmd->add_option("--strategy", phi_o.strategy, "parameter choice")
      ->check(CLI::IsMember({"sequential", "costmin"}));
  phi_cmd->add_flag("--check", phi_o.check, "compare against the reference oracle");
  phi_cmd->add_option("--json-report", phi_o.json, "write a JSON report ('-' = stdout)");
  phi_cmd->callback([&phi_o] { run_phi(phi_o); });

  ActionOpts phiv_o;
  auto* phiv_cmd = app.add_subcommand("phiv", "phi(tA)b by matrix-vector products");
  phiv_cmd->add_option("--input", phiv_o.input, "matrix file (.mtx)")->required();
  phiv_cmd->add_option("--vector", phiv_o.vec, "b: ones|e1|e1en|<file>");
  phiv_cmd->add_option("--t", phiv_o.t, "time scaling of the matrix");
  phiv_cmd->add_option("--mmax", phiv_o.mmax, "largest Taylor degree considered")
      ->check(CLI::Range(2, 70));
  phiv_cmd->add_flag("--check", phiv_o.check, "compare against the reference oracle");
  phiv_cmd->add_option("--json-report", phiv_o.json, "write a JSON report ('-' = stdout)");
  phiv_cmd->callback([&phiv_o] { run_phiv(phiv_o); });

  ActionOpts combo_o;
  auto* combo_cmd =
      app.add_subcommand("combo", "e^{tA}b0 + t*phi(tA)b1 by matrix-vector products");
  combo_cmd->add_option("--input", combo_o.input, "matrix file (.mtx)")->required();
  combo_cmd->add_option("--b0", combo_o.b0, "b0: ones|e1|e1en|<file>");
  combo_cmd->add_option("--b1", combo_o.b1, "b1: ones|e1|e1en|<file>");
  combo_cmd->add_option("--t", combo_o.t, "time parameter");
  combo_cmd->add_option("--mmax", combo_o.mmax, "largest Taylor degree considered")
      ->check(CLI::Range(2, 70));
  combo_cmd->add_flag("--check", combo_o.check, "compare against the reference oracle");
  combo_cmd->add_option("--json-report", combo_o.json, "write a JSON report ('-' = stdout)");
  combo_cmd->callback([&combo_o] { run_combo(combo_o); });

  ThetaOpts theta_o;
  auto* theta_cmd = app.add_subcommand("theta", "Re-derive the backward-error thresholds");
  theta_cmd->add_option("--mmax", theta_o.mmax, "largest degree")->check(CLI::Range(1, 80));
  theta_cmd->add_option("--tol", theta_o.tol, "tolerance (accepts 2^-53 syntax)");
  theta_cmd->add_option("--out", theta_o.out, "write the table to a file");
  theta_cmd->add_option("--emit-cpp", theta_o.emit_cpp, "regenerate the builtin constants unit");
  theta_cmd->callback([&theta_o] { run_theta(theta_o); });

  BenchOpts bench_o;
  auto* bench_cmd = app.add_subcommand("bench", "Run the reproduction suite from the cache");
  bench_cmd->add_option("--cache-dir", bench_o.cache_dir,
                        "matrix cache (default: PHIFN_CACHE_DIR or ~/.cache/phifn)");
  bench_cmd->add_flag("--offline", bench_o.offline, "never touch the network");
  bench_cmd->add_flag("--large", bench_o.large, "include helm2d03 (no oracle check)");
  bench_cmd->add_flag("--check", bench_o.check, "oracle-check where the size permits");
  bench_cmd->add_option("--json-report", bench_o.json, "write a JSON array ('-' = stdout)");
  bench_cmd->callback([&bench_o] { run_bench(bench_o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace phifn
