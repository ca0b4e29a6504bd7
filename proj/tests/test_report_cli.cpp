#include <nlohmann/json.hpp>

#include <fstream>
#include <string>

#include "doctest.h"
#include "phifn/report.hpp"
#include "phifn/theta_table.hpp"
#include "test_support.hpp"

using namespace phifn;
using json = nlohmann::json;

namespace {

RunReport sample_report() {
  RunReport r;
  r.name = "demo";
  r.n = 5;
  r.nnz = 9;
  r.m = 12;
  r.s = 3;
  r.matmuls = 11;
  r.matvecs = 0;
  r.seconds = 0.25;
  r.evidence.d = {1.0, 2.0};
  r.evidence.alpha = {1.5};
  r.evidence.eta = {1.25, 1.125};
  return r;
}

json parse_tail_json(const std::string& out) {
  auto brace = out.find('{');
  REQUIRE(brace != std::string::npos);
  return json::parse(out.substr(brace));
}

}  // namespace

TEST_CASE("report json: key order, optional rel_err, evidence arrays") {
  RunReport r = sample_report();
  std::string text = to_json(r);

  const char* keys[] = {"\"name\"", "\"n\"",       "\"nnz\"",     "\"m\"",
                        "\"s\"",    "\"matmuls\"", "\"matvecs\"", "\"seconds\""};
  std::size_t prev = 0;
  for (const char* k : keys) {
    auto pos = text.find(k);
    REQUIRE(pos != std::string::npos);
    CHECK(pos > prev);
    prev = pos;
  }
  CHECK(text.find("\"rel_err\"") == std::string::npos);
  CHECK(text.find("\"evidence\"") > prev);

  json j = json::parse(text);
  CHECK(j["n"] == 5);
  CHECK(j["evidence"]["d"] == json::array({1.0, 2.0}));
  CHECK(j["evidence"]["alpha"] == json::array({1.5}));
  CHECK(j["evidence"]["eta"] == json::array({1.25, 1.125}));

  r.rel_err = 3e-14;
  json j2 = json::parse(to_json(r));
  CHECK(j2["rel_err"] == 3e-14);

  json arr = json::parse(to_json(std::vector<RunReport>{r, r}));
  REQUIRE(arr.is_array());
  CHECK(arr.size() == 2);
  CHECK(arr[1]["name"] == "demo");
}

TEST_CASE("cli: exit codes for help and bad usage") {
  CHECK(testsup::run_cli("--help").exit_code == 0);
  CHECK(testsup::run_cli("phi --help").exit_code == 0);
  CHECK(testsup::run_cli("").exit_code == 2);
  CHECK(testsup::run_cli("phi --no-such-flag").exit_code == 2);
  CHECK(testsup::run_cli("frobnicate").exit_code == 2);

  auto r = testsup::run_cli("phi --input /nope/missing.mtx");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("error:") != std::string::npos);
  CHECK(r.out.find("cannot open") != std::string::npos);
}

TEST_CASE("cli phi: zero matrix, checked report") {
  testsup::ScratchDir tmp("cli_phi");
  auto mtx = tmp.file("zero.mtx",
                      "%%MatrixMarket matrix coordinate real general\n3 3 1\n1 1 0\n");
  auto out = tmp.path() / "report.json";
  auto r = testsup::run_cli("phi --input " + mtx.string() + " --check --json-report " +
                            out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("rel_err") != std::string::npos);

  std::ifstream in(out);
  json j = json::parse(in);
  CHECK(j["name"] == "zero");
  CHECK(j["n"] == 3);
  CHECK(j["nnz"] == 1);
  CHECK(j["m"] == 2);
  CHECK(j["s"] == 0);
  CHECK(j["matmuls"] == 1);
  CHECK(j["matvecs"] == 0);
  CHECK(j["rel_err"] == 0.0);
  CHECK(j["evidence"]["d"].is_array());
  CHECK_FALSE(j["evidence"]["d"].empty());
}

TEST_CASE("cli phi: deterministic apart from timing") {
  testsup::ScratchDir tmp("cli_det");
  // Fixed non-trivial matrix, moderate norm so s > 0.
  auto mtx = tmp.file("fixed.mtx",
                      "%%MatrixMarket matrix array real general\n"
                      "3 3\n"
                      "2.5\n-1\n0.125\n0\n3.25\n-0.5\n1\n0\n2.75\n");
  auto run_once = [&](const char* path) {
    auto r = testsup::run_cli("phi --input " + mtx.string() + " --strategy costmin --check" +
                              " --json-report " + (tmp.path() / path).string());
    REQUIRE(r.exit_code == 0);
    std::ifstream in(tmp.path() / path);
    json j = json::parse(in);
    j.erase("seconds");
    return j;
  };
  json a = run_once("a.json");
  json b = run_once("b.json");
  CHECK(a == b);
  CHECK(a["s"].get<long>() >= 1);
  CHECK(a["rel_err"].get<double>() <= 1e-12);
}

TEST_CASE("cli phiv and combo") {
  testsup::ScratchDir tmp("cli_action");
  auto mtx = tmp.file("m.mtx",
                      "%%MatrixMarket matrix coordinate real general\n"
                      "4 4 5\n"
                      "1 1 0.3\n2 2 0.3\n3 3 0.3\n4 4 0.3\n1 4 -0.1\n");

  auto rv = testsup::run_cli("phiv --input " + mtx.string() +
                             " --t 1.5 --vector e1en --check --json-report -");
  REQUIRE(rv.exit_code == 0);
  json jv = parse_tail_json(rv.out);
  CHECK(jv["n"] == 4);
  CHECK(jv["nnz"] == 5);
  CHECK(jv["rel_err"].get<double>() <= 1e-13);
  CHECK(jv["matvecs"] ==
        jv["s"].get<long>() * (jv["m"].get<long>() + 1) - 1);

  // t = 0 short-circuits to b0: no products, exact answer.
  auto rc = testsup::run_cli("combo --input " + mtx.string() +
                             " --t 0 --check --json-report -");
  REQUIRE(rc.exit_code == 0);
  json jc = parse_tail_json(rc.out);
  CHECK(jc["matvecs"] == 0);
  CHECK(jc["rel_err"] == 0.0);

  auto rc2 = testsup::run_cli("combo --input " + mtx.string() +
                              " --t 0.7 --b0 ones --b1 e1 --check --json-report -");
  REQUIRE(rc2.exit_code == 0);
  json jc2 = parse_tail_json(rc2.out);
  CHECK(jc2["rel_err"].get<double>() <= 1e-13);
  CHECK(jc2["matvecs"].get<long>() >= 1);
}

TEST_CASE("cli theta: derived table round-trips and matches the builtin") {
  testsup::ScratchDir tmp("cli_theta");
  auto out = tmp.path() / "theta5.txt";
  auto r = testsup::run_cli("theta --mmax 5 --out " + out.string());
  REQUIRE(r.exit_code == 0);

  ThetaTable derived = ThetaTable::load(out);
  const auto& builtin = ThetaTable::builtin();
  REQUIRE(derived.values().size() == 5);
  for (const auto& [m, th] : derived.values()) CHECK(th == builtin.at(m));

  auto printed = testsup::run_cli("theta --mmax 3");
  REQUIRE(printed.exit_code == 0);
  CHECK(printed.out.find("# tol") != std::string::npos);
  CHECK(printed.out.find("1\t") != std::string::npos);
}
