#include "phifn/theta_table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace phifn {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace

std::string ThetaTable::to_text() const {
  std::string out = "# phi Taylor backward-error thresholds\n";
  out += "# tol " + fmt17(tolerance_) + " K m+150\n";
  for (const auto& [m, th] : theta_) out += std::to_string(m) + '\t' + fmt17(th) + '\n';
  return out;
}

void ThetaTable::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw ParseError(path + ": cannot open for writing");
  f << to_text();
  if (!f) throw ParseError(path + ": write failed");
}

ThetaTable ThetaTable::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(path + ": cannot open");
  ThetaTable table;
  bool have_tol = false;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    if (line[0] == '#') {
      std::string hash, key;
      ss >> hash >> key;
      if (key == "tol") {
        if (!(ss >> table.tolerance_))
          throw ParseError(path + ":" + std::to_string(lineno) + ": malformed tol header");
        have_tol = true;
      }
      continue;
    }
    int m;
    double theta;
    if (!(ss >> m >> theta) || m < 1)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected `m<TAB>theta`");
    table.theta_[m] = theta;
  }
  if (!have_tol) throw ParseError(path + ": missing `# tol ...` header line");
  if (table.theta_.empty()) throw ParseError(path + ": no table entries");
  return table;
}

}  // namespace phifn
