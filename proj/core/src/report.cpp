#include "phifn/report.hpp"

#include <nlohmann/json.hpp>

namespace phifn {
namespace {

nlohmann::ordered_json to_json_obj(const RunReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["n"] = r.n;
  j["nnz"] = r.nnz;
  j["m"] = r.m;
  j["s"] = r.s;
  j["matmuls"] = r.matmuls;
  j["matvecs"] = r.matvecs;
  j["seconds"] = r.seconds;
  if (r.rel_err) j["rel_err"] = *r.rel_err;
  j["evidence"] = {{"d", r.evidence.d}, {"alpha", r.evidence.alpha}, {"eta", r.evidence.eta}};
  return j;
}

}  // namespace

std::string to_json(const RunReport& r) { return to_json_obj(r).dump(2); }

std::string to_json(const std::vector<RunReport>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(to_json_obj(r));
  return arr.dump(2);
}

}  // namespace phifn
