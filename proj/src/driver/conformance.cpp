#include "reachopt/driver/conformance.hpp"

#include <fstream>

#include "reachopt/error.hpp"

namespace reachopt::driver {

using nlohmann::json;

namespace {

void substitute(json& value, const std::map<std::string, std::string>& subs) {
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (!s.empty() && s[0] == '$') {
      auto it = subs.find(s.substr(1));
      if (it == subs.end()) throw Error(ErrorCode::kConfigError, "no substitution for " + s);
      value = it->second;
    }
  } else if (value.is_structured()) {
    for (auto& child : value) substitute(child, subs);
  }
}

std::string check(const json& resp, const json& expect, const json* sent_id) {
  if (!resp.is_object()) return "response is not an object";
  if (!resp.contains("ok") || !resp["ok"].is_boolean()) return "missing boolean 'ok'";
  if (!resp.contains("id")) return "missing 'id'";
  if (sent_id && resp["id"] != *sent_id) return "id not echoed";
  if (!sent_id && !resp["id"].is_null()) return "malformed request must be answered with id null";
  if (resp["ok"] != expect.at("ok")) return "expected ok=" + expect.at("ok").dump();
  if (!resp["ok"].get<bool>()) {
    if (!resp.contains("error") || !resp["error"].is_string()) return "error response lacks a string 'error'";
    return {};
  }
  if (!expect.contains("field")) return {};
  const std::string field = expect["field"];
  if (!resp.contains(field)) return "missing '" + field + "'";
  const auto& v = resp[field];
  const std::string type = expect.value("type", "");
  if (type == "number" && !v.is_number()) return "'" + field + "' is not a number";
  if (type == "string" && !v.is_string()) return "'" + field + "' is not a string";
  if (type == "array" && !v.is_array()) return "'" + field + "' is not an array";
  if (expect.contains("range") && v.is_number()) {
    const double x = v.get<double>();
    if (x < expect["range"][0].get<double>() || x > expect["range"][1].get<double>()) {
      return "'" + field + "' out of range";
    }
  }
  if (expect.contains("equals") && v != expect["equals"]) return "'" + field + "' differs from expected";
  return {};
}

}  // namespace

std::vector<ConformanceResult> run_conformance(ProtocolClient& client, const std::string& corpus_path,
                                               const std::map<std::string, std::string>& substitutions) {
  std::ifstream in(corpus_path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open corpus " + corpus_path);
  std::vector<ConformanceResult> results;
  std::string line;
  std::uint64_t probe_id = 1000000;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    json tc = json::parse(line);
    substitute(tc, substitutions);
    ConformanceResult r;
    r.name = tc.value("name", "case" + std::to_string(results.size() + 1));
    try {
      std::string reply;
      json id;
      if (tc.contains("send_raw")) {
        reply = client.exchange_raw(tc["send_raw"].get<std::string>());
      } else {
        json req = tc.at("send");
        id = ++probe_id;
        req["id"] = id;
        reply = client.exchange_raw(req.dump());
      }
      json resp;
      try {
        resp = json::parse(reply);
      } catch (const json::parse_error&) {
        r.detail = "response is not JSON: " + reply;
      }
      if (r.detail.empty()) r.detail = check(resp, tc.at("expect"), id.is_null() ? nullptr : &id);
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace reachopt::driver
