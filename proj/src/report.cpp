#include "jwb/report.hpp"

#include <chrono>
#include <sstream>

#include "json.hpp"

namespace jwb::report {

using nlohmann::json;

void RunReport::param(const std::string& key, const std::string& value) {
  params.emplace_back(key, value);
}

void RunReport::check(const std::string& name, bool pass, const std::string& detail) {
  checks.push_back({name, pass, detail});
}

bool RunReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << "== " << command << " ==\n";
  for (const auto& [k, v] : params) os << "  " << k << ": " << v << "\n";
  for (const auto& c : checks) {
    os << (c.pass ? "  pass  " : "  FAIL  ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  std::ostringstream sec;
  sec.setf(std::ios::fixed);
  sec.precision(3);
  sec << seconds;
  os << (all_pass() ? "ok" : "FAILED") << " (" << checks.size() << " checks, "
     << sec.str() << "s)\n";
  return os.str();
}

std::string RunReport::to_json() const {
  json j;
  j["command"] = command;
  json p = json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["parameters"] = p;
  json arr = json::array();
  for (const auto& c : checks) {
    json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    if (!c.detail.empty()) e["detail"] = c.detail;
    arr.push_back(e);
  }
  j["checks"] = arr;
  if (!attachment_key.empty()) j[attachment_key] = json::parse(attachment_json);
  j["all_pass"] = all_pass();
  j["seconds"] = seconds;
  return j.dump(2) + "\n";
}

namespace {
double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}
}  // namespace

ScopedTimer::ScopedTimer(RunReport& r) : r_(r), start_(now_seconds()) {}
ScopedTimer::~ScopedTimer() { r_.seconds = now_seconds() - start_; }

}  // namespace jwb::report
