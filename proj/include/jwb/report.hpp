#pragma once

#include <string>
#include <utility>
#include <vector>

namespace jwb::report {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // witness or computed value; free text
};

// One run of a CLI command: parameters, individual check outcomes, and the
// wall-clock duration. Rendered as aligned text or as a JSON document whose
// key order is deterministic for a fixed seed.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  // Optional structured payload: when attachment_key is nonempty, to_json()
  // embeds attachment_json (which must parse as JSON) under that key.
  std::string attachment_key;
  std::string attachment_json;

  void param(const std::string& key, const std::string& value);
  void check(const std::string& name, bool pass, const std::string& detail = "");
  bool all_pass() const;
  std::string to_text() const;
  std::string to_json() const;
};

// RAII wall-clock timer writing into report.seconds on destruction.
class ScopedTimer {
 public:
  explicit ScopedTimer(RunReport& r);
  ~ScopedTimer();

 private:
  RunReport& r_;
  double start_;
};

}  // namespace jwb::report
