#pragma once

#include <chrono>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace lcw {

/// One pass/fail line. `detail` carries counts or the first witness.
struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  double seconds = 0;
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();

  [[nodiscard]] bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  Check& add(std::string name, bool pass, std::string detail = {}) {
    checks.push_back({std::move(name), pass, std::move(detail)});
    return checks.back();
  }

  void merge(const RunReport& other) {
    for (const auto& c : other.checks) checks.push_back(c);
    seconds += other.seconds;
    stats[other.command] = other.stats;
  }
};

inline nlohmann::ordered_json to_json(const Check& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

inline nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["seed"] = r.seed;
  j["pass"] = r.ok();
  j["seconds"] = r.seconds;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  j["stats"] = r.stats;
  return j;
}

/// Text rendering; the verdicts are the same ones the JSON carries.
inline std::string render_text(const RunReport& r) {
  std::ostringstream out;
  out << "command: " << r.command << "\nseed: " << r.seed << "\n";
  for (const auto& c : r.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
  }
  out << (r.ok() ? "overall: PASS" : "overall: FAIL") << " in " << r.seconds << " s\n";
  if (!r.stats.empty()) out << "stats: " << r.stats.dump() << "\n";
  return out.str();
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Counts instances that pass a property and keeps the first failure.
struct Tally {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::string first_failure;

  void record(bool ok, const std::string& witness = {}) {
    ++total;
    if (ok) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = witness.empty() ? "instance " + std::to_string(total - 1) : witness;
    }
  }
  [[nodiscard]] bool ok() const { return passed == total; }
  [[nodiscard]] std::string detail() const {
    std::string d = std::to_string(passed) + "/" + std::to_string(total);
    if (!first_failure.empty()) d += "; first failure: " + first_failure;
    return d;
  }
  void into(RunReport& r, const std::string& name) const { r.add(name, ok(), detail()); }
};

}  // namespace lcw
