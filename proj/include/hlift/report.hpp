#pragma once

// Verdict records produced by every verifier.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hlift {

struct VerificationReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> params;
  bool pass = false;
  std::optional<std::string> first_mismatch;
  std::vector<double> residuals;
  long runtime_ms = 0;
  std::string detail;

  VerificationReport& param(const std::string& k, const std::string& v) {
    params.emplace_back(k, v);
    return *this;
  }
  VerificationReport& param(const std::string& k, long v) { return param(k, std::to_string(v)); }

  /// Records a mismatch; only the first one is kept.
  void fail(const std::string& where, const std::string& why = "") {
    if (!first_mismatch) {
      first_mismatch = where;
      if (!why.empty()) detail = why;
    }
    pass = false;
  }

  double max_residual() const {
    double m = 0;
    for (double r : residuals) m = std::max(m, r);
    return m;
  }

  nlohmann::ordered_json to_json(bool with_runtime = true) const {
    nlohmann::ordered_json j;
    j["check"] = check;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    j["pass"] = pass;
    if (first_mismatch)
      j["first_mismatch"] = *first_mismatch;
    else
      j["first_mismatch"] = nullptr;
    if (!residuals.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", max_residual());
      j["max_residual"] = buf;
    }
    if (!detail.empty()) j["detail"] = detail;
    if (with_runtime) j["runtime_ms"] = runtime_ms;
    return j;
  }
};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  long ms() const {
    return static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0_).count());
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace hlift
