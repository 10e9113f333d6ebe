#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "survtest/cvm.hpp"
#include "survtest/logrank.hpp"
#include "survtest/sim.hpp"

namespace survtest {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Result of one homogeneity test, as reported by the CLI.
struct TestReport {
  std::string test;  // "logrank" or "cvm"
  double statistic = 0.0;
  std::optional<int> df;            // logrank
  std::vector<double> eigenvalues;  // cvm
  double p_value = 1.0;
  std::string weight;
  int d_lo = 0;
  int d_hi = 0;
  std::size_t observable = 0;
  std::optional<std::string> dropped_group;  // cvm
  std::optional<double> rcond;               // logrank
  std::optional<bool> gate;                  // cvm
  std::optional<int> evaluated_at;           // logrank
  std::optional<int> type2_stop;             // logrank with type-2 stopping
  std::string version = kToolVersion;
  std::string input_digest;

  bool operator==(const TestReport&) const = default;
};

TestReport make_report(const LogRankResult& r, const WeightSpec& w, std::size_t observable,
                       std::string input_digest);
TestReport make_report(const CvmResult& r, const WeightSpec& w, const std::string& dropped_label,
                       std::string input_digest);

void to_json(nlohmann::json& j, const TestReport& r);
void from_json(const nlohmann::json& j, TestReport& r);

/// FNV-1a 64-bit digest of the input bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Parse a simulation config document. Throws InputError on schema violations.
sim::SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json sim_config_to_json(const sim::SimConfig& cfg);

/// Result rows in the layout of the empirical-level tables (one row per test).
/// Wall time is deliberately excluded so the document is reproducible.
nlohmann::json sim_result_to_json(const sim::SimConfig& cfg, const sim::SimResult& res);

}  // namespace survtest
