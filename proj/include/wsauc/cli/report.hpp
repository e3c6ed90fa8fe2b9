#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wsauc/model.hpp"

namespace wsauc::cli {

using Json = nlohmann::ordered_json;

struct PairSummary {
  std::string a;
  std::string b;
  double weight = 0.0;
  Index kept_a = 0;
  Index kept_b = 0;
  double final_rpauc_risk = 0.0;
  friend bool operator==(const PairSummary&, const PairSummary&) = default;
};

struct RoundSummary {
  int round = 0;
  int pair = 0;
  Index kept_a = 0;
  Index kept_b = 0;
  std::optional<double> rpauc_risk;  // absent unless tracked
  friend bool operator==(const RoundSummary&, const RoundSummary&) = default;
};

struct TestMetrics {
  Index n_pos = 0;
  Index n_neg = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double auc = 0.0;
  double rpauc = 0.0;
  std::optional<double> bag_auc;
  friend bool operator==(const TestMetrics&, const TestMetrics&) = default;
};

/// Everything a training run reports. Fields serialize in declaration order.
struct RunReport {
  std::vector<std::pair<std::string, std::string>> config;  // echo, sorted by key
  std::string scenario;
  std::optional<double> coef_a;
  std::optional<double> coef_b;
  std::string coef_source;  // "manifest", "config" or "none"
  std::uint64_t seed = 0;
  std::uint64_t sampling_seed = 0;
  int outer_rounds = 0;
  int inner_rounds = 0;
  std::uint64_t steps = 0;
  double first_batch_risk = 0.0;
  double last_batch_risk = 0.0;
  std::vector<PairSummary> pairs;
  std::vector<RoundSummary> rounds;
  std::optional<TestMetrics> test;
  std::optional<double> wall_time_s;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

Json to_json(const RunReport& r);
RunReport report_from_json(const Json& j);

Json model_to_json(const Model& m);
Model model_from_json(const Json& j);

/// Pretty-printed JSON plus trailing newline. Throws DataError on failure.
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

void save_model(const std::filesystem::path& path, const Model& m);
Model load_model(const std::filesystem::path& path);

}  // namespace wsauc::cli
