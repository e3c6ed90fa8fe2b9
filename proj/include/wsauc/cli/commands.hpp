#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>

#include "wsauc/cli/config.hpp"
#include "wsauc/cli/csv.hpp"
#include "wsauc/cli/report.hpp"
#include "wsauc/model.hpp"
#include "wsauc/trainer.hpp"

namespace wsauc::cli {

/// Flags shared by every subcommand. Both override the config file.
struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

/// Writes train.csv, test.csv and manifest.json into the output directory.
void cmd_gen(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& log);

/// Trains on train_data and writes model.json and report.json. Returns the
/// report that was written.
RunReport cmd_train(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& log);

/// Metrics of a saved model on a labeled dataset, as written by cmd_eval.
Json evaluate_model(const Model& model, const Dataset& data, double alpha, double beta, double fpr_max,
                    double tpr_min);
Json cmd_eval(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& out);

/// Bag-level AUC with bag scores max over instances. Every bag must carry a
/// single label.
double bag_level_auc(const Model& model, const Dataset& data);

void cmd_bench_sweep(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& log);

/// Runs the oracle suites; returns true iff all pass.
bool cmd_verify(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& out, double perturb_b = 0.0);

/// Trainer settings from config keys; scenario fixes the pair plan.
TrainConfig parse_train_config(const KeyValueConfig& cfg, Scenario scenario);

/// Run a command, mapping exceptions to exit codes with a message on err.
int run_guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace wsauc::cli
