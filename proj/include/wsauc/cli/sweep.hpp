#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wsauc/cli/config.hpp"
#include "wsauc/trainer.hpp"

namespace wsauc::cli {

struct SweepConfig {
  Index dim = 2;
  double bayes_auc = 0.95;
  std::vector<double> grid_a;  // theta_a values
  std::vector<double> grid_b;  // 1 - theta_b values
  int repeats = 10;
  Index pool_size = 4000;       // generated per contaminated set
  double train_fraction = 0.05;  // share of each pool used for training
  Index n_test = 2000;           // clean test instances per class
  std::uint64_t seed = 0;
  /// Also train with one fixed (alpha, beta) for every cell.
  bool fixed_mode = false;
  double fixed_alpha = 0.0;
  double fixed_beta = 0.0;
  TrainConfig train;  // alpha and beta are set per cell
  // Without a warm start the noisiest cells lock into reversed rankings.
  static constexpr int kDefaultWarmup = 10;

  /// 0.65, 0.70, ..., 1.0
  static std::vector<double> default_grid();
  static SweepConfig from_config(const KeyValueConfig& cfg);
};

struct SweepCell {
  std::size_t index = 0;
  double theta_a = 0.0;
  double one_minus_theta_b = 0.0;
  std::string mode;  // "true" or "fixed"
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> auc_plain;
  std::vector<double> auc_rp;

  std::vector<double> deltas() const;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::size_t rows = 0, cols = 0;
};

/// Paired runs per cell: the plain objective (alpha = beta = 0) and the
/// trimmed objective on the same data and trainer seed. Cell k uses seed
/// base_seed + k.
SweepResult run_sweep(const SweepConfig& cfg);

double mean_of(const std::vector<double>& v);
/// Sample standard deviation, 0 for fewer than two values.
double std_of(const std::vector<double>& v);

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);

}  // namespace wsauc::cli
