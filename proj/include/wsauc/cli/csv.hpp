#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wsauc/risks.hpp"
#include "wsauc/trainer.hpp"
#include "wsauc/types.hpp"

namespace wsauc::cli {

/// In-memory form of the dataset CSV: columns f0..f{d-1}, label (+1, -1 or
/// 0 for unlabeled), then an optional bag_id.
struct Dataset {
  FeatureMatrix features;
  std::vector<int> labels;
  std::vector<int> bag_ids;  // empty when the file has no bag_id column

  Index size() const { return features.rows(); }
  Index dim() const { return features.cols(); }
  bool has_bags() const { return !bag_ids.empty(); }
  Index count_label(int label) const;
  /// Rows with the given label, bag ids carried along when present.
  InstanceSet select(int label, Role role) const;
};

/// Append rows of an instance set under one label. Bag ids are taken from the
/// set when present.
void append(Dataset& data, const InstanceSet& set, int label);

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
/// Throws DataError on unreadable files or malformed content.
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Role sets implied by a scenario: supervised/ssl use P and N, noisy and
/// contaminated use NoisyP/NoisyN, pu uses P and U, mil uses the bag roles;
/// label 0 rows become U where the scenario has one. Throws ConfigError when a
/// label present in the data has no role in the scenario or a required role
/// is missing.
RoleSets roles_from_dataset(const Dataset& data, Scenario scenario, const std::vector<PairTerm>& plan);

/// %.17g text of a double.
std::string format_double(double v);

}  // namespace wsauc::cli
