#include "wsauc/cli/csv.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "wsauc/cli/config.hpp"

namespace wsauc::cli {

Index Dataset::count_label(int label) const {
  Index c = 0;
  for (int l : labels) c += (l == label);
  return c;
}

InstanceSet Dataset::select(int label, Role role) const {
  std::vector<Index> rows;
  for (Index i = 0; i < size(); ++i)
    if (labels[static_cast<std::size_t>(i)] == label) rows.push_back(i);
  InstanceSet out;
  out.role = role;
  out.features.resize(static_cast<Index>(rows.size()), dim());
  for (std::size_t k = 0; k < rows.size(); ++k) out.features.row(static_cast<Index>(k)) = features.row(rows[k]);
  if (is_bag_role(role))
    for (Index r : rows) out.bag_ids.push_back(bag_ids[static_cast<std::size_t>(r)]);
  return out;
}

void append(Dataset& data, const InstanceSet& set, int label) {
  if (set.empty()) return;
  if (data.size() == 0 && data.dim() == 0) data.features.resize(0, set.dim());
  if (set.dim() != data.dim()) throw InputError("append: dimension mismatch");
  const bool bags = !set.bag_ids.empty();
  if (data.size() > 0 && bags != data.has_bags()) throw InputError("append: mixing bag and non-bag rows");
  const Index old = data.size();
  data.features.conservativeResize(old + set.size(), set.dim());
  data.features.bottomRows(set.size()) = set.features;
  data.labels.insert(data.labels.end(), static_cast<std::size_t>(set.size()), label);
  if (bags) data.bag_ids.insert(data.bag_ids.end(), set.bag_ids.begin(), set.bag_ids.end());
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (Index j = 0; j < data.dim(); ++j) out << 'f' << j << ',';
  out << "label";
  if (data.has_bags()) out << ",bag_id";
  out << '\n';
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) out << format_double(data.features(i, j)) << ',';
    const int l = data.labels[static_cast<std::size_t>(i)];
    out << (l > 0 ? "+1" : l < 0 ? "-1" : "0");
    if (data.has_bags()) out << ',' << data.bag_ids[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  const std::string where = path.string();
  std::string line;
  if (!std::getline(in, line)) throw DataError(where + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  Index d = 0;
  while (d < static_cast<Index>(header.size()) && header[static_cast<std::size_t>(d)] == "f" + std::to_string(d)) ++d;
  const std::size_t rest = header.size() - static_cast<std::size_t>(d);
  const bool bags = rest == 2 && header[static_cast<std::size_t>(d) + 1] == "bag_id";
  if (d == 0 || rest < 1 || rest > 2 || header[static_cast<std::size_t>(d)] != "label" || (rest == 2 && !bags))
    throw DataError(where + ": header must be f0..f{d-1},label[,bag_id]");

  std::vector<double> values;
  Dataset data;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw DataError(where + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                      " fields, got " + std::to_string(cells.size()));
    for (Index j = 0; j < d; ++j) {
      const std::string& c = cells[static_cast<std::size_t>(j)];
      try {
        std::size_t used = 0;
        values.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw DataError(where + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
      }
    }
    const std::string& lab = cells[static_cast<std::size_t>(d)];
    if (lab == "+1" || lab == "1") data.labels.push_back(1);
    else if (lab == "-1") data.labels.push_back(-1);
    else if (lab == "0") data.labels.push_back(0);
    else throw DataError(where + ":" + std::to_string(lineno) + ": label must be +1, -1 or 0, got '" + lab + "'");
    if (bags) {
      try {
        data.bag_ids.push_back(std::stoi(cells.back()));
      } catch (const std::exception&) {
        throw DataError(where + ":" + std::to_string(lineno) + ": bad bag_id '" + cells.back() + "'");
      }
    }
  }
  const Index n = static_cast<Index>(data.labels.size());
  data.features.resize(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) data.features(i, j) = values[static_cast<std::size_t>(i * d + j)];
  if (!data.features.allFinite()) throw DataError(where + ": non-finite feature value");
  return data;
}

RoleSets roles_from_dataset(const Dataset& data, Scenario scenario, const std::vector<PairTerm>& plan) {
  Role pos = Role::kP, neg = Role::kN;
  bool has_neg = true, has_unl = false;
  switch (scenario) {
    case Scenario::kSupervised: break;
    case Scenario::kContaminated:
    case Scenario::kNoisy: pos = Role::kNoisyP; neg = Role::kNoisyN; break;
    case Scenario::kPU: has_neg = false; has_unl = true; break;
    case Scenario::kSSL: has_unl = true; break;
    case Scenario::kNoisySSL: pos = Role::kNoisyP; neg = Role::kNoisyN; has_unl = true; break;
    case Scenario::kMIL: pos = Role::kBagPositive; neg = Role::kBagNegative; break;
  }
  const std::string name(to_string(scenario));
  if (scenario == Scenario::kMIL && !data.has_bags()) throw ConfigError("scenario mil needs a bag_id column");
  if (!has_neg && data.count_label(-1) > 0) throw ConfigError("scenario " + name + " has no role for label -1");
  if (!has_unl && data.count_label(0) > 0) throw ConfigError("scenario " + name + " has no role for label 0");

  RoleSets sets;
  if (data.count_label(1) > 0) sets[pos] = data.select(1, pos);
  if (has_neg && data.count_label(-1) > 0) sets[neg] = data.select(-1, neg);
  if (has_unl && data.count_label(0) > 0) sets[Role::kU] = data.select(0, Role::kU);
  for (const auto& t : plan)
    for (Role r : {t.a, t.b})
      if (!sets.count(r))
        throw ConfigError("scenario " + name + " needs a non-empty " + std::string(to_string(r)) + " set");
  return sets;
}

}  // namespace wsauc::cli
