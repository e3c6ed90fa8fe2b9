#include "wsauc/cli/report.hpp"

#include <fstream>

#include "wsauc/cli/config.hpp"

namespace wsauc::cli {

namespace {

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

Json to_json(const RunReport& r) {
  Json j;
  Json cfg = Json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  j["scenario"] = r.scenario;
  j["coefficients"] = {{"a", opt(r.coef_a)}, {"b", opt(r.coef_b)}, {"source", r.coef_source}};
  j["seed"] = r.seed;
  j["sampling_seed"] = r.sampling_seed;
  Json trace;
  trace["outer_rounds"] = r.outer_rounds;
  trace["inner_rounds"] = r.inner_rounds;
  trace["steps"] = r.steps;
  trace["first_batch_risk"] = r.first_batch_risk;
  trace["last_batch_risk"] = r.last_batch_risk;
  trace["pairs"] = Json::array();
  for (const auto& p : r.pairs)
    trace["pairs"].push_back({{"a", p.a},
                              {"b", p.b},
                              {"weight", p.weight},
                              {"kept_a", p.kept_a},
                              {"kept_b", p.kept_b},
                              {"final_rpauc_risk", p.final_rpauc_risk}});
  trace["rounds"] = Json::array();
  for (const auto& rd : r.rounds)
    trace["rounds"].push_back({{"round", rd.round},
                               {"pair", rd.pair},
                               {"kept_a", rd.kept_a},
                               {"kept_b", rd.kept_b},
                               {"rpauc_risk", opt(rd.rpauc_risk)}});
  j["trace"] = trace;
  if (r.test) {
    const auto& t = *r.test;
    j["test"] = {{"n_pos", t.n_pos}, {"n_neg", t.n_neg}, {"alpha", t.alpha}, {"beta", t.beta},
                 {"auc", t.auc},     {"rpauc", t.rpauc}, {"bag_auc", opt(t.bag_auc)}};
  } else {
    j["test"] = nullptr;
  }
  if (r.wall_time_s) j["wall_time_s"] = *r.wall_time_s;
  return j;
}

RunReport report_from_json(const Json& j) {
  try {
    RunReport r;
    for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
    r.scenario = j.at("scenario").get<std::string>();
    const auto& c = j.at("coefficients");
    r.coef_a = get_opt<double>(c, "a");
    r.coef_b = get_opt<double>(c, "b");
    r.coef_source = c.at("source").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.sampling_seed = j.at("sampling_seed").get<std::uint64_t>();
    const auto& t = j.at("trace");
    r.outer_rounds = t.at("outer_rounds").get<int>();
    r.inner_rounds = t.at("inner_rounds").get<int>();
    r.steps = t.at("steps").get<std::uint64_t>();
    r.first_batch_risk = t.at("first_batch_risk").get<double>();
    r.last_batch_risk = t.at("last_batch_risk").get<double>();
    for (const auto& p : t.at("pairs"))
      r.pairs.push_back({p.at("a").get<std::string>(), p.at("b").get<std::string>(), p.at("weight").get<double>(),
                         p.at("kept_a").get<Index>(), p.at("kept_b").get<Index>(),
                         p.at("final_rpauc_risk").get<double>()});
    for (const auto& rd : t.at("rounds"))
      r.rounds.push_back({rd.at("round").get<int>(), rd.at("pair").get<int>(), rd.at("kept_a").get<Index>(),
                          rd.at("kept_b").get<Index>(), get_opt<double>(rd, "rpauc_risk")});
    if (!j.at("test").is_null()) {
      const auto& m = j.at("test");
      r.test = TestMetrics{m.at("n_pos").get<Index>(), m.at("n_neg").get<Index>(), m.at("alpha").get<double>(),
                           m.at("beta").get<double>(),  m.at("auc").get<double>(),   m.at("rpauc").get<double>(),
                           get_opt<double>(m, "bag_auc")};
    }
    r.wall_time_s = get_opt<double>(j, "wall_time_s");
    return r;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

Json model_to_json(const Model& m) {
  Json j;
  j["architecture"] = std::string(to_string(m.architecture()));
  j["input_dim"] = m.input_dim();
  j["hidden_width"] = m.hidden_width();
  j["params"] = std::vector<double>(m.params().data(), m.params().data() + m.params().size());
  return j;
}

Model model_from_json(const Json& j) {
  try {
    const auto arch = parse_architecture(j.at("architecture").get<std::string>());
    const auto p = j.at("params").get<std::vector<double>>();
    return Model(arch, j.at("input_dim").get<Index>(), j.at("hidden_width").get<Index>(),
                 Eigen::Map<const Vector>(p.data(), static_cast<Index>(p.size())));
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_model(const std::filesystem::path& path, const Model& m) { write_json(path, model_to_json(m)); }

Model load_model(const std::filesystem::path& path) { return model_from_json(read_json(path)); }

}  // namespace wsauc::cli
