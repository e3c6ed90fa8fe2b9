#include "wsauc/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>

#include "wsauc/errors.hpp"
#include "wsauc/metrics.hpp"
#include "wsauc/ranking.hpp"
#include "wsauc/risks.hpp"
#include "wsauc/scenarios.hpp"

namespace wsauc::cli {

namespace {

template <typename F>
auto as_config_error(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw ConfigError(what + ": " + e.what());
  } catch (const UnsupportedOperation& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

void apply_overrides(KeyValueConfig& cfg, const CommandOptions& opts) {
  if (opts.seed) cfg.set("seed", std::to_string(*opts.seed));
}

std::filesystem::path out_dir(const KeyValueConfig& cfg, const CommandOptions& opts) {
  if (opts.out) return *opts.out;
  if (cfg.has("out_dir")) return cfg.get_path("out_dir");
  return ".";
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw DataError("cannot create directory " + dir.string());
}

std::uint64_t seed_of(const KeyValueConfig& cfg) {
  const auto s = cfg.get_int("seed", 0);
  if (s < 0) throw ConfigError("seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

Index positive_int(const KeyValueConfig& cfg, const std::string& key, Index fallback) {
  const auto v = cfg.get_int(key, fallback);
  if (v < 1) throw ConfigError("config key '" + key + "' must be positive");
  return static_cast<Index>(v);
}

PopulationSpec population_from(const KeyValueConfig& cfg) {
  const Index dim = positive_int(cfg, "dim", 2);
  const double pi = cfg.get_double("pi_p", 0.5);
  if (!(pi > 0.0 && pi < 1.0)) throw ConfigError("pi_p must lie in (0, 1)");
  double sep = 0.0;
  if (cfg.has("separation")) {
    sep = cfg.get_double("separation");
  } else {
    const double auc = cfg.get_double("bayes_auc", 0.95);
    sep = as_config_error("bayes_auc", [&] { return PopulationSpec::separation_for_auc(auc); });
  }
  return as_config_error("population", [&] {
    auto p = PopulationSpec::isotropic(dim, sep, pi);
    p.validate();
    return p;
  });
}

Json mixture_json(const MixtureSpec& m) {
  return {{"theta_a", m.theta_a()}, {"theta_b", m.theta_b()}, {"a", m.a()}, {"b", m.b()}};
}

Index class_count(double pi, Index n) { return static_cast<Index>(std::llround(pi * static_cast<double>(n))); }

}  // namespace

// ---- gen ----

void cmd_gen(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& log) {
  apply_overrides(cfg, opts);
  const Scenario scenario =
      as_config_error("scenario", [&] { return parse_scenario(cfg.get_string("scenario")); });
  const PopulationSpec pop = population_from(cfg);
  const std::uint64_t seed = seed_of(cfg);
  const Index n_train = positive_int(cfg, "n_train", 1000);
  const Index n_test = positive_int(cfg, "n_test", 1000);
  const auto dir = out_dir(cfg, opts);

  Dataset train, test;
  train.features.resize(0, pop.dim());
  test.features.resize(0, pop.dim());
  Json manifest;
  manifest["scenario"] = std::string(to_string(scenario));
  manifest["seed"] = seed;
  manifest["dim"] = pop.dim();
  manifest["separation"] = (pop.mean_pos - pop.mean_neg).norm();
  manifest["pi_p"] = pop.pi_p;
  Json nominal = Json::object();
  Json realized = Json::object();

  as_config_error("gen", [&] {
    if (scenario == Scenario::kMIL) {
      const Index pb = positive_int(cfg, "n_pos_bags", 50), nb = positive_int(cfg, "n_neg_bags", 50);
      const Index size = positive_int(cfg, "bag_size", 10);
      const Index tpb = positive_int(cfg, "n_test_pos_bags", pb), tnb = positive_int(cfg, "n_test_neg_bags", nb);
      const double w = cfg.get_double("witness_rate", 0.3);
      nominal = {{"n_pos_bags", pb}, {"n_neg_bags", nb}, {"bag_size", size}, {"witness_rate", w}};
      const Index k = std::max<Index>(1, ceil_count(w, size));
      auto bags = [&](Index p_bags, Index n_bags, std::uint64_t s) {
        const CleanSample pool = sample_clean(pop, p_bags * k, p_bags * (size - k) + n_bags * size, s);
        return make_mil(pool.pos, pool.neg, p_bags, n_bags, size, w, s + 1);
      };
      const MILSets tr = bags(pb, nb, seed);
      const MILSets te = bags(tpb, tnb, seed + 2);
      append(train, tr.pos_bags, 1);
      append(train, tr.neg_bags, -1);
      append(test, te.pos_bags, 1);
      append(test, te.neg_bags, -1);
      realized = mixture_json(tr.mixture());
      realized["eta_p"] = tr.eta_p();
      realized["witnesses_per_bag"] = tr.witnesses_per_bag;
      return 0;
    }

    const CleanSample te = sample_clean(pop, class_count(pop.pi_p, n_test), n_test - class_count(pop.pi_p, n_test),
                                        seed + 2);
    append(test, te.pos, 1);
    append(test, te.neg, -1);

    if (scenario == Scenario::kContaminated) {
      const double ta = cfg.get_double("theta_a"), tb = cfg.get_double("theta_b");
      nominal = {{"theta_a", ta}, {"theta_b", tb}};
      const MixtureSpec nom(ta, tb);
      GaussianSampler sampler(pop);
      std::mt19937_64 rng(seed);
      const Index na = class_count(0.5, n_train);
      const InstanceSet xa = sampler.draw_mixture(nom.theta_a(), na, Role::kNoisyP, rng, 0);
      const InstanceSet xb = sampler.draw_mixture(nom.theta_b(), n_train - na, Role::kNoisyN, rng,
                                                  static_cast<std::size_t>(na));
      const double ra = static_cast<double>(xa.count_true_positives()) / static_cast<double>(xa.size());
      const double rb = static_cast<double>(xb.count_true_positives()) / static_cast<double>(xb.size());
      realized = mixture_json(MixtureSpec(ra, rb));
      append(train, xa, 1);
      append(train, xb, -1);
      return 0;
    }

    const CleanSample cs =
        sample_clean(pop, class_count(pop.pi_p, n_train), n_train - class_count(pop.pi_p, n_train), seed);
    switch (scenario) {
      case Scenario::kSupervised:
        append(train, cs.pos, 1);
        append(train, cs.neg, -1);
        realized = mixture_json(MixtureSpec::clean());
        break;
      case Scenario::kNoisy: {
        const double ep = cfg.get_double("eta_p", 0.2), en = cfg.get_double("eta_n", 0.2);
        nominal = {{"eta_p", ep}, {"eta_n", en}};
        const NoisySets ns = corrupt_noisy(cs.pos, cs.neg, ep, en, seed + 1);
        if (ns.stats.bound_violated) log << "warning: eta_p + eta_n >= 0.5\n";
        append(train, ns.noisy_p, 1);
        append(train, ns.noisy_n, -1);
        realized = mixture_json(ns.stats.mixture());
        realized["eta_p"] = ns.stats.eta_p();
        realized["eta_n"] = ns.stats.eta_n();
        break;
      }
      case Scenario::kPU: {
        const double r = cfg.get_double("label_ratio", 0.2);
        nominal = {{"label_ratio", r}};
        const PUSets pu = make_pu(cs.pos, cs.neg, r, seed + 1);
        append(train, pu.labeled, 1);
        append(train, pu.unlabeled, 0);
        realized = mixture_json(pu.mixture());
        realized["pi_p_unlabeled"] = pu.pi_p_unlabeled();
        break;
      }
      case Scenario::kSSL:
      case Scenario::kNoisySSL: {
        const double r = cfg.get_double("label_ratio", 0.2);
        nominal = {{"label_ratio", r}};
        const SSLSets ssl = make_ssl(cs.pos, cs.neg, r, seed + 1);
        if (scenario == Scenario::kSSL) {
          append(train, ssl.pos, 1);
          append(train, ssl.neg, -1);
          realized = mixture_json(MixtureSpec::clean());
        } else {
          const double ep = cfg.get_double("eta_p", 0.2), en = cfg.get_double("eta_n", 0.2);
          nominal["eta_p"] = ep;
          nominal["eta_n"] = en;
          const NoisySets ns = corrupt_noisy(ssl.pos, ssl.neg, ep, en, seed + 3);
          if (ns.stats.bound_violated) log << "warning: eta_p + eta_n >= 0.5\n";
          append(train, ns.noisy_p, 1);
          append(train, ns.noisy_n, -1);
          realized = mixture_json(ns.stats.mixture());
          realized["eta_p"] = ns.stats.eta_p();
          realized["eta_n"] = ns.stats.eta_n();
        }
        append(train, ssl.unlabeled, 0);
        realized["pi_p_unlabeled"] = ssl.pi_p_unlabeled();
        break;
      }
      default:
        break;
    }
    return 0;
  });

  manifest["nominal"] = nominal;
  manifest["realized"] = realized;
  manifest["counts"] = {
      {"train", {{"pos", train.count_label(1)}, {"neg", train.count_label(-1)}, {"unlabeled", train.count_label(0)}}},
      {"test", {{"pos", test.count_label(1)}, {"neg", test.count_label(-1)}}}};
  manifest["files"] = {{"train", "train.csv"}, {"test", "test.csv"}};

  ensure_dir(dir);
  write_dataset_csv(dir / "train.csv", train);
  write_dataset_csv(dir / "test.csv", test);
  write_json(dir / "manifest.json", manifest);
  log << "wrote " << (dir / "train.csv").string() << ", " << (dir / "test.csv").string() << ", "
      << (dir / "manifest.json").string() << '\n';
}

// ---- train ----

TrainConfig parse_train_config(const KeyValueConfig& cfg, Scenario scenario) {
  TrainConfig tc;
  tc.alpha = cfg.get_double("alpha", 0.0);
  tc.beta = cfg.get_double("beta", 0.0);
  tc.gamma = cfg.get_double("gamma", tc.gamma);
  tc.outer_rounds = static_cast<int>(positive_int(cfg, "outer_rounds", tc.outer_rounds));
  tc.inner_rounds = static_cast<int>(positive_int(cfg, "inner_rounds", tc.inner_rounds));
  tc.warmup_rounds = static_cast<int>(cfg.get_int("warmup_rounds", tc.warmup_rounds));
  tc.batch_a = positive_int(cfg, "batch_a", tc.batch_a);
  tc.batch_b = positive_int(cfg, "batch_b", tc.batch_b);
  tc.learning_rate = cfg.get_double("learning_rate", tc.learning_rate);
  tc.seed = seed_of(cfg);
  tc.hidden_width = positive_int(cfg, "hidden_width", tc.hidden_width);
  tc.track_full_risk = cfg.get_bool("track_full_risk", true);
  return as_config_error("train config", [&] {
    tc.loss = SurrogateLoss{parse_loss_kind(cfg.get_string("loss", "logistic"))};
    tc.architecture = parse_architecture(cfg.get_string("model", "linear"));
    tc.pair_plan = make_pair_plan(scenario, tc.gamma);
    tc.validate();
    return tc;
  });
}

namespace {

// Coefficients (a, b) of the contaminated pair as far as they are known.
void fill_coefficients(RunReport& r, const KeyValueConfig& cfg, Scenario scenario) {
  if (const auto mp = cfg.get_optional_path("manifest")) {
    const Json m = read_json(*mp);
    try {
      if (m.at("scenario").get<std::string>() != r.scenario)
        throw ConfigError("manifest scenario '" + m.at("scenario").get<std::string>() + "' does not match '" +
                          r.scenario + "'");
      r.coef_a = m.at("realized").at("a").get<double>();
      r.coef_b = m.at("realized").at("b").get<double>();
    } catch (const Json::exception& e) {
      throw DataError(mp->string() + ": " + e.what());
    }
    r.coef_source = "manifest";
    return;
  }
  std::optional<MixtureSpec> spec;
  as_config_error("mixture", [&] {
    switch (scenario) {
      case Scenario::kSupervised:
      case Scenario::kSSL: spec = MixtureSpec::clean(); break;
      case Scenario::kNoisy:
      case Scenario::kNoisySSL:
        if (cfg.has("eta_p") && cfg.has("eta_n"))
          spec = MixtureSpec::noisy(cfg.get_double("eta_p"), cfg.get_double("eta_n"));
        break;
      case Scenario::kContaminated:
        if (cfg.has("theta_a") && cfg.has("theta_b"))
          spec = MixtureSpec(cfg.get_double("theta_a"), cfg.get_double("theta_b"));
        break;
      case Scenario::kPU:
        if (cfg.has("pi_p")) spec = MixtureSpec::pu(cfg.get_double("pi_p"));
        break;
      case Scenario::kMIL:
        if (cfg.has("eta_p")) spec = MixtureSpec::mil(cfg.get_double("eta_p"));
        break;
    }
    return 0;
  });
  if (spec) {
    r.coef_a = spec->a();
    r.coef_b = spec->b();
    r.coef_source = "config";
  } else {
    r.coef_source = "none";
  }
}

TestMetrics test_metrics(const Model& model, const Dataset& data, double alpha, double beta) {
  if (data.count_label(0) > 0) throw DataError("test data must not contain unlabeled rows");
  if (data.dim() != model.input_dim())
    throw DataError("test data has " + std::to_string(data.dim()) + " features, model expects " +
                    std::to_string(model.input_dim()));
  ScorePair sp{model.scores(data.select(1, Role::kP).features), model.scores(data.select(-1, Role::kN).features)};
  TestMetrics t;
  t.n_pos = sp.pos.size();
  t.n_neg = sp.neg.size();
  t.alpha = alpha;
  t.beta = beta;
  t.auc = auc_exact(sp);
  t.rpauc = rpauc_eval(sp, alpha, beta);
  if (data.has_bags()) t.bag_auc = bag_level_auc(model, data);
  return t;
}

}  // namespace

RunReport cmd_train(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& log) {
  apply_overrides(cfg, opts);
  const Scenario scenario =
      as_config_error("scenario", [&] { return parse_scenario(cfg.get_string("scenario")); });
  const TrainConfig tc = parse_train_config(cfg, scenario);
  const Dataset data = read_dataset_csv(cfg.get_path("train_data"));
  const RoleSets sets = roles_from_dataset(data, scenario, tc.pair_plan);
  const std::optional<Dataset> test =
      cfg.has("test_data") ? std::optional<Dataset>(read_dataset_csv(cfg.get_path("test_data"))) : std::nullopt;
  const auto dir = out_dir(cfg, opts);
  const auto model_path = cfg.has("model_out") ? cfg.get_path("model_out") : dir / "model.json";
  const auto report_path = cfg.has("report_out") ? cfg.get_path("report_out") : dir / "report.json";

  RunReport r;
  for (const auto& [k, v] : cfg.entries()) r.config.emplace_back(k, v);
  r.scenario = std::string(to_string(scenario));
  fill_coefficients(r, cfg, scenario);
  r.seed = tc.seed;
  r.sampling_seed = sampling_seed(tc.seed);

  const auto t0 = std::chrono::steady_clock::now();
  const TrainResult res = train(sets, tc);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  r.outer_rounds = tc.outer_rounds;
  r.inner_rounds = tc.inner_rounds;
  r.steps = res.trace.steps.size();
  r.first_batch_risk = res.trace.steps.front().batch_risk;
  r.last_batch_risk = res.trace.steps.back().batch_risk;
  for (std::size_t p = 0; p < tc.pair_plan.size(); ++p) {
    const auto& term = tc.pair_plan[p];
    r.pairs.push_back({std::string(to_string(term.a)), std::string(to_string(term.b)), term.weight,
                       floor_count(1.0 - tc.beta, sets.at(term.a).size()),
                       floor_count(1.0 - tc.alpha, sets.at(term.b).size()), res.trace.final_rpauc_risk[p]});
  }
  for (const auto& rd : res.trace.rounds) {
    RoundSummary s{rd.round, rd.pair, rd.kept_a, rd.kept_b, std::nullopt};
    if (tc.track_full_risk) s.rpauc_risk = rd.rpauc_risk;
    r.rounds.push_back(s);
  }
  if (test) r.test = test_metrics(res.model, *test, tc.alpha, tc.beta);
  if (cfg.get_bool("record_wall_time", false)) r.wall_time_s = wall;

  ensure_dir(model_path.parent_path().empty() ? "." : model_path.parent_path());
  ensure_dir(report_path.parent_path().empty() ? "." : report_path.parent_path());
  save_model(model_path, res.model);
  write_json(report_path, to_json(r));
  log << "wrote " << model_path.string() << ", " << report_path.string() << '\n';
  return r;
}

// ---- eval ----

double bag_level_auc(const Model& model, const Dataset& data) {
  if (!data.has_bags()) throw DataError("bag-level AUC needs a bag_id column");
  std::map<int, std::pair<double, int>> bags;  // id -> (max score, label)
  for (Index i = 0; i < data.size(); ++i) {
    const int id = data.bag_ids[static_cast<std::size_t>(i)];
    const int label = data.labels[static_cast<std::size_t>(i)];
    const double s = model.score(data.features.row(i).transpose());
    auto [it, fresh] = bags.try_emplace(id, s, label);
    if (!fresh) {
      if (it->second.second != label) throw DataError("bag " + std::to_string(id) + " mixes labels");
      it->second.first = std::max(it->second.first, s);
    }
  }
  std::vector<double> pos, neg;
  for (const auto& [id, v] : bags) {
    if (v.second == 1) pos.push_back(v.first);
    else if (v.second == -1) neg.push_back(v.first);
    else throw DataError("bag " + std::to_string(id) + " is unlabeled");
  }
  ScorePair sp{Eigen::Map<const Vector>(pos.data(), static_cast<Index>(pos.size())),
               Eigen::Map<const Vector>(neg.data(), static_cast<Index>(neg.size()))};
  try {
    return auc_exact(sp);
  } catch (const InputError& e) {
    throw DataError(std::string("bag-level AUC: ") + e.what());
  }
}

Json evaluate_model(const Model& model, const Dataset& data, double alpha, double beta, double fpr_max,
                    double tpr_min) {
  if (data.count_label(0) > 0) throw DataError("eval data must not contain unlabeled rows");
  if (data.dim() != model.input_dim())
    throw DataError("eval data has " + std::to_string(data.dim()) + " features, model expects " +
                    std::to_string(model.input_dim()));
  const ScorePair sp{model.scores(data.select(1, Role::kP).features),
                     model.scores(data.select(-1, Role::kN).features)};
  Json j;
  j["n_pos"] = sp.pos.size();
  j["n_neg"] = sp.neg.size();
  try {
    j["auc"] = auc_exact(sp);
  } catch (const InputError& e) {
    throw DataError(std::string("eval: ") + e.what());
  }
  j["opauc"] = {{"fpr_min", 0.0}, {"fpr_max", fpr_max}, {"value", opauc_eval(sp, 0.0, fpr_max)}};
  j["tpauc"] = {{"fpr_max", fpr_max}, {"tpr_min", tpr_min}, {"value", tpauc_eval(sp, fpr_max, tpr_min)}};
  j["rpauc"] = {{"alpha", alpha}, {"beta", beta}, {"value", rpauc_eval(sp, alpha, beta)}};
  if (data.has_bags()) j["bag_auc"] = bag_level_auc(model, data);
  return j;
}

Json cmd_eval(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& out) {
  apply_overrides(cfg, opts);
  const double alpha = cfg.get_double("alpha", 0.0), beta = cfg.get_double("beta", 0.0);
  const double fpr_max = cfg.get_double("fpr_max", 0.3), tpr_min = cfg.get_double("tpr_min", 0.7);
  if (!(alpha >= 0.0 && alpha < 1.0 && beta >= 0.0 && beta < 1.0)) throw ConfigError("alpha, beta must lie in [0, 1)");
  if (!(fpr_max > 0.0 && fpr_max <= 1.0)) throw ConfigError("fpr_max must lie in (0, 1]");
  if (!(tpr_min >= 0.0 && tpr_min < 1.0)) throw ConfigError("tpr_min must lie in [0, 1)");
  const Model model = load_model(cfg.get_path("model"));
  const Dataset data = read_dataset_csv(cfg.get_path("data"));
  const Json j = evaluate_model(model, data, alpha, beta, fpr_max, tpr_min);
  if (opts.out) {
    write_json(*opts.out, j);
  } else {
    out << j.dump(2) << '\n';
  }
  return j;
}

// ---- error mapping ----

int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InputError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const UnsupportedOperation& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace wsauc::cli
