#include "wsauc/cli/sweep.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "wsauc/cli/commands.hpp"
#include "wsauc/cli/csv.hpp"
#include "wsauc/metrics.hpp"
#include "wsauc/ranking.hpp"
#include "wsauc/scenarios.hpp"

namespace wsauc::cli {

namespace {

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' must be a comma-separated list of numbers");
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' is empty");
  for (double v : out)
    if (!(v > 0.5 && v <= 1.0)) throw ConfigError("config key '" + key + "': grid values must lie in (0.5, 1]");
  return out;
}

// splitmix64 step, used to spread repeat seeds within a cell.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double test_auc(const Model& m, const CleanSample& test) {
  return auc_exact({m.scores(test.pos.features), m.scores(test.neg.features)});
}

}  // namespace

std::vector<double> SweepConfig::default_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 7; ++k) g.push_back(static_cast<double>(65 + 5 * k) / 100.0);
  return g;
}

SweepConfig SweepConfig::from_config(const KeyValueConfig& cfg) {
  SweepConfig s;
  s.dim = cfg.get_int("dim", s.dim);
  s.bayes_auc = cfg.get_double("bayes_auc", s.bayes_auc);
  s.grid_a = cfg.has("grid_a") ? parse_list("grid_a", cfg.get_string("grid_a"))
             : cfg.has("grid") ? parse_list("grid", cfg.get_string("grid"))
                               : default_grid();
  s.grid_b = cfg.has("grid_b") ? parse_list("grid_b", cfg.get_string("grid_b"))
             : cfg.has("grid") ? parse_list("grid", cfg.get_string("grid"))
                               : default_grid();
  s.repeats = static_cast<int>(cfg.get_int("repeats", s.repeats));
  s.pool_size = cfg.get_int("pool_size", s.pool_size);
  s.train_fraction = cfg.get_double("train_fraction", s.train_fraction);
  s.n_test = cfg.get_int("n_test", s.n_test);
  s.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  s.fixed_mode = cfg.has("fixed_alpha") || cfg.has("fixed_beta");
  s.fixed_alpha = cfg.get_double("fixed_alpha", 0.0);
  s.fixed_beta = cfg.get_double("fixed_beta", 0.0);
  if (s.dim < 1 || s.repeats < 1 || s.pool_size < 2 || s.n_test < 1)
    throw ConfigError("sweep: dim, repeats, pool_size and n_test must be positive");
  if (!(s.train_fraction > 0.0 && s.train_fraction <= 1.0)) throw ConfigError("sweep: train_fraction must lie in (0, 1]");
  if (floor_count(s.train_fraction, s.pool_size) < 2) throw ConfigError("sweep: training sets would be too small");
  s.train = parse_train_config(cfg, Scenario::kContaminated);
  if (!cfg.has("warmup_rounds")) s.train.warmup_rounds = kDefaultWarmup;
  return s;
}

std::vector<double> SweepCell::deltas() const {
  std::vector<double> d;
  for (std::size_t i = 0; i < auc_rp.size(); ++i) d.push_back(auc_rp[i] - auc_plain[i]);
  return d;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

SweepResult run_sweep(const SweepConfig& cfg) {
  const PopulationSpec pop =
      PopulationSpec::isotropic(cfg.dim, PopulationSpec::separation_for_auc(cfg.bayes_auc), 0.5);
  const GaussianSampler sampler(pop);
  const Index n_train = floor_count(cfg.train_fraction, cfg.pool_size);

  SweepResult result;
  result.rows = cfg.grid_a.size();
  result.cols = cfg.grid_b.size();
  for (std::size_t i = 0; i < cfg.grid_a.size(); ++i) {
    for (std::size_t j = 0; j < cfg.grid_b.size(); ++j) {
      const std::size_t index = i * cfg.grid_b.size() + j;
      const double ta = cfg.grid_a[i], tb = 1.0 - cfg.grid_b[j];
      SweepCell cell_true{index, ta, cfg.grid_b[j], "true", tb, 1.0 - ta, {}, {}};
      SweepCell cell_fixed{index, ta, cfg.grid_b[j], "fixed", cfg.fixed_alpha, cfg.fixed_beta, {}, {}};
      const std::uint64_t cell_seed = cfg.seed + index;
      for (int r = 0; r < cfg.repeats; ++r) {
        const std::uint64_t rep_seed = mix(cell_seed * 1000003ULL + static_cast<std::uint64_t>(r));
        std::mt19937_64 rng(rep_seed);
        const InstanceSet pool_a = sampler.draw_mixture(ta, cfg.pool_size, Role::kNoisyP, rng, 0);
        const InstanceSet pool_b = sampler.draw_mixture(tb, cfg.pool_size, Role::kNoisyN, rng);
        std::vector<Index> all(static_cast<std::size_t>(cfg.pool_size));
        for (Index k = 0; k < cfg.pool_size; ++k) all[static_cast<std::size_t>(k)] = k;
        RoleSets sets;
        sets[Role::kNoisyP] = pool_a.subset(sample_without_replacement(all, n_train, rng));
        sets[Role::kNoisyN] = pool_b.subset(sample_without_replacement(all, n_train, rng));
        const CleanSample test = sample_clean(pop, cfg.n_test, cfg.n_test, mix(rep_seed));

        TrainConfig tc = cfg.train;
        tc.seed = mix(rep_seed + 1);
        tc.track_full_risk = false;
        tc.alpha = 0.0;
        tc.beta = 0.0;
        const double plain = test_auc(train(sets, tc).model, test);
        tc.alpha = cell_true.alpha;
        tc.beta = cell_true.beta;
        cell_true.auc_plain.push_back(plain);
        cell_true.auc_rp.push_back(test_auc(train(sets, tc).model, test));
        if (cfg.fixed_mode) {
          tc.alpha = cfg.fixed_alpha;
          tc.beta = cfg.fixed_beta;
          cell_fixed.auc_plain.push_back(plain);
          cell_fixed.auc_rp.push_back(test_auc(train(sets, tc).model, test));
        }
      }
      result.cells.push_back(std::move(cell_true));
      if (cfg.fixed_mode) result.cells.push_back(std::move(cell_fixed));
    }
  }
  return result;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "theta_a,one_minus_theta_b,mode,alpha,beta,repeats,auc_plain_mean,auc_plain_std,auc_rp_mean,auc_rp_std,"
         "delta_mean,delta_std\n";
  for (const auto& c : result.cells) {
    const auto d = c.deltas();
    out << format_double(c.theta_a) << ',' << format_double(c.one_minus_theta_b) << ',' << c.mode << ','
        << format_double(c.alpha) << ',' << format_double(c.beta) << ',' << c.auc_rp.size() << ','
        << format_double(mean_of(c.auc_plain)) << ',' << format_double(std_of(c.auc_plain)) << ','
        << format_double(mean_of(c.auc_rp)) << ',' << format_double(std_of(c.auc_rp)) << ','
        << format_double(mean_of(d)) << ',' << format_double(std_of(d)) << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
}

void cmd_bench_sweep(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& log) {
  if (opts.seed) cfg.set("seed", std::to_string(*opts.seed));
  const SweepConfig sc = SweepConfig::from_config(cfg);
  const SweepResult res = run_sweep(sc);
  const std::filesystem::path path =
      opts.out ? *opts.out : cfg.has("out") ? cfg.get_path("out") : std::filesystem::path("sweep.csv");
  write_sweep_csv(path, res);
  log << "wrote " << res.rows << "x" << res.cols << " sweep to " << path.string() << '\n';
}

}  // namespace wsauc::cli
