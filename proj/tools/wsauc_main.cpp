#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wsauc/cli/commands.hpp"

using namespace wsauc::cli;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "key = value config file");
  if (config_required) opt->required();
  sub->add_option("--seed", c.seed, "overrides the config seed");
  sub->add_option("--out", c.out, "output path");
}

KeyValueConfig load(const Common& c) { return c.config.empty() ? KeyValueConfig{} : KeyValueConfig::load(c.config); }

CommandOptions options(const Common& c) {
  CommandOptions o;
  o.seed = c.seed;
  if (c.out) o.out = *c.out;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wsauc: weakly supervised AUC training and evaluation"};
  app.require_subcommand(1);

  Common gen_c, train_c, eval_c, sweep_c, verify_c;
  auto* gen = app.add_subcommand("gen", "generate synthetic train/test CSVs and a manifest");
  add_common(gen, gen_c, true);
  auto* train = app.add_subcommand("train", "train a scorer and write model.json and report.json");
  add_common(train, train_c, true);

  auto* eval = app.add_subcommand("eval", "evaluate a saved model on a labeled CSV");
  add_common(eval, eval_c, false);
  std::optional<std::string> model_path, data_path;
  std::optional<double> alpha, beta, fpr_max, tpr_min;
  eval->add_option("--model", model_path, "model JSON");
  eval->add_option("--data", data_path, "dataset CSV");
  eval->add_option("--alpha", alpha, "rpAUC: fraction of negatives trimmed from the top");
  eval->add_option("--beta", beta, "rpAUC: fraction of positives trimmed from the bottom");
  eval->add_option("--fpr-max", fpr_max, "OPAUC/TPAUC false positive rate bound");
  eval->add_option("--tpr-min", tpr_min, "TPAUC true positive rate bound");

  auto* sweep = app.add_subcommand("bench-sweep", "paired AUC vs rpAUC training over a contamination grid");
  add_common(sweep, sweep_c, false);
  auto* verify = app.add_subcommand("verify", "run the oracle identity suites");
  add_common(verify, verify_c, false);
  double perturb_b = 0.0;
  verify->add_option("--perturb-b", perturb_b)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  return run_guarded(
      [&]() -> int {
        if (*gen) {
          cmd_gen(load(gen_c), options(gen_c), std::cout);
        } else if (*train) {
          cmd_train(load(train_c), options(train_c), std::cout);
        } else if (*eval) {
          KeyValueConfig cfg = load(eval_c);
          if (model_path) cfg.set("model", std::filesystem::absolute(*model_path).string());
          if (data_path) cfg.set("data", std::filesystem::absolute(*data_path).string());
          auto put = [&](const char* key, const std::optional<double>& v) {
            if (v) cfg.set(key, format_double(*v));
          };
          put("alpha", alpha);
          put("beta", beta);
          put("fpr_max", fpr_max);
          put("tpr_min", tpr_min);
          cmd_eval(cfg, options(eval_c), std::cout);
        } else if (*sweep) {
          cmd_bench_sweep(load(sweep_c), options(sweep_c), std::cout);
        } else if (*verify) {
          return cmd_verify(load(verify_c), options(verify_c), std::cout, perturb_b) ? kExitOk : kExitNumerical;
        }
        return kExitOk;
      },
      std::cerr);
}
