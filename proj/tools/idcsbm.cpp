// Apache License, Version 2.0, refer to LICENSE.txt

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idcsbm/cli.hpp"

namespace {

using idcsbm::cli::RunConfig;

std::string env_name(const std::string& flag) {
  std::string out = "IDCSBM_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

struct Flags {
  std::string model = "dc";
  std::vector<std::string> fixed;
  std::vector<std::string> init;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::string truth;
  std::string mask;
  std::optional<double> alpha, gamma, kappa, lambda;
  bool fifty = false;
};

std::pair<idcsbm::Hyper, double> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw CLI::ValidationError("expected <param>=<value>, got '" + text + "'");
  return {idcsbm::parse_hyper(text.substr(0, eq)), std::stod(text.substr(eq + 1))};
}

template <class T>
CLI::Option* opt(CLI::App* app, const std::string& flag, T& target, const std::string& help) {
  return app->add_option("--" + flag, target, help)->envname(env_name(flag));
}

CLI::Option* flag(CLI::App* app, const std::string& name, bool& target, const std::string& help) {
  return app->add_flag("--" + name, target, help)->envname(env_name(name));
}

void add_chain_options(CLI::App* app, RunConfig& cfg, Flags& f) {
  opt(app, "model", f.model, "dc (degree corrected) or plain")
      ->check(CLI::IsMember({"dc", "plain", "degree_corrected", "isbm", "idcsbm"}));
  opt(app, "iterations", cfg.chain.iterations, "sweeps per chain")->capture_default_str();
  opt(app, "burnin", cfg.chain.burn_in, "discarded prefix")->capture_default_str();
  opt(app, "restarts", cfg.restarts, "independent chains")->capture_default_str();
  opt(app, "threads", cfg.threads, "worker threads for chains")->capture_default_str();
  opt(app, "mh-updates", cfg.chain.mh_updates_per_sweep, "MH rounds per sweep")->capture_default_str();
  opt(app, "sigma", cfg.chain.mh_step_sigma, "log-scale MH step")->capture_default_str();
  opt(app, "fix", f.fixed, "hold a hyperparameter fixed, e.g. gamma=1e8");
  opt(app, "init", f.init, "initial hyperparameter value, e.g. alpha=2");
  flag(app, "simple", cfg.simple, "treat the diagonal as missing (simple graphs)");
  opt(app, "mask", f.mask, "JSON mask of additional missing dyads");
  opt(app, "snapshot-stride", cfg.chain.snapshot_stride, "partition snapshot stride (0 = auto)");
  opt(app, "audit", cfg.chain.audit_every, "rebuild statistics every N iterations (0 = off)");
}

void add_common(CLI::App* app, RunConfig& cfg, Flags& f) {
  opt(app, "seed", f.seed, "master seed (random and logged if omitted)");
  opt(app, "out", cfg.out, "output directory")->capture_default_str();
}

void add_planted(CLI::App* app, RunConfig& cfg, Flags& f) {
  opt(app, "nodes", cfg.nodes, "nodes per synthetic network")->capture_default_str();
  opt(app, "alpha", f.alpha, "planted CRP concentration (default 4)");
  opt(app, "gamma", f.gamma, "planted Dirichlet concentration");
  opt(app, "kappa", f.kappa, "planted Gamma shape (default 0.5)");
  opt(app, "lambda", f.lambda, "planted Gamma rate");
  opt(app, "grid-lambda", cfg.grid_lambda, "override the lambda grid");
  opt(app, "grid-gamma", cfg.grid_gamma, "override the gamma grid");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infinite degree-corrected stochastic blockmodel: generate, fit, evaluate, replicate"};
  app.require_subcommand(1);
  RunConfig cfg;
  Flags f;

  auto* generate = app.add_subcommand("generate", "sample synthetic networks with planted truth");
  add_common(generate, cfg, f);
  add_planted(generate, cfg, f);

  auto* fit = app.add_subcommand("fit", "run MCMC chains on an edge list");
  add_common(fit, cfg, f);
  add_chain_options(fit, cfg, f);
  fit->add_option("input", cfg.input, "edge list")->required()->envname("IDCSBM_INPUT");

  auto* evaluate = app.add_subcommand("evaluate", "link prediction on a holdout, plus NMI / L ratio");
  add_common(evaluate, cfg, f);
  add_chain_options(evaluate, cfg, f);
  evaluate->add_option("input", cfg.input, "edge list")->required()->envname("IDCSBM_INPUT");
  opt(evaluate, "holdout", cfg.holdout, "fraction of links held out")->capture_default_str();
  opt(evaluate, "truth", f.truth, "truth partition JSON ({\"z\": [...]} or a bare array)");
  flag(evaluate, "nmi", cfg.require_nmi, "fail unless a truth partition is given");

  auto* replicate = app.add_subcommand("replicate", "tables behind the study's figures");
  add_common(replicate, cfg, f);
  add_chain_options(replicate, cfg, f);
  add_planted(replicate, cfg, f);
  replicate->add_option("mode", cfg.mode, "synthetic or real")
      ->check(CLI::IsMember({"synthetic", "real"}))
      ->capture_default_str();
  opt(replicate, "input", f.inputs, "edge lists for the real-network tables");
  opt(replicate, "holdout", cfg.holdout, "fraction of links held out")->capture_default_str();
  opt(replicate, "window", cfg.dispersion_window, "trailing iterations for the dispersion profile")
      ->capture_default_str();
  flag(replicate, "log-bins", cfg.log_bins, "pool group sizes into powers of two");
  flag(replicate, "fifty-restarts", f.fifty, "use 50 chains per configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.kind = idcsbm::parse_model_kind(f.model);
    if (f.seed) {
      cfg.seed = *f.seed;
    } else {
      cfg.seed = std::random_device{}();
      std::cerr << "seed: " << cfg.seed << '\n';
    }
    for (const auto& a : f.init) {
      const auto [h, v] = parse_assignment(a);
      idcsbm::hyper_ref(cfg.chain.initial, h) = v;
    }
    for (const auto& a : f.fixed) {
      const auto [h, v] = parse_assignment(a);
      cfg.chain.fix(h, v);
    }
    if (!f.truth.empty()) cfg.truth = f.truth;
    if (!f.mask.empty()) cfg.mask = f.mask;
    for (const auto& p : f.inputs) cfg.inputs.emplace_back(p);
    if (f.fifty) cfg.restarts = 50;
    if (f.alpha) cfg.planted.alpha = *f.alpha;
    if (f.kappa) cfg.planted.kappa = *f.kappa;
    if (f.gamma || f.lambda) {
      cfg.single = true;
      if (f.gamma) cfg.planted.gamma = *f.gamma;
      if (f.lambda) cfg.planted.lambda = *f.lambda;
    }
    idcsbm::cli::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
