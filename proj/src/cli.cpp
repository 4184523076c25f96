// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "idcsbm/generator.hpp"
#include "idcsbm/graph.hpp"
#include "idcsbm/metrics.hpp"

namespace idcsbm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kHoldoutStream = 0x686f6c64;  // "hold"
constexpr std::uint64_t kChainStream = 0x63686e;      // "chn"

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

json hp_json(const Hyperparams& hp) {
  return {{"alpha", hp.alpha}, {"gamma", hp.gamma}, {"kappa", hp.kappa}, {"lambda", hp.lambda}};
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string config_line(const RunConfig& cfg) { return "# config: " + cfg.to_json().dump() + "\n"; }

std::string chain_file(std::size_t k, const std::string& suffix) {
  std::ostringstream os;
  os << "chain_" << std::setw(2) << std::setfill('0') << k << suffix;
  return os.str();
}

std::string trace_csv(const ChainTrace& trace, const RunConfig& cfg) {
  std::ostringstream os;
  os << config_line(cfg);
  os << "iter,L,log_evidence,alpha,gamma,kappa,lambda,"
        "accept_alpha,accept_gamma,accept_kappa,accept_lambda,gamma_capped\n";
  for (std::size_t it = 0; it < trace.size(); ++it) {
    const auto& r = trace.records[it];
    os << it << ',' << r.groups << ',' << num(r.log_evidence) << ',' << num(r.hp.alpha) << ','
       << num(r.hp.gamma) << ',' << num(r.hp.kappa) << ',' << num(r.hp.lambda);
    for (double a : r.accept) os << ',' << num(a);
    os << ',' << (r.gamma_capped ? 1 : 0) << '\n';
  }
  return os.str();
}

json snapshots_json(const ChainTrace& trace, const Network& net, const RunConfig& cfg) {
  json snaps = json::array();
  for (const auto& s : trace.snapshots) snaps.push_back({{"iteration", s.iteration}, {"z", s.part.labels()}});
  return {{"config", cfg.to_json()},
          {"nodes", net.labels()},
          {"seed", trace.seed},
          {"burn_in", trace.burn_in},
          {"stride", trace.snapshot_stride},
          {"snapshots", snaps}};
}

struct ChainSummary {
  double mean_groups = 0.0;
  double mean_gamma = 0.0;
  double mean_log_evidence = 0.0;
};

ChainSummary summarize(const ChainTrace& trace) {
  ChainSummary s;
  const std::size_t count = trace.post_burn_in();
  if (count == 0) return s;
  for (std::size_t it = trace.burn_in; it < trace.size(); ++it) {
    s.mean_groups += static_cast<double>(trace.records[it].groups);
    s.mean_gamma += trace.records[it].hp.gamma;
    s.mean_log_evidence += trace.records[it].log_evidence;
  }
  const auto c = static_cast<double>(count);
  s.mean_groups /= c;
  s.mean_gamma /= c;
  s.mean_log_evidence /= c;
  return s;
}

ChainConfig chain_config(const RunConfig& cfg, ModelKind kind) {
  ChainConfig c = cfg.chain;
  c.kind = kind;
  return c;
}

ObservationMask base_mask(const RunConfig& cfg, const Network& net) {
  ObservationMask mask;
  if (cfg.mask) {
    std::ifstream in(*cfg.mask);
    if (!in) throw std::runtime_error("cannot open mask " + cfg.mask->string());
    std::stringstream buf;
    buf << in.rdbuf();
    mask = mask_from_json(buf.str());
    mask.validate(net.size());
  }
  if (cfg.simple) mask = merge_masks(mask, diagonal_mask(net));
  return mask;
}

/// Chains for one model on one network with a holdout, scored against it.
struct ScoredRun {
  std::vector<ChainTrace> traces;
  std::vector<double> auc;
  std::vector<double> nmi;
  std::vector<double> l_ratio;
};

ScoredRun fit_and_score(const Network& net, const ObservationMask& holdout,
                        const ObservationMask& extra, ModelKind kind, const RunConfig& cfg,
                        std::uint64_t master, const std::optional<Partition>& truth) {
  const ObservationMask mask = merge_masks(holdout, extra);
  ScoredRun run;
  run.traces = run_chains(net, mask, chain_config(cfg, kind), cfg.restarts, master, cfg.threads);
  for (const auto& trace : run.traces) {
    if (!holdout.empty()) {
      const auto scores = predictive_scores(trace, mask);
      std::vector<ScoredDyad> scored;
      for (std::size_t t = 0; t < holdout.missing.size(); ++t) {
        const Dyad d = holdout.missing[t];
        scored.push_back({d, scores.at(d),
                          (*holdout.truth)[t] > 0 ? DyadLabel::link : DyadLabel::nonlink});
      }
      run.auc.push_back(auc(scored));
    }
    if (truth) {
      run.nmi.push_back(mean_nmi(trace, *truth));
      run.l_ratio.push_back(l_ratio(trace, truth->groups()));
    }
  }
  return run;
}

void write_chain_outputs(const fs::path& dir, const std::vector<ChainTrace>& traces, const Network& net,
                         const RunConfig& cfg) {
  for (std::size_t k = 0; k < traces.size(); ++k) {
    write_file(dir / chain_file(k, "_trace.csv"), trace_csv(traces[k], cfg));
    write_file(dir / chain_file(k, "_partitions.json"), snapshots_json(traces[k], net, cfg).dump() + "\n");
  }
}

json summary_json(const std::vector<ChainTrace>& traces, const RunConfig& cfg) {
  json chains = json::array();
  std::vector<double> groups;
  std::vector<double> gammas;
  std::vector<double> evidences;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const auto s = summarize(traces[k]);
    chains.push_back({{"chain", k},
                      {"seed", traces[k].seed},
                      {"mean_L", s.mean_groups},
                      {"mean_gamma", s.mean_gamma},
                      {"mean_log_evidence", s.mean_log_evidence}});
    groups.push_back(s.mean_groups);
    gammas.push_back(s.mean_gamma);
    evidences.push_back(s.mean_log_evidence);
  }
  json out{{"config", cfg.to_json()}, {"chains", chains}};
  if (!traces.empty()) {
    out["mean_L"] = mean_and_sem(groups).mean;
    out["mean_gamma"] = mean_and_sem(gammas).mean;
    out["mean_log_evidence"] = mean_and_sem(evidences).mean;
  }
  return out;
}

Network load_input(const fs::path& path) {
  if (path.empty()) throw std::invalid_argument("an input edge list is required");
  return load_edge_list_file(path);
}

std::vector<GridPoint> synthetic_grid(const RunConfig& cfg) {
  if (cfg.single) return {{cfg.nodes, cfg.planted}};
  std::vector<GridPoint> grid;
  if (cfg.grid_lambda.empty() && cfg.grid_gamma.empty() && cfg.nodes == 80) return study_grid();
  const std::vector<double> lambdas =
      cfg.grid_lambda.empty() ? std::vector<double>{0.5, 5.0, 50.0} : cfg.grid_lambda;
  const std::vector<double> gammas =
      cfg.grid_gamma.empty() ? std::vector<double>{0.5, 2.0, 8.0, 32.0, 200.0} : cfg.grid_gamma;
  for (double l : lambdas) {
    for (double g : gammas) {
      Hyperparams hp = cfg.planted;
      hp.lambda = l;
      hp.gamma = g;
      grid.push_back({cfg.nodes, hp});
    }
  }
  return grid;
}

// Only lambda = 0.5 and gamma = 200 are values taken from the original study.
std::string value_source(double v, double anchored) { return v == anchored ? "study" : "artifact"; }

std::string grid_name(std::size_t k) {
  std::ostringstream os;
  os << std::setw(2) << std::setfill('0') << k;
  return os.str();
}

}  // namespace

json RunConfig::to_json() const {
  json fixed = json::object();
  for (Hyper h : kAllHypers) {
    if (!chain.samples(h)) fixed[std::string(to_string(h))] = hyper_value(chain.initial, h);
  }
  std::vector<std::string> input_list;
  for (const auto& p : inputs) input_list.push_back(p.generic_string());
  return {{"command", command},
          {"input", input.generic_string()},
          {"inputs", input_list},
          {"truth", truth ? truth->generic_string() : ""},
          {"mask", mask ? mask->generic_string() : ""},
          {"mode", mode},
          {"model", to_string(kind)},
          {"iterations", chain.iterations},
          {"burn_in", chain.burn_in},
          {"mh_updates_per_sweep", chain.mh_updates_per_sweep},
          {"mh_step_sigma", chain.mh_step_sigma},
          {"initial", hp_json(chain.initial)},
          {"fixed", fixed},
          {"restarts", restarts},
          {"seed", seed},
          {"holdout", holdout},
          {"simple", simple},
          {"nodes", nodes},
          {"planted", hp_json(planted)},
          {"single", single},
          {"grid_lambda", grid_lambda},
          {"grid_gamma", grid_gamma},
          {"dispersion_window", dispersion_window},
          {"log_bins", log_bins}};
}

Partition load_partition_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open partition file " + path.string());
  const json j = json::parse(in);
  const json& z = j.is_object() ? j.at("z") : j;
  return Partition::from_labels(z.get<std::vector<int>>());
}

void cmd_generate(const RunConfig& cfg) {
  const auto grid = synthetic_grid(cfg);
  json manifest{{"config", cfg.to_json()}, {"networks", json::array()}};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& point = grid[k];
    const std::uint64_t seed = derive_seed(cfg.seed, k);
    Rng rng(seed);
    const auto gen = sample_network(point.n, point.hp, rng);
    const std::string lambda_src = value_source(point.hp.lambda, 0.5);
    const std::string gamma_src = value_source(point.hp.gamma, 200.0);

    std::ostringstream edges;
    write_edge_list(edges, gen.net,
                    {"config: " + cfg.to_json().dump(),
                     "planted: " + hp_json(point.hp).dump() + " seed: " + std::to_string(seed) +
                         " lambda_source: " + lambda_src + " gamma_source: " + gamma_src});
    write_file(cfg.out / ("network_" + grid_name(k) + ".txt"), edges.str());

    json truth = json::parse(truth_to_json(gen.truth, seed));
    truth["config"] = cfg.to_json();
    truth["lambda_source"] = lambda_src;
    truth["gamma_source"] = gamma_src;
    write_file(cfg.out / ("truth_" + grid_name(k) + ".json"), truth.dump(2) + "\n");

    manifest["networks"].push_back({{"index", k},
                                    {"nodes", point.n},
                                    {"hyperparams", hp_json(point.hp)},
                                    {"seed", seed},
                                    {"groups", gen.truth.part.groups()},
                                    {"lambda_source", lambda_src},
                                    {"gamma_source", gamma_src}});
  }
  write_file(cfg.out / "manifest.json", manifest.dump(2) + "\n");
}

void cmd_fit(const RunConfig& cfg) {
  const Network net = load_input(cfg.input);
  const ObservationMask mask = base_mask(cfg, net);
  const auto traces =
      run_chains(net, mask, chain_config(cfg, cfg.kind), cfg.restarts, cfg.seed, cfg.threads);
  write_chain_outputs(cfg.out, traces, net, cfg);
  write_file(cfg.out / "summary.json", summary_json(traces, cfg).dump(2) + "\n");
}

void cmd_evaluate(const RunConfig& cfg) {
  const Network net = load_input(cfg.input);
  std::optional<Partition> truth;
  if (cfg.truth) {
    truth = load_partition_json(*cfg.truth);
    if (truth->size() != net.size()) {
      throw std::invalid_argument("truth partition has " + std::to_string(truth->size()) +
                                  " nodes, network has " + std::to_string(net.size()));
    }
  } else if (cfg.require_nmi) {
    throw std::invalid_argument("NMI requested but no truth partition supplied (--truth)");
  }
  const ObservationMask holdout = make_holdout(net, cfg.holdout, derive_seed(cfg.seed, kHoldoutStream));
  const ObservationMask extra = base_mask(cfg, net);
  const auto run = fit_and_score(net, holdout, extra, cfg.kind, cfg,
                                 derive_seed(cfg.seed, kChainStream), truth);

  std::ostringstream csv;
  csv << config_line(cfg) << "model,chain,metric,value,sem\n";
  const std::string model(to_string(cfg.kind));
  auto emit = [&](const std::string& metric, const std::vector<double>& values) {
    if (values.empty()) return;
    for (std::size_t k = 0; k < values.size(); ++k) {
      csv << model << ',' << k << ',' << metric << ',' << num(values[k]) << ",\n";
    }
    const auto me = mean_and_sem(values);
    csv << model << ",all," << metric << ',' << num(me.mean) << ',' << num(me.sem) << '\n';
  };
  std::vector<double> groups;
  std::vector<double> gammas;
  for (const auto& t : run.traces) {
    const auto s = summarize(t);
    groups.push_back(s.mean_groups);
    gammas.push_back(s.mean_gamma);
  }
  emit("auc", run.auc);
  emit("nmi", run.nmi);
  emit("l_ratio", run.l_ratio);
  emit("mean_L", groups);
  if (cfg.kind == ModelKind::degree_corrected) emit("mean_gamma", gammas);
  write_file(cfg.out / "evaluate.csv", csv.str());

  json scores{{"config", cfg.to_json()}, {"holdout", json::parse(mask_to_json(holdout))}, {"chains", json::array()}};
  const ObservationMask full = merge_masks(holdout, extra);
  for (const auto& trace : run.traces) {
    const auto s = predictive_scores(trace, full);
    json entries = json::array();
    for (std::size_t t = 0; t < holdout.missing.size(); ++t) {
      const Dyad d = holdout.missing[t];
      entries.push_back({{"i", d.i}, {"j", d.j}, {"truth", (*holdout.truth)[t]}, {"score", s.at(d)}});
    }
    scores["chains"].push_back(entries);
  }
  write_file(cfg.out / "scores.json", scores.dump(2) + "\n");
  write_chain_outputs(cfg.out / "chains", run.traces, net, cfg);
}

namespace {

void append_dispersion(std::ostringstream& csv, const std::string& prefix,
                       const std::vector<ChainTrace>& traces, const Network& net,
                       const RunConfig& cfg, ModelKind kind) {
  const auto profile = cfg.log_bins ? degree_dispersion_profile_log_binned(traces, net, cfg.dispersion_window)
                                    : degree_dispersion_profile(traces, net, cfg.dispersion_window);
  for (const auto& p : profile) {
    csv << prefix << p.group_size << ',' << num(p.mean_std) << ',' << num(p.std_error) << ','
        << to_string(kind) << '\n';
  }
}

void replicate_synthetic(const RunConfig& cfg) {
  const auto grid = synthetic_grid(cfg);
  std::ostringstream fig1;
  std::ostringstream fig3;
  std::ostringstream fig4;
  fig1 << config_line(cfg) << "lambda,gamma,gamma_source,lambda_source,model,metric,mean,sem,chains\n";
  fig3 << config_line(cfg) << "lambda,gamma,group_size,mean_std,stderr,model\n";
  fig4 << config_line(cfg) << "lambda,gamma_planted,gamma_source,chain,mean_gamma\n";

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& point = grid[k];
    const std::uint64_t seed = derive_seed(cfg.seed, k);
    Rng rng(seed);
    const auto gen = sample_network(point.n, point.hp, rng);
    const ObservationMask holdout = make_holdout(gen.net, cfg.holdout, derive_seed(seed, kHoldoutStream));
    const ObservationMask extra = base_mask(cfg, gen.net);
    const std::string lambda_src = value_source(point.hp.lambda, 0.5);
    const std::string gamma_src = value_source(point.hp.gamma, 200.0);
    const std::string key = num(point.hp.lambda) + ',' + num(point.hp.gamma) + ',';

    for (ModelKind kind : {ModelKind::degree_corrected, ModelKind::plain}) {
      const auto run = fit_and_score(gen.net, holdout, extra, kind, cfg,
                                     derive_seed(seed, kChainStream), gen.truth.part);
      for (const auto& [metric, values] :
           {std::pair{"nmi", run.nmi}, std::pair{"l_ratio", run.l_ratio}, std::pair{"auc", run.auc}}) {
        const auto me = mean_and_sem(values);
        fig1 << key << gamma_src << ',' << lambda_src << ',' << to_string(kind) << ',' << metric << ','
             << num(me.mean) << ',' << num(me.sem) << ',' << values.size() << '\n';
      }
      append_dispersion(fig3, key, run.traces, gen.net, cfg, kind);
      if (kind == ModelKind::degree_corrected) {
        const auto gs = gamma_summary(run.traces);
        for (std::size_t c = 0; c < gs.chain_means.size(); ++c) {
          fig4 << key << gamma_src << ',' << c << ',' << num(gs.chain_means[c]) << '\n';
        }
      }
    }
  }
  write_file(cfg.out / "fig1.csv", fig1.str());
  write_file(cfg.out / "fig3.csv", fig3.str());
  write_file(cfg.out / "fig4.csv", fig4.str());
}

void replicate_real(const RunConfig& cfg) {
  std::vector<fs::path> inputs = cfg.inputs;
  if (inputs.empty() && !cfg.input.empty()) inputs.push_back(cfg.input);
  if (inputs.empty()) throw std::invalid_argument("replicate real: supply at least one --input");
  std::ostringstream fig2;
  std::ostringstream fig3;
  std::ostringstream fig4;
  fig2 << config_line(cfg) << "network,model,metric,mean,sem,chains\n";
  fig3 << config_line(cfg) << "network,group_size,mean_std,stderr,model\n";
  fig4 << config_line(cfg) << "network,chain,mean_gamma\n";
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Network net = load_input(inputs[k]);
    const std::string name = inputs[k].stem().string();
    const std::uint64_t seed = derive_seed(cfg.seed, k);
    const ObservationMask holdout = make_holdout(net, cfg.holdout, derive_seed(seed, kHoldoutStream));
    const ObservationMask extra = base_mask(cfg, net);
    for (ModelKind kind : {ModelKind::degree_corrected, ModelKind::plain}) {
      const auto run = fit_and_score(net, holdout, extra, kind, cfg, derive_seed(seed, kChainStream),
                                     std::nullopt);
      std::vector<double> groups;
      for (const auto& t : run.traces) groups.push_back(summarize(t).mean_groups);
      for (const auto& [metric, values] : {std::pair{"auc", run.auc}, std::pair{"mean_L", groups}}) {
        const auto me = mean_and_sem(values);
        fig2 << name << ',' << to_string(kind) << ',' << metric << ',' << num(me.mean) << ','
             << num(me.sem) << ',' << values.size() << '\n';
      }
      append_dispersion(fig3, name + ",", run.traces, net, cfg, kind);
      if (kind == ModelKind::degree_corrected) {
        const auto gs = gamma_summary(run.traces);
        for (std::size_t c = 0; c < gs.chain_means.size(); ++c) {
          fig4 << name << ',' << c << ',' << num(gs.chain_means[c]) << '\n';
        }
      }
    }
  }
  write_file(cfg.out / "fig2.csv", fig2.str());
  write_file(cfg.out / "fig3.csv", fig3.str());
  write_file(cfg.out / "fig4.csv", fig4.str());
}

}  // namespace

void cmd_replicate(const RunConfig& cfg) {
  if (cfg.mode == "synthetic") {
    replicate_synthetic(cfg);
  } else if (cfg.mode == "real") {
    replicate_real(cfg);
  } else {
    throw std::invalid_argument("replicate: mode must be 'synthetic' or 'real'");
  }
}

void run(const RunConfig& cfg) {
  if (cfg.restarts == 0) throw std::invalid_argument("--restarts must be at least 1");
  if (cfg.out.empty()) throw std::invalid_argument("--out must be nonempty");
  cfg.chain.validate();
  if (cfg.command == "generate") return cmd_generate(cfg);
  if (cfg.command == "fit") return cmd_fit(cfg);
  if (cfg.command == "evaluate") return cmd_evaluate(cfg);
  if (cfg.command == "replicate") return cmd_replicate(cfg);
  throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

}  // namespace idcsbm::cli
