// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idcsbm/graph.hpp"
#include "idcsbm/model.hpp"
#include "idcsbm/partition.hpp"
#include "idcsbm/random.hpp"

namespace idcsbm {

enum class Hyper : std::size_t { alpha = 0, gamma = 1, kappa = 2, lambda = 3 };

inline constexpr std::array<Hyper, 4> kAllHypers = {Hyper::alpha, Hyper::gamma, Hyper::kappa,
                                                    Hyper::lambda};

std::string_view to_string(Hyper h);
Hyper parse_hyper(std::string_view name);
double& hyper_ref(Hyperparams& hp, Hyper h);
double hyper_value(const Hyperparams& hp, Hyper h);

/// Proposals for gamma above this are rejected outright.
inline constexpr double kGammaCap = 1e12;

struct ChainConfig {
  std::size_t iterations = 1000;
  std::size_t burn_in = 500;
  std::size_t mh_updates_per_sweep = 20;
  double mh_step_sigma = 0.1;
  std::uint64_t seed = 0;
  ModelKind kind = ModelKind::degree_corrected;
  Hyperparams initial;
  std::array<bool, 4> sample_hyper = {true, true, true, true};
  /// Partition snapshot stride; 0 picks 1 for n <= 2000 and 10 above.
  std::size_t snapshot_stride = 0;
  /// Recompute statistics from scratch every this many iterations (0 = off).
  std::size_t audit_every = 0;

  bool samples(Hyper h) const { return sample_hyper[static_cast<std::size_t>(h)]; }
  void fix(Hyper h, double value);
  void validate() const;
};

struct IterationRecord {
  std::size_t groups = 0;
  double log_evidence = 0.0;
  Hyperparams hp;
  std::array<double, 4> accept{};  // fraction of MH proposals accepted, by Hyper
  bool gamma_capped = false;
};

struct Snapshot {
  std::size_t iteration;
  Partition part;
};

struct ChainTrace {
  ModelKind kind = ModelKind::degree_corrected;
  std::size_t burn_in = 0;
  std::size_t snapshot_stride = 1;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> records;
  std::vector<Snapshot> snapshots;
  /// Per iteration, per masked dyad: the Poisson rate used and the value drawn.
  std::vector<std::vector<double>> rates;
  std::vector<std::vector<Count>> imputed;

  std::size_t size() const { return records.size(); }
  std::size_t post_burn_in() const { return size() > burn_in ? size() - burn_in : 0; }
};

/// One MCMC chain over (z, hyperparameters, missing dyads).
///
/// Masked dyads start at zero and are redrawn by impute(). The observed part
/// of the network is fixed; BlockState always reflects observed + imputed
/// counts under the current partition.
class Chain {
 public:
  Chain(const Network& net, const ObservationMask& mask, const ChainConfig& cfg);

  /// Resamples every node's group once, in a fresh random order.
  void gibbs_sweep();

  /// cfg.mh_updates_per_sweep rounds of log-scale random-walk updates.
  void mh_hypers();

  /// log acceptance ratio for moving `h` to `proposed`. The 1/x prior and
  /// the Jacobian of the log-normal proposal cancel, so this is the
  /// evidence ratio alone.
  double mh_log_ratio(Hyper h, double proposed) const;

  /// One Metropolis step of `h` by log-scale offset `log_step`.
  bool mh_step(Hyper h, double log_step);

  /// Redraws masked dyads from their posterior predictive.
  void impute();

  /// Throws std::logic_error if incremental stats disagree with a rebuild.
  void audit() const;

  Partition partition() const { return state_.partition(); }
  BlockStats stats() const { return state_.stats(); }
  const BlockState& block_state() const { return state_; }
  const Hyperparams& hyperparams() const { return hp_; }
  Hyperparams& hyperparams() { return hp_; }
  const ObservationMask& mask() const { return mask_; }
  const std::vector<Count>& imputed() const { return imputed_; }
  const std::vector<double>& last_rates() const { return rates_; }
  /// Observed network with the current imputed values filled in.
  Network current_network() const;
  /// Full collapsed log p(A, z | hp) of the current state.
  double log_evidence() const;
  const std::array<double, 4>& last_accept() const { return accept_; }
  bool gamma_capped() const { return gamma_capped_; }
  Rng& rng() { return rng_; }

 private:
  double degree_log_term(double gamma) const;
  void set_imputed(std::size_t t, Count value);

  Network observed_;
  ObservationMask mask_;
  ChainConfig cfg_;
  Adjacency adj_;
  std::vector<std::array<std::size_t, 2>> slots_;  // per masked dyad, row positions in adj_
  std::vector<Count> imputed_;
  std::vector<double> rates_;
  double observed_constant_ = 0.0;
  Hyperparams hp_;
  Rng rng_;
  BlockState state_;
  std::array<double, 4> accept_{};
  bool gamma_capped_ = false;
  std::vector<std::size_t> order_;
  std::vector<double> weights_;
};

/// Runs gibbs_sweep, mh_hypers, impute per iteration and records everything.
ChainTrace run_chain(const Network& net, const ObservationMask& mask, const ChainConfig& cfg);

/// Independent restarts; chain k is seeded with derive_seed(master_seed, k).
/// Results do not depend on `threads`.
std::vector<ChainTrace> run_chains(const Network& net, const ObservationMask& mask,
                                   const ChainConfig& cfg, std::size_t restarts,
                                   std::uint64_t master_seed, std::size_t threads);

/// Mean over post-burn-in iterations of 1 - exp(-rate) per masked dyad.
std::map<Dyad, double> predictive_scores(const ChainTrace& trace, const ObservationMask& mask);

}  // namespace idcsbm
