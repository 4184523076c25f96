// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "idcsbm/generator.hpp"
#include "idcsbm/special.hpp"

namespace idcsbm {

std::string_view to_string(Hyper h) {
  switch (h) {
    case Hyper::alpha: return "alpha";
    case Hyper::gamma: return "gamma";
    case Hyper::kappa: return "kappa";
    case Hyper::lambda: return "lambda";
  }
  return "?";
}

Hyper parse_hyper(std::string_view name) {
  for (Hyper h : kAllHypers) {
    if (to_string(h) == name) return h;
  }
  throw std::invalid_argument("unknown hyperparameter '" + std::string(name) + "'");
}

double& hyper_ref(Hyperparams& hp, Hyper h) {
  switch (h) {
    case Hyper::alpha: return hp.alpha;
    case Hyper::gamma: return hp.gamma;
    case Hyper::kappa: return hp.kappa;
    case Hyper::lambda: return hp.lambda;
  }
  throw std::logic_error("hyper_ref");
}

double hyper_value(const Hyperparams& hp, Hyper h) {
  return hyper_ref(const_cast<Hyperparams&>(hp), h);
}

void ChainConfig::fix(Hyper h, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("fixed " + std::string(to_string(h)) + " must be positive and finite");
  }
  hyper_ref(initial, h) = value;
  sample_hyper[static_cast<std::size_t>(h)] = false;
}

void ChainConfig::validate() const {
  if (iterations > 0 && burn_in >= iterations) {
    throw std::invalid_argument("burn-in must be shorter than the chain");
  }
  if (!(mh_step_sigma > 0.0)) throw std::invalid_argument("MH step sigma must be positive");
  initial.validate();
}

// ---------------------------------------------------------------------------

Chain::Chain(const Network& net, const ObservationMask& mask, const ChainConfig& cfg)
    : observed_(apply_mask(net, mask, 0)),
      mask_(mask),
      cfg_(cfg),
      adj_(make_adjacency(observed_)),
      imputed_(mask.missing.size(), 0),
      hp_(cfg.initial),
      rng_(cfg.seed),
      state_(sample_crp(net.size(), cfg.initial.alpha, rng_), adj_) {
  cfg_.validate();
  mask_.validate(net.size());
  for (std::size_t t = 0; t < mask_.missing.size(); ++t) {
    if (t > 0 && !(mask_.missing[t - 1] < mask_.missing[t])) {
      throw std::invalid_argument("mask dyads must be sorted and distinct");
    }
  }
  observed_constant_ = log_data_constant(observed_);
  slots_.resize(mask_.missing.size());
  for (std::size_t t = 0; t < mask_.missing.size(); ++t) {
    const auto [i, j] = mask_.missing[t];
    if (i == j) continue;
    slots_[t] = {adj_.rows[i].size(), adj_.rows[j].size()};
    adj_.rows[i].push_back({j, 0});
    adj_.rows[j].push_back({i, 0});
  }
  order_.resize(net.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
}

void Chain::gibbs_sweep() {
  std::shuffle(order_.begin(), order_.end(), rng_);
  for (std::size_t node : order_) {
    state_.remove(node, adj_);
    state_.log_conditional(node, adj_, hp_, cfg_.kind, weights_);
    normalize_log_weights(weights_);
    state_.insert(node, sample_categorical(rng_, weights_), adj_);
  }
}

double Chain::degree_log_term(double gamma) const {
  std::map<Count, std::size_t> histogram;
  for (Count k : state_.khat_node()) ++histogram[k];
  double acc = state_.group_degree_term(gamma);
  for (const auto& [k, count] : histogram) acc += static_cast<double>(count) * log_rising(gamma, k);
  return acc;
}

double Chain::mh_log_ratio(Hyper h, double proposed) const {
  if (!(proposed > 0.0) || !std::isfinite(proposed)) return -std::numeric_limits<double>::infinity();
  switch (h) {
    case Hyper::alpha:
      return state_.crp_term(proposed) - state_.crp_term(hp_.alpha);
    case Hyper::gamma:
      if (cfg_.kind == ModelKind::plain) return 0.0;
      return degree_log_term(proposed) - degree_log_term(hp_.gamma);
    case Hyper::kappa:
      return state_.block_term(proposed, hp_.lambda) - state_.block_term(hp_.kappa, hp_.lambda);
    case Hyper::lambda:
      return state_.block_term(hp_.kappa, proposed) - state_.block_term(hp_.kappa, hp_.lambda);
  }
  return 0.0;
}

bool Chain::mh_step(Hyper h, double log_step) {
  const double current = hyper_value(hp_, h);
  const double proposed = std::exp(std::log(current) + log_step);
  if (h == Hyper::gamma && proposed > kGammaCap) {
    gamma_capped_ = true;
    return false;
  }
  const double ratio = mh_log_ratio(h, proposed);
  if (!std::isfinite(ratio)) return false;
  const double u = uniform01(rng_);
  if (std::log(u) < ratio) {
    hyper_ref(hp_, h) = proposed;
    return true;
  }
  return false;
}

void Chain::mh_hypers() {
  accept_.fill(0.0);
  gamma_capped_ = false;
  const std::size_t rounds = cfg_.mh_updates_per_sweep;
  if (rounds == 0) return;
  std::normal_distribution<double> step(0.0, cfg_.mh_step_sigma);
  for (std::size_t r = 0; r < rounds; ++r) {
    for (Hyper h : kAllHypers) {
      if (!cfg_.samples(h)) continue;
      if (h == Hyper::gamma && cfg_.kind == ModelKind::plain) continue;
      if (mh_step(h, step(rng_))) accept_[static_cast<std::size_t>(h)] += 1.0;
    }
  }
  for (double& a : accept_) a /= static_cast<double>(rounds);
}

void Chain::set_imputed(std::size_t t, Count value) {
  const Count delta = value - imputed_[t];
  if (delta == 0) return;
  const auto [i, j] = mask_.missing[t];
  if (i == j) {
    adj_.self[i] = value;
  } else {
    adj_.rows[i][slots_[t][0]].count = value;
    adj_.rows[j][slots_[t][1]].count = value;
  }
  state_.change_dyad(i, j, delta);
  imputed_[t] = value;
}

void Chain::impute() {
  if (mask_.empty()) return;
  const std::size_t L = state_.groups();
  std::vector<double> eta(L * L);
  for (std::size_t l = 0; l < L; ++l) {
    const auto nl = static_cast<double>(state_.size_of(l));
    for (std::size_t m = l; m < L; ++m) {
      const double np = l == m ? nl * nl / 2.0 : nl * static_cast<double>(state_.size_of(m));
      const double v = sample_gamma(rng_, static_cast<double>(state_.nplus(l, m)) + hp_.kappa,
                                    np + hp_.lambda);
      eta[l * L + m] = v;
      eta[m * L + l] = v;
    }
  }

  std::vector<double> theta(state_.nodes(), 1.0);
  if (cfg_.kind == ModelKind::degree_corrected) {
    std::vector<std::vector<std::size_t>> members(L);
    for (std::size_t i = 0; i < state_.nodes(); ++i) members[state_.group_of(i)].push_back(i);
    std::vector<double> conc;
    for (std::size_t l = 0; l < L; ++l) {
      conc.clear();
      for (std::size_t i : members[l]) {
        conc.push_back(hp_.gamma + static_cast<double>(state_.khat_node()[i]));
      }
      const auto phi = sample_dirichlet(rng_, conc);
      const auto nl = static_cast<double>(members[l].size());
      for (std::size_t k = 0; k < members[l].size(); ++k) theta[members[l][k]] = nl * phi[k];
    }
  }

  rates_.resize(mask_.missing.size());
  for (std::size_t t = 0; t < mask_.missing.size(); ++t) {
    const auto [i, j] = mask_.missing[t];
    const double block = eta[state_.group_of(i) * L + state_.group_of(j)];
    const double rate = i == j ? 0.5 * theta[i] * theta[i] * block : theta[i] * block * theta[j];
    rates_[t] = rate;
    set_imputed(t, sample_poisson(rng_, rate));
  }
}

Network Chain::current_network() const {
  Network net = observed_;
  for (std::size_t t = 0; t < mask_.missing.size(); ++t) {
    net.set(mask_.missing[t].i, mask_.missing[t].j, imputed_[t]);
  }
  return net;
}

double Chain::log_evidence() const {
  double constant = observed_constant_;
  for (std::size_t t = 0; t < imputed_.size(); ++t) {
    constant -= std::lgamma(static_cast<double>(imputed_[t]) + 1.0);
    if (mask_.missing[t].i == mask_.missing[t].j) {
      constant -= static_cast<double>(imputed_[t]) * std::log(2.0);
    }
  }
  double degree = 0.0;
  if (cfg_.kind == ModelKind::degree_corrected) {
    degree = state_.group_degree_term(hp_.gamma) + node_degree_factor(state_.khat_node(), hp_.gamma);
  }
  return constant + state_.block_term(hp_.kappa, hp_.lambda) + degree + state_.crp_term(hp_.alpha);
}

void Chain::audit() const {
  const Network net = current_network();
  const Partition part = state_.partition();
  const BlockStats fresh = block_stats(net, part);
  const BlockStats inc = state_.stats();
  if (fresh.sizes != inc.sizes || fresh.nplus != inc.nplus || fresh.khat_node != inc.khat_node ||
      fresh.khat_group != inc.khat_group) {
    throw std::logic_error("Chain::audit: incremental statistics diverged from a full rebuild");
  }
  const double full = idcsbm::log_evidence(net, part, hp_, cfg_.kind);
  if (std::abs(full - log_evidence()) > 1e-6 * std::max(1.0, std::abs(full))) {
    throw std::logic_error("Chain::audit: log-evidence diverged from a full evaluation");
  }
}

// ---------------------------------------------------------------------------

ChainTrace run_chain(const Network& net, const ObservationMask& mask, const ChainConfig& cfg) {
  cfg.validate();
  ChainTrace trace;
  trace.kind = cfg.kind;
  trace.burn_in = cfg.burn_in;
  trace.seed = cfg.seed;
  trace.snapshot_stride = cfg.snapshot_stride != 0 ? cfg.snapshot_stride
                                                   : (net.size() <= 2000 ? 1 : 10);
  if (cfg.iterations == 0) return trace;

  Chain chain(net, mask, cfg);
  trace.records.reserve(cfg.iterations);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    chain.gibbs_sweep();
    chain.mh_hypers();
    chain.impute();
    if (cfg.audit_every != 0 && (it + 1) % cfg.audit_every == 0) chain.audit();

    IterationRecord rec;
    rec.groups = chain.block_state().groups();
    rec.log_evidence = chain.log_evidence();
    rec.hp = chain.hyperparams();
    rec.accept = chain.last_accept();
    rec.gamma_capped = chain.gamma_capped();
    trace.records.push_back(rec);
    if ((it + 1) % trace.snapshot_stride == 0) trace.snapshots.push_back({it, chain.partition()});
    if (!mask.empty()) {
      trace.rates.push_back(chain.last_rates());
      trace.imputed.push_back(chain.imputed());
    }
  }
  return trace;
}

std::vector<ChainTrace> run_chains(const Network& net, const ObservationMask& mask,
                                   const ChainConfig& cfg, std::size_t restarts,
                                   std::uint64_t master_seed, std::size_t threads) {
  if (restarts == 0) throw std::invalid_argument("run_chains: need at least one restart");
  std::vector<ChainTrace> traces(restarts);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < restarts; k = next++) {
      try {
        ChainConfig c = cfg;
        c.seed = derive_seed(master_seed, k);
        traces[k] = run_chain(net, mask, c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t pool = std::clamp<std::size_t>(threads, 1, restarts);
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < pool; ++t) workers.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return traces;
}

std::map<Dyad, double> predictive_scores(const ChainTrace& trace, const ObservationMask& mask) {
  if (trace.post_burn_in() == 0) throw std::invalid_argument("predictive_scores: no post-burn-in iterations");
  if (trace.rates.size() != trace.size()) {
    throw std::invalid_argument("predictive_scores: trace has no imputation record");
  }
  std::vector<double> acc(mask.missing.size(), 0.0);
  for (std::size_t it = trace.burn_in; it < trace.size(); ++it) {
    const auto& r = trace.rates[it];
    if (r.size() != mask.missing.size()) {
      throw std::invalid_argument("predictive_scores: mask does not match the trace");
    }
    for (std::size_t t = 0; t < r.size(); ++t) acc[t] += -std::expm1(-r[t]);
  }
  std::map<Dyad, double> scores;
  const auto denom = static_cast<double>(trace.post_burn_in());
  for (std::size_t t = 0; t < mask.missing.size(); ++t) scores[mask.missing[t]] = acc[t] / denom;
  return scores;
}

}  // namespace idcsbm
