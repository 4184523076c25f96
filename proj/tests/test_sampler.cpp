// Apache License, Version 2.0, refer to LICENSE.txt

#include <doctest.h>

#include <cmath>
#include <map>

#include "idcsbm/generator.hpp"
#include "idcsbm/metrics.hpp"
#include "idcsbm/oracle.hpp"
#include "idcsbm/sampler.hpp"

using namespace idcsbm;

namespace {

Network small_network() {
  Network net(4);
  net.set(0, 1, 3);
  net.set(0, 2, 1);
  net.set(1, 1, 1);
  net.set(2, 3, 2);
  net.set(3, 3, 1);
  return net;
}

ChainConfig quick(std::size_t iterations, std::uint64_t seed) {
  ChainConfig cfg;
  cfg.iterations = iterations;
  cfg.burn_in = iterations / 2;
  cfg.seed = seed;
  return cfg;
}

void fix_all(ChainConfig& cfg, const Hyperparams& hp) {
  for (Hyper h : kAllHypers) cfg.fix(h, hyper_value(hp, h));
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double tv = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
  return tv / 2;
}

}  // namespace

TEST_CASE("hyper names") {
  for (Hyper h : kAllHypers) CHECK(parse_hyper(to_string(h)) == h);
  CHECK_THROWS(parse_hyper("beta"));
  Hyperparams hp{1.0, 2.0, 3.0, 4.0};
  hyper_ref(hp, Hyper::kappa) = 9.0;
  CHECK(hp.kappa == 9.0);
  CHECK(hyper_value(hp, Hyper::lambda) == 4.0);
}

TEST_CASE("config validation") {
  ChainConfig cfg;
  cfg.burn_in = cfg.iterations;
  CHECK_THROWS(cfg.validate());
  cfg = ChainConfig{};
  cfg.mh_step_sigma = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = ChainConfig{};
  CHECK_THROWS(cfg.fix(Hyper::alpha, -1.0));
  cfg.fix(Hyper::gamma, 3.0);
  CHECK_FALSE(cfg.samples(Hyper::gamma));
  CHECK(cfg.initial.gamma == 3.0);
}

TEST_CASE("same seed, same chain") {
  const Network net = small_network();
  const auto a = run_chain(net, {}, quick(50, 9));
  const auto b = run_chain(net, {}, quick(50, 9));
  REQUIRE(a.size() == 50);
  for (std::size_t it = 0; it < a.size(); ++it) {
    CHECK(a.records[it].log_evidence == b.records[it].log_evidence);
    CHECK(a.records[it].hp.gamma == b.records[it].hp.gamma);
    CHECK(a.snapshots[it].part == b.snapshots[it].part);
  }
  const auto c = run_chain(net, {}, quick(50, 10));
  bool differs = false;
  for (std::size_t it = 0; it < a.size(); ++it) differs |= a.records[it].hp.alpha != c.records[it].hp.alpha;
  CHECK(differs);
}

TEST_CASE("restarts do not depend on the thread count") {
  const Network net = small_network();
  ObservationMask mask;
  mask.missing = {make_dyad(0, 3), make_dyad(1, 2)};
  const auto one = run_chains(net, mask, quick(30, 0), 4, 1234, 1);
  const auto many = run_chains(net, mask, quick(30, 0), 4, 1234, 3);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(one[k].seed == derive_seed(1234, k));
    CHECK(one[k].seed == many[k].seed);
    for (std::size_t it = 0; it < 30; ++it) {
      CHECK(one[k].records[it].log_evidence == many[k].records[it].log_evidence);
      CHECK(one[k].imputed[it] == many[k].imputed[it]);
    }
  }
  CHECK_THROWS(run_chains(net, mask, quick(30, 0), 0, 1, 1));
}

TEST_CASE("edge cases") {
  SUBCASE("zero iterations") {
    const auto t = run_chain(small_network(), {}, quick(0, 1));
    CHECK(t.size() == 0);
    CHECK(t.post_burn_in() == 0);
  }
  SUBCASE("single node keeps one group while hyperparameters wander") {
    Network net(1);
    net.set(0, 0, 2);
    const auto t = run_chain(net, {}, quick(300, 3));
    for (const auto& r : t.records) {
      CHECK(r.groups == 1);
      CHECK(std::isfinite(r.log_evidence));
      CHECK(r.hp.alpha > 0.0);
      CHECK(std::isfinite(r.hp.gamma));
    }
  }
  SUBCASE("empty network") {
    const auto t = run_chain(Network(6), {}, quick(40, 5));
    for (const auto& r : t.records) CHECK(std::isfinite(r.log_evidence));
  }
  SUBCASE("unsorted mask is rejected") {
    ObservationMask mask;
    mask.missing = {make_dyad(1, 2), make_dyad(0, 3)};
    CHECK_THROWS(Chain(small_network(), mask, quick(5, 1)));
  }
}

TEST_CASE("audit passes with imputation running") {
  Rng rng(2);
  auto gen = sample_network(25, Hyperparams{2.0, 1.0, 0.5, 1.0}, rng);
  const auto mask = make_holdout(gen.net, 0.2, 77);
  ChainConfig cfg = quick(60, 4);
  cfg.audit_every = 1;
  CHECK_NOTHROW(run_chain(gen.net, mask, cfg));
  cfg.kind = ModelKind::plain;
  CHECK_NOTHROW(run_chain(gen.net, mask, cfg));
}

TEST_CASE("MH log ratio is the evidence ratio") {
  Rng rng(6);
  auto gen = sample_network(12, Hyperparams{1.5, 1.0, 0.7, 1.0}, rng);
  for (ModelKind kind : {ModelKind::degree_corrected, ModelKind::plain}) {
    ChainConfig cfg = quick(10, 8);
    cfg.kind = kind;
    Chain chain(gen.net, {}, cfg);
    chain.gibbs_sweep();
    for (Hyper h : kAllHypers) {
      if (kind == ModelKind::plain && h == Hyper::gamma) continue;
      const double before = chain.log_evidence();
      const double current = hyper_value(chain.hyperparams(), h);
      const double proposed = current * 1.37;
      const double ratio = chain.mh_log_ratio(h, proposed);
      Hyperparams moved = chain.hyperparams();
      hyper_ref(moved, h) = proposed;
      const double direct =
          idcsbm::log_evidence(gen.net, chain.partition(), moved, kind) -
          idcsbm::log_evidence(gen.net, chain.partition(), chain.hyperparams(), kind);
      CHECK(ratio == doctest::Approx(direct).epsilon(1e-10));
      CHECK(before == doctest::Approx(idcsbm::log_evidence(gen.net, chain.partition(), chain.hyperparams(), kind)));
      CHECK(chain.mh_log_ratio(h, current) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
      CHECK(chain.mh_step(h, 0.0));
      CHECK(hyper_value(chain.hyperparams(), h) == current);
    }
  }
}

TEST_CASE("fixed and irrelevant hyperparameters do not move") {
  const Network net = small_network();
  ChainConfig cfg = quick(100, 12);
  cfg.kind = ModelKind::plain;
  cfg.initial.gamma = 2.5;
  cfg.fix(Hyper::lambda, 0.3);
  const auto t = run_chain(net, {}, cfg);
  bool alpha_moved = false;
  for (const auto& r : t.records) {
    CHECK(r.hp.gamma == 2.5);
    CHECK(r.hp.lambda == 0.3);
    CHECK(r.accept[static_cast<std::size_t>(Hyper::gamma)] == 0.0);
    alpha_moved |= r.hp.alpha != 1.0;
  }
  CHECK(alpha_moved);
}

TEST_CASE("imputation leaves observed dyads alone") {
  Rng rng(13);
  auto gen = sample_network(20, Hyperparams{2.0, 1.0, 1.0, 0.5}, rng);
  const auto mask = make_holdout(gen.net, 0.3, 5);
  Chain chain(gen.net, mask, quick(10, 1));
  const Network observed = apply_mask(gen.net, mask, 0);
  for (int it = 0; it < 10; ++it) {
    chain.gibbs_sweep();
    chain.impute();
    const Network now = chain.current_network();
    for (const auto& [d, c] : now.counts()) {
      const bool masked = std::binary_search(mask.missing.begin(), mask.missing.end(), d);
      if (!masked) CHECK(observed.at(d.i, d.j) == c);
    }
    for (std::size_t k = 0; k < mask.missing.size(); ++k) {
      CHECK(chain.imputed()[k] >= 0);
      CHECK(chain.last_rates()[k] >= 0.0);
      const auto& d = mask.missing[k];
      CHECK(now.at(d.i, d.j) == chain.imputed()[k]);
    }
    chain.audit();
  }
  // Observed total plus imputed equals the chain's current total.
  Count imputed_total = 0;
  for (Count c : chain.imputed()) imputed_total += c;
  CHECK(chain.current_network().total() == observed.total() + imputed_total);
}

TEST_CASE("empty mask records nothing") {
  const auto t = run_chain(small_network(), {}, quick(20, 2));
  CHECK(t.rates.empty());
  CHECK(t.imputed.empty());
  CHECK_THROWS(predictive_scores(t, {}));
}

TEST_CASE("predictive_scores closed form") {
  ChainTrace trace;
  trace.burn_in = 1;
  trace.records.resize(3);
  trace.rates = {{9.0, 9.0}, {0.5, 0.0}, {1.5, 2.0}};
  ObservationMask mask;
  mask.missing = {make_dyad(0, 1), make_dyad(1, 1)};
  const auto s = predictive_scores(trace, mask);
  CHECK(s.at(make_dyad(0, 1)) == doctest::Approx(((1 - std::exp(-0.5)) + (1 - std::exp(-1.5))) / 2));
  CHECK(s.at(make_dyad(1, 1)) == doctest::Approx((1 - std::exp(-2.0)) / 2));

  trace.burn_in = 3;
  CHECK_THROWS(predictive_scores(trace, mask));
  trace.burn_in = 0;
  mask.missing.pop_back();
  CHECK_THROWS(predictive_scores(trace, mask));
}

TEST_CASE("partition chain matches the exact posterior") {
  const Network net = small_network();
  const Hyperparams hp{1.3, 0.8, 0.7, 1.1};
  for (ModelKind kind : {ModelKind::degree_corrected, ModelKind::plain}) {
    const auto exact = exact_posterior(net, hp, kind);
    ChainConfig cfg = quick(100000, 21);
    cfg.burn_in = 500;
    cfg.kind = kind;
    fix_all(cfg, hp);
    const auto trace = run_chain(net, {}, cfg);
    std::map<std::vector<std::size_t>, double> freq;
    std::size_t used = 0;
    for (const auto& s : trace.snapshots) {
      if (s.iteration < cfg.burn_in) continue;
      freq[s.part.labels()] += 1.0;
      ++used;
    }
    std::vector<double> empirical;
    for (const auto& p : exact.partitions) {
      auto it = freq.find(p.labels());
      empirical.push_back(it == freq.end() ? 0.0 : it->second / static_cast<double>(used));
    }
    CHECK(total_variation(empirical, exact.probs) < 0.03);
  }
}

TEST_CASE("imputed values follow the posterior predictive") {
  // n = 3, dyad (0,1) hidden, hyperparameters fixed: p(a | rest) by enumeration.
  Network net(3);
  net.set(0, 2, 2);
  net.set(1, 2, 1);
  net.set(2, 2, 1);
  ObservationMask mask;
  mask.missing = {make_dyad(0, 1)};
  const Hyperparams hp{1.0, 1.5, 1.0, 0.8};
  const ModelKind kind = ModelKind::degree_corrected;

  constexpr int kMax = 40;
  std::vector<double> exact(kMax + 1, 0.0);
  const auto parts = enumerate_partitions(3);
  for (int a = 0; a <= kMax; ++a) {
    Network filled = net;
    filled.set(0, 1, a);
    for (const auto& p : parts) exact[a] += std::exp(idcsbm::log_evidence(filled, p, hp, kind));
  }
  double total = 0.0;
  for (double v : exact) total += v;
  for (double& v : exact) v /= total;
  REQUIRE(exact[kMax] < 1e-8);

  ChainConfig cfg = quick(40000, 31);
  cfg.burn_in = 500;
  fix_all(cfg, hp);
  const auto trace = run_chain(net, mask, cfg);
  std::vector<double> empirical(kMax + 1, 0.0);
  for (std::size_t it = cfg.burn_in; it < trace.size(); ++it) {
    const Count a = trace.imputed[it][0];
    empirical[std::min<Count>(a, kMax)] += 1.0;
  }
  for (double& v : empirical) v /= static_cast<double>(trace.post_burn_in());
  CHECK(total_variation(empirical, exact) < 0.03);
}

TEST_CASE("planted blocks are recovered and held-out links rank high") {
  Rng rng(101);
  PlantedTruth truth;
  const std::vector<int> z = [] {
    std::vector<int> v(60);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i < 30 ? 0 : 1;
    return v;
  }();
  truth.part = Partition::from_labels(z);
  truth.theta.assign(60, 1.0);
  truth.eta = {0.3, 0.01, 0.01, 0.3};
  const Network net = sample_counts(truth, rng);
  const auto mask = make_holdout(net, 0.1, 3);
  ChainConfig cfg = quick(200, 4);
  const auto trace = run_chain(net, mask, cfg);
  CHECK(mean_nmi(trace, truth.part) > 0.8);
  const auto scores = predictive_scores(trace, mask);
  std::vector<ScoredDyad> scored;
  for (std::size_t k = 0; k < mask.missing.size(); ++k) {
    scored.push_back({mask.missing[k], scores.at(mask.missing[k]),
                      mask.truth->at(k) > 0 ? DyadLabel::link : DyadLabel::nonlink});
  }
  CHECK(auc(scored) > 0.7);
}
