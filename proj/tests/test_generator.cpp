// Apache License, Version 2.0, refer to LICENSE.txt

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "idcsbm/generator.hpp"
#include "idcsbm/oracle.hpp"

using namespace idcsbm;

TEST_CASE("sample_crp seating frequencies") {
  Rng rng(1);
  constexpr int kDraws = 200000;
  SUBCASE("two nodes sit together half the time when alpha = 1") {
    int together = 0;
    for (int d = 0; d < kDraws; ++d) together += sample_crp(2, 1.0, rng).groups() == 1;
    CHECK(std::abs(together / double(kDraws) - 0.5) < 4 * std::sqrt(0.25 / kDraws));
  }
  SUBCASE("four nodes follow the partition law") {
    const double alpha = 1.7;
    const auto parts = enumerate_partitions(4);
    std::map<std::vector<std::size_t>, double> observed;
    for (int d = 0; d < kDraws; ++d) observed[sample_crp(4, alpha, rng).labels()] += 1.0;
    double chi2 = 0.0;
    for (const auto& p : parts) {
      const double expect = kDraws * std::exp(log_crp(p, alpha));
      const double o = observed[p.labels()];
      chi2 += (o - expect) * (o - expect) / expect;
    }
    // 14 degrees of freedom; 99.9% point is about 36.1.
    CHECK(chi2 < 36.1);
    CHECK(observed.size() == parts.size());
  }
  SUBCASE("errors") {
    CHECK_THROWS(sample_crp(0, 1.0, rng));
    CHECK_THROWS(sample_crp(3, 0.0, rng));
  }
}

TEST_CASE("sample_theta") {
  Rng rng(2);
  const std::vector<int> z = {0, 1, 0, 0, 2, 1, 0};
  const auto part = Partition::from_labels(z);
  for (double gamma : {0.05, 1.0, 50.0}) {
    const auto theta = sample_theta(part, gamma, rng);
    std::vector<double> sums(part.groups(), 0.0);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      CHECK(theta[i] >= 0.0);
      sums[part[i]] += theta[i];
    }
    for (std::size_t l = 0; l < sums.size(); ++l) {
      CHECK(sums[l] == doctest::Approx(static_cast<double>(part.sizes()[l])).epsilon(1e-12));
    }
  }
  for (double t : sample_theta(part, 1e8, rng)) CHECK(t == doctest::Approx(1.0).epsilon(1e-3));
  const auto single = sample_theta(Partition::singletons(3), 0.01, rng);
  for (double t : single) CHECK(t == 1.0);
}

TEST_CASE("theta heterogeneity shrinks as gamma grows") {
  Rng rng(3);
  const auto part = Partition::single_group(40);
  double previous = 1e300;
  for (double gamma : {0.5, 2.0, 8.0, 32.0, 200.0}) {
    double var = 0.0;
    constexpr int kReps = 400;
    for (int r = 0; r < kReps; ++r) {
      for (double t : sample_theta(part, gamma, rng)) var += (t - 1.0) * (t - 1.0);
    }
    var /= kReps * 40.0;
    // Var(n phi_i) = (n - 1) / (n gamma + 1) for a symmetric Dirichlet.
    CHECK(var == doctest::Approx(39.0 / (40.0 * gamma + 1.0)).epsilon(0.1));
    CHECK(var < previous);
    previous = var;
  }
}

TEST_CASE("expected total count is sum of N_lm eta_lm") {
  Rng rng(4);
  const auto gen = sample_network(30, Hyperparams{2.0, 1.0, 1.0, 2.0}, rng);
  const auto& t = gen.truth;
  double expect = 0.0;
  const auto sizes = t.part.sizes();
  for (std::size_t l = 0; l < t.part.groups(); ++l) {
    for (std::size_t m = l; m < t.part.groups(); ++m) {
      const double np = l == m ? sizes[l] * sizes[l] / 2.0 : double(sizes[l]) * double(sizes[m]);
      expect += np * t.eta_at(l, m);
    }
  }
  constexpr int kReps = 2000;
  double mean = 0.0;
  for (int r = 0; r < kReps; ++r) mean += static_cast<double>(sample_counts(t, rng).total());
  mean /= kReps;
  CHECK(std::abs(mean - expect) < 5 * std::sqrt(expect / kReps) + 1e-9);
}

TEST_CASE("sample_network is seeded and symmetric in eta") {
  Rng a(7);
  Rng b(7);
  const Hyperparams hp{3.0, 0.7, 0.5, 1.0};
  const auto x = sample_network(25, hp, a);
  const auto y = sample_network(25, hp, b);
  CHECK(x.net == y.net);
  CHECK(x.truth.part == y.truth.part);
  const std::size_t L = x.truth.part.groups();
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t m = 0; m < L; ++m) CHECK(x.truth.eta_at(l, m) == x.truth.eta_at(m, l));
  }
  CHECK_THROWS(sample_network(5, Hyperparams{0.0, 1.0, 1.0, 1.0}, a));
}

TEST_CASE("grid") {
  const auto grid = study_grid();
  REQUIRE(grid.size() == 15);
  std::set<std::pair<double, double>> seen;
  for (const auto& g : grid) {
    CHECK(g.n == 80);
    CHECK(g.hp.alpha == 4.0);
    CHECK(g.hp.kappa == 0.5);
    seen.insert({g.hp.lambda, g.hp.gamma});
  }
  CHECK(seen.size() == 15);
  CHECK(seen.count({0.5, 200.0}) == 1);
  CHECK(seen.count({5.0, 0.5}) == 1);
}

TEST_CASE("truth_to_json") {
  Rng rng(9);
  const auto gen = sample_network(6, Hyperparams{1.0, 2.0, 1.0, 1.0}, rng);
  const auto j = nlohmann::json::parse(truth_to_json(gen.truth, 42));
  CHECK(j["z"].get<std::vector<std::size_t>>() == gen.truth.part.labels());
  CHECK(j["theta"].size() == 6);
  CHECK(j["eta"].size() == gen.truth.part.groups());
  CHECK(j["hyperparams"]["gamma"].get<double>() == 2.0);
  CHECK(j["seed"].get<std::uint64_t>() == 42);
}
