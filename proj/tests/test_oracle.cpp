// Apache License, Version 2.0, refer to LICENSE.txt

#include <doctest.h>

#include <cmath>
#include <set>

#include "idcsbm/oracle.hpp"

using namespace idcsbm;

TEST_CASE("enumerate_partitions") {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto parts = enumerate_partitions(n);
    CHECK(parts.size() == bell[n]);
    std::set<std::vector<std::size_t>> distinct;
    for (const auto& p : parts) {
      CHECK(p == Partition::from_labels(std::vector<int>(p.labels().begin(), p.labels().end())));
      distinct.insert(p.labels());
    }
    CHECK(distinct.size() == parts.size());
  }
  CHECK_THROWS(enumerate_partitions(0));
  CHECK_THROWS(enumerate_partitions(11));
}

TEST_CASE("exact_posterior") {
  SUBCASE("sums to one") {
    Network net(4);
    net.set(0, 1, 2);
    net.set(2, 3, 1);
    net.set(3, 3, 1);
    for (ModelKind kind : {ModelKind::degree_corrected, ModelKind::plain}) {
      const auto post = exact_posterior(net, Hyperparams{1.0, 0.5, 1.0, 1.0}, kind);
      double total = 0.0;
      for (double p : post.probs) total += p;
      CHECK(std::abs(total - 1.0) < 1e-12);
      CHECK(post.partitions.size() == 15);
    }
  }
  SUBCASE("a heavy dyad pulls its ends together") {
    Network net(2);
    net.set(0, 1, 20);
    // Together minus apart is -(20+k) log((2+l)/(1+l)) + 2k log((1/2+l)/l) plus a degree term of
    // about -1.6, so a high prior mean k/l is needed: the empty diagonal blocks of two singletons
    // must look unlikely. At k = 5, l = 0.01 the gap is about +20 nats.
    const auto post = exact_posterior(net, Hyperparams{1.0, 1.0, 5.0, 0.01}, ModelKind::degree_corrected);
    CHECK(post.prob(Partition::single_group(2)) > 0.999);
    const auto sparse = exact_posterior(net, Hyperparams{1.0, 1.0, 1.0, 0.1}, ModelKind::degree_corrected);
    CHECK(sparse.prob(Partition::singletons(2)) > 0.999);
    CHECK(post.prob(Partition::single_group(2)) > post.prob(Partition::singletons(2)));
  }
  SUBCASE("symmetric under node permutation") {
    // Swapping nodes 0 and 1 maps the network onto itself.
    Network net(3);
    net.set(0, 2, 2);
    net.set(1, 2, 2);
    net.set(0, 1, 1);
    const auto post = exact_posterior(net, Hyperparams{1.0, 1.0, 1.0, 1.0}, ModelKind::degree_corrected);
    for (const auto& p : post.partitions) {
      std::vector<int> swapped = {static_cast<int>(p[1]), static_cast<int>(p[0]), static_cast<int>(p[2])};
      CHECK(post.prob(p) == doctest::Approx(post.prob(Partition::from_labels(swapped))).epsilon(1e-12));
    }
  }
  SUBCASE("absent partition") {
    const auto post = exact_posterior(Network(2), Hyperparams{}, ModelKind::plain);
    CHECK(post.prob(Partition::single_group(3)) == 0.0);
  }
}

TEST_CASE("Monte-Carlo check of the collapsed likelihood") {
  SUBCASE("empty single node") {
    const Hyperparams hp{1.0, 1.0, 2.0, 3.0};
    const auto c = mc_collapse_check(Network(1), Partition::single_group(1), hp, 100000, 5);
    const double closed = std::pow(hp.lambda / (hp.lambda + 0.5), hp.kappa);
    CHECK(std::exp(c.analytic_log) == doctest::Approx(closed).epsilon(1e-12));
    CHECK(std::abs(c.mc_mean - closed) < 4 * c.mc_std_error);
  }
  SUBCASE("two nodes, one link") {
    Network net(2);
    net.set(0, 1, 1);
    const auto c = mc_collapse_check(net, Partition::single_group(2), Hyperparams{}, 200000, 6);
    CHECK(std::exp(c.analytic_log) == doctest::Approx(2.0 / 27.0).epsilon(1e-12));
    CHECK(std::abs(c.mc_mean - std::exp(c.analytic_log)) < 3 * c.mc_std_error);
  }
  SUBCASE("three nodes, two groups, self-loop") {
    Network net(3);
    net.set(0, 1, 2);
    net.set(1, 2, 1);
    net.set(2, 2, 1);
    const std::vector<int> z = {0, 0, 1};
    const Hyperparams hp{1.0, 0.8, 1.5, 1.0};
    const auto c = mc_collapse_check(net, Partition::from_labels(z), hp, 400000, 7);
    CHECK(std::abs(c.mc_mean - std::exp(c.analytic_log)) < 4 * c.mc_std_error);
  }
  SUBCASE("guards") {
    CHECK_THROWS(mc_collapse_check(Network(1), Partition::single_group(1), Hyperparams{}, 0, 1));
    CHECK_THROWS(mc_collapse_check(Network(4), Partition::single_group(4), Hyperparams{}, 10, 1));
  }
}

TEST_CASE("partition prior consistency under adding a node") {
  const std::vector<int> pair = {0, 0};
  const auto extensions = [&] {
    std::vector<Partition> out;
    for (const auto& p : enumerate_partitions(3)) {
      if (p[0] == p[1]) out.push_back(p);
    }
    return out;
  }();
  REQUIRE(extensions.size() == 2);
  for (double alpha : {0.5, 1.0, 4.0}) {
    double rhs = 0.0;
    for (const auto& p : extensions) rhs += std::exp(log_crp(p, alpha));
    CHECK(std::exp(log_crp(Partition::from_labels(pair), alpha)) == doctest::Approx(rhs).epsilon(1e-14));
  }
  CHECK(std::exp(log_crp(Partition::from_labels(pair), 1.0)) == doctest::Approx(0.5));

  // A uniform prior over partitions is not consistent: 1/2 for two nodes, 2/5 after adding one.
  const double uniform_pair = 1.0 / static_cast<double>(enumerate_partitions(2).size());
  const double uniform_ext =
      static_cast<double>(extensions.size()) / static_cast<double>(enumerate_partitions(3).size());
  CHECK(uniform_pair == 0.5);
  CHECK(uniform_ext == doctest::Approx(0.4));
}
