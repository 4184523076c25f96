// Apache License, Version 2.0, refer to LICENSE.txt

#include <doctest.h>

#include <set>

#include "idcsbm/generator.hpp"
#include "idcsbm/graph.hpp"

using namespace idcsbm;

TEST_CASE("load_edge_list basics") {
  SUBCASE("two unit edges") {
    const auto net = load_edge_list("a b\nb c");
    CHECK(net.size() == 3);
    CHECK(net.at(0, 1) == 1);
    CHECK(net.at(1, 2) == 1);
    CHECK(net.at(0, 2) == 0);
    CHECK(net.labels() == std::vector<std::string>{"a", "b", "c"});
  }
  SUBCASE("symmetric accumulation") {
    const auto net = load_edge_list("a b 2\nb a 3");
    CHECK(net.at(0, 1) == 5);
    CHECK(net.at(1, 0) == 5);
  }
  SUBCASE("self-loop") {
    const auto net = load_edge_list("x x 4");
    CHECK(net.size() == 1);
    CHECK(net.at(0, 0) == 4);
  }
  SUBCASE("comments and blank lines") {
    const auto net = load_edge_list("# header\n\n  u v  \n# trailing\n");
    CHECK(net.size() == 2);
    CHECK(net.total() == 1);
  }
  SUBCASE("node directives declare isolates") {
    const auto net = load_edge_list("#nodes: 4\n0 1\n");
    CHECK(net.size() == 4);
    const auto named = load_edge_list("#node: q\n#node: p\np r 2\n");
    CHECK(named.labels() == std::vector<std::string>{"q", "p", "r"});
    CHECK(named.at(1, 2) == 2);
  }
}

TEST_CASE("load_edge_list errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      load_edge_list(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{999};
  };
  CHECK(line_of("a b\nc\n") == 2);
  CHECK(line_of("a b c d") == 1);
  CHECK(line_of("a b\na b x") == 2);
  CHECK(line_of("a b 0") == 1);
  CHECK(line_of("a b -3") == 1);
  CHECK(line_of("a b 2.5") == 1);
  CHECK_THROWS_AS(load_edge_list(""), ParseError);
  CHECK_THROWS_AS(load_edge_list("# only comments\n"), ParseError);
}

TEST_CASE("degrees") {
  Network two(2);
  two.set(0, 1, 2);
  auto dv = degrees(two);
  CHECK(dv.k == std::vector<Count>{2, 2});
  CHECK(dv.khat == std::vector<Count>{2, 2});

  Network loop(2);
  loop.set(0, 0, 3);
  dv = degrees(loop);
  CHECK(dv.k == std::vector<Count>{3, 0});
  CHECK(dv.khat == std::vector<Count>{6, 0});

  dv = degrees(Network(3));
  CHECK(dv.k == std::vector<Count>{0, 0, 0});
  CHECK(dv.khat == std::vector<Count>{0, 0, 0});
}

TEST_CASE("degree and round-trip invariants on random networks") {
  Rng rng(42);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 1 + rep % 9;
    const auto gen = sample_network(n, Hyperparams{2.0, 1.0, 1.0, 0.3}, rng);
    const auto& net = gen.net;

    const auto dv = degrees(net);
    Count khat_sum = 0;
    Count k_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(dv.khat[i] >= dv.k[i]);
      khat_sum += dv.khat[i];
      k_sum += dv.k[i];
    }
    CHECK(khat_sum == 2 * net.total());
    Count off = 0;
    Count diag = 0;
    for (const auto& [d, c] : net.counts()) (d.i == d.j ? diag : off) += c;
    CHECK(k_sum == 2 * off + diag);

    const auto back = load_edge_list(to_edge_list(net));
    CHECK(back.counts() == net.counts());
    CHECK(back.labels() == net.labels());
  }

  Network named(std::vector<std::string>{"z", "isolated", "a"});
  named.set(0, 2, 3);
  named.set(2, 2, 1);
  const auto back = load_edge_list(to_edge_list(named));
  CHECK(back == named);
}

namespace {

Network ring_with_links(std::size_t n, std::size_t links) {
  Network net(n);
  std::size_t placed = 0;
  for (std::size_t i = 0; i < n && placed < links; ++i) {
    for (std::size_t j = i + 1; j < n && placed < links; j += 3) {
      net.set(i, j, 1 + static_cast<Count>((i + j) % 3));
      ++placed;
    }
  }
  return net;
}

}  // namespace

TEST_CASE("make_holdout") {
  const Network net = ring_with_links(20, 40);
  REQUIRE(net.link_dyads() == 40);

  const auto mask = make_holdout(net, 0.05, 7);
  REQUIRE(mask.truth.has_value());
  CHECK(mask.missing.size() == 4);
  std::size_t links = 0;
  std::size_t zeros = 0;
  for (std::size_t t = 0; t < mask.missing.size(); ++t) {
    const Dyad d = mask.missing[t];
    CHECK(d.i < d.j);
    CHECK((*mask.truth)[t] == net.at(d.i, d.j));
    ((*mask.truth)[t] >= 1 ? links : zeros) += 1;
  }
  CHECK(links == 2);
  CHECK(zeros == 2);

  const auto again = make_holdout(net, 0.05, 7);
  CHECK(again.missing == mask.missing);
  CHECK(again.truth == mask.truth);

  CHECK_THROWS(make_holdout(net, 0.0, 1));
  CHECK_THROWS(make_holdout(net, 1.0, 1));

  Network complete(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) complete.set(i, j, 1);
  }
  CHECK_THROWS(make_holdout(complete, 0.5, 1));
}

TEST_CASE("make_holdout on a sparse large graph uses rejection sampling") {
  Network net(3000);
  for (std::size_t i = 0; i + 1 < 3000; ++i) net.set(i, i + 1, 1);
  const auto mask = make_holdout(net, 0.1, 99);
  CHECK(mask.missing.size() == 2 * 300);
  std::set<Dyad> unique(mask.missing.begin(), mask.missing.end());
  CHECK(unique.size() == mask.missing.size());
  std::size_t links = 0;
  for (Count c : *mask.truth) links += c > 0 ? 1 : 0;
  CHECK(links == 300);
}

TEST_CASE("apply_mask") {
  Network net(3);
  net.set(0, 1, 5);
  net.set(1, 1, 1);

  ObservationMask m;
  m.missing = {{0, 1}};
  CHECK(apply_mask(net, m, 0).at(0, 1) == 0);
  CHECK(apply_mask(net, ObservationMask{}, 0) == net);

  ObservationMask diag;
  diag.missing = {{1, 1}};
  CHECK(apply_mask(net, diag, 2).at(1, 1) == 2);

  ObservationMask bad;
  bad.missing = {{0, 3}};
  CHECK_THROWS(apply_mask(net, bad, 0));
}

TEST_CASE("mask JSON round trip") {
  ObservationMask m;
  m.missing = {{0, 1}, {2, 2}};
  m.truth = std::vector<Count>{3, 0};
  const auto text = mask_to_json(m);
  CHECK(text == R"({"missing":[[0,1],[2,2]],"truth":[3,0]})");
  const auto back = mask_from_json(text);
  CHECK(back.missing == m.missing);
  CHECK(back.truth == m.truth);
  CHECK_THROWS(mask_from_json(R"({"missing":[[0,1]],"truth":[1,2]})"));
}

TEST_CASE("diagonal and merged masks") {
  Network net(3);
  net.set(1, 1, 4);
  const auto diag = diagonal_mask(net);
  CHECK(diag.missing.size() == 3);
  CHECK((*diag.truth)[1] == 4);

  ObservationMask extra;
  extra.missing = {{0, 2}, {1, 1}};
  extra.truth = std::vector<Count>{0, 4};
  const auto merged = merge_masks(diag, extra);
  CHECK(merged.missing.size() == 4);
  CHECK(std::is_sorted(merged.missing.begin(), merged.missing.end()));
}
