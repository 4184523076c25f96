// Apache License, Version 2.0, refer to LICENSE.txt

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "idcsbm/random.hpp"
#include "idcsbm/special.hpp"

using namespace idcsbm;

namespace {

// Σ_{t<k} log(x + t), long double accumulation.
double rising_by_sum(double x, std::int64_t k) {
  long double acc = 0.0L;
  for (std::int64_t t = 0; t < k; ++t) acc += std::log(static_cast<long double>(x) + t);
  return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("log_rising matches the product definition") {
  for (double x : {0.5, 1.0, 3.7, 250.0, 9.9e4, 1e5, 2.5e5, 1e8, 1e12}) {
    for (std::int64_t k : {0, 1, 2, 7, 40, 300}) {
      const double expect = rising_by_sum(x, k);
      CAPTURE(x);
      CAPTURE(k);
      CHECK(log_rising(x, k) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("log_rising keeps absolute precision for huge x") {
  // log Γ(x+1) - log Γ(x) = log x exactly.
  CHECK(std::abs(log_rising(1e12, 1) - std::log(1e12)) < 1e-12);
  CHECK(std::abs(log_rising(1e8, 3) - rising_by_sum(1e8, 3)) < 1e-12);
  CHECK_THROWS(log_rising(1.0, -1));
}

TEST_CASE("log_sum_exp and normalization") {
  const std::vector<double> v = {std::log(1.0), std::log(2.0), std::log(3.0)};
  CHECK(log_sum_exp(v) == doctest::Approx(std::log(6.0)));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(std::vector<double>{ninf, ninf}) == ninf);

  std::vector<double> w = {1000.0, 1000.0 + std::log(3.0)};
  normalize_log_weights(w);
  CHECK(w[0] == doctest::Approx(0.25));
  CHECK(w[1] == doctest::Approx(0.75));

  std::vector<double> dead = {ninf, ninf};
  CHECK_THROWS(normalize_log_weights(dead));
}

TEST_CASE("dirichlet draws stay on the simplex for tiny concentrations") {
  Rng rng(3);
  const std::vector<double> conc = {1e-3, 1e-3, 1e-3};
  for (int rep = 0; rep < 200; ++rep) {
    const auto phi = sample_dirichlet(rng, conc);
    double sum = 0.0;
    for (double p : phi) {
      CHECK(std::isfinite(p));
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(sample_dirichlet(rng, std::vector<double>{5.0}) == std::vector<double>{1.0});
}

TEST_CASE("gamma sampler mean") {
  Rng rng(11);
  const double shape = 0.5;
  const double rate = 5.0;
  const int draws = 200000;
  double sum = 0.0;
  for (int d = 0; d < draws; ++d) sum += sample_gamma(rng, shape, rate);
  const double mean = sum / draws;
  const double se = std::sqrt(shape) / rate / std::sqrt(draws);
  CHECK(std::abs(mean - shape / rate) < 4 * se);
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}
