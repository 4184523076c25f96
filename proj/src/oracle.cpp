// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "idcsbm/random.hpp"
#include "idcsbm/special.hpp"

namespace idcsbm {

std::vector<Partition> enumerate_partitions(std::size_t n) {
  if (n < 1 || n > 10) throw std::invalid_argument("enumerate_partitions: n must be in [1, 10]");
  std::vector<Partition> out;
  // a[i] <= 1 + max(a[0..i-1]); max_before[i] caches that maximum.
  std::vector<int> a(n, 0);
  std::vector<int> max_before(n, 0);
  while (true) {
    out.push_back(Partition::from_labels(a));
    std::size_t i = n - 1;
    while (i > 0 && a[i] == max_before[i] + 1) --i;
    if (i == 0) break;
    ++a[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      max_before[j] = std::max(max_before[j - 1], a[j - 1]);
    }
  }
  return out;
}

double ExactPosterior::prob(const Partition& part) const {
  for (std::size_t k = 0; k < partitions.size(); ++k) {
    if (partitions[k] == part) return probs[k];
  }
  return 0.0;
}

ExactPosterior exact_posterior(const Network& net, const Hyperparams& hp, ModelKind kind) {
  ExactPosterior post;
  post.partitions = enumerate_partitions(net.size());
  post.probs.reserve(post.partitions.size());
  for (const auto& p : post.partitions) post.probs.push_back(log_evidence(net, p, hp, kind));
  normalize_log_weights(post.probs);
  return post;
}

CollapseCheck mc_collapse_check(const Network& net, const Partition& part, const Hyperparams& hp,
                                std::size_t draws, std::uint64_t seed) {
  if (draws == 0) throw std::invalid_argument("mc_collapse_check: need at least one draw");
  if (net.size() > 3) throw std::invalid_argument("mc_collapse_check: n must be at most 3");
  if (part.size() != net.size()) throw std::invalid_argument("mc_collapse_check: size mismatch");
  hp.validate();

  CollapseCheck out{};
  out.analytic_log = log_evidence(net, part, hp, ModelKind::degree_corrected) - log_crp(part, hp.alpha);

  const std::size_t n = net.size();
  const std::size_t L = part.groups();
  const auto members = part.members();
  Rng rng(seed);
  std::vector<double> theta(n);
  std::vector<double> eta(L * L);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    for (const auto& group : members) {
      const std::vector<double> conc(group.size(), hp.gamma);
      const auto phi = sample_dirichlet(rng, conc);
      for (std::size_t k = 0; k < group.size(); ++k) {
        theta[group[k]] = static_cast<double>(group.size()) * phi[k];
      }
    }
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t m = l; m < L; ++m) {
        eta[l * L + m] = eta[m * L + l] = sample_gamma(rng, hp.kappa, hp.lambda);
      }
    }
    // Product of independent Poisson pmfs over every dyad i <= j.
    double log_lik = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double e = eta[part[i] * L + part[j]];
        const double rate = i == j ? 0.5 * theta[i] * theta[i] * e : theta[i] * e * theta[j];
        const auto a = static_cast<double>(net.at(i, j));
        log_lik += (a > 0.0 ? a * std::log(rate) : 0.0) - rate - std::lgamma(a + 1.0);
      }
    }
    const double lik = std::exp(log_lik);
    sum += lik;
    sum_sq += lik * lik;
  }
  const auto m = static_cast<double>(draws);
  out.mc_mean = sum / m;
  const double var = std::max(0.0, sum_sq / m - out.mc_mean * out.mc_mean);
  out.mc_std_error = std::sqrt(var / m);
  return out;
}

}  // namespace idcsbm
