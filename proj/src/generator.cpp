// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/generator.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace idcsbm {

Partition sample_crp(std::size_t n, double alpha, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_crp: need at least one node");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("sample_crp: alpha must be positive");
  }
  std::vector<int> z;
  std::vector<double> sizes;
  z.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    double u = uniform01(rng) * (static_cast<double>(t) + alpha);
    std::size_t g = 0;
    for (; g < sizes.size(); ++g) {
      u -= sizes[g];
      if (u < 0.0) break;
    }
    if (g == sizes.size()) sizes.push_back(0.0);
    sizes[g] += 1.0;
    z.push_back(static_cast<int>(g));
  }
  return Partition::from_labels(z);
}

std::vector<double> sample_theta(const Partition& part, double gamma, Rng& rng) {
  std::vector<double> theta(part.size(), 1.0);
  for (const auto& members : part.members()) {
    const std::vector<double> conc(members.size(), gamma);
    const auto phi = sample_dirichlet(rng, conc);
    const auto nl = static_cast<double>(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) theta[members[k]] = nl * phi[k];
  }
  return theta;
}

Network sample_counts(const PlantedTruth& truth, Rng& rng) {
  const std::size_t n = truth.part.size();
  Network net(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double eta = truth.eta_at(truth.part[i], truth.part[j]);
      const double rate = i == j ? 0.5 * truth.theta[i] * truth.theta[i] * eta
                                 : truth.theta[i] * eta * truth.theta[j];
      net.add(i, j, sample_poisson(rng, rate));
    }
  }
  return net;
}

GeneratedNetwork sample_network(std::size_t n, const Hyperparams& hp, Rng& rng) {
  hp.validate();
  PlantedTruth truth;
  truth.hp = hp;
  truth.part = sample_crp(n, hp.alpha, rng);
  truth.theta = sample_theta(truth.part, hp.gamma, rng);
  const std::size_t L = truth.part.groups();
  truth.eta.assign(L * L, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t m = l; m < L; ++m) {
      const double v = sample_gamma(rng, hp.kappa, hp.lambda);
      truth.eta[l * L + m] = v;
      truth.eta[m * L + l] = v;
    }
  }
  Network net = sample_counts(truth, rng);
  return {std::move(net), std::move(truth)};
}

std::vector<GridPoint> study_grid() {
  std::vector<GridPoint> grid;
  for (double lambda : {0.5, 5.0, 50.0}) {
    for (double gamma : {0.5, 2.0, 8.0, 32.0, 200.0}) {
      grid.push_back({80, Hyperparams{4.0, gamma, 0.5, lambda}});
    }
  }
  return grid;
}

std::string truth_to_json(const PlantedTruth& truth, std::uint64_t seed) {
  nlohmann::json j;
  j["z"] = truth.part.labels();
  j["theta"] = truth.theta;
  const std::size_t L = truth.part.groups();
  nlohmann::json eta = nlohmann::json::array();
  for (std::size_t l = 0; l < L; ++l) {
    eta.push_back(std::vector<double>(truth.eta.begin() + static_cast<std::ptrdiff_t>(l * L),
                                      truth.eta.begin() + static_cast<std::ptrdiff_t>((l + 1) * L)));
  }
  j["eta"] = eta;
  j["hyperparams"] = {{"alpha", truth.hp.alpha},
                      {"gamma", truth.hp.gamma},
                      {"kappa", truth.hp.kappa},
                      {"lambda", truth.hp.lambda}};
  j["seed"] = seed;
  return j.dump(2);
}

}  // namespace idcsbm
