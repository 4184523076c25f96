// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <string>
#include <vector>

#include "idcsbm/graph.hpp"
#include "idcsbm/model.hpp"
#include "idcsbm/partition.hpp"
#include "idcsbm/random.hpp"

namespace idcsbm {

/// Parameters behind a generated network.
struct PlantedTruth {
  Partition part;
  std::vector<double> theta;  // sums to n_l within each group
  std::vector<double> eta;    // groups() x groups(), symmetric
  Hyperparams hp;

  double eta_at(std::size_t l, std::size_t m) const { return eta[l * part.groups() + m]; }
};

/// Sequential seating: node t (0-based) joins group l with probability
/// n_l / (t + alpha) and opens a new group with probability alpha / (t + alpha).
Partition sample_crp(std::size_t n, double alpha, Rng& rng);

/// Draws within-group weights: phi ~ Dirichlet(gamma 1) per group, theta = n_l phi.
std::vector<double> sample_theta(const Partition& part, double gamma, Rng& rng);

/// Forward simulation of the full generative process.
struct GeneratedNetwork {
  Network net;
  PlantedTruth truth;
};

GeneratedNetwork sample_network(std::size_t n, const Hyperparams& hp, Rng& rng);

/// Counts drawn for a given truth (z, theta, eta).
Network sample_counts(const PlantedTruth& truth, Rng& rng);

struct GridPoint {
  std::size_t n;
  Hyperparams hp;
};

/// n = 80, kappa = 0.5, alpha = 4 crossed with lambda in {0.5, 5, 50} and
/// gamma in {0.5, 2, 8, 32, 200}. Only lambda = 0.5 and gamma = 200 are
/// anchored in the original study; the rest fill out the sweep.
std::vector<GridPoint> study_grid();

std::string truth_to_json(const PlantedTruth& truth, std::uint64_t seed);

}  // namespace idcsbm
