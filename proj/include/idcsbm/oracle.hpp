// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <vector>

#include "idcsbm/graph.hpp"
#include "idcsbm/model.hpp"
#include "idcsbm/partition.hpp"

namespace idcsbm {

/// All set partitions of n nodes (1 <= n <= 10) as restricted-growth
/// strings, i.e. already canonical.
std::vector<Partition> enumerate_partitions(std::size_t n);

struct ExactPosterior {
  std::vector<Partition> partitions;
  std::vector<double> probs;

  /// Probability of `part`; zero if absent.
  double prob(const Partition& part) const;
};

/// p(z | A, hp) by enumeration of every partition.
ExactPosterior exact_posterior(const Network& net, const Hyperparams& hp, ModelKind kind);

struct CollapseCheck {
  double analytic_log;  // log p(A | z, hp) from the collapsed formula (no CRP term)
  double mc_mean;       // Monte-Carlo estimate of p(A | z, hp)
  double mc_std_error;
};

/// Averages the uncollapsed likelihood p(A | theta, eta, z) over prior draws
/// of phi and eta and compares with the closed form. n <= 3 only: the
/// estimator's variance grows quickly with the number of dyads.
CollapseCheck mc_collapse_check(const Network& net, const Partition& part, const Hyperparams& hp,
                                std::size_t draws, std::uint64_t seed);

}  // namespace idcsbm
