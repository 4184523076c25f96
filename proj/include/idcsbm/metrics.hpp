// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <vector>

#include "idcsbm/graph.hpp"
#include "idcsbm/partition.hpp"
#include "idcsbm/sampler.hpp"

namespace idcsbm {

/// Normalized mutual information 2 I(a;b) / (H(a) + H(b)), natural logs.
/// Two single-group partitions score 1.
double nmi(const Partition& a, const Partition& b);

enum class DyadLabel { link, nonlink };

struct ScoredDyad {
  Dyad dyad;
  double score;
  DyadLabel label;
};

/// Mann-Whitney AUC; ties count one half. Needs both labels present.
double auc(const std::vector<ScoredDyad>& scored);

/// Mean over post-burn-in iterations of L / L_true.
double l_ratio(const ChainTrace& trace, std::size_t l_true);

/// Mean over post-burn-in snapshots of nmi(snapshot, truth).
double mean_nmi(const ChainTrace& trace, const Partition& truth);

struct DispersionPoint {
  std::size_t group_size;
  double mean_std;
  double std_error;  // standard deviation of the mean across chains
  std::size_t chains;
};

/// Average within-group population standard deviation of k_i, binned by
/// exact group size over the snapshots in the last `window` iterations of
/// each chain. Chains are averaged with equal weight.
std::vector<DispersionPoint> degree_dispersion_profile(const std::vector<ChainTrace>& traces,
                                                       const Network& net, std::size_t window = 500);

/// Same, with group sizes pooled into bins [2^b, 2^(b+1)); the reported
/// group_size is the bin's lower edge.
std::vector<DispersionPoint> degree_dispersion_profile_log_binned(
    const std::vector<ChainTrace>& traces, const Network& net, std::size_t window = 500);

struct GammaSummary {
  std::vector<double> chain_means;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Per-chain post-burn-in mean of gamma plus box statistics across chains
/// (linear-interpolated quartiles).
GammaSummary gamma_summary(const std::vector<ChainTrace>& traces);

struct MeanAndError {
  double mean = 0.0;
  double sem = 0.0;  // sample std / sqrt(count); zero for one value
};

MeanAndError mean_and_sem(const std::vector<double>& values);

}  // namespace idcsbm
