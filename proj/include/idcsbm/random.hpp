// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace idcsbm {

using Rng = std::mt19937_64;

/// Seed for stream `index` under `master`; distinct indices give
/// decorrelated streams (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

double uniform01(Rng& rng);

/// log of a Gamma(shape, 1) variate. Shapes below one use the
/// Gamma(a+1)·U^(1/a) boost in log space so tiny shapes do not underflow.
double sample_log_gamma(Rng& rng, double shape);

/// Gamma(shape, rate) variate.
double sample_gamma(Rng& rng, double shape, double rate);

/// Dirichlet draw via normalized Gamma variates. A one-element
/// concentration returns {1.0} exactly.
std::vector<double> sample_dirichlet(Rng& rng, std::span<const double> concentration);

std::int64_t sample_poisson(Rng& rng, double rate);

/// Index drawn from normalized probabilities.
std::size_t sample_categorical(Rng& rng, std::span<const double> probs);

}  // namespace idcsbm
