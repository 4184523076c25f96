// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "idcsbm/special.hpp"

namespace idcsbm {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

double sample_log_gamma(Rng& rng, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("sample_log_gamma: shape must be positive and finite");
  }
  if (shape >= 1.0) {
    return std::log(std::gamma_distribution<double>(shape, 1.0)(rng));
  }
  const double boosted = std::gamma_distribution<double>(shape + 1.0, 1.0)(rng);
  double u = uniform01(rng);
  while (u <= 0.0) u = uniform01(rng);
  return std::log(boosted) + std::log(u) / shape;
}

double sample_gamma(Rng& rng, double shape, double rate) {
  return std::exp(sample_log_gamma(rng, shape) - std::log(rate));
}

std::vector<double> sample_dirichlet(Rng& rng, std::span<const double> concentration) {
  if (concentration.empty()) return {};
  if (concentration.size() == 1) return {1.0};
  std::vector<double> out(concentration.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = sample_log_gamma(rng, concentration[i]);
  }
  normalize_log_weights(out);
  return out;
}

std::int64_t sample_poisson(Rng& rng, double rate) {
  if (!(rate > 0.0)) return 0;
  return std::poisson_distribution<std::int64_t>(rate)(rng);
}

std::size_t sample_categorical(Rng& rng, std::span<const double> probs) {
  double u = uniform01(rng);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    u -= probs[i];
    if (u < 0.0) return i;
  }
  // Round-off left a sliver of mass; fall back to the last positive entry.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return i;
  }
  throw std::runtime_error("sample_categorical: no positive probability");
}

}  // namespace idcsbm
