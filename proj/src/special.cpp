// Apache License, Version 2.0, refer to LICENSE.txt

#include "idcsbm/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace idcsbm {

namespace {

constexpr double kStirlingThreshold = 1e3;
constexpr std::int64_t kDirectSum = 8;

}  // namespace

double log_rising(double x, std::int64_t k) {
  if (k == 0) return 0.0;
  if (k < 0) throw std::invalid_argument("log_rising: negative increment");
  const double kd = static_cast<double>(k);
  if (k <= kDirectSum) {
    double acc = 0.0;
    for (std::int64_t j = 0; j < k; ++j) acc += std::log(x + static_cast<double>(j));
    return acc;
  }
  if (x < kStirlingThreshold) {
    return std::lgamma(x + kd) - std::lgamma(x);
  }
  // lgamma(y) = (y - 1/2) log y - y + log(2π)/2 + 1/(12y) - 1/(360y^3) + ...
  const double y = x + kd;
  const double head = (x - 0.5) * std::log1p(kd / x) - kd + kd * std::log(y);
  const double tail = (1.0 / 12.0) * (1.0 / y - 1.0 / x) -
                      (1.0 / 360.0) * (1.0 / (y * y * y) - 1.0 / (x * x * x));
  return head + tail;
}

double log_sum_exp(std::span<const double> values) {
  const double inf = std::numeric_limits<double>::infinity();
  if (values.empty()) return -inf;
  const double top = *std::max_element(values.begin(), values.end());
  if (top == -inf) return -inf;
  if (top == inf) return inf;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

void normalize_log_weights(std::span<double> log_weights) {
  for (double v : log_weights) {
    if (std::isnan(v)) throw std::runtime_error("normalize_log_weights: NaN weight");
  }
  const double total = log_sum_exp(log_weights);
  if (!std::isfinite(total)) {
    throw std::runtime_error("normalize_log_weights: no finite weight");
  }
  for (double& v : log_weights) v = std::exp(v - total);
}

}  // namespace idcsbm
