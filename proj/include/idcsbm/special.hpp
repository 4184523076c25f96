// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <span>

namespace idcsbm {

/// log Γ(x + k) − log Γ(x) for x > 0 and integer k ≥ 0.
///
/// The plain lgamma difference loses digits once x is large (γ near the
/// 1e12 proposal cap, for instance), so above a threshold this switches to
/// a Stirling expansion written in terms of log1p(k/x).
double log_rising(double x, std::int64_t k);

/// log Σ exp(v_i); returns -inf for an empty span or all -inf inputs.
double log_sum_exp(std::span<const double> values);

/// Exponentiates and normalizes log weights in place. Throws when every
/// weight is -inf or any is NaN.
void normalize_log_weights(std::span<double> log_weights);

}  // namespace idcsbm
