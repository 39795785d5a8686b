#pragma once

#include "hcol/rng.hpp"

#include <cstdint>

namespace hcol {

/// Poisson(lambda) sampler: inversion for lambda < 30, Hoermann's PTRS
/// transformed rejection above.
///
/// For large lambda the variate is represented as floor(lambda) plus an
/// integer offset, so X - lambda stays exact even when X itself is beyond
/// double integer precision. Above kNormalLimit, deviation() draws from
/// N(0, lambda); the skewness lambda^{-1/2} is then below double precision.
class PoissonSampler {
 public:
  /// Largest mean for which operator() can return the variate as int64.
  static constexpr double kMaxIntegerLambda = 4.0e18;
  static constexpr double kNormalLimit = 1.0e30;
  static constexpr double kInversionLimit = 30.0;

  explicit PoissonSampler(double lambda);

  double lambda() const noexcept { return lambda_; }
  /// Throws ResourceError when lambda > kMaxIntegerLambda.
  std::int64_t operator()(Rng& rng) const;
  /// X - lambda for a fresh draw X.
  double deviation(Rng& rng) const;

 private:
  /// Offset of the draw from floor(lambda).
  std::int64_t draw_offset(Rng& rng) const;
  /// ln P[X = floor(lambda) + offset].
  double log_pmf_offset(std::int64_t offset) const;

  double lambda_;
  double base_ = 0.0;
  double frac_ = 0.0;
  // PTRS constants
  double b_ = 0.0, a_ = 0.0, inv_alpha_ = 0.0, vr_ = 0.0, log_lambda_ = 0.0;
};

/// ln k! (exact lgamma for small k, Stirling series otherwise).
double log_factorial(double k);

}  // namespace hcol
