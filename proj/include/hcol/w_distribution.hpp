#pragma once

#include "hcol/analytics.hpp"
#include "hcol/model.hpp"
#include "hcol/poisson.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hcol {

/// Truncation of W = sum_l X_l ln(1 + delta_l) - lambda_l delta_l at l = L.
struct WConfig {
  double d = 0.0;
  std::uint32_t k = 3;
  std::uint32_t L = 2;
  std::vector<CycleLaw> laws;  // l = 2..L
  double tail_bound = 0.0;     // bound on sum_{l>L} lambda_l delta_l^2
  std::optional<std::string> warning;

  // Per-term constants: X_l ~ samplers[i], term = (X_l - lambda_l) log_factor[i] + drift[i].
  std::vector<PoissonSampler> samplers;
  std::vector<double> log_factor;  // ln(1 + delta_l)
  std::vector<double> drift;       // lambda_l (ln(1 + delta_l) - delta_l)
};

inline constexpr double kDefaultTailThreshold = 1e-12;
inline constexpr std::uint32_t kMaxDefaultL = 200;

/// With no L, picks the smallest L whose tail bound is below `tail_threshold`.
WConfig make_w_config(const ModelParams& params, std::optional<std::uint32_t> L = std::nullopt,
                      double tail_threshold = kDefaultTailThreshold);

double sample_w(const WConfig& config, std::uint64_t seed);

struct WMoments {
  double mean_exp_w = 1.0;
  double mean_exp_2w = 1.0;
  double mean_w_upper = 0.0;
};

/// Analytic moments of the truncated W. Throws DivergenceError outside the series regime.
WMoments w_moments(const WConfig& config);

/// Sorted draws; draw i uses seed derive_seed(seed, i).
std::vector<double> w_ecdf(const WConfig& config, std::uint64_t n_samples, std::uint64_t seed,
                           bool parallel = true);

/// Fraction of sorted samples <= x.
double ecdf_at(const std::vector<double>& sorted, double x);

}  // namespace hcol
