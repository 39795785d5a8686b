#pragma once

#include "hcol/bigint.hpp"
#include "hcol/exact_count.hpp"
#include "hcol/model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace hcol {

/// Cycle-count law of length l: lambda (unconditional mean), delta
/// (relative shift under a planted colouring), mu = lambda (1 + delta).
struct CycleLaw {
  std::uint32_t l = 2;
  double lambda = 0.0;
  double delta = 0.0;
  double mu = 0.0;
};

struct RegimeFlags {
  bool first_moment_ok = true;
  bool main_theorem_ok = true;  // d'/k <= 2^{k-1} ln 2 - 2
  bool series_ok = true;        // d(k-1) < (2^{k-1}-1)^2
};

/// Log-scale value with an optional exact rational (filled for n <= kExactCutover).
struct MomentValue {
  double log_value = 0.0;
  std::optional<Rational> exact;
};

inline constexpr std::uint32_t kExactCutover = 30;

enum class MomentMode { ExactSum, Asymptotic };

CycleLaw cycle_law(const ModelParams& params, std::uint32_t l);

/// Binary entropy with 0 ln 0 = 0.
double entropy(double rho);

/// f_1(rho) = H(rho) + (d/k) ln(1 - rho^k - (1-rho)^k).
double f1_value(double rho, const ModelParams& params);

/// f_2 of an overlap given as fractions {rho00, rho01, rho10, rho11}.
double f2_value(std::span<const double, 4> rho, const ModelParams& params);

/// Balanced restriction of f_2 as a function of rho00 in [0, 1/2].
double f2bar_value(double rho00, const ModelParams& params);

/// E[Z_rho] for H(n, m) at rho = zeros/n:
/// C(n, zeros) (1 - Forb(zeros)/C(n,k))^m.
MomentValue first_moment_exact(const ModelParams& params, std::uint32_t zeros);

/// E[Z_rho] for H_k(n, m) (distinct edges): C(n, zeros) C(N - Forb, m) / C(N, m).
MomentValue first_moment_exact_simple(const ModelParams& params, std::uint32_t zeros);

/// ln E[Z]. ExactSum sums the exact per-density terms (hypergeometric terms
/// when params.flavour() is Simple); Asymptotic is the closed-form limit.
double first_moment_total(const ModelParams& params, MomentMode mode);

/// ln of the sum of first_moment_exact over the zero counts in the balanced window.
double first_moment_window(const ModelParams& params, const DensityGrid& grid);

/// Asymptotic ln E[Z^s] for stratum s; -inf if the stratum holds no zero count.
double stratum_first_moment(const ModelParams& params, const DensityGrid& grid, std::uint32_t s);

/// E[Z^(2)_rho] for H(n, m): multinomial(n; counts) (1 - F/C(n,k))^m.
MomentValue pair_moment_exact(const ModelParams& params, const OverlapMatrix& counts);

/// Number of k-sets monochromatic under sigma or under tau, for an overlap with these counts.
BigInt pair_forbidden(const OverlapMatrix& counts, std::uint32_t k);

/// prod_{l=2}^{L} (1 + delta_l)^{c_l} exp(-delta_l lambda_l); c[i] is c_{i+2}.
double conditional_ratio(const ModelParams& params, std::span<const std::uint64_t> c);

struct SecondMomentRatio {
  double closed_form = 1.0;     // exp(sum_l lambda_l delta_l^2)
  double log_closed_form = 0.0;
  double partial_sum = 0.0;     // sum_{l=2}^{L} lambda_l delta_l^2
  double tail_bound = 0.0;      // bound on sum_{l>L}
  std::uint32_t L = 0;
};

/// x = d(k-1)/(2^{k-1}-1)^2, the ratio of the series sum lambda_l delta_l^2.
double series_ratio(const ModelParams& params);

/// Throws DivergenceError unless d(k-1) < (2^{k-1}-1)^2.
SecondMomentRatio second_moment_ratio(const ModelParams& params, std::uint32_t L = 60);

/// sum_{l=2}^{L} lambda_l delta_l^2 summed term by term.
double second_moment_partial_sum(const ModelParams& params, std::uint32_t L);

/// x^{L+1} / ((2L+2)(1-x)).
double second_moment_tail_bound(const ModelParams& params, std::uint32_t L);

RegimeFlags regime_check(const ModelParams& params);

struct QuadraticConstants {
  double b_pair = 0.0;   // 4(1 - d(k-1)/(2^{k-1}-1)), as printed for the pair function
  double b_first = 0.0;  // 4(1 + d(k-1)/(2^{k-1}-1)), the first-moment curvature
  double d_pair = 0.0;   // 4(1 - d(k-1)/(2^{k-1}-1)^2)
};

QuadraticConstants quadratic_constants(const ModelParams& params);

}  // namespace hcol
