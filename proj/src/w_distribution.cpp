#include "hcol/w_distribution.hpp"

#include "hcol/errors.hpp"
#include "hcol/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace hcol {

namespace {

// ln(1 + x) - x without cancellation for tiny x.
double log1p_minus_x(double x) {
  if (std::abs(x) < 1e-4) return x * x * (-0.5 + x * (1.0 / 3 - x * 0.25));
  return std::log1p(x) - x;
}

}  // namespace

WConfig make_w_config(const ModelParams& params, std::optional<std::uint32_t> L,
                      double tail_threshold) {
  WConfig cfg;
  cfg.d = params.d_value();
  cfg.k = params.k();
  const double x = series_ratio(params);
  if (L) {
    if (*L < 2) throw ParameterError("truncation level L must be at least 2");
    cfg.L = *L;
  } else if (cfg.d == 0.0) {
    cfg.L = 2;
  } else {
    if (!(x < 1.0)) throw DivergenceError("no finite truncation: the series for W diverges");
    cfg.L = 2;
    while (cfg.L < kMaxDefaultL && second_moment_tail_bound(params, cfg.L) >= tail_threshold) ++cfg.L;
  }
  cfg.tail_bound = cfg.d == 0.0 ? 0.0 : second_moment_tail_bound(params, cfg.L);
  if (!(cfg.tail_bound < tail_threshold)) {
    std::ostringstream os;
    os << "tail bound " << cfg.tail_bound << " above threshold " << tail_threshold;
    cfg.warning = os.str();
  }
  if (!regime_check(params).main_theorem_ok) {
    const std::string note = "density outside the regime of the distributional limit";
    cfg.warning = cfg.warning ? *cfg.warning + "; " + note : note;
  }
  for (std::uint32_t l = 2; l <= cfg.L; ++l) {
    const CycleLaw law = cycle_law(params, l);
    cfg.laws.push_back(law);
    cfg.samplers.emplace_back(law.lambda);
    cfg.log_factor.push_back(std::log1p(law.delta));
    cfg.drift.push_back(law.lambda * log1p_minus_x(law.delta));
  }
  return cfg;
}

double sample_w(const WConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  double w = 0.0;
  for (std::size_t i = 0; i < config.laws.size(); ++i) {
    if (config.laws[i].lambda == 0.0) continue;
    w += config.samplers[i].deviation(rng) * config.log_factor[i] + config.drift[i];
  }
  return w;
}

WMoments w_moments(const WConfig& config) {
  const double q = std::ldexp(1.0, static_cast<int>(config.k) - 1) - 1.0;
  if (!(config.d * (config.k - 1) < q * q)) {
    throw DivergenceError("moments of W diverge: d(k-1) >= (2^{k-1}-1)^2");
  }
  double log_exp_2w = 0.0;
  WMoments m;
  m.mean_w_upper = 0.0;
  for (std::size_t i = 0; i < config.laws.size(); ++i) {
    const CycleLaw& law = config.laws[i];
    // Poisson mgf E[exp(t X)] = exp(lambda (e^t - 1)) at e^t = (1 + delta)^j, expanded
    // by hand: lambda ((1 + delta)^2 - 1) loses all precision once lambda ~ 1/eps.
    log_exp_2w += law.lambda * law.delta * law.delta;
    m.mean_w_upper += config.drift[i];
  }
  m.mean_exp_w = 1.0;
  m.mean_exp_2w = std::exp(log_exp_2w);
  return m;
}

std::vector<double> w_ecdf(const WConfig& config, std::uint64_t n_samples, std::uint64_t seed,
                           bool parallel) {
  if (n_samples == 0) throw ParameterError("need at least one sample");
  std::vector<double> out(n_samples);
  const auto count = static_cast<std::int64_t>(n_samples);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = sample_w(config, derive_seed(seed, static_cast<std::uint64_t>(i)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double ecdf_at(const std::vector<double>& sorted, double x) {
  if (sorted.empty()) return 0.0;
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

}  // namespace hcol
