#include "hcol/poisson.hpp"

#include "hcol/errors.hpp"

#include <cmath>
#include <numbers>

namespace hcol {

namespace {

// ln k! - (k ln k - k) for k >= 10, without forming either large term.
double stirling_correction(double k) {
  const double inv = 1.0 / k;
  const double inv2 = inv * inv;
  const double series = inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 / 1680)));
  return 0.5 * std::log(2.0 * std::numbers::pi * k) + series;
}

}  // namespace

double log_factorial(double k) {
  if (k < 10.0) return std::lgamma(k + 1.0);
  return k * std::log(k) - k + stirling_correction(k);
}

PoissonSampler::PoissonSampler(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("Poisson mean must be finite and >= 0");
  if (lambda_ >= kInversionLimit) {
    base_ = std::floor(lambda_);
    frac_ = lambda_ - base_;
    const double slam = std::sqrt(lambda_);
    log_lambda_ = std::log(lambda_);
    b_ = 0.931 + 2.53 * slam;
    a_ = -0.059 + 0.02483 * b_;
    inv_alpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
    vr_ = 0.9277 - 3.6224 / (b_ - 2.0);
  }
}

double PoissonSampler::log_pmf_offset(std::int64_t offset) const {
  const double kd = base_ + static_cast<double>(offset);
  if (kd < 10) return -lambda_ + kd * log_lambda_ - std::lgamma(kd + 1.0);
  // -lambda + k ln(lambda) - ln k!, rearranged so that no term grows like k ln k.
  const double j = static_cast<double>(offset) - frac_;
  // k = lambda + j exactly; kd itself may be rounded.
  const double l = std::log1p(j / lambda_);
  return j - (lambda_ * l + j * l) - stirling_correction(kd);
}

std::int64_t PoissonSampler::draw_offset(Rng& rng) const {
  while (true) {
    const double u = rng.uniform01() - 0.5;
    const double v = rng.uniform01();
    const double us = 0.5 - std::abs(u);
    if (us <= 0.0) continue;
    const double raw = std::floor((2.0 * a_ / us + b_) * u + frac_ + 0.43);
    if (std::abs(raw) > 9.0e18) continue;
    const auto offset = static_cast<std::int64_t>(raw);
    if (us >= 0.07 && v <= vr_) return offset;
    if (base_ + static_cast<double>(offset) < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha_) - std::log(a_ / (us * us) + b_) <= log_pmf_offset(offset)) {
      return offset;
    }
  }
}

std::int64_t PoissonSampler::operator()(Rng& rng) const {
  if (lambda_ == 0.0) return 0;
  if (lambda_ < kInversionLimit) {
    const double p0 = std::exp(-lambda_);
    const double cap = 10.0 * lambda_ + 100.0;
    while (true) {
      const double u = rng.uniform01();
      double p = p0;
      double cdf = p0;
      std::int64_t x = 0;
      while (u > cdf && x < cap) {
        ++x;
        p *= lambda_ / static_cast<double>(x);
        cdf += p;
      }
      if (u <= cdf) return x;
    }
  }
  if (lambda_ > kMaxIntegerLambda) {
    throw ResourceError("Poisson mean " + std::to_string(lambda_) + " too large for an integer draw");
  }
  return static_cast<std::int64_t>(base_) + draw_offset(rng);
}

double PoissonSampler::deviation(Rng& rng) const {
  if (lambda_ < kInversionLimit) return static_cast<double>((*this)(rng)) - lambda_;
  if (lambda_ > kNormalLimit) {
    const double r = std::sqrt(-2.0 * std::log(rng.uniform_open()));
    return std::sqrt(lambda_) * r * std::cos(2.0 * std::numbers::pi * rng.uniform01());
  }
  return static_cast<double>(draw_offset(rng)) - frac_;
}

}  // namespace hcol
