#include "hcol/analytics.hpp"

#include "hcol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hcol {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Largest m for which the exact rational power is formed.
constexpr std::uint64_t kExactMaxEdges = 10'000;

double log_choose(double n, double k) {
  if (k < 0 || k > n) return kNegInf;
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double two_pow(std::uint32_t e) { return std::ldexp(1.0, static_cast<int>(e)); }

Rational rational_pow(Rational base, std::uint64_t e) {
  Rational r = 1;
  while (e) {
    if (e & 1U) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

double log_sum_exp(const std::vector<double>& xs) {
  double top = kNegInf;
  for (double x : xs) top = std::max(top, x);
  if (top == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - top);
  return top + std::log(acc);
}

// m ln(1 - F/N) with the conventions ln 0 = -inf and 0 * ln 0 = 0.
double log_survival(const BigInt& forbidden, const BigInt& total, std::uint64_t m) {
  if (m == 0) return 0.0;
  if (forbidden >= total) return kNegInf;
  const double ratio = Rational(forbidden, total).convert_to<double>();
  return static_cast<double>(m) * std::log1p(-ratio);
}

}  // namespace

CycleLaw cycle_law(const ModelParams& params, std::uint32_t l) {
  if (l < 2) throw ParameterError("cycle length must be at least 2");
  const double x = params.d_value() * (params.k() - 1);
  const double q = two_pow(params.k() - 1) - 1.0;
  CycleLaw law;
  law.l = l;
  law.lambda = std::pow(x, l) / (2.0 * l);
  law.delta = (l % 2 == 0 ? 1.0 : -1.0) / std::pow(q, l);
  law.mu = law.lambda * (1.0 + law.delta);
  return law;
}

double entropy(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("density outside [0, 1]");
  auto term = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  return term(rho) + term(1.0 - rho);
}

double f1_value(double rho, const ModelParams& params) {
  const double h = entropy(rho);
  const double d = params.d_value();
  if (d == 0.0) return h;
  const double k = params.k();
  const double arg = 1.0 - std::pow(rho, k) - std::pow(1.0 - rho, k);
  return h + d / k * std::log(arg);
}

double f2_value(std::span<const double, 4> rho, const ModelParams& params) {
  double sum = 0.0;
  for (double r : rho) {
    if (!(r >= 0.0)) throw DomainError("overlap entries must be nonnegative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("overlap entries must sum to 1");
  const double k = params.k();
  auto pk = [k](double x) { return std::pow(x, k); };
  const double rows = pk(rho[0] + rho[1]) + pk(rho[2] + rho[3]);
  const double cols = pk(rho[0] + rho[2]) + pk(rho[1] + rho[3]);
  const double cells = pk(rho[0]) + pk(rho[1]) + pk(rho[2]) + pk(rho[3]);
  const double arg = 1.0 - rows - cols + cells;
  if (!(arg > 0.0)) throw DomainError("pair log argument is not positive");
  double h = 0.0;
  for (double r : rho) h += r > 0.0 ? -r * std::log(r) : 0.0;
  return h + params.d_value() / k * std::log(arg);
}

double f2bar_value(double rho00, const ModelParams& params) {
  if (!(rho00 >= 0.0 && rho00 <= 0.5)) throw DomainError("rho00 outside [0, 1/2]");
  const double k = params.k();
  const double arg = 1.0 - std::pow(2.0, 2.0 - k) + 2.0 * std::pow(rho00, k) +
                     2.0 * std::pow(0.5 - rho00, k);
  return std::numbers::ln2 + entropy(2.0 * rho00) + params.d_value() / k * std::log(arg);
}

MomentValue first_moment_exact(const ModelParams& params, std::uint32_t zeros) {
  const std::uint32_t n = params.n();
  if (zeros > n) throw DomainError("zeros exceeds n");
  const BigInt total = params.total_edges();
  const BigInt forbidden = forb_count(zeros, n, params.k());
  MomentValue v;
  v.log_value = log_choose(n, zeros) + log_survival(forbidden, total, params.m());
  if (n <= kExactCutover && params.m() <= kExactMaxEdges) {
    v.exact = Rational(binomial(n, zeros)) * rational_pow(Rational(total - forbidden, total), params.m());
  }
  return v;
}

MomentValue first_moment_exact_simple(const ModelParams& params, std::uint32_t zeros) {
  const std::uint32_t n = params.n();
  if (zeros > n) throw DomainError("zeros exceeds n");
  const BigInt total = params.total_edges();
  const BigInt allowed = total - forb_count(zeros, n, params.k());
  const auto m = params.m();
  const double n_total = total.convert_to<double>();
  const double n_allowed = allowed.convert_to<double>();
  MomentValue v;
  v.log_value = log_choose(n, zeros) + log_choose(n_allowed, static_cast<double>(m)) -
                log_choose(n_total, static_cast<double>(m));
  if (n <= kExactCutover) {
    const auto small_total = total.convert_to<std::uint64_t>();
    const auto small_allowed = allowed.convert_to<std::uint64_t>();
    v.exact = Rational(binomial(n, zeros) * binomial(small_allowed, m), binomial(small_total, m));
  }
  return v;
}

double first_moment_total(const ModelParams& params, MomentMode mode) {
  const double d = params.d_value();
  const double k = params.k();
  if (mode == MomentMode::Asymptotic) {
    const double y = d * (k - 1) / (two_pow(params.k() - 1) - 1.0);
    return d * (k - 1) / (two_pow(params.k()) - 2.0) + params.n() * f1_value(0.5, params) -
           0.5 * std::log1p(y);
  }
  std::vector<double> terms;
  terms.reserve(params.n() + 1);
  const bool simple = params.flavour() == Flavour::Simple;
  for (std::uint32_t z = 0; z <= params.n(); ++z) {
    terms.push_back(simple ? first_moment_exact_simple(params, z).log_value
                           : first_moment_exact(params, z).log_value);
  }
  return log_sum_exp(terms);
}

double first_moment_window(const ModelParams& params, const DensityGrid& grid) {
  std::vector<double> terms;
  for (std::uint32_t z = 0; z <= params.n(); ++z) {
    if (grid.balanced(z)) terms.push_back(first_moment_exact(params, z).log_value);
  }
  return log_sum_exp(terms);
}

double stratum_first_moment(const ModelParams& params, const DensityGrid& grid, std::uint32_t s) {
  if (s < 1 || s > grid.strata()) {
    throw DomainError("stratum " + std::to_string(s) + " outside 1.." + std::to_string(grid.strata()));
  }
  const auto size = grid.members(s).size();
  if (size == 0) return kNegInf;
  const double n = params.n();
  const double d = params.d_value();
  const double k = params.k();
  return std::log(static_cast<double>(size)) + 0.5 * std::log(2.0 / (std::numbers::pi * n)) +
         d * (k - 1) / (two_pow(params.k()) - 2.0) + n * f1_value(grid.centre(s), params);
}

BigInt pair_forbidden(const OverlapMatrix& o, std::uint32_t k) {
  BigInt f = 0;
  for (int i = 0; i < 2; ++i) f += binomial(o.row(i), k) + binomial(o.col(i), k);
  for (auto c : o.counts) f -= binomial(c, k);
  return f;
}

MomentValue pair_moment_exact(const ModelParams& params, const OverlapMatrix& o) {
  const std::uint32_t n = params.n();
  if (o.n() != n) throw DomainError("overlap counts must sum to n");
  const BigInt total = params.total_edges();
  const BigInt forbidden = pair_forbidden(o, params.k());
  double log_multinomial = std::lgamma(n + 1.0);
  for (auto c : o.counts) log_multinomial -= std::lgamma(c + 1.0);
  MomentValue v;
  v.log_value = log_multinomial + log_survival(forbidden, total, params.m());
  if (n <= kExactCutover && params.m() <= kExactMaxEdges) {
    BigInt multinomial = binomial(n, o.counts[0]) * binomial(n - o.counts[0], o.counts[1]) *
                         binomial(o.counts[2] + o.counts[3], o.counts[2]);
    v.exact = Rational(multinomial) * rational_pow(Rational(total - forbidden, total), params.m());
  }
  return v;
}

double conditional_ratio(const ModelParams& params, std::span<const std::uint64_t> c) {
  double log_ratio = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const CycleLaw law = cycle_law(params, static_cast<std::uint32_t>(i + 2));
    log_ratio += static_cast<double>(c[i]) * std::log1p(law.delta) - law.delta * law.lambda;
  }
  return std::exp(log_ratio);
}

double series_ratio(const ModelParams& params) {
  const double q = two_pow(params.k() - 1) - 1.0;
  return params.d_value() * (params.k() - 1) / (q * q);
}

double second_moment_partial_sum(const ModelParams& params, std::uint32_t L) {
  double sum = 0.0;
  for (std::uint32_t l = 2; l <= L; ++l) {
    const CycleLaw law = cycle_law(params, l);
    sum += law.lambda * law.delta * law.delta;
  }
  return sum;
}

double second_moment_tail_bound(const ModelParams& params, std::uint32_t L) {
  const double x = series_ratio(params);
  if (x >= 1.0) return std::numeric_limits<double>::infinity();
  return std::pow(x, L + 1.0) / ((2.0 * L + 2.0) * (1.0 - x));
}

SecondMomentRatio second_moment_ratio(const ModelParams& params, std::uint32_t L) {
  const double x = series_ratio(params);
  if (!(x < 1.0)) {
    throw DivergenceError("sum lambda_l delta_l^2 diverges: d(k-1) >= (2^{k-1}-1)^2");
  }
  SecondMomentRatio r;
  r.log_closed_form = -0.5 * x - 0.5 * std::log1p(-x);
  r.closed_form = std::exp(r.log_closed_form);
  r.L = L;
  r.partial_sum = second_moment_partial_sum(params, L);
  r.tail_bound = second_moment_tail_bound(params, L);
  return r;
}

RegimeFlags regime_check(const ModelParams& params) {
  const double k = params.k();
  const double dprime = params.dprime().value_or(params.d_value());
  RegimeFlags flags;
  flags.first_moment_ok = std::isfinite(dprime);
  flags.main_theorem_ok = dprime / k <= two_pow(params.k() - 1) * std::numbers::ln2 - 2.0;
  flags.series_ok = series_ratio(params) < 1.0;
  return flags;
}

QuadraticConstants quadratic_constants(const ModelParams& params) {
  const double q = two_pow(params.k() - 1) - 1.0;
  const double y = params.d_value() * (params.k() - 1) / q;
  return {4.0 * (1.0 - y), 4.0 * (1.0 + y), 4.0 * (1.0 - y / q)};
}

}  // namespace hcol
