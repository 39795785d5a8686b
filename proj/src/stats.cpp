#include "hcol/stats.hpp"

#include "hcol/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hcol::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) return std::nan("");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return std::nan("");
  const double mu = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - mu) * (x - mu);
  return acc / static_cast<double>(xs.size() - 1);
}

double std_error(std::span<const double> xs) {
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

double correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw ParameterError("correlation needs paired samples");
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("KS distance needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

ChiSquare chi_square_poisson(std::span<const double> samples, double poisson_mean, double min_expected) {
  if (samples.empty()) throw ParameterError("chi-square needs samples");
  const double total = static_cast<double>(samples.size());
  std::size_t top = 0;
  for (double x : samples) top = std::max(top, static_cast<std::size_t>(std::llround(x)));
  std::vector<double> observed(top + 2, 0.0), expected(top + 2, 0.0);
  for (double x : samples) observed[static_cast<std::size_t>(std::llround(x))] += 1.0;
  double pmf = std::exp(-poisson_mean), cdf = 0.0;
  for (std::size_t j = 0; j <= top; ++j) {
    if (j > 0) pmf *= poisson_mean / static_cast<double>(j);
    expected[j] = total * pmf;
    cdf += pmf;
  }
  expected[top + 1] = total * std::max(0.0, 1.0 - cdf);

  // Pool adjacent cells until each expects at least min_expected.
  std::vector<double> obs_cells, exp_cells;
  double o = 0.0, e = 0.0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    o += observed[j];
    e += expected[j];
    if (e >= min_expected) {
      obs_cells.push_back(o);
      exp_cells.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (exp_cells.empty()) {
      obs_cells.push_back(o);
      exp_cells.push_back(e);
    } else {
      obs_cells.back() += o;
      exp_cells.back() += e;
    }
  }
  ChiSquare r;
  for (std::size_t c = 0; c < obs_cells.size(); ++c) {
    if (exp_cells[c] > 0.0) r.statistic += (obs_cells[c] - exp_cells[c]) * (obs_cells[c] - exp_cells[c]) / exp_cells[c];
  }
  r.dof = obs_cells.size() > 1 ? static_cast<std::uint32_t>(obs_cells.size() - 1) : 0;
  r.p_value = r.dof == 0 ? 1.0 : boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
  return r;
}

}  // namespace hcol::stats
