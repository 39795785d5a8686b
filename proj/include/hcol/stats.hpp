#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hcol::stats {

double mean(std::span<const double> xs);
/// Unbiased sample variance.
double variance(std::span<const double> xs);
/// Standard error of the mean.
double std_error(std::span<const double> xs);
double correlation(std::span<const double> xs, std::span<const double> ys);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|. Inputs need not be sorted.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct ChiSquare {
  double statistic = 0.0;
  std::uint32_t dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of integer samples against Poisson(mean).
/// Cells with expected count below `min_expected` are pooled into their neighbour.
ChiSquare chi_square_poisson(std::span<const double> samples, double poisson_mean,
                             double min_expected = 5.0);

}  // namespace hcol::stats
