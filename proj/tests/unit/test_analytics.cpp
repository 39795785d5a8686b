#include "doctest.h"

#include "oracles.hpp"

#include "hcol/analytics.hpp"
#include "hcol/errors.hpp"
#include "hcol/generators.hpp"

#include <cmath>
#include <functional>

using namespace hcol;

namespace {

const ModelParams kD2 = ModelParams::from_edges(300, 200, 3);  // d = 2 exactly

std::vector<std::vector<Vertex>> all_ksets(std::uint32_t n, std::uint32_t k) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> cur;
  std::function<void(Vertex)> rec = [&](Vertex from) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (Vertex v = from; v < n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// Mean of Z_rho over every ordered m-tuple (or every m-subset when `distinct`).
std::vector<Rational> enumerated_first_moments(std::uint32_t n, std::uint32_t m, bool distinct) {
  const auto ks = all_ksets(n, 3);
  std::vector<BigInt> sums(n + 1);
  std::uint64_t outcomes = 0;
  std::vector<std::size_t> idx(m, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
    if (pos == m) {
      std::vector<Vertex> flat;
      for (auto i : idx) flat.insert(flat.end(), ks[i].begin(), ks[i].end());
      const auto counts = oracle::count_by_zeros(Hypergraph(n, 3, std::move(flat)));
      for (std::uint32_t z = 0; z <= n; ++z) sums[z] += counts[z];
      ++outcomes;
      return;
    }
    for (std::size_t i = distinct ? from : 0; i < ks.size(); ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  std::vector<Rational> out;
  for (const auto& s : sums) out.emplace_back(s, BigInt(outcomes));
  return out;
}

}  // namespace

TEST_CASE("cycle laws") {
  const CycleLaw two = cycle_law(kD2, 2);
  CHECK(two.lambda == doctest::Approx(4.0));
  CHECK(two.delta == doctest::Approx(1.0 / 9));
  CHECK(two.mu == doctest::Approx(40.0 / 9));
  const CycleLaw three = cycle_law(kD2, 3);
  CHECK(three.lambda == doctest::Approx(32.0 / 3));
  CHECK(three.delta == doctest::Approx(-1.0 / 27));
  CHECK(three.mu == doctest::Approx(10.2716).epsilon(1e-4));
  const CycleLaw empty = cycle_law(ModelParams::from_edges(10, 0, 3), 4);
  CHECK(empty.lambda == 0.0);
  CHECK(empty.mu == 0.0);
  for (std::uint32_t l = 2; l < 40; ++l) {
    const CycleLaw law = cycle_law(kD2, l);
    CHECK(law.mu / law.lambda == doctest::Approx(1 + law.delta));
  }
  CHECK_THROWS_AS(cycle_law(kD2, 1), ParameterError);
}

TEST_CASE("f1") {
  CHECK(f1_value(0.5, kD2) == doctest::Approx(std::log(2.0) + (2.0 / 3) * std::log(0.75)));
  CHECK(f1_value(0.5, kD2) == doctest::Approx(0.501359).epsilon(1e-6));
  CHECK(f1_value(0.5, ModelParams::from_edges(10, 0, 3)) == doctest::Approx(std::log(2.0)));
  for (double r = 0.01; r < 1.0; r += 0.01) {
    CHECK(f1_value(r, kD2) == doctest::Approx(f1_value(1 - r, kD2)));
    CHECK(f1_value(0.5, kD2) >= f1_value(r, kD2));
  }
  CHECK(entropy(0.0) == 0.0);
  CHECK_THROWS_AS(entropy(1.5), DomainError);
}

TEST_CASE("f2 and its balanced restriction") {
  const std::array<double, 4> flat{0.25, 0.25, 0.25, 0.25};
  CHECK(f2_value(flat, kD2) == doctest::Approx(2 * f1_value(0.5, kD2)));
  CHECK(f2_value(flat, kD2) == doctest::Approx(1.002718).epsilon(1e-6));
  CHECK(f2bar_value(0.25, kD2) == doctest::Approx(f2_value(flat, kD2)));

  // Product overlap: rho_ij = a_i b_j.
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const double a = 0.05 + 0.9 * rng.uniform01();
    const double b = 0.05 + 0.9 * rng.uniform01();
    const std::array<double, 4> prod{a * b, a * (1 - b), (1 - a) * b, (1 - a) * (1 - b)};
    CHECK(f2_value(prod, kD2) == doctest::Approx(f1_value(a, kD2) + f1_value(b, kD2)));
  }
  const std::array<double, 4> degenerate{1.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(f2_value(degenerate, kD2), DomainError);

  double best = -1e9, arg = -1;
  for (int i = 0; i <= 10000; ++i) {
    const double r = 0.5 * i / 10000.0;
    const double v = f2bar_value(r, kD2);
    if (v > best) best = v, arg = r;
  }
  CHECK(arg == doctest::Approx(0.25));
}

TEST_CASE("exact first moments") {
  const auto p = ModelParams::from_edges(4, 1, 3);
  CHECK(*first_moment_exact(p, 1).exact == 3);
  CHECK(*first_moment_exact(p, 0).exact == 0);
  CHECK(std::isinf(first_moment_exact(p, 0).log_value));
  Rational total = 0;
  for (std::uint32_t z = 0; z <= 4; ++z) total += *first_moment_exact(p, z).exact;
  CHECK(total == 12);
  CHECK(first_moment_total(p, MomentMode::ExactSum) == doctest::Approx(std::log(12.0)));
  CHECK_FALSE(first_moment_exact(ModelParams::from_edges(31, 5, 3), 10).exact.has_value());
}

TEST_CASE("exact first moments match enumeration of every outcome") {
  for (auto [n, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{4, 1}, {4, 2}, {5, 1}, {5, 2}, {6, 2}}) {
    const auto replacement = enumerated_first_moments(n, m, false);
    const auto simple = enumerated_first_moments(n, m, true);
    const auto p = ModelParams::from_edges(n, m, 3);
    for (std::uint32_t z = 0; z <= n; ++z) {
      CHECK(*first_moment_exact(p, z).exact == replacement[z]);
      CHECK(*first_moment_exact_simple(p.with_flavour(Flavour::Simple), z).exact == simple[z]);
    }
  }
}

TEST_CASE("asymptotic first moment") {
  const auto p = ModelParams::from_edges(300, 200, 3);
  const double expected = 300 * f1_value(0.5, p) + 2.0 / 3 - 0.5 * std::log(7.0 / 3);
  CHECK(first_moment_total(p, MomentMode::Asymptotic) == doctest::Approx(expected));
  const auto big = ModelParams::from_density(10000, 2.0, 3);
  CHECK(std::abs(first_moment_total(big, MomentMode::ExactSum) - first_moment_total(big, MomentMode::Asymptotic)) < 0.02);
}

TEST_CASE("stratum first moments") {
  const auto p = ModelParams::from_density(10000, 2.0, 3);
  // ln of the exact expectation summed over the zero counts of stratum s.
  auto direct = [&](const DensityGrid& grid, std::uint32_t s) {
    double acc = -INFINITY;
    for (auto z : grid.members(s)) {
      const double t = first_moment_exact(p, z).log_value;
      const double hi = std::max(acc, t);
      acc = hi + std::log(std::exp(acc - hi) + std::exp(t - hi));
    }
    return acc;
  };
  const DensityGrid grid(4, 8, 10000);
  std::vector<double> terms;
  for (std::uint32_t s = 1; s <= grid.strata(); ++s) {
    const double v = stratum_first_moment(p, grid, s);
    terms.push_back(v);
    if (std::abs(grid.centre(s) - 0.5) * std::sqrt(10000.0) < 0.5) CHECK(std::abs(std::exp(v - direct(grid, s)) - 1) < 0.05);
  }
  double mx = *std::max_element(terms.begin(), terms.end()), acc = 0;
  for (double t : terms) acc += std::exp(t - mx);
  CHECK(std::abs(std::exp(mx + std::log(acc) - first_moment_window(p, grid)) - 1) < 0.02);

  // Away from the centre the display is only asymptotic in nu.
  double previous = INFINITY;
  for (std::uint32_t nu : {8u, 32u, 128u}) {
    const DensityGrid g(4, nu, 10000);
    double worst = 0.0;
    for (std::uint32_t s = 1; s <= g.strata(); ++s) {
      worst = std::max(worst, std::abs(std::exp(stratum_first_moment(p, g, s) - direct(g, s)) - 1));
    }
    CHECK(worst < previous);
    previous = worst;
  }

  const auto tiny = ModelParams::from_edges(9, 3, 3);
  const DensityGrid fine(1, 8, 9);
  bool saw_empty = false;
  for (std::uint32_t s = 1; s <= fine.strata(); ++s) {
    if (fine.members(s).empty()) {
      saw_empty = true;
      CHECK(std::isinf(stratum_first_moment(tiny, fine, s)));
    }
  }
  CHECK(saw_empty);
  CHECK_THROWS_AS(stratum_first_moment(tiny, fine, 0), DomainError);
}

TEST_CASE("exact pair moments") {
  const auto p = ModelParams::from_edges(4, 1, 3);
  CHECK(*pair_moment_exact(p, OverlapMatrix{{2, 0, 0, 2}}).exact == 6);
  CHECK(*pair_moment_exact(p, OverlapMatrix{{4, 0, 0, 0}}).exact == 0);
  CHECK(pair_forbidden(OverlapMatrix{{2, 0, 0, 2}}, 3) == 0);
  CHECK(pair_forbidden(OverlapMatrix{{4, 0, 0, 0}}, 3) == 4);
  // sigma = 0001, tau = 0011: monochromatic under either one.
  CHECK(pair_forbidden(OverlapMatrix{{2, 1, 0, 1}}, 3) == 1);
}

TEST_CASE("conditional ratio") {
  const std::uint64_t none[1] = {0};
  CHECK(conditional_ratio(kD2, none) == doctest::Approx(std::exp(-4.0 / 9)));
  const std::uint64_t four[1] = {4};
  CHECK(conditional_ratio(kD2, four) == doctest::Approx(std::pow(10.0 / 9, 4) * std::exp(-4.0 / 9)));
  CHECK(conditional_ratio(kD2, four) == doctest::Approx(0.9774).epsilon(1e-3));
  const std::uint64_t two[2] = {0, 0};
  CHECK(conditional_ratio(kD2, two) == doctest::Approx(std::exp(-4.0 / 9 + (32.0 / 3) / 27)));
  CHECK(conditional_ratio(ModelParams::from_edges(10, 0, 3), two) == 1.0);
}

TEST_CASE("second moment ratio") {
  const auto r = second_moment_ratio(kD2);
  CHECK(r.closed_form == doctest::Approx(std::exp(-2.0 / 9) / std::sqrt(5.0 / 9)));
  CHECK(r.closed_form == doctest::Approx(1.07430).epsilon(1e-5));
  CHECK(std::abs(r.partial_sum - r.log_closed_form) < 1e-10);
  CHECK(second_moment_ratio(ModelParams::from_edges(10, 0, 3)).closed_form == 1.0);
  CHECK(series_ratio(kD2) == doctest::Approx(4.0 / 9));

  double prev = 0.0;
  for (std::uint32_t L = 2; L <= 60; ++L) {
    const double s = second_moment_partial_sum(kD2, L);
    CHECK(s >= prev);
    if (L < 30) CHECK(s > prev);
    CHECK(r.log_closed_form - s <= second_moment_tail_bound(kD2, L) * (1 + 1e-9) + 1e-15);
    prev = s;
  }
}

TEST_CASE("divergence boundary") {
  // k = 3: d(k-1) = 9 when m/n = 3/2.
  CHECK_THROWS_AS(second_moment_ratio(ModelParams::from_edges(10, 15, 3)), DivergenceError);
  CHECK_NOTHROW(second_moment_ratio(ModelParams::from_edges(10, 14, 3)));
  CHECK_FALSE(regime_check(ModelParams::from_edges(10, 15, 3)).series_ok);
  CHECK(regime_check(ModelParams::from_edges(10, 14, 3)).series_ok);
}

TEST_CASE("regime flags") {
  CHECK(regime_check(ModelParams::from_density(300, 2.0, 3)).main_theorem_ok);
  CHECK_FALSE(regime_check(ModelParams::from_density(300, 3.0, 3)).main_theorem_ok);
  const auto empty = regime_check(ModelParams::from_density(300, 0.0, 3));
  CHECK(empty.first_moment_ok);
  CHECK(empty.main_theorem_ok);
  CHECK(empty.series_ok);
}

TEST_CASE("quadratic constants") {
  const auto zero = quadratic_constants(ModelParams::from_edges(10, 0, 3));
  CHECK(zero.b_pair == 4.0);
  CHECK(zero.b_first == 4.0);
  CHECK(zero.d_pair == 4.0);
  const auto q = quadratic_constants(kD2);
  CHECK(q.d_pair == doctest::Approx(20.0 / 9));
  CHECK(q.b_pair == doctest::Approx(-4.0 / 3));
  CHECK(q.b_first == doctest::Approx(28.0 / 3));
}
