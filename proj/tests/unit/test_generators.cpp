#include "doctest.h"

#include "hcol/errors.hpp"
#include "hcol/generators.hpp"

#include <cmath>
#include <map>
#include <set>

using namespace hcol;

namespace {

std::size_t edge_index4(std::span<const Vertex> e) {
  // The four 3-subsets of {0,1,2,3}, indexed by the missing vertex.
  std::uint32_t sum = 0;
  for (auto v : e) sum += v;
  return 6 - sum;
}

bool within_se(double count, double trials, double p, double se_mult) {
  const double se = std::sqrt(trials * p * (1 - p));
  return std::abs(count - trials * p) <= se_mult * se;
}

}  // namespace

TEST_CASE("random k-subsets are sorted and distinct") {
  Rng rng(5);
  std::vector<Vertex> out(4);
  for (int i = 0; i < 1000; ++i) {
    random_k_subset(rng, 9, out);
    for (std::size_t j = 1; j < out.size(); ++j) CHECK(out[j - 1] < out[j]);
    CHECK(out.back() < 9);
  }
}

TEST_CASE("gen_hnm edge cases") {
  const Hypergraph empty = gen_hnm(ModelParams::from_edges(4, 0, 3), 99);
  CHECK(empty.m() == 0);
  const Hypergraph forced = gen_hnm(ModelParams::from_edges(3, 2, 3), 7);
  REQUIRE(forced.m() == 2);
  CHECK(forced.edge(0)[0] == 0);
  CHECK(forced.edge(1)[2] == 2);
  CHECK(forced.has_duplicate_edges());
}

TEST_CASE("generators are deterministic in the seed") {
  for (Flavour f : {Flavour::WithReplacement, Flavour::Simple, Flavour::Planted}) {
    const auto p = ModelParams::from_density(60, 2.0, 3, f);
    CHECK(generate(p, 11) == generate(p, 11));
    CHECK_FALSE(generate(p, 11) == generate(p, 12));
  }
}

TEST_CASE("dense with-replacement draws collide") {
  const auto p = ModelParams::from_edges(20, 1000, 3);
  int with_duplicates = 0;
  for (std::uint64_t s = 0; s < 100; ++s) with_duplicates += gen_hnm(p, s).has_duplicate_edges();
  CHECK(with_duplicates == 100);
}

TEST_CASE("duplicate-edge probability halves when n doubles") {
  // Exact probability of at least one repeated edge among m uniform draws from N.
  auto exact = [](double N, std::uint64_t m) {
    double none = 1.0;
    for (std::uint64_t i = 0; i < m; ++i) none *= 1.0 - static_cast<double>(i) / N;
    return 1.0 - none;
  };
  const std::uint64_t trials = 20000;
  std::vector<double> freq;
  for (std::uint32_t n : {50u, 100u}) {
    const auto p = ModelParams::from_density(n, 2.0, 3);
    double hits = 0;
    for (std::uint64_t s = 0; s < trials; ++s) hits += gen_hnm(p, derive_seed(n, s)).has_duplicate_edges();
    const double q = exact(static_cast<double>(n) * (n - 1) * (n - 2) / 6, p.m());
    CHECK(within_se(hits, trials, q, 4));
    freq.push_back(hits / trials);
  }
  CHECK(freq[0] / freq[1] > 1.6);
  CHECK(freq[0] / freq[1] < 2.5);
}

TEST_CASE("gen_hknm draws distinct uniform edges") {
  const Hypergraph all = gen_hknm(ModelParams::from_edges(4, 4, 3, Flavour::Simple), 3);
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < all.m(); ++i) seen.insert(edge_index4(all.edge(i)));
  CHECK(seen.size() == 4);

  CHECK_FALSE(gen_hknm(ModelParams::from_edges(14, 10, 3, Flavour::Simple), 1).has_duplicate_edges());
  CHECK_THROWS_AS(gen_hknm(ModelParams::from_edges(4, 5, 3, Flavour::Simple), 1), InfeasibleError);

  const std::uint64_t trials = 100000;
  std::array<double, 4> counts{};
  const auto p = ModelParams::from_edges(4, 1, 3, Flavour::Simple);
  for (std::uint64_t s = 0; s < trials; ++s) counts[edge_index4(gen_hknm(p, s).edge(0))] += 1;
  for (double c : counts) CHECK(within_se(c, trials, 0.25, 3));
}

TEST_CASE("gen_hknm marginals at n = 6") {
  const auto p = ModelParams::from_edges(6, 5, 3, Flavour::Simple);
  const std::uint64_t trials = 20000;
  std::map<std::vector<Vertex>, double> counts;
  for (std::uint64_t s = 0; s < trials; ++s) {
    const Hypergraph h = gen_hknm(p, s);
    CHECK_FALSE(h.has_duplicate_edges());
    for (std::size_t i = 0; i < h.m(); ++i) counts[{h.edge(i).begin(), h.edge(i).end()}] += 1;
  }
  CHECK(counts.size() == 20);
  for (const auto& [edge, c] : counts) CHECK(within_se(c, trials, 5.0 / 20.0, 4));
}

TEST_CASE("sample_simple covers both code paths") {
  Rng rng(9);
  const Hypergraph dense = sample_simple(10, 100, 3, rng);  // enumerate-and-shuffle
  CHECK(dense.m() == 100);
  CHECK_FALSE(dense.has_duplicate_edges());
  const Hypergraph sparse = sample_simple(500, 300, 3, rng);  // rejection
  CHECK(sparse.m() == 300);
  CHECK_FALSE(sparse.has_duplicate_edges());
}

TEST_CASE("planted pairs are proper") {
  for (bool distinct : {false, true}) {
    const auto p = ModelParams::from_density(40, 2.0, 3, Flavour::Planted);
    for (std::uint64_t s = 0; s < 200; ++s) {
      const PlantedPair pp = gen_planted_pair(p, s, distinct);
      CHECK(is_proper(pp.graph, pp.colouring));
      CHECK(pp.graph.m() == p.m());
      if (distinct) CHECK_FALSE(pp.graph.has_duplicate_edges());
    }
  }
  CHECK_THROWS_AS(gen_planted_pair(ModelParams::from_edges(10, 5, 3), 1, true), ParameterError);
}

TEST_CASE("planted edge is uniform among the bichromatic edges") {
  const auto p = ModelParams::from_edges(4, 1, 3, Flavour::Planted);
  const std::uint64_t trials = 100000;
  std::map<std::uint32_t, std::array<double, 4>> by_colouring;
  for (std::uint64_t s = 0; s < trials; ++s) {
    const PlantedPair pp = gen_planted_pair(p, s, true);
    std::uint32_t mask = 0;
    for (Vertex v = 0; v < 4; ++v) mask |= pp.colouring.colour(v) << v;
    by_colouring[mask][edge_index4(pp.graph.edge(0))] += 1;
  }
  // Monochromatic colourings have Forb = 4 > C(4,3) - 1 and are never drawn.
  CHECK(by_colouring.count(0) == 0);
  CHECK(by_colouring.count(15) == 0);
  CHECK(by_colouring.size() == 14);
  for (const auto& [mask, counts] : by_colouring) {
    std::vector<std::size_t> allowed;
    for (std::size_t missing = 0; missing < 4; ++missing) {
      std::uint32_t ones = 0;
      for (Vertex v = 0; v < 4; ++v) {
        if (v != missing) ones += (mask >> v) & 1U;
      }
      if (ones != 0 && ones != 3) allowed.push_back(missing);
      else CHECK(counts[missing] == 0);
    }
    double total = 0;
    for (double c : counts) total += c;
    for (std::size_t e : allowed) CHECK(within_se(counts[e], total, 1.0 / allowed.size(), 4));
  }
}

TEST_CASE("planted colour density has the binomial spread") {
  const std::uint32_t n = 1000;
  const auto p = ModelParams::from_edges(n, 667, 3, Flavour::Planted);
  // E|zeros/n - 1/2| for zeros ~ Bin(n, 1/2), summed directly.
  double expected = 0.0;
  for (std::uint32_t z = 0; z <= n; ++z) {
    const double logp = std::lgamma(n + 1.0) - std::lgamma(z + 1.0) - std::lgamma(n - z + 1.0) - n * std::log(2.0);
    expected += std::exp(logp) * std::abs(static_cast<double>(z) / n - 0.5);
  }
  CHECK(expected == doctest::Approx(1.0 / std::sqrt(2 * M_PI * n)).epsilon(0.01));
  double acc = 0.0;
  const int trials = 2000;
  for (int s = 0; s < trials; ++s) {
    acc += std::abs(static_cast<double>(gen_planted_pair(p, s, true).colouring.zeros()) / n - 0.5);
  }
  CHECK(acc / trials == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("planted sampling refuses infeasible edge counts") {
  // With n = 4 every balanced colouring leaves 4 bichromatic edges.
  CHECK_THROWS_AS(gen_planted_pair(ModelParams::from_edges(4, 5, 3, Flavour::Planted), 1, true), InfeasibleError);
  CHECK_NOTHROW(gen_planted_pair(ModelParams::from_edges(4, 4, 3, Flavour::Planted), 1, true));
}
