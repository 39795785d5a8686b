#include "doctest.h"

#include "oracles.hpp"

#include "hcol/errors.hpp"
#include "hcol/exact_count.hpp"
#include "hcol/generators.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <map>

using namespace hcol;

namespace {

Hypergraph triangle() {
  return Hypergraph(6, 3, std::vector<std::vector<Vertex>>{{0, 1, 2}, {2, 3, 4}, {4, 5, 0}});
}

std::vector<BigInt> as_big(const std::vector<std::uint64_t>& xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST_CASE("count examples") {
  const auto empty = count_colourings(Hypergraph(5, 3, std::vector<Vertex>{}));
  CHECK(empty.z == 32);
  CHECK(empty.by_density == std::vector<BigInt>{1, 5, 10, 10, 5, 1});
  CHECK(count_colourings(Hypergraph(3, 3, std::vector<Vertex>{0, 1, 2})).z == 6);
  CHECK(count_colourings(triangle()).z == 26);
  CHECK(count_colourings(Hypergraph(4, 3, std::vector<Vertex>{0, 1, 2})).z == 12);
}

TEST_CASE("component count equals naive enumeration") {
  Rng rng(2024);
  for (int i = 0; i < 150; ++i) {
    const std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.below(12));
    const std::uint64_t m = rng.below(21);
    const auto flavour = rng.below(2) ? Flavour::WithReplacement : Flavour::Planted;
    const auto p = ModelParams::from_edges(n, m, 3, flavour);
    Hypergraph h(n, 3, std::vector<Vertex>{});
    try {
      h = generate(p, rng());
    } catch (const InfeasibleError&) {
      h = gen_hnm(p.with_flavour(Flavour::WithReplacement), rng());
    }
    const auto naive = oracle::count_by_zeros(h);
    for (Exec exec : {Exec::Serial, Exec::Parallel}) {
      const auto rep = count_colourings(h, std::nullopt, {32, exec});
      CHECK(rep.by_density == as_big(naive));
      CHECK(rep.z == oracle::count(h));
    }
  }
}

TEST_CASE("k = 4 and k = 5 counts equal naive enumeration") {
  for (std::uint32_t k : {4u, 5u}) {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const Hypergraph h = gen_hnm(ModelParams::from_edges(12, 3 + s % 9, k), s);
      CHECK(count_colourings(h).by_density == as_big(oracle::count_by_zeros(h)));
    }
  }
}

TEST_CASE("serial and parallel component kernels agree") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    // 22 vertices and enough edges to make one large component.
    const Hypergraph h = gen_hnm(ModelParams::from_edges(22, 30, 3), s);
    for (const Component& c : split_components(h)) {
      CHECK(kernels::enumerate_component_serial(c) == kernels::enumerate_component_parallel(c));
    }
  }
}

TEST_CASE("components partition the non-isolated vertices") {
  const Hypergraph h(9, 3, std::vector<std::vector<Vertex>>{{0, 1, 2}, {5, 6, 7}, {2, 3, 4}});
  const auto comps = split_components(h);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].vertices == std::vector<Vertex>{0, 1, 2, 3, 4});
  CHECK(comps[0].edge_masks.size() == 2);
  CHECK(comps[1].vertices == std::vector<Vertex>{5, 6, 7});
}

TEST_CASE("disjoint union convolves the density vectors") {
  const Hypergraph a = gen_hnm(ModelParams::from_edges(7, 4, 3), 1);
  const Hypergraph b = gen_hnm(ModelParams::from_edges(6, 3, 3), 2);
  std::vector<Vertex> flat(a.flat().begin(), a.flat().end());
  for (Vertex v : b.flat()) flat.push_back(v + 7);
  const Hypergraph u(13, 3, std::move(flat));
  CHECK(count_colourings(u).by_density == convolve(count_colourings(a).by_density, count_colourings(b).by_density));
  CHECK(convolve({1, 1}, {1, 2, 1}) == std::vector<BigInt>{1, 3, 3, 1});
}

TEST_CASE("density vectors are colour symmetric and sum to Z") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto rep = count_colourings(gen_hnm(ModelParams::from_density(20, 2.0, 3), s));
    BigInt total = 0;
    for (std::size_t a = 0; a < rep.by_density.size(); ++a) {
      total += rep.by_density[a];
      CHECK(rep.by_density[a] == rep.by_density[rep.by_density.size() - 1 - a]);
    }
    CHECK(total == rep.z);
  }
}

TEST_CASE("large instances overflow 64 bits exactly") {
  const auto rep = count_colourings(Hypergraph(70, 3, std::vector<Vertex>{}));
  CHECK(rep.z == BigInt(1) << 70);
}

TEST_CASE("oversized components are refused") {
  CHECK_THROWS_AS(count_colourings(triangle(), std::nullopt, {4, Exec::Serial}), ResourceError);
}

TEST_CASE("strata membership matches a high-precision oracle") {
  using Float = boost::multiprecision::cpp_dec_float_50;
  for (std::uint32_t n : {16u, 24u, 25u, 36u, 37u, 100u, 101u}) {
    for (std::uint32_t omega : {1u, 2u, 3u}) {
      for (std::uint32_t nu : {1u, 2u, 3u}) {
        const DensityGrid grid(omega, nu, n);
        for (std::uint32_t z = 0; z <= n; ++z) {
          // t = (2z - n) nu / (2 sqrt n); stratum s holds 2(s-1) - omega nu <= t < 2s - omega nu.
          // Ties are only possible when sqrt n is an integer; use exact rationals then.
          const int num = (2 * static_cast<int>(z) - static_cast<int>(n)) * static_cast<int>(nu);
          const auto root = static_cast<int>(std::lround(std::sqrt(n)));
          std::optional<std::uint32_t> expected;
          for (std::uint32_t s = 1; s <= omega * nu; ++s) {
            const int lo = 2 * (static_cast<int>(s) - 1) - static_cast<int>(omega * nu);
            bool inside;
            if (root * root == static_cast<int>(n)) {
              const Rational t(num, 2 * root);
              inside = t >= lo && t < lo + 2;
            } else {
              const Float t = Float(num) / (2 * sqrt(Float(n)));
              inside = t >= lo && t < lo + 2;
            }
            if (inside) expected = s;
          }
          CHECK(grid.stratum_of(z) == expected);
        }
      }
    }
  }
}

TEST_CASE("stratum boundaries are left-closed") {
  // n = 16: sqrt n = 4, window [1/2 - 1/4, 1/2 + 1/4) in zeros is [4, 12).
  const DensityGrid grid(1, 1, 16);
  CHECK(grid.stratum_of(4) == 1u);
  CHECK_FALSE(grid.stratum_of(12).has_value());
  CHECK_FALSE(grid.stratum_of(3).has_value());
  CHECK(grid.members(1) == std::vector<std::uint32_t>{4, 5, 6, 7, 8, 9, 10, 11});
  const DensityGrid two(1, 2, 16);
  CHECK(two.members(1) == std::vector<std::uint32_t>{4, 5, 6, 7});
  CHECK(two.members(2) == std::vector<std::uint32_t>{8, 9, 10, 11});
  CHECK(two.centre(1) == doctest::Approx(0.375));
}

TEST_CASE("stratum counts add up to the balanced count") {
  const DensityGrid grid(3, 2, 24);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto rep = count_colourings(gen_hnm(ModelParams::from_density(24, 2.0, 3), s), grid);
    BigInt sum = 0, window = 0;
    for (const auto& x : rep.by_stratum) sum += x;
    for (std::uint32_t z = 0; z <= 24; ++z) {
      if (grid.balanced(z)) window += rep.by_density[z];
    }
    CHECK(rep.by_stratum.size() == grid.strata());
    CHECK(sum == rep.z_omega);
    CHECK(window == rep.z_omega);
  }
}

TEST_CASE("pair counts") {
  const auto empty = count_pairs_by_overlap(Hypergraph(2, 3, std::vector<Vertex>{}));
  BigInt total = 0;
  for (const auto& [o, c] : empty) total += c;
  CHECK(total == 16);

  const auto single = count_pairs_by_overlap(Hypergraph(3, 3, std::vector<Vertex>{0, 1, 2}));
  total = 0;
  for (const auto& [o, c] : single) total += c;
  CHECK(total == 36);

  for (std::uint64_t s = 0; s < 10; ++s) {
    const Hypergraph h = gen_hnm(ModelParams::from_edges(9, 5, 3), s);
    const auto pairs = count_pairs_by_overlap(h);
    // Naive: every ordered pair of proper colourings.
    std::map<OverlapMatrix, BigInt> naive;
    std::vector<Colouring> proper;
    for (std::uint64_t mask = 0; mask < 512; ++mask) {
      const auto c = Colouring::from_mask(9, mask);
      if (is_proper(h, c)) proper.push_back(c);
    }
    for (const auto& a : proper) {
      for (const auto& b : proper) naive[overlap(a, b)] += 1;
    }
    CHECK(pairs == naive);
    for (const auto& [o, c] : pairs) CHECK(pairs.at(o.transposed()) == c);
  }
  CHECK_THROWS_AS(count_pairs_by_overlap(Hypergraph(17, 3, std::vector<Vertex>{})), ResourceError);
}

TEST_CASE("Gibbs pairs are exact at n = 3") {
  const auto p = ModelParams::from_edges(3, 1, 3, Flavour::Simple);
  const std::uint64_t trials = 100000;
  std::map<std::string, double> counts;
  for (std::uint64_t s = 0; s < trials; ++s) {
    const GibbsPair g = sample_gibbs_pair(p, s);
    CHECK(g.z == 6);
    counts[g.colouring.to_string()] += 1;
  }
  CHECK(counts.size() == 6);
  const double se = std::sqrt(trials * (1.0 / 6) * (5.0 / 6));
  for (const auto& [c, x] : counts) CHECK(std::abs(x - trials / 6.0) <= 3 * se);
}

TEST_CASE("Gibbs pairs with no edges are uniform colourings") {
  const auto p = ModelParams::from_edges(3, 0, 3, Flavour::Simple);
  std::map<std::string, double> counts;
  const std::uint64_t trials = 40000;
  for (std::uint64_t s = 0; s < trials; ++s) counts[sample_gibbs_pair(p, s).colouring.to_string()] += 1;
  CHECK(counts.size() == 8);
  const double se = std::sqrt(trials * (1.0 / 8) * (7.0 / 8));
  for (const auto& [c, x] : counts) CHECK(std::abs(x - trials / 8.0) <= 4 * se);
}

TEST_CASE("Gibbs pairs are proper") {
  const auto p = ModelParams::from_density(16, 2.0, 3, Flavour::Simple);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const GibbsPair g = sample_gibbs_pair(p, s);
    CHECK(is_proper(g.graph, g.colouring));
    CHECK(g.z == oracle::count(g.graph));
    CHECK_FALSE(g.graph.has_duplicate_edges());
  }
}

TEST_CASE("count reports serialise big integers as strings") {
  nlohmann::json j = count_colourings(triangle(), DensityGrid(1, 1, 6));
  CHECK(j["Z"] == "26");
  CHECK(j["by_density"][3] == "14");
  CHECK(j.contains("Z_omega"));
  CHECK(j["by_stratum"].size() == 1);
}
