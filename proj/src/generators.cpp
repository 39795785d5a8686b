#include "hcol/generators.hpp"

#include "hcol/errors.hpp"

#include <algorithm>
#include <set>

namespace hcol {

namespace {

// Above this many k-sets we never materialise the full edge list.
constexpr std::uint64_t kEnumerateLimit = std::uint64_t{1} << 20;

void check_flavour(const ModelParams& p, Flavour expected, const char* op) {
  if (p.flavour() != expected) {
    throw ParameterError(std::string(op) + " requires flavour '" +
                         std::string(to_string(expected)) + "', got '" +
                         std::string(to_string(p.flavour())) + "'");
  }
}

// All k-subsets of {0..n-1} in lexicographic order, flattened.
std::vector<Vertex> all_k_subsets(std::uint32_t n, std::uint32_t k) {
  std::vector<Vertex> out;
  std::vector<Vertex> c(k);
  for (std::uint32_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    out.insert(out.end(), c.begin(), c.end());
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && c[i] == n - k + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) break;
    ++c[i];
    for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

// Moves a uniform random m-subset of the blocks of `pool` to the front, in random order.
void partial_shuffle_blocks(std::vector<Vertex>& pool, std::uint32_t k, std::uint64_t m, Rng& rng) {
  const std::uint64_t total = pool.size() / k;
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t j = i + rng.below(total - i);
    if (j != i) std::swap_ranges(pool.begin() + i * k, pool.begin() + (i + 1) * k, pool.begin() + j * k);
  }
  pool.resize(m * k);
}

bool monochromatic(std::span<const Vertex> e, const Colouring& sigma) {
  const bool c0 = sigma.colour(e[0]);
  return std::all_of(e.begin() + 1, e.end(), [&](Vertex v) { return sigma.colour(v) == c0; });
}

Colouring random_colouring(std::uint32_t n, Rng& rng) {
  Colouring c(n);
  for (Vertex base = 0; base < n; base += 64) {
    const std::uint64_t word = rng();
    for (Vertex b = 0; b < 64 && base + b < n; ++b) c.set(base + b, (word >> b) & 1U);
  }
  return c;
}

}  // namespace

void random_k_subset(Rng& rng, std::uint32_t n, std::span<Vertex> out) {
  const auto k = static_cast<std::uint32_t>(out.size());
  std::size_t filled = 0;
  for (std::uint32_t j = n - k; j < n; ++j) {
    const auto t = static_cast<Vertex>(rng.below(std::uint64_t{j} + 1));
    const bool seen = std::find(out.begin(), out.begin() + filled, t) != out.begin() + filled;
    out[filled++] = seen ? j : t;
  }
  std::sort(out.begin(), out.end());
}

Hypergraph gen_hnm(const ModelParams& params, std::uint64_t seed) {
  check_flavour(params, Flavour::WithReplacement, "gen_hnm");
  Rng rng(seed);
  const std::uint32_t k = params.k();
  std::vector<Vertex> flat(params.m() * k);
  for (std::uint64_t i = 0; i < params.m(); ++i) {
    random_k_subset(rng, params.n(), std::span<Vertex>(flat.data() + i * k, k));
  }
  return Hypergraph(params.n(), k, std::move(flat));
}

Hypergraph sample_simple(std::uint32_t n, std::uint64_t m, std::uint32_t k, Rng& rng) {
  const BigInt total = binomial(n, k);
  if (BigInt(m) > total) {
    throw InfeasibleError("m = " + std::to_string(m) + " exceeds C(n,k) = " + total.str());
  }
  if (total <= kEnumerateLimit && 2 * BigInt(m) > total) {
    std::vector<Vertex> pool = all_k_subsets(n, k);
    partial_shuffle_blocks(pool, k, m, rng);
    return Hypergraph(n, k, std::move(pool));
  }
  std::vector<Vertex> flat(m * k);
  std::set<std::vector<Vertex>> chosen;
  for (std::uint64_t i = 0; i < m;) {
    std::span<Vertex> e(flat.data() + i * k, k);
    random_k_subset(rng, n, e);
    if (chosen.emplace(e.begin(), e.end()).second) ++i;
  }
  return Hypergraph(n, k, std::move(flat));
}

Hypergraph gen_hknm(const ModelParams& params, std::uint64_t seed) {
  check_flavour(params, Flavour::Simple, "gen_hknm");
  Rng rng(seed);
  return sample_simple(params.n(), params.m(), params.k(), rng);
}

PlantedPair gen_planted_pair(const ModelParams& params, std::uint64_t seed, bool distinct) {
  check_flavour(params, Flavour::Planted, "gen_planted_pair");
  const std::uint32_t n = params.n();
  const std::uint32_t k = params.k();
  const std::uint64_t m = params.m();
  const BigInt total = params.total_edges();
  const BigInt budget = total - m;
  if (budget < 0 || forb_count(n / 2, n, k) > budget) {
    throw InfeasibleError("no colouring leaves " + std::to_string(m) + " bichromatic edges");
  }

  Rng rng(seed);
  // PL1: uniform colouring conditioned on Forb(sigma) <= C(n,k) - m.
  Colouring sigma(n);
  for (std::uint64_t tries = 0;; ++tries) {
    if (tries == kPlantedRejectionCap) {
      throw ResourceError("planted colouring rejected " + std::to_string(tries) + " times");
    }
    sigma = random_colouring(n, rng);
    if (forb_count(sigma.zeros(), n, k) <= budget) break;
  }

  // PL2: m edges uniform among the bichromatic k-sets.
  std::vector<Vertex> flat;
  if (total <= kEnumerateLimit) {
    std::vector<Vertex> all = all_k_subsets(n, k);
    std::vector<Vertex> pool;
    pool.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); i += k) {
      std::span<const Vertex> e(all.data() + i, k);
      if (!monochromatic(e, sigma)) pool.insert(pool.end(), e.begin(), e.end());
    }
    const std::uint64_t bichromatic = pool.size() / k;
    if (distinct) {
      partial_shuffle_blocks(pool, k, m, rng);
      flat = std::move(pool);
    } else {
      flat.reserve(m * k);
      for (std::uint64_t i = 0; i < m; ++i) {
        const std::uint64_t j = rng.below(bichromatic);
        flat.insert(flat.end(), pool.begin() + j * k, pool.begin() + (j + 1) * k);
      }
    }
  } else {
    flat.resize(m * k);
    std::set<std::vector<Vertex>> chosen;
    for (std::uint64_t i = 0; i < m;) {
      std::span<Vertex> e(flat.data() + i * k, k);
      random_k_subset(rng, n, e);
      if (monochromatic(e, sigma)) continue;
      if (distinct && !chosen.emplace(e.begin(), e.end()).second) continue;
      ++i;
    }
  }
  return {Hypergraph(n, k, std::move(flat)), std::move(sigma)};
}

Hypergraph generate(const ModelParams& params, std::uint64_t seed) {
  switch (params.flavour()) {
    case Flavour::WithReplacement: return gen_hnm(params, seed);
    case Flavour::Simple: return gen_hknm(params, seed);
    case Flavour::Planted: return gen_planted_pair(params, seed, true).graph;
  }
  throw ParameterError("unknown flavour");
}

}  // namespace hcol
