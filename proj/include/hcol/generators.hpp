#pragma once

#include "hcol/model.hpp"
#include "hcol/rng.hpp"

#include <cstdint>
#include <span>

namespace hcol {

/// Writes a uniformly random k-subset of {0..n-1}, sorted, into `out`
/// (Floyd's algorithm; exactly k draws).
void random_k_subset(Rng& rng, std::uint32_t n, std::span<Vertex> out);

/// H(n, m): m edges drawn independently and uniformly from all k-sets.
Hypergraph gen_hnm(const ModelParams& params, std::uint64_t seed);

/// H_k(n, m): a uniform m-subset of the k-sets, in random order.
Hypergraph gen_hknm(const ModelParams& params, std::uint64_t seed);

/// Same law as gen_hknm on an explicit (n, m, k), drawing from `rng`.
Hypergraph sample_simple(std::uint32_t n, std::uint64_t m, std::uint32_t k, Rng& rng);

struct PlantedPair {
  Hypergraph graph;
  Colouring colouring;
};

/// Number of rejected colourings after which planted sampling gives up.
inline constexpr std::uint64_t kPlantedRejectionCap = 1'000'000;

/// Planted model: uniform colouring with Forb <= C(n,k) - m, then m edges
/// uniform among its bichromatic k-sets (pairwise distinct if `distinct`).
PlantedPair gen_planted_pair(const ModelParams& params, std::uint64_t seed, bool distinct);

/// Dispatches on params.flavour(); planted pairs drop the colouring and
/// use distinct edges.
Hypergraph generate(const ModelParams& params, std::uint64_t seed);

}  // namespace hcol
