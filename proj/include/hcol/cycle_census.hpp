#pragma once

#include "hcol/exact_count.hpp"
#include "hcol/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hcol {

/// C_2..C_L: counts[l - 2] cycles of length exactly l.
struct CycleCensus {
  std::uint32_t L = 2;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(std::uint32_t l) const { return counts.at(l - 2); }
  friend bool operator==(const CycleCensus&, const CycleCensus&) = default;
};

namespace kernels {

/// Rooted directed alternating walks (v_1, e_1, ..., v_l, e_l) with distinct
/// vertices, distinct edge objects, {v_i, v_i+1} in e_i, and v_1 the smallest
/// vertex. Entry l-2 holds the count for length l; equals D_l / l.
std::vector<std::uint64_t> min_rooted_walks_serial(const Hypergraph& h, const Incidence& inc,
                                                   std::uint32_t L);
std::vector<std::uint64_t> min_rooted_walks_parallel(const Hypergraph& h, const Incidence& inc,
                                                     std::uint32_t L);

}  // namespace kernels

/// Cycle census with C_l = D_l / (2l); throws InvariantError if the
/// quotient is not exact.
CycleCensus count_cycles(const Hypergraph& h, std::uint32_t L, Exec exec = Exec::Parallel);

/// Components with 3 edges, 3k-3 vertices and pairwise edge intersections of size 1.
std::uint64_t count_isolated_triangles(const Hypergraph& h);

/// "n,m,k,seed,C_2,...,C_L"
std::string census_csv_header(std::uint32_t L);
std::string census_csv_row(const CycleCensus& c, const Hypergraph& h, std::uint64_t seed);

}  // namespace hcol
