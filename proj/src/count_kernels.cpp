#include "hcol/exact_count.hpp"

#include "hcol/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <numeric>

namespace hcol {

std::vector<Component> split_components(const Hypergraph& h) {
  std::vector<Vertex> parent(h.n());
  std::iota(parent.begin(), parent.end(), Vertex{0});
  auto find = [&](Vertex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t e = 0; e < h.m(); ++e) {
    auto edge = h.edge(e);
    for (std::size_t i = 1; i < edge.size(); ++i) {
      Vertex a = find(edge[0]), b = find(edge[i]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<bool> touched(h.n(), false);
  for (Vertex v : h.flat()) touched[v] = true;

  // Roots are the minimum vertex of their component, so components come out ordered.
  std::vector<std::int64_t> slot(h.n(), -1);
  std::vector<Component> out;
  for (Vertex v = 0; v < h.n(); ++v) {
    if (!touched[v]) continue;
    const Vertex r = find(v);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::int64_t>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[r])].vertices.push_back(v);
  }
  std::vector<std::uint32_t> local(h.n(), 0);
  for (const auto& c : out) {
    for (std::size_t i = 0; i < c.vertices.size(); ++i) local[c.vertices[i]] = static_cast<std::uint32_t>(i);
  }
  for (std::size_t e = 0; e < h.m(); ++e) {
    auto edge = h.edge(e);
    auto& comp = out[static_cast<std::size_t>(slot[find(edge[0])])];
    std::uint64_t mask = 0;
    // Components wider than 64 vertices cannot be enumerated anyway; their masks are left empty.
    if (comp.vertices.size() <= 64) {
      for (Vertex v : edge) mask |= std::uint64_t{1} << local[v];
    }
    comp.edge_masks.push_back(mask);
  }
  return out;
}

namespace kernels {

namespace {

// Edge-incidence lists per local vertex, flattened.
struct LocalIncidence {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> edges;
  std::vector<std::uint32_t> edge_size;
};

LocalIncidence build_local(const Component& c) {
  const auto width = static_cast<std::uint32_t>(c.vertices.size());
  LocalIncidence li;
  li.offsets.assign(width + 1, 0);
  for (std::uint64_t mask : c.edge_masks) {
    li.edge_size.push_back(static_cast<std::uint32_t>(std::popcount(mask)));
    for (std::uint64_t m = mask; m; m &= m - 1) ++li.offsets[std::countr_zero(m) + 1];
  }
  std::partial_sum(li.offsets.begin(), li.offsets.end(), li.offsets.begin());
  li.edges.resize(li.offsets.back());
  std::vector<std::uint32_t> cursor(li.offsets.begin(), li.offsets.end() - 1);
  for (std::uint32_t e = 0; e < c.edge_masks.size(); ++e) {
    for (std::uint64_t m = c.edge_masks[e]; m; m &= m - 1) li.edges[cursor[std::countr_zero(m)]++] = e;
  }
  return li;
}

void check_width(const Component& c) {
  if (c.vertices.size() > 63) {
    throw ResourceError("component with " + std::to_string(c.vertices.size()) +
                        " vertices is too wide to enumerate");
  }
}

// Walks Gray codes gray(first) .. gray(last - 1), adding proper colourings to `counts`.
void gray_walk(const Component& c, const LocalIncidence& li, std::uint64_t first, std::uint64_t last,
               std::vector<std::uint64_t>& counts) {
  const auto width = static_cast<std::uint32_t>(c.vertices.size());
  std::uint64_t g = first ^ (first >> 1);
  std::vector<std::uint32_t> ones(c.edge_masks.size());
  std::uint64_t mono = 0;
  for (std::size_t e = 0; e < ones.size(); ++e) {
    ones[e] = static_cast<std::uint32_t>(std::popcount(g & c.edge_masks[e]));
    mono += ones[e] == 0 || ones[e] == li.edge_size[e];
  }
  std::uint32_t zeros = width - static_cast<std::uint32_t>(std::popcount(g));
  if (mono == 0) ++counts[zeros];

  for (std::uint64_t i = first + 1; i < last; ++i) {
    const int v = std::countr_zero(i);
    g ^= std::uint64_t{1} << v;
    const bool up = (g >> v) & 1U;
    zeros += up ? -1 : 1;
    for (std::uint32_t p = li.offsets[v]; p < li.offsets[v + 1]; ++p) {
      const std::uint32_t e = li.edges[p];
      const std::uint32_t before = ones[e];
      const std::uint32_t after = up ? before + 1 : before - 1;
      ones[e] = after;
      const std::uint32_t full = li.edge_size[e];
      mono += static_cast<std::uint64_t>(after == 0 || after == full);
      mono -= static_cast<std::uint64_t>(before == 0 || before == full);
    }
    if (mono == 0) ++counts[zeros];
  }
}

}  // namespace

std::vector<std::uint64_t> enumerate_component_serial(const Component& c) {
  check_width(c);
  const auto width = static_cast<std::uint32_t>(c.vertices.size());
  std::vector<std::uint64_t> counts(width + 1, 0);
  gray_walk(c, build_local(c), 0, std::uint64_t{1} << width, counts);
  return counts;
}

std::vector<std::uint64_t> enumerate_component_parallel(const Component& c) {
  check_width(c);
  const auto width = static_cast<std::uint32_t>(c.vertices.size());
  const std::uint32_t chunk_bits = std::min<std::uint32_t>(width, 10);
  const std::int64_t chunks = std::int64_t{1} << chunk_bits;
  const std::uint64_t chunk_len = std::uint64_t{1} << (width - chunk_bits);
  const LocalIncidence li = build_local(c);

  std::vector<std::uint64_t> counts(width + 1, 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(width + 1, 0);
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t j = 0; j < chunks; ++j) {
      const auto first = static_cast<std::uint64_t>(j) * chunk_len;
      gray_walk(c, li, first, first + chunk_len, local);
    }
#pragma omp critical
    for (std::uint32_t z = 0; z <= width; ++z) counts[z] += local[z];
  }
  return counts;
}

}  // namespace kernels

}  // namespace hcol
