#include "hcol/cycle_census.hpp"

#include "hcol/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace hcol {

namespace kernels {

namespace {

class WalkCounter {
 public:
  WalkCounter(const Hypergraph& h, const Incidence& inc, std::uint32_t L)
      : h_(h), inc_(inc), L_(L), used_vertex_(h.n(), 0), used_edge_(h.m(), 0), counts_(L - 1, 0) {}

  void root(Vertex r) {
    root_ = r;
    used_vertex_[r] = 1;
    extend(r, 1);
    used_vertex_[r] = 0;
  }

  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  bool contains(std::uint32_t e, Vertex v) const {
    auto edge = h_.edge(e);
    return std::binary_search(edge.begin(), edge.end(), v);
  }

  // `depth` vertices are on the path, the last of which is `cur`.
  void extend(Vertex cur, std::uint32_t depth) {
    const auto incident = inc_.edges_of(cur);
    if (depth >= 2) {
      for (std::uint32_t e : incident) {
        if (!used_edge_[e] && contains(e, root_)) ++counts_[depth - 2];
      }
    }
    if (depth == L_) return;
    for (std::uint32_t e : incident) {
      if (used_edge_[e]) continue;
      used_edge_[e] = 1;
      for (Vertex w : h_.edge(e)) {
        if (w <= root_ || used_vertex_[w]) continue;
        used_vertex_[w] = 1;
        extend(w, depth + 1);
        used_vertex_[w] = 0;
      }
      used_edge_[e] = 0;
    }
  }

  const Hypergraph& h_;
  const Incidence& inc_;
  std::uint32_t L_;
  Vertex root_ = 0;
  std::vector<std::uint8_t> used_vertex_;
  std::vector<std::uint8_t> used_edge_;
  std::vector<std::uint64_t> counts_;
};

void check_length(std::uint32_t L) {
  if (L < 2) throw ParameterError("cycle length bound L must be at least 2");
}

}  // namespace

std::vector<std::uint64_t> min_rooted_walks_serial(const Hypergraph& h, const Incidence& inc,
                                                   std::uint32_t L) {
  check_length(L);
  WalkCounter counter(h, inc, L);
  for (Vertex r = 0; r < h.n(); ++r) counter.root(r);
  return counter.counts();
}

std::vector<std::uint64_t> min_rooted_walks_parallel(const Hypergraph& h, const Incidence& inc,
                                                     std::uint32_t L) {
  check_length(L);
  std::vector<std::uint64_t> total(L - 1, 0);
  const auto n = static_cast<std::int64_t>(h.n());
#pragma omp parallel
  {
    WalkCounter counter(h, inc, L);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t r = 0; r < n; ++r) counter.root(static_cast<Vertex>(r));
#pragma omp critical
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += counter.counts()[i];
  }
  return total;
}

}  // namespace kernels

CycleCensus count_cycles(const Hypergraph& h, std::uint32_t L, Exec exec) {
  const Incidence inc(h);
  const bool parallel = exec == Exec::Parallel && !omp_in_parallel();
  const auto walks = parallel ? kernels::min_rooted_walks_parallel(h, inc, L)
                              : kernels::min_rooted_walks_serial(h, inc, L);
  CycleCensus census;
  census.L = L;
  for (std::uint32_t l = 2; l <= L; ++l) {
    // Fixing v_1 as the minimum vertex picks one of the l rotations.
    const std::uint64_t rooted = walks[l - 2] * l;
    if (rooted % (2 * l) != 0) {
      throw InvariantError("rooted directed cycle count " + std::to_string(rooted) +
                           " not divisible by " + std::to_string(2 * l));
    }
    census.counts.push_back(rooted / (2 * l));
  }
  return census;
}

std::uint64_t count_isolated_triangles(const Hypergraph& h) {
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
  std::vector<std::uint32_t> vertex_count(h.n(), 0);
  std::vector<bool> touched(h.n(), false);
  for (Vertex v : h.flat()) touched[v] = true;
  for (Vertex v = 0; v < h.n(); ++v) {
    if (touched[v]) ++vertex_count[find(v)];
  }
  std::vector<std::vector<std::uint32_t>> edges_of(h.n());
  for (std::size_t e = 0; e < h.m(); ++e) {
    auto& list = edges_of[find(h.edge(e)[0])];
    if (list.size() <= 3) list.push_back(static_cast<std::uint32_t>(e));
  }

  auto shared = [&](std::uint32_t a, std::uint32_t b) {
    auto ea = h.edge(a), eb = h.edge(b);
    std::size_t count = 0;
    for (std::size_t i = 0, j = 0; i < ea.size() && j < eb.size();) {
      if (ea[i] < eb[j]) ++i;
      else if (eb[j] < ea[i]) ++j;
      else ++count, ++i, ++j;
    }
    return count;
  };

  std::uint64_t triangles = 0;
  for (Vertex r = 0; r < h.n(); ++r) {
    const auto& list = edges_of[r];
    if (list.size() != 3 || vertex_count[r] != 3 * h.k() - 3) continue;
    if (shared(list[0], list[1]) == 1 && shared(list[0], list[2]) == 1 &&
        shared(list[1], list[2]) == 1) {
      ++triangles;
    }
  }
  return triangles;
}

std::string census_csv_header(std::uint32_t L) {
  std::ostringstream os;
  os << "n,m,k,seed";
  for (std::uint32_t l = 2; l <= L; ++l) os << ",C_" << l;
  return os.str();
}

std::string census_csv_row(const CycleCensus& c, const Hypergraph& h, std::uint64_t seed) {
  std::ostringstream os;
  os << h.n() << ',' << h.m() << ',' << h.k() << ',' << seed;
  for (auto x : c.counts) os << ',' << x;
  return os.str();
}

}  // namespace hcol
