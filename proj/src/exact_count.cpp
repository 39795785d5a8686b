#include "hcol/exact_count.hpp"

#include "hcol/errors.hpp"
#include "hcol/generators.hpp"
#include "hcol/rng.hpp"

#include <omp.h>

#include <bit>
#include <cmath>

namespace hcol {

namespace {

// Sign of t - c * sqrt(n), computed exactly.
int sign_minus_scaled_sqrt(std::int64_t t, std::int64_t c, std::uint64_t n) {
  if (c == 0) return (t > 0) - (t < 0);
  if (t >= 0 && c < 0) return 1;
  if (t <= 0 && c > 0) return -1;
  const __int128 lhs = static_cast<__int128>(t) * t;
  const __int128 rhs = static_cast<__int128>(c) * c * static_cast<__int128>(n);
  const int mag = (lhs > rhs) - (lhs < rhs);
  return t > 0 ? mag : -mag;
}

// Components at least this wide use the chunked parallel kernel.
constexpr std::size_t kParallelWidth = 18;

std::vector<std::uint64_t> enumerate(const Component& c, Exec exec) {
  if (exec == Exec::Parallel && c.vertices.size() >= kParallelWidth && !omp_in_parallel()) {
    return kernels::enumerate_component_parallel(c);
  }
  return kernels::enumerate_component_serial(c);
}

std::vector<BigInt> binomial_row(std::uint32_t n) {
  std::vector<BigInt> row(n + 1);
  row[0] = 1;
  for (std::uint32_t j = 1; j <= n; ++j) row[j] = row[j - 1] * (n - j + 1) / j;
  return row;
}

bool proper_mask(std::uint64_t mask, std::span<const std::uint64_t> edges) {
  for (std::uint64_t e : edges) {
    const std::uint64_t on = mask & e;
    if (on == 0 || on == e) return false;
  }
  return true;
}

}  // namespace

DensityGrid::DensityGrid(std::uint32_t omega, std::uint32_t nu, std::uint32_t n)
    : omega_(omega), nu_(nu), n_(n) {
  if (omega == 0 || nu == 0) throw ParameterError("omega and nu must be positive");
  if (n == 0) throw ParameterError("density grid needs n > 0");
}

std::optional<std::uint32_t> DensityGrid::stratum_of(std::uint32_t zeros) const {
  // zeros/n in [1/2 - w/sqrt(n) + (2s-2)/(nu sqrt(n)), 1/2 - w/sqrt(n) + 2s/(nu sqrt(n)))
  // <=> (2 zeros - n) nu in [2 (2s - 2 - w nu) sqrt(n), 2 (2s - w nu) sqrt(n)).
  const std::int64_t t = (2 * static_cast<std::int64_t>(zeros) - n_) * static_cast<std::int64_t>(nu_);
  const std::int64_t wn = static_cast<std::int64_t>(omega_) * nu_;
  for (std::uint32_t s = 1; s <= strata(); ++s) {
    const std::int64_t lo = 2 * (2 * static_cast<std::int64_t>(s) - 2 - wn);
    const std::int64_t hi = 2 * (2 * static_cast<std::int64_t>(s) - wn);
    if (sign_minus_scaled_sqrt(t, lo, n_) >= 0 && sign_minus_scaled_sqrt(t, hi, n_) < 0) return s;
  }
  return std::nullopt;
}

double DensityGrid::centre(std::uint32_t s) const {
  const double root = std::sqrt(static_cast<double>(n_));
  return 0.5 - omega_ / root + (2.0 * s - 1.0) / (nu_ * root);
}

std::vector<std::uint32_t> DensityGrid::members(std::uint32_t s) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t z = 0; z <= n_; ++z) {
    if (stratum_of(z) == s) out.push_back(z);
  }
  return out;
}

std::vector<BigInt> convolve(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<BigInt> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

CountReport count_colourings(const Hypergraph& h, std::optional<DensityGrid> grid,
                             const CountOptions& options) {
  if (grid && grid->n() != h.n()) throw ParameterError("density grid built for a different n");
  const auto components = split_components(h);
  std::uint32_t covered = 0;
  for (const auto& c : components) {
    if (c.vertices.size() > options.dense_bound) {
      throw ResourceError("component with " + std::to_string(c.vertices.size()) +
                          " vertices exceeds the dense bound of " +
                          std::to_string(options.dense_bound));
    }
    covered += static_cast<std::uint32_t>(c.vertices.size());
  }

  // Isolated vertices contribute (1 + x) each.
  std::vector<BigInt> poly = binomial_row(h.n() - covered);
  for (const auto& c : components) {
    const auto counts = enumerate(c, options.exec);
    std::vector<BigInt> factor(counts.begin(), counts.end());
    poly = convolve(poly, factor);
  }

  CountReport r;
  r.by_density = std::move(poly);
  for (const auto& x : r.by_density) r.z += x;
  if (grid) {
    r.grid = grid;
    r.by_stratum.assign(grid->strata(), BigInt(0));
    for (std::uint32_t z = 0; z <= h.n(); ++z) {
      if (auto s = grid->stratum_of(z)) {
        r.by_stratum[*s - 1] += r.by_density[z];
        r.z_omega += r.by_density[z];
      }
    }
  }
  return r;
}

std::map<OverlapMatrix, BigInt> count_pairs_by_overlap(const Hypergraph& h) {
  const std::uint32_t n = h.n();
  if (n > 16) {
    throw ResourceError("pair enumeration is limited to n <= 16, got n = " + std::to_string(n));
  }
  std::vector<std::uint64_t> edges;
  for (std::size_t e = 0; e < h.m(); ++e) {
    std::uint64_t mask = 0;
    for (Vertex v : h.edge(e)) mask |= std::uint64_t{1} << v;
    edges.push_back(mask);
  }
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> proper;
  for (std::uint64_t s = 0; s <= full; ++s) {
    if (proper_mask(s, edges)) proper.push_back(s);
  }

  // Table indexed by (n00, n01, n10); n11 is implied.
  const std::size_t side = n + 1;
  std::vector<std::uint64_t> table(side * side * side, 0);
  const auto total = static_cast<std::int64_t>(proper.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(table.size(), 0);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t a = 0; a < total; ++a) {
      const std::uint64_t s = proper[static_cast<std::size_t>(a)];
      for (std::uint64_t t : proper) {
        const auto n11 = static_cast<std::size_t>(std::popcount(s & t));
        const auto n10 = static_cast<std::size_t>(std::popcount(s & ~t & full));
        const auto n01 = static_cast<std::size_t>(std::popcount(~s & t & full));
        const std::size_t n00 = n - n11 - n10 - n01;
        ++local[(n00 * side + n01) * side + n10];
      }
    }
#pragma omp critical
    for (std::size_t i = 0; i < table.size(); ++i) table[i] += local[i];
  }

  std::map<OverlapMatrix, BigInt> out;
  for (std::size_t n00 = 0; n00 < side; ++n00) {
    for (std::size_t n01 = 0; n00 + n01 < side; ++n01) {
      for (std::size_t n10 = 0; n00 + n01 + n10 < side; ++n10) {
        const std::uint64_t count = table[(n00 * side + n01) * side + n10];
        if (count == 0) continue;
        const auto n11 = static_cast<std::uint32_t>(n - n00 - n01 - n10);
        OverlapMatrix o{{static_cast<std::uint32_t>(n00), static_cast<std::uint32_t>(n01),
                         static_cast<std::uint32_t>(n10), n11}};
        out.emplace(o, BigInt(count));
      }
    }
  }
  return out;
}

GibbsPair sample_gibbs_pair(const ModelParams& params, std::uint64_t seed) {
  if (params.flavour() != Flavour::Simple) {
    throw ParameterError("sample_gibbs_pair requires flavour 'simple'");
  }
  Rng rng(seed);
  const CountOptions options{32, Exec::Serial};
  for (std::uint64_t rejections = 0; rejections < kGibbsRejectionCap; ++rejections) {
    Hypergraph h = sample_simple(params.n(), params.m(), params.k(), rng);
    const auto components = split_components(h);
    std::vector<std::vector<std::uint64_t>> per_component;
    bool colourable = true;
    for (const auto& c : components) {
      if (c.vertices.size() > options.dense_bound) {
        throw ResourceError("component with " + std::to_string(c.vertices.size()) +
                            " vertices exceeds the dense bound");
      }
      per_component.push_back(kernels::enumerate_component_serial(c));
      std::uint64_t zc = 0;
      for (auto x : per_component.back()) zc += x;
      if (zc == 0) {
        colourable = false;
        break;
      }
    }
    if (!colourable) continue;

    // Colourings factor over components: draw each independently and uniformly.
    Colouring sigma(params.n());
    std::vector<bool> covered(params.n(), false);
    BigInt z = 1;
    for (std::size_t i = 0; i < components.size(); ++i) {
      const auto& c = components[i];
      std::uint64_t zc = 0;
      for (auto x : per_component[i]) zc += x;
      z *= zc;
      std::uint64_t target = rng.below(zc);
      const std::uint64_t limit = std::uint64_t{1} << c.vertices.size();
      for (std::uint64_t mask = 0; mask < limit; ++mask) {
        if (!proper_mask(mask, c.edge_masks)) continue;
        if (target-- == 0) {
          for (std::size_t b = 0; b < c.vertices.size(); ++b) {
            sigma.set(c.vertices[b], (mask >> b) & 1U);
          }
          break;
        }
      }
      for (Vertex v : c.vertices) covered[v] = true;
    }
    for (Vertex v = 0; v < params.n(); ++v) {
      if (covered[v]) continue;
      sigma.set(v, rng() >> 63);
      z *= 2;
    }
    return {std::move(h), std::move(sigma), std::move(z), rejections};
  }
  throw ResourceError("no colourable hypergraph after " + std::to_string(kGibbsRejectionCap) +
                      " draws");
}

void to_json(nlohmann::json& j, const CountReport& r) {
  nlohmann::json by_density = nlohmann::json::array();
  for (const auto& x : r.by_density) by_density.push_back(x.str());
  j = nlohmann::json{{"Z", r.z.str()}, {"by_density", by_density}};
  if (r.grid) {
    nlohmann::json by_stratum = nlohmann::json::array();
    for (const auto& x : r.by_stratum) by_stratum.push_back(x.str());
    j["omega"] = r.grid->omega();
    j["nu"] = r.grid->nu();
    j["Z_omega"] = r.z_omega.str();
    j["by_stratum"] = by_stratum;
  } else {
    j["Z_omega"] = nullptr;
    j["by_stratum"] = nlohmann::json::array();
  }
}

}  // namespace hcol
