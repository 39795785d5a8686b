#pragma once

#include "hcol/bigint.hpp"
#include "hcol/model.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace hcol {

enum class Exec { Serial, Parallel };

/// Balanced-density window [1/2 - omega/sqrt(n), 1/2 + omega/sqrt(n)) split
/// into omega*nu half-open strata of width 2/(nu sqrt(n)).
///
/// Stratum s (1-based) is centred at 1/2 - omega/sqrt(n) + (2s-1)/(nu sqrt(n)).
/// Membership is decided on the integer zero count with exact integer
/// arithmetic; sqrt(n) never enters as a float.
class DensityGrid {
 public:
  DensityGrid(std::uint32_t omega, std::uint32_t nu, std::uint32_t n);

  std::uint32_t omega() const noexcept { return omega_; }
  std::uint32_t nu() const noexcept { return nu_; }
  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t strata() const noexcept { return omega_ * nu_; }

  /// 1-based stratum containing zeros/n, if inside the balanced window.
  std::optional<std::uint32_t> stratum_of(std::uint32_t zeros) const;
  bool balanced(std::uint32_t zeros) const { return stratum_of(zeros).has_value(); }

  double centre(std::uint32_t s) const;
  /// Zero counts whose density lies in stratum s (|A^s| in the formulas).
  std::vector<std::uint32_t> members(std::uint32_t s) const;

 private:
  std::uint32_t omega_;
  std::uint32_t nu_;
  std::uint32_t n_;
};

struct CountReport {
  BigInt z;
  std::vector<BigInt> by_density;  // index = number of zeros
  std::optional<DensityGrid> grid;
  BigInt z_omega;                  // only meaningful with a grid
  std::vector<BigInt> by_stratum;  // index s-1
};

struct CountOptions {
  std::uint32_t dense_bound = 32;
  Exec exec = Exec::Parallel;
};

/// Connected component of a hypergraph, relabelled to local vertex ids.
struct Component {
  std::vector<Vertex> vertices;           // global ids, ascending
  std::vector<std::uint64_t> edge_masks;  // one bit per local vertex
};

/// Components that carry at least one edge. Isolated vertices are omitted.
std::vector<Component> split_components(const Hypergraph& h);

namespace kernels {

/// Number of proper colourings of a component, indexed by zero count.
/// Reference implementation: single Gray-code walk.
std::vector<std::uint64_t> enumerate_component_serial(const Component& c);

/// Same result, Gray-code walk split into independent chunks under OpenMP.
std::vector<std::uint64_t> enumerate_component_parallel(const Component& c);

}  // namespace kernels

/// Polynomial product of two density-indexed count vectors.
std::vector<BigInt> convolve(const std::vector<BigInt>& a, const std::vector<BigInt>& b);

CountReport count_colourings(const Hypergraph& h, std::optional<DensityGrid> grid = std::nullopt,
                             const CountOptions& options = {});

/// Z^(2)_rho for every realised overlap matrix rho. Requires n <= 16.
std::map<OverlapMatrix, BigInt> count_pairs_by_overlap(const Hypergraph& h);

struct GibbsPair {
  Hypergraph graph;
  Colouring colouring;
  BigInt z;
  std::uint64_t rejections = 0;
};

inline constexpr std::uint64_t kGibbsRejectionCap = 1'000'000;

/// Exact draw from the random colouring model: H_k(n, m) conditioned on
/// Z > 0, then a uniform proper colouring of it.
GibbsPair sample_gibbs_pair(const ModelParams& params, std::uint64_t seed);

void to_json(nlohmann::json& j, const CountReport& r);

}  // namespace hcol
