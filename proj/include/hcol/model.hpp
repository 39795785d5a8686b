#pragma once

#include "hcol/bigint.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hcol {

using Vertex = std::uint32_t;

enum class Flavour { WithReplacement, Simple, Planted };

std::string_view to_string(Flavour f);
Flavour flavour_from_string(std::string_view s);

/// Parameter record shared by every generator and formula.
///
/// The effective density d = k*m/n is kept as an exact rational. When the
/// record is built from a requested density d', m = ceil(d' n / k).
class ModelParams {
 public:
  static ModelParams from_edges(std::uint32_t n, std::uint64_t m, std::uint32_t k,
                                Flavour flavour = Flavour::WithReplacement);
  static ModelParams from_density(std::uint32_t n, double dprime, std::uint32_t k,
                                  Flavour flavour = Flavour::WithReplacement);

  std::uint32_t n() const noexcept { return n_; }
  std::uint64_t m() const noexcept { return m_; }
  std::uint32_t k() const noexcept { return k_; }
  std::optional<double> dprime() const noexcept { return dprime_; }
  Flavour flavour() const noexcept { return flavour_; }

  Rational d() const;
  double d_value() const noexcept;

  /// Same n, m, k with another flavour.
  ModelParams with_flavour(Flavour f) const;

  /// C(n, k) as a big integer.
  BigInt total_edges() const;

 private:
  ModelParams(std::uint32_t n, std::uint64_t m, std::uint32_t k, std::optional<double> dprime,
              Flavour flavour);

  std::uint32_t n_;
  std::uint64_t m_;
  std::uint32_t k_;
  std::optional<double> dprime_;
  Flavour flavour_;
};

/// k-uniform multi-hypergraph on vertices 0..n-1.
///
/// Edges are stored sorted, contiguously, in insertion order; the position
/// of an edge is its identity, so equal edges remain distinct objects.
/// Vertex ids are 0-based in memory and 1-based in the text format.
class Hypergraph {
 public:
  /// `flat` holds m*k vertex ids, one edge per consecutive k-block.
  Hypergraph(std::uint32_t n, std::uint32_t k, std::vector<Vertex> flat);
  Hypergraph(std::uint32_t n, std::uint32_t k, const std::vector<std::vector<Vertex>>& edges);

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t k() const noexcept { return k_; }
  std::size_t m() const noexcept { return k_ == 0 ? 0 : verts_.size() / k_; }

  std::span<const Vertex> edge(std::size_t i) const noexcept {
    return {verts_.data() + i * k_, k_};
  }
  std::span<const Vertex> flat() const noexcept { return verts_; }

  bool has_duplicate_edges() const;

  /// Applies a vertex permutation (perm[v] = new id of v). Edge order is kept.
  Hypergraph relabelled(std::span<const Vertex> perm) const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::uint32_t n_;
  std::uint32_t k_;
  std::vector<Vertex> verts_;
};

/// Vertex -> incident edge indices, in CSR form.
class Incidence {
 public:
  explicit Incidence(const Hypergraph& h);

  std::span<const std::uint32_t> edges_of(Vertex v) const noexcept {
    return {edge_ids_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> edge_ids_;
};

/// Assignment of a colour bit to each vertex.
class Colouring {
 public:
  explicit Colouring(std::uint32_t n);  // all zeros
  /// Bit i of `mask` is the colour of vertex i. Requires n <= 64.
  static Colouring from_mask(std::uint32_t n, std::uint64_t mask);
  /// Parses a "0110..." string.
  static Colouring from_string(std::string_view bits);

  std::uint32_t n() const noexcept { return n_; }
  bool colour(Vertex v) const noexcept { return (words_[v >> 6] >> (v & 63)) & 1U; }
  void set(Vertex v, bool c) noexcept;
  std::uint32_t zeros() const noexcept { return zeros_; }
  std::uint32_t ones() const noexcept { return n_ - zeros_; }
  /// rho(sigma) = zeros / n.
  Rational density() const { return Rational(zeros_, n_); }

  Colouring complement() const;
  std::string to_string() const;

  friend bool operator==(const Colouring&, const Colouring&) = default;

 private:
  std::uint32_t n_;
  std::uint32_t zeros_;
  std::vector<std::uint64_t> words_;
};

/// 2x2 contingency table of two colourings: counts[2*i + j] = |sigma^-1(i) & tau^-1(j)|.
struct OverlapMatrix {
  std::array<std::uint32_t, 4> counts{};

  std::uint32_t n() const noexcept { return counts[0] + counts[1] + counts[2] + counts[3]; }
  std::uint32_t at(int i, int j) const noexcept { return counts[2 * i + j]; }
  std::uint32_t row(int i) const noexcept { return at(i, 0) + at(i, 1); }
  std::uint32_t col(int j) const noexcept { return at(0, j) + at(1, j); }
  Rational rho(int i, int j) const { return Rational(at(i, j), n()); }
  std::array<double, 4> fractions() const noexcept;
  OverlapMatrix transposed() const noexcept { return {{counts[0], counts[2], counts[1], counts[3]}}; }

  friend auto operator<=>(const OverlapMatrix&, const OverlapMatrix&) = default;
};

bool is_proper(const Hypergraph& h, const Colouring& sigma);
OverlapMatrix overlap(const Colouring& sigma, const Colouring& tau);

/// Number of k-sets monochromatic under a colouring with `zeros` zeros:
/// C(zeros, k) + C(n - zeros, k).
BigInt forb_count(std::uint32_t zeros, std::uint32_t n, std::uint32_t k);

}  // namespace hcol
