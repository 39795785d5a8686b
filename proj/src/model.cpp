#include "hcol/model.hpp"

#include "hcol/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace hcol {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

double log_big(const BigInt& x) {
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 1000) return std::log(x.convert_to<double>());
  const std::size_t shift = bits - 64;
  const BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double log_rational(const Rational& x) {
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  return log_big(boost::multiprecision::numerator(x)) -
         log_big(boost::multiprecision::denominator(x));
}

std::string_view to_string(Flavour f) {
  switch (f) {
    case Flavour::WithReplacement: return "replacement";
    case Flavour::Simple: return "simple";
    case Flavour::Planted: return "planted";
  }
  return "?";
}

Flavour flavour_from_string(std::string_view s) {
  if (s == "replacement" || s == "with_replacement" || s == "hnm") return Flavour::WithReplacement;
  if (s == "simple" || s == "hknm") return Flavour::Simple;
  if (s == "planted") return Flavour::Planted;
  throw ParameterError("unknown flavour '" + std::string(s) + "'");
}

ModelParams::ModelParams(std::uint32_t n, std::uint64_t m, std::uint32_t k,
                         std::optional<double> dprime, Flavour flavour)
    : n_(n), m_(m), k_(k), dprime_(dprime), flavour_(flavour) {
  if (k_ < 3) throw ParameterError("k must be at least 3, got " + std::to_string(k_));
  if (n_ < k_) {
    throw ParameterError("n must be at least k (n=" + std::to_string(n_) +
                         ", k=" + std::to_string(k_) + ")");
  }
}

ModelParams ModelParams::from_edges(std::uint32_t n, std::uint64_t m, std::uint32_t k,
                                    Flavour flavour) {
  return ModelParams(n, m, k, std::nullopt, flavour);
}

ModelParams ModelParams::from_density(std::uint32_t n, double dprime, std::uint32_t k,
                                      Flavour flavour) {
  if (!(dprime >= 0.0) || !std::isfinite(dprime)) {
    throw ParameterError("d' must be a finite nonnegative number");
  }
  // m = ceil(d' n / k); the slack absorbs representation error when d' n / k is integral.
  const long double x = static_cast<long double>(dprime) * n / k;
  const auto m = static_cast<std::uint64_t>(std::ceil(x - 1e-9L * std::max(1.0L, x)));
  return ModelParams(n, m, k, dprime, flavour);
}

Rational ModelParams::d() const { return Rational(BigInt(k_) * m_, BigInt(n_)); }

double ModelParams::d_value() const noexcept {
  return static_cast<double>(k_) * static_cast<double>(m_) / static_cast<double>(n_);
}

ModelParams ModelParams::with_flavour(Flavour f) const {
  ModelParams p = *this;
  p.flavour_ = f;
  return p;
}

BigInt ModelParams::total_edges() const { return binomial(n_, k_); }

// ---------------------------------------------------------------------------

Hypergraph::Hypergraph(std::uint32_t n, std::uint32_t k, std::vector<Vertex> flat)
    : n_(n), k_(k), verts_(std::move(flat)) {
  if (k_ == 0) throw ParameterError("edge size must be positive");
  if (verts_.size() % k_ != 0) throw ParameterError("vertex list is not a multiple of k");
  for (std::size_t i = 0; i < m(); ++i) {
    auto first = verts_.begin() + static_cast<std::ptrdiff_t>(i * k_);
    std::sort(first, first + k_);
    if (std::adjacent_find(first, first + k_) != first + k_) {
      throw ParameterError("edge " + std::to_string(i) + " repeats a vertex");
    }
    if (*(first + k_ - 1) >= n_) {
      throw ParameterError("edge " + std::to_string(i) + " has a vertex outside [0, n)");
    }
  }
}

Hypergraph::Hypergraph(std::uint32_t n, std::uint32_t k,
                       const std::vector<std::vector<Vertex>>& edges)
    : Hypergraph(n, k, [&] {
        std::vector<Vertex> flat;
        flat.reserve(edges.size() * k);
        for (const auto& e : edges) {
          if (e.size() != k) throw ParameterError("edge of wrong size");
          flat.insert(flat.end(), e.begin(), e.end());
        }
        return flat;
      }()) {}

bool Hypergraph::has_duplicate_edges() const {
  std::vector<std::size_t> order(m());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    auto ea = edge(a), eb = edge(b);
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    auto a = edge(order[i - 1]), b = edge(order[i]);
    if (std::equal(a.begin(), a.end(), b.begin())) return true;
  }
  return false;
}

Hypergraph Hypergraph::relabelled(std::span<const Vertex> perm) const {
  if (perm.size() != n_) throw ParameterError("permutation size differs from n");
  std::vector<Vertex> flat(verts_.size());
  std::transform(verts_.begin(), verts_.end(), flat.begin(), [&](Vertex v) { return perm[v]; });
  return Hypergraph(n_, k_, std::move(flat));
}

Incidence::Incidence(const Hypergraph& h) : offsets_(h.n() + 1, 0) {
  for (Vertex v : h.flat()) ++offsets_[v + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  edge_ids_.resize(h.flat().size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < h.m(); ++e) {
    for (Vertex v : h.edge(e)) edge_ids_[cursor[v]++] = static_cast<std::uint32_t>(e);
  }
}

// ---------------------------------------------------------------------------

Colouring::Colouring(std::uint32_t n) : n_(n), zeros_(n), words_((n + 63) / 64, 0) {}

Colouring Colouring::from_mask(std::uint32_t n, std::uint64_t mask) {
  if (n > 64) throw ParameterError("from_mask requires n <= 64");
  Colouring c(n);
  if (n < 64) mask &= (std::uint64_t{1} << n) - 1;
  if (n > 0) c.words_[0] = mask;
  c.zeros_ = n - static_cast<std::uint32_t>(std::popcount(mask));
  return c;
}

Colouring Colouring::from_string(std::string_view bits) {
  Colouring c(static_cast<std::uint32_t>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw ParameterError("colouring string may only contain 0 and 1");
    }
    c.set(static_cast<Vertex>(i), bits[i] == '1');
  }
  return c;
}

void Colouring::set(Vertex v, bool c) noexcept {
  const bool old = colour(v);
  if (old == c) return;
  words_[v >> 6] ^= std::uint64_t{1} << (v & 63);
  zeros_ += c ? -1 : 1;
}

Colouring Colouring::complement() const {
  Colouring c = *this;
  for (auto& w : c.words_) w = ~w;
  if (n_ % 64 != 0) c.words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  c.zeros_ = n_ - zeros_;
  return c;
}

std::string Colouring::to_string() const {
  std::string s(n_, '0');
  for (Vertex v = 0; v < n_; ++v) s[v] = colour(v) ? '1' : '0';
  return s;
}

std::array<double, 4> OverlapMatrix::fractions() const noexcept {
  const double total = n();
  return {counts[0] / total, counts[1] / total, counts[2] / total, counts[3] / total};
}

bool is_proper(const Hypergraph& h, const Colouring& sigma) {
  if (sigma.n() != h.n()) throw ParameterError("colouring and hypergraph differ in n");
  for (std::size_t e = 0; e < h.m(); ++e) {
    std::uint32_t ones = 0;
    for (Vertex v : h.edge(e)) ones += sigma.colour(v);
    if (ones == 0 || ones == h.k()) return false;
  }
  return true;
}

OverlapMatrix overlap(const Colouring& sigma, const Colouring& tau) {
  if (sigma.n() != tau.n()) throw ParameterError("colourings differ in n");
  OverlapMatrix o;
  for (Vertex v = 0; v < sigma.n(); ++v) ++o.counts[2 * sigma.colour(v) + tau.colour(v)];
  return o;
}

BigInt forb_count(std::uint32_t zeros, std::uint32_t n, std::uint32_t k) {
  if (zeros > n) throw ParameterError("zeros exceeds n");
  return binomial(zeros, k) + binomial(n - zeros, k);
}

}  // namespace hcol
