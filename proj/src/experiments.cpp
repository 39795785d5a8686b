#include "hcol/experiments.hpp"

#include "hcol/analytics.hpp"
#include "hcol/cycle_census.hpp"
#include "hcol/errors.hpp"
#include "hcol/exact_count.hpp"
#include "hcol/generators.hpp"
#include "hcol/rng.hpp"
#include "hcol/stats.hpp"
#include "hcol/w_distribution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace hcol {

namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Salts separating auxiliary streams from per-trial streams.
constexpr std::uint64_t kWStreamSalt = 0x5745'4344'4600'0001ULL;
constexpr std::uint64_t kPlantedStreamSalt = 0x504C'414E'5400'0002ULL;
constexpr std::uint64_t kReplacementStreamSalt = 0x5245'504C'0000'0003ULL;

template <class Body>
void for_trials(std::uint64_t trials, bool parallel, Body&& body) {
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::uint64_t>(i));
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Report start_report(std::string name, const ExperimentConfig& c, std::vector<std::string> columns) {
  c.validate();
  Report r;
  r.name = std::move(name);
  r.config = config_to_json(c);
  r.columns = std::move(columns);
  return r;
}

void add(Report& r, std::string name, bool hard, bool passed, double value, std::string detail) {
  r.criteria.push_back({std::move(name), hard, passed, value, std::move(detail)});
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<double> column(const Report& r, std::size_t col, std::function<bool(const std::vector<double>&)> keep = {}) {
  std::vector<double> out;
  for (const auto& row : r.rows) {
    if (!keep || keep(row)) out.push_back(row[col]);
  }
  return out;
}

// Mean of x within max(se_mult * SE, rel * |target|) of target.
bool within_target(double mean, double se, double target, double se_mult, double rel) {
  return std::abs(mean - target) <= std::max(se_mult * se, rel * std::abs(target));
}

std::uint32_t central_stratum(const DensityGrid& grid) {
  if (auto s = grid.stratum_of(grid.n() / 2)) return *s;
  throw ParameterError("density 1/2 lies outside every stratum");
}

// Vertex-disjoint isolated triangles planted on a random vertex order,
// followed by a remainder on the other vertices with no isolated triangle.
// This samples the model conditioned on exactly t isolated triangles.
Hypergraph sample_with_triangles(const ModelParams& p, std::uint32_t t, Rng& rng) {
  const std::uint32_t n = p.n(), k = p.k();
  const std::uint32_t block = 3 * k - 3;
  if (std::uint64_t{t} * block > n || 3ULL * t > p.m()) {
    throw InfeasibleError("cannot place " + std::to_string(t) + " isolated triangles");
  }
  const std::uint32_t rest_n = n - t * block;
  const std::uint64_t rest_m = p.m() - 3ULL * t;
  if (rest_m > 0 && rest_n < k) throw InfeasibleError("remainder too small for its edges");

  for (std::uint64_t attempt = 0; attempt < kGibbsRejectionCap; ++attempt) {
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    for (std::uint32_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    std::vector<Vertex> flat;
    flat.reserve(p.m() * k);
    for (std::uint32_t j = 0; j < t; ++j) {
      const Vertex* b = order.data() + j * block;
      const Vertex corners[3] = {b[0], b[1], b[2]};
      for (std::uint32_t side = 0; side < 3; ++side) {
        flat.push_back(corners[side]);
        flat.push_back(corners[(side + 1) % 3]);
        const Vertex* priv = b + 3 + side * (k - 2);
        flat.insert(flat.end(), priv, priv + (k - 2));
      }
    }
    if (rest_m > 0) {
      const Vertex* rest = order.data() + t * block;
      std::vector<Vertex> local;
      if (p.flavour() == Flavour::WithReplacement) {
        local.resize(rest_m * k);
        for (std::uint64_t e = 0; e < rest_m; ++e) random_k_subset(rng, rest_n, std::span<Vertex>(local.data() + e * k, k));
      } else {
        const Hypergraph remainder = sample_simple(rest_n, rest_m, k, rng);
        local.assign(remainder.flat().begin(), remainder.flat().end());
      }
      for (Vertex v : local) flat.push_back(rest[v]);
    }
    Hypergraph h(n, k, std::move(flat));
    if (count_isolated_triangles(h) == t) return h;
  }
  throw ResourceError("remainder kept forming isolated triangles");
}

double ln_z(const BigInt& z) { return z.is_zero() ? kNaN : log_big(z); }

}  // namespace

// ---------------------------------------------------------------------------

double ExperimentConfig::tol(const std::string& key) const {
  auto it = tolerances.find(key);
  if (it == tolerances.end()) throw ParameterError("missing tolerance '" + key + "'");
  return it->second;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  for (const auto& [key, value] : tolerances) {
    if (!(value > 0.0)) throw ParameterError("tolerance '" + key + "' must be positive");
  }
}

bool Report::hard_passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return !c.hard || c.passed; });
}

const Criterion& Report::criterion(std::string_view name) const {
  for (const auto& c : criteria) {
    if (c.name == name) return c;
  }
  throw ParameterError("report has no criterion '" + std::string(name) + "'");
}

std::vector<std::string> experiment_names() {
  return {"small_n_oracle", "cycle_check",   "planted_cycle_check",   "mc_lnz",
          "conditional_ratio", "triangle_conditioning", "contiguity_probe"};
}

ExperimentConfig default_config(std::string_view name) {
  ExperimentConfig c;
  c.seed = 1;
  if (name == "small_n_oracle") {
    c.params = ModelParams::from_edges(4, 1, 3, Flavour::WithReplacement);
    c.trials = 1;
  } else if (name == "cycle_check") {
    c.params = ModelParams::from_density(3000, 2.0, 3, Flavour::WithReplacement);
    c.trials = 300;
    c.L = 3;
    c.tolerances = {{"mean_rel", 0.05}, {"mean_se", 3.0}, {"dispersion_lo", 0.85},
                    {"dispersion_hi", 1.15}, {"corr_abs", 0.1}};
  } else if (name == "planted_cycle_check") {
    c.params = ModelParams::from_density(3000, 2.0, 3, Flavour::Planted);
    c.trials = 2000;
    c.L = 3;
    c.tolerances = {{"mean_rel", 0.05}, {"mean_se", 3.0}, {"separation_se", 3.0}, {"chi2_p", 0.01}};
  } else if (name == "mc_lnz") {
    c.params = ModelParams::from_density(26, 2.0, 3, Flavour::Simple);
    c.trials = 800;
    c.L = 30;
    c.w_samples = 100'000;
    c.tolerances = {{"ks_soft", 0.15}, {"ks_hard", 0.25}, {"zero_fraction", 0.02}};
  } else if (name == "conditional_ratio") {
    c.params = ModelParams::from_density(24, 2.0, 3, Flavour::WithReplacement);
    c.trials = 5000;
    c.L = 2;
    c.omega = 3;
    c.nu = 2;
    c.tolerances = {{"ratio_rel", 0.15}, {"min_bucket", 30}};
  } else if (name == "triangle_conditioning") {
    c.params = ModelParams::from_density(24, 2.0, 3, Flavour::Simple);
    c.trials = 10'000;
    c.tolerances = {{"factor_rel", 0.05}, {"min_bucket", 30}};
  } else if (name == "contiguity_probe") {
    c.params = ModelParams::from_density(18, 2.0, 3, Flavour::Simple);
    c.trials = 5000;
    c.L = 2;
    c.tolerances = {{"ratio_max", 5.0}, {"mean_se", 3.0}};
  } else {
    throw ParameterError("unknown experiment '" + std::string(name) + "'");
  }
  return c;
}

ExperimentConfig config_from_json(std::string_view name, const json& in) {
  ExperimentConfig c = default_config(name);
  // Null values mean "not set".
  json j = json::object();
  for (const auto& [key, value] : in.items()) {
    if (!value.is_null()) j[key] = value;
  }
  const ModelParams& base = c.params;
  const auto n = j.value("n", base.n());
  const auto k = j.value("k", base.k());
  const Flavour flavour =
      j.contains("flavour") ? flavour_from_string(j.at("flavour").get<std::string>()) : base.flavour();
  std::optional<ModelParams> by_density;
  if (j.contains("dprime")) by_density = ModelParams::from_density(n, j.at("dprime").get<double>(), k, flavour);
  if (j.contains("m") && (!by_density || by_density->m() != j.at("m").get<std::uint64_t>())) {
    c.params = ModelParams::from_edges(n, j.at("m").get<std::uint64_t>(), k, flavour);
  } else if (by_density) {
    c.params = *by_density;
  } else if (base.dprime()) {
    c.params = ModelParams::from_density(n, *base.dprime(), k, flavour);
  } else {
    c.params = ModelParams::from_edges(n, base.m(), k, flavour);
  }
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.L = j.value("L", c.L);
  if (j.contains("omega")) c.omega = j.at("omega").get<std::uint32_t>();
  if (j.contains("nu")) c.nu = j.at("nu").get<std::uint32_t>();
  c.stratum = j.value("stratum", c.stratum);
  c.w_samples = j.value("w_samples", c.w_samples);
  c.output_path = j.value("output_path", c.output_path);
  c.parallel = j.value("parallel", c.parallel);
  if (j.contains("tolerances")) {
    for (const auto& [key, value] : j.at("tolerances").items()) c.tolerances[key] = value.get<double>();
  }
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"n", c.params.n()},
         {"m", c.params.m()},
         {"k", c.params.k()},
         {"d", c.params.d_value()},
         {"flavour", std::string(to_string(c.params.flavour()))},
         {"trials", c.trials},
         {"seed", c.seed},
         {"L", c.L},
         {"stratum", c.stratum},
         {"w_samples", c.w_samples},
         {"tolerances", c.tolerances},
         {"output_path", c.output_path},
         {"parallel", c.parallel}};
  j["dprime"] = c.params.dprime() ? json(*c.params.dprime()) : json(nullptr);
  j["omega"] = c.omega ? json(*c.omega) : json(nullptr);
  j["nu"] = c.nu ? json(*c.nu) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------

Report run_small_n_oracle(const ExperimentConfig& c) {
  Stopwatch clock;
  Report r = start_report("small_n_oracle", c, {"outcome", "Z", "Z2"});
  const ModelParams& p = c.params;
  if (p.n() > kExactCutover) throw ResourceError("exact oracle needs n <= " + std::to_string(kExactCutover));

  // All k-sets, then every ordered m-tuple of them.
  std::vector<std::vector<Vertex>> ksets;
  {
    std::vector<Vertex> cur(p.k());
    std::function<void(std::uint32_t, Vertex)> rec = [&](std::uint32_t depth, Vertex from) {
      if (depth == p.k()) {
        ksets.push_back(cur);
        return;
      }
      for (Vertex v = from; v < p.n(); ++v) {
        cur[depth] = v;
        rec(depth + 1, v + 1);
      }
    };
    rec(0, 0);
  }
  double outcomes_d = std::pow(static_cast<double>(ksets.size()), static_cast<double>(p.m()));
  if (outcomes_d > 1e6) throw ResourceError("oracle state space of " + fmt(outcomes_d) + " outcomes is too large");
  const auto outcomes = static_cast<std::uint64_t>(std::llround(outcomes_d));

  std::vector<BigInt> sum_by_density(p.n() + 1);
  BigInt sum_z = 0, sum_z2 = 0;
  r.rows.resize(outcomes);
  std::vector<std::size_t> digits(p.m(), 0);
  for (std::uint64_t o = 0; o < outcomes; ++o) {
    std::vector<Vertex> flat;
    for (std::size_t d : digits) flat.insert(flat.end(), ksets[d].begin(), ksets[d].end());
    const Hypergraph h(p.n(), p.k(), std::move(flat));
    const CountReport rep = count_colourings(h, std::nullopt, {32, Exec::Serial});
    for (std::uint32_t z = 0; z <= p.n(); ++z) sum_by_density[z] += rep.by_density[z];
    sum_z += rep.z;
    sum_z2 += rep.z * rep.z;
    r.rows[o] = {static_cast<double>(o), rep.z.convert_to<double>(), (rep.z * rep.z).convert_to<double>()};
    for (std::size_t pos = 0; pos < digits.size() && ++digits[pos] == ksets.size(); ++pos) digits[pos] = 0;
  }

  const Rational mean_z(sum_z, BigInt(outcomes));
  const Rational mean_z2(sum_z2, BigInt(outcomes));
  Rational formula_z = 0, formula_z2 = 0;
  bool per_density_ok = true;
  for (std::uint32_t z = 0; z <= p.n(); ++z) {
    const Rational term = *first_moment_exact(p, z).exact;
    formula_z += term;
    per_density_ok = per_density_ok && term == Rational(sum_by_density[z], BigInt(outcomes));
  }
  const std::uint32_t n = p.n();
  for (std::uint32_t a = 0; a <= n; ++a) {
    for (std::uint32_t b = 0; a + b <= n; ++b) {
      for (std::uint32_t cc = 0; a + b + cc <= n; ++cc) {
        const OverlapMatrix o{{a, b, cc, n - a - b - cc}};
        formula_z2 += *pair_moment_exact(p, o).exact;
      }
    }
  }
  r.summary = {{"outcomes", outcomes},
               {"mean_Z", mean_z.str()},
               {"mean_Z2", mean_z2.str()},
               {"first_moment_formula", formula_z.str()},
               {"pair_moment_formula", formula_z2.str()}};
  add(r, "first_moment_identity", true, mean_z == formula_z, mean_z.convert_to<double>(),
      "E[Z] = " + mean_z.str() + " vs sum of exact first moments " + formula_z.str());
  add(r, "pair_moment_identity", true, mean_z2 == formula_z2, mean_z2.convert_to<double>(),
      "E[Z^2] = " + mean_z2.str() + " vs sum of exact pair moments " + formula_z2.str());
  add(r, "per_density_identity", true, per_density_ok, per_density_ok ? 1.0 : 0.0,
      "E[Z_rho] matches the exact formula for every density");
  r.wall_seconds = clock.seconds();
  return r;
}

Report run_cycle_check(const ExperimentConfig& c) {
  Stopwatch clock;
  std::vector<std::string> cols{"trial"};
  for (std::uint32_t l = 2; l <= c.L; ++l) cols.push_back("C_" + std::to_string(l));
  Report r = start_report("cycle_check", c, cols);
  const ModelParams p = c.params.with_flavour(Flavour::WithReplacement);
  r.rows.resize(c.trials);
  for_trials(c.trials, c.parallel, [&](std::uint64_t i) {
    const Hypergraph h = gen_hnm(p, derive_seed(c.seed, i));
    const CycleCensus census = count_cycles(h, c.L, Exec::Serial);
    std::vector<double> row{static_cast<double>(i)};
    for (auto x : census.counts) row.push_back(static_cast<double>(x));
    r.rows[i] = std::move(row);
  });

  json per_length = json::array();
  for (std::uint32_t l = 2; l <= c.L; ++l) {
    const auto xs = column(r, l - 1);
    const CycleLaw law = cycle_law(p, l);
    per_length.push_back({{"l", l}, {"mean", stats::mean(xs)}, {"variance", stats::variance(xs)},
                          {"se", stats::std_error(xs)}, {"lambda", law.lambda}});
  }
  r.summary["per_length"] = per_length;

  const auto c2 = column(r, 1);
  const double lambda2 = cycle_law(p, 2).lambda;
  const double mean2 = stats::mean(c2);
  if (lambda2 == 0.0) {
    const bool zeros = std::all_of(r.rows.begin(), r.rows.end(), [](const auto& row) {
      return std::all_of(row.begin() + 1, row.end(), [](double x) { return x == 0.0; });
    });
    add(r, "all_counts_zero", true, zeros, mean2, "no edges, no cycles");
  } else {
    const double se = stats::std_error(c2);
    add(r, "mean_C2", true, within_target(mean2, se, lambda2, c.tol("mean_se"), c.tol("mean_rel")), mean2,
        "mean " + fmt(mean2) + " vs lambda_2 " + fmt(lambda2) + " (SE " + fmt(se) + ")");
    const double dispersion = stats::variance(c2) / mean2;
    add(r, "dispersion_C2", true, dispersion >= c.tol("dispersion_lo") && dispersion <= c.tol("dispersion_hi"),
        dispersion, "variance / mean");
    if (c.L >= 3) {
      const double rho = stats::correlation(c2, column(r, 2));
      add(r, "correlation_C2_C3", true, std::abs(rho) <= c.tol("corr_abs"), rho, "sample correlation");
    }
  }
  r.wall_seconds = clock.seconds();
  return r;
}

Report run_planted_cycle_check(const ExperimentConfig& c) {
  Stopwatch clock;
  std::vector<std::string> cols{"trial", "zeros"};
  for (std::uint32_t l = 2; l <= c.L; ++l) cols.push_back("C_" + std::to_string(l));
  Report r = start_report("planted_cycle_check", c, cols);
  const ModelParams p = c.params.with_flavour(Flavour::Planted);
  r.rows.resize(c.trials);
  for_trials(c.trials, c.parallel, [&](std::uint64_t i) {
    // Edges drawn independently among the bichromatic ones: H(n, m) given that sigma is proper.
    const PlantedPair pair = gen_planted_pair(p, derive_seed(c.seed ^ kPlantedStreamSalt, i), false);
    const CycleCensus census = count_cycles(pair.graph, c.L, Exec::Serial);
    std::vector<double> row{static_cast<double>(i), static_cast<double>(pair.colouring.zeros())};
    for (auto x : census.counts) row.push_back(static_cast<double>(x));
    r.rows[i] = std::move(row);
  });

  json per_length = json::array();
  for (std::uint32_t l = 2; l <= c.L; ++l) {
    const auto xs = column(r, l);
    const CycleLaw law = cycle_law(p, l);
    per_length.push_back({{"l", l}, {"mean", stats::mean(xs)}, {"se", stats::std_error(xs)},
                          {"mu", law.mu}, {"lambda", law.lambda}});
  }
  r.summary["per_length"] = per_length;

  const auto c2 = column(r, 2);
  const CycleLaw law = cycle_law(p, 2);
  const double mean2 = stats::mean(c2);
  if (law.lambda == 0.0) {
    const bool zeros = std::all_of(c2.begin(), c2.end(), [](double x) { return x == 0.0; });
    add(r, "all_counts_zero", true, zeros, mean2, "no edges, no cycles");
  } else {
    const double se = stats::std_error(c2);
    add(r, "mean_C2", true, within_target(mean2, se, law.mu, c.tol("mean_se"), c.tol("mean_rel")), mean2,
        "mean " + fmt(mean2) + " vs mu_2 " + fmt(law.mu) + " (SE " + fmt(se) + ")");
    const double separation = (mean2 - law.lambda) / se;
    add(r, "separation_from_lambda2", true, std::abs(separation) >= c.tol("separation_se"), separation,
        "(mean - lambda_2) / SE");
    const auto chi = stats::chi_square_poisson(c2, law.mu);
    r.summary["chi_square"] = {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
    add(r, "poisson_fit_C2", false, chi.p_value > c.tol("chi2_p"), chi.p_value, "chi-square p-value vs Poisson(mu_2)");
  }
  r.wall_seconds = clock.seconds();
  return r;
}

Report run_mc_lnz(const ExperimentConfig& c) {
  Stopwatch clock;
  Report r = start_report("mc_lnz", c, {"trial", "replacement", "Z", "lnZ_minus_lnEZ"});
  const Flavour primary = c.params.flavour() == Flavour::WithReplacement ? Flavour::WithReplacement : Flavour::Simple;
  const Flavour secondary = primary == Flavour::Simple ? Flavour::WithReplacement : Flavour::Simple;
  const std::array<Flavour, 2> flavours{primary, secondary};

  r.rows.resize(2 * c.trials);
  for (std::size_t f = 0; f < 2; ++f) {
    const ModelParams p = c.params.with_flavour(flavours[f]);
    const double ln_ez = first_moment_total(p, MomentMode::ExactSum);
    std::optional<Rational> ez;
    if (p.n() <= kExactCutover) {
      ez = Rational(0);
      for (std::uint32_t z = 0; z <= p.n(); ++z) {
        *ez += *(flavours[f] == Flavour::Simple ? first_moment_exact_simple(p, z) : first_moment_exact(p, z)).exact;
      }
    }
    r.summary[std::string("lnEZ_") + std::string(to_string(flavours[f]))] = ln_ez;
    const std::uint64_t master = flavours[f] == Flavour::Simple ? c.seed : c.seed ^ kReplacementStreamSalt;
    for_trials(c.trials, c.parallel, [&](std::uint64_t i) {
      const Hypergraph h = generate(p, derive_seed(master, i));
      const BigInt z = count_colourings(h, std::nullopt, {32, Exec::Serial}).z;
      const double dev = z.is_zero() ? kNaN : ez ? log_rational(Rational(z) / *ez) : log_big(z) - ln_ez;
      r.rows[f * c.trials + i] = {static_cast<double>(i), flavours[f] == Flavour::WithReplacement ? 1.0 : 0.0,
                                  z.convert_to<double>(), dev};
    });
  }

  const WConfig wcfg = make_w_config(c.params, c.L);
  const auto w = w_ecdf(wcfg, c.w_samples, derive_seed(c.seed, kWStreamSalt), c.parallel);
  r.summary["w_mean"] = stats::mean(w);
  r.summary["w_median"] = w[w.size() / 2];
  if (wcfg.warning) r.summary["w_warning"] = *wcfg.warning;

  for (std::size_t f = 0; f < 2; ++f) {
    const double flag = flavours[f] == Flavour::WithReplacement ? 1.0 : 0.0;
    const auto devs = column(r, 3, [&](const auto& row) { return row[1] == flag && !std::isnan(row[3]); });
    const double zero_fraction = 1.0 - static_cast<double>(devs.size()) / static_cast<double>(c.trials);
    const double ks = devs.empty() ? 1.0 : stats::ks_distance(devs, w);
    const std::string tag(to_string(flavours[f]));
    r.summary["ks_" + tag] = ks;
    r.summary["zero_fraction_" + tag] = zero_fraction;
    r.summary["mean_dev_" + tag] = devs.empty() ? kNaN : stats::mean(devs);
    if (f == 0) {
      add(r, "ks_distance", true, ks <= c.tol("ks_hard"), ks, "two-sample KS vs W, hard limit " + fmt(c.tol("ks_hard")));
      add(r, "ks_distance_target", false, ks <= c.tol("ks_soft"), ks, "target " + fmt(c.tol("ks_soft")));
      add(r, "zero_fraction", false, zero_fraction < c.tol("zero_fraction"), zero_fraction, "trials with Z = 0");
    }
  }
  r.wall_seconds = clock.seconds();
  return r;
}

Report run_conditional_ratio_check(const ExperimentConfig& c) {
  Stopwatch clock;
  Report r = start_report("conditional_ratio", c, {"trial", "C_2", "Z_s"});
  const ModelParams& p = c.params;
  const DensityGrid grid(c.omega.value_or(3), c.nu.value_or(2), p.n());
  const std::uint32_t s = c.stratum == 0 ? central_stratum(grid) : c.stratum;
  if (s > grid.strata()) throw ParameterError("stratum out of range");
  r.summary["stratum"] = s;

  r.rows.resize(c.trials);
  for_trials(c.trials, c.parallel, [&](std::uint64_t i) {
    const Hypergraph h = generate(p, derive_seed(c.seed, i));
    const auto census = count_cycles(h, 2, Exec::Serial);
    const auto rep = count_colourings(h, grid, {32, Exec::Serial});
    r.rows[i] = {static_cast<double>(i), static_cast<double>(census.at(2)), rep.by_stratum[s - 1].convert_to<double>()};
  });

  const auto zs = column(r, 2);
  const double overall = stats::mean(zs);
  r.summary["overall_mean"] = overall;
  json buckets = json::array();
  std::vector<double> ratios;
  for (std::uint64_t cnt = 0; cnt <= 2; ++cnt) {
    const auto bucket = column(r, 2, [&](const auto& row) { return row[1] == static_cast<double>(cnt); });
    const std::uint64_t counts[1] = {cnt};
    const double predicted = conditional_ratio(p, counts);
    if (bucket.size() < c.tol("min_bucket")) {
      buckets.push_back({{"c", cnt}, {"trials", bucket.size()}, {"excluded", true}, {"predicted", predicted}});
      continue;
    }
    const double ratio = overall > 0.0 ? stats::mean(bucket) / overall : kNaN;
    ratios.push_back(ratio);
    buckets.push_back({{"c", cnt}, {"trials", bucket.size()}, {"ratio", ratio}, {"predicted", predicted}});
    add(r, "ratio_c" + std::to_string(cnt), true, std::abs(ratio / predicted - 1.0) <= c.tol("ratio_rel"), ratio,
        "predicted " + fmt(predicted));
  }
  r.summary["buckets"] = buckets;
  if (ratios.size() >= 2 && cycle_law(p, 2).lambda > 0.0) {
    const bool increasing = std::is_sorted(ratios.begin(), ratios.end()) &&
                            std::adjacent_find(ratios.begin(), ratios.end()) == ratios.end();
    add(r, "increasing_in_c", true, increasing, static_cast<double>(ratios.size()), "bucket ratios strictly increase");
  }
  r.wall_seconds = clock.seconds();
  return r;
}

Report run_triangle_conditioning(const ExperimentConfig& c) {
  Stopwatch clock;
  Report r = start_report("triangle_conditioning", c, {"trial", "t", "Z", "isolated_triangles"});
  const ModelParams& p = c.params;
  const std::uint32_t k = p.k();
  const std::uint32_t block = 3 * k - 3;

  std::vector<std::uint32_t> levels;
  for (std::uint32_t t = 0; t <= 2; ++t) {
    if (std::uint64_t{t} * block <= p.n() && 3ULL * t <= p.m()) levels.push_back(t);
  }
  const std::uint64_t per_level = std::max<std::uint64_t>(1, c.trials / levels.size());
  r.rows.resize(per_level * levels.size());
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const std::uint32_t t = levels[li];
    for_trials(per_level, c.parallel, [&](std::uint64_t i) {
      const std::uint64_t row = li * per_level + i;
      Rng rng(derive_seed(c.seed, row));
      const Hypergraph h = sample_with_triangles(p, t, rng);
      const BigInt z = count_colourings(h, std::nullopt, {32, Exec::Serial}).z;
      r.rows[row] = {static_cast<double>(row), static_cast<double>(t), z.convert_to<double>(),
                     static_cast<double>(count_isolated_triangles(h))};
    });
  }

  const bool consistent = std::all_of(r.rows.begin(), r.rows.end(), [](const auto& row) { return row[1] == row[3]; });
  add(r, "conditioning_consistent", true, consistent, consistent ? 1.0 : 0.0, "every sample has exactly t isolated triangles");

  // Colourings of one isolated triangle vs its unconditioned expectation.
  std::vector<Vertex> tri;
  for (std::uint32_t side = 0; side < 3; ++side) {
    tri.push_back(side);
    tri.push_back((side + 1) % 3);
    for (std::uint32_t j = 0; j < k - 2; ++j) tri.push_back(3 + side * (k - 2) + j);
  }
  const double colourings = count_colourings(Hypergraph(block, k, std::move(tri)), std::nullopt, {32, Exec::Serial})
                                .z.convert_to<double>();
  const double expected = std::ldexp(1.0, static_cast<int>(block)) * std::pow(1.0 - std::ldexp(1.0, 1 - static_cast<int>(k)), 3);
  const double predicted = colourings / expected;
  r.summary["predicted_factor"] = predicted;
  // Same factor from exact first moments at this n: a triangle removes 3k-3 vertices and 3 edges.
  if (std::uint64_t{block} <= p.n() && p.m() >= 3 && p.n() - block >= k) {
    const ModelParams rest = ModelParams::from_edges(p.n() - block, p.m() - 3, k, p.flavour());
    r.summary["finite_n_factor"] =
        colourings * std::exp(first_moment_total(rest, MomentMode::ExactSum) - first_moment_total(p, MomentMode::ExactSum));
  }

  json buckets = json::array();
  std::vector<std::pair<std::uint32_t, double>> means;
  for (std::uint32_t t : levels) {
    const auto zs = column(r, 2, [&](const auto& row) { return row[1] == t; });
    const double mean = stats::mean(zs);
    buckets.push_back({{"t", t}, {"trials", zs.size()}, {"mean_Z", mean}, {"se", stats::std_error(zs)}});
    if (zs.size() >= c.tol("min_bucket")) means.emplace_back(t, mean);
  }
  r.summary["buckets"] = buckets;
  if (means.size() >= 2 && means.front().second > 0.0) {
    json steps = json::array();
    for (std::size_t i = 1; i < means.size(); ++i) steps.push_back(means[i].second / means[i - 1].second);
    r.summary["step_ratios"] = steps;
    // Geometric per-triangle factor between the extreme levels.
    const double span = means.back().first - means.front().first;
    const double factor = std::pow(means.back().second / means.front().second, 1.0 / span);
    r.summary["factor"] = factor;
    add(r, "per_triangle_factor", true, std::abs(factor / predicted - 1.0) <= c.tol("factor_rel"), factor,
        "predicted " + fmt(predicted));
  } else if (p.m() == 0) {
    const bool none = std::all_of(r.rows.begin(), r.rows.end(), [](const auto& row) { return row[3] == 0.0; });
    add(r, "no_triangles", true, none, 0.0, "empty hypergraphs carry no triangles");
  }
  r.wall_seconds = clock.seconds();
  return r;
}

Report run_contiguity_probe(const ExperimentConfig& c) {
  Stopwatch clock;
  Report r = start_report("contiguity_probe", c, {"trial", "planted", "lnZ", "C_2", "isolated_triangles"});
  const ModelParams gibbs_params = c.params.with_flavour(Flavour::Simple);
  const ModelParams planted_params = c.params.with_flavour(Flavour::Planted);
  r.rows.resize(2 * c.trials);
  for_trials(c.trials, c.parallel, [&](std::uint64_t i) {
    const GibbsPair g = sample_gibbs_pair(gibbs_params, derive_seed(c.seed, i));
    r.rows[i] = {static_cast<double>(i), 0.0, ln_z(g.z), static_cast<double>(count_cycles(g.graph, 2, Exec::Serial).at(2)),
                 static_cast<double>(count_isolated_triangles(g.graph))};
    const PlantedPair pl = gen_planted_pair(planted_params, derive_seed(c.seed ^ kPlantedStreamSalt, i), true);
    const BigInt z = count_colourings(pl.graph, std::nullopt, {32, Exec::Serial}).z;
    r.rows[c.trials + i] = {static_cast<double>(i), 1.0, ln_z(z), static_cast<double>(count_cycles(pl.graph, 2, Exec::Serial).at(2)),
                            static_cast<double>(count_isolated_triangles(pl.graph))};
  });

  const auto is_planted = [](const auto& row) { return row[1] == 1.0; };
  const auto is_gibbs = [](const auto& row) { return row[1] == 0.0; };
  const auto g_lnz = column(r, 2, is_gibbs);
  const auto p_lnz = column(r, 2, is_planted);

  // Decile events of ln Z under the Gibbs law.
  std::vector<double> sorted = g_lnz;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  for (int q = 1; q < 10; ++q) cuts.push_back(sorted[sorted.size() * q / 10]);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto bin_of = [&](double x) { return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin()); };
  std::vector<double> gf(cuts.size() + 1, 0.0), pf(cuts.size() + 1, 0.0);
  for (double x : g_lnz) gf[bin_of(x)] += 1.0 / static_cast<double>(g_lnz.size());
  for (double x : p_lnz) pf[bin_of(x)] += 1.0 / static_cast<double>(p_lnz.size());
  double worst = 1.0;
  json events = json::array();
  for (std::size_t b = 0; b < gf.size(); ++b) {
    if (gf[b] == 0.0 && pf[b] == 0.0) continue;
    const double ratio = gf[b] == 0.0 || pf[b] == 0.0 ? std::numeric_limits<double>::infinity()
                                                       : std::max(pf[b] / gf[b], gf[b] / pf[b]);
    worst = std::max(worst, ratio);
    events.push_back({{"bin", b}, {"gibbs", gf[b]}, {"planted", pf[b]}});
  }
  r.summary["decile_events"] = events;

  // Total variation distance between the two laws of a discrete statistic.
  auto tv = [&](std::size_t col) {
    std::map<double, double> diff;
    for (const auto& row : r.rows) diff[row[col]] += (row[1] == 1.0 ? 1.0 : -1.0) / static_cast<double>(c.trials);
    double acc = 0.0;
    for (const auto& [value, d] : diff) acc += std::abs(d);
    return acc / 2.0;
  };
  r.summary["tv_C2"] = tv(3);
  r.summary["tv_isolated_triangles"] = tv(4);
  r.summary["tv_lnZ"] = tv(2);

  const double gm = stats::mean(g_lnz), pm = stats::mean(p_lnz);
  const double se = std::sqrt(stats::variance(g_lnz) / g_lnz.size() + stats::variance(p_lnz) / p_lnz.size());
  r.summary["gibbs_mean_lnZ"] = gm;
  r.summary["planted_mean_lnZ"] = pm;
  add(r, "decile_frequency_ratio", true, worst <= c.tol("ratio_max"), worst, "largest planted/Gibbs frequency ratio");
  const bool degenerate = !(se > 0.0);
  add(r, "planted_favours_many_colourings", true, degenerate || pm - gm >= -c.tol("mean_se") * se,
      degenerate ? 0.0 : (pm - gm) / se, "(planted - Gibbs) mean ln Z in SE units");
  r.wall_seconds = clock.seconds();
  return r;
}

Report run_experiment(std::string_view name, const ExperimentConfig& c) {
  if (name == "small_n_oracle") return run_small_n_oracle(c);
  if (name == "cycle_check") return run_cycle_check(c);
  if (name == "planted_cycle_check") return run_planted_cycle_check(c);
  if (name == "mc_lnz") return run_mc_lnz(c);
  if (name == "conditional_ratio") return run_conditional_ratio_check(c);
  if (name == "triangle_conditioning") return run_triangle_conditioning(c);
  if (name == "contiguity_probe") return run_contiguity_probe(c);
  throw ParameterError("unknown experiment '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

json report_to_json(const Report& r) {
  json criteria = json::array();
  for (const auto& c : r.criteria) {
    criteria.push_back({{"name", c.name}, {"hard", c.hard}, {"passed", c.passed},
                        {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)}, {"detail", c.detail}});
  }
  return {{"experiment", r.name},  {"config", r.config},          {"summary", r.summary},
          {"criteria", criteria},  {"rows", r.rows.size()},       {"passed", r.hard_passed()},
          {"wall_seconds", r.wall_seconds}};
}

std::string rows_to_csv(const Report& r) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "");
      if (std::isnan(row[i])) os << "nan";
      else os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

void write_report(const Report& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "report.json") << report_to_json(r).dump(2) << '\n';
  std::ofstream(dir / "rows.csv") << rows_to_csv(r);
}

}  // namespace hcol
