#include "hcol/cli.hpp"

#include "hcol/analytics.hpp"
#include "hcol/cycle_census.hpp"
#include "hcol/errors.hpp"
#include "hcol/exact_count.hpp"
#include "hcol/experiments.hpp"
#include "hcol/generators.hpp"
#include "hcol/io.hpp"
#include "hcol/stats.hpp"
#include "hcol/w_distribution.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

namespace hcol {

namespace {

using json = nlohmann::json;

struct Globals {
  std::uint64_t seed = 1;
  std::uint32_t k = 3;
  std::optional<std::uint32_t> n;
  std::optional<std::uint64_t> m;
  std::optional<double> dprime;
  std::optional<std::uint32_t> L;
  std::optional<std::uint64_t> trials;
  std::string flavour = "replacement";
  std::string out;
};

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

ModelParams params_from(const Globals& g) {
  if (!g.n) throw ParameterError("--n is required");
  const Flavour f = flavour_from_string(g.flavour);
  if (g.m) return ModelParams::from_edges(*g.n, *g.m, g.k, f);
  if (g.dprime) return ModelParams::from_density(*g.n, *g.dprime, g.k, f);
  throw ParameterError("one of --m or --dprime is required");
}

json params_json(const ModelParams& p) {
  json j{{"n", p.n()}, {"m", p.m()}, {"k", p.k()}, {"d", p.d_value()}, {"flavour", std::string(to_string(p.flavour()))}};
  j["dprime"] = p.dprime() ? json(*p.dprime()) : json(nullptr);
  return j;
}

void emit(const json& j, const Globals& g, std::ostream& out) {
  if (g.out.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream file(g.out);
  if (!file) throw Error("cannot write " + g.out);
  file << j.dump(2) << '\n';
}

void log_config(std::ostream& err, const std::string& command, const json& config) {
  err << "[hcol] " << command << " " << config.dump() << '\n';
}

Hypergraph input_graph(const std::string& in, const Globals& g, std::ostream& err) {
  if (!in.empty()) return load_hypergraph(in);
  const ModelParams p = params_from(g);
  log_config(err, "generated input", params_json(p));
  return generate(p, g.seed);
}

json formulas(const ModelParams& p, std::uint32_t l) {
  const CycleLaw law = cycle_law(p, l);
  const RegimeFlags regime = regime_check(p);
  const QuadraticConstants q = quadratic_constants(p);
  json j{{"params", params_json(p)},
         {"l", l},
         {"lambda", law.lambda},
         {"delta", law.delta},
         {"mu", law.mu},
         {"series_ratio", series_ratio(p)},
         {"regime", {{"first_moment_ok", regime.first_moment_ok},
                     {"main_theorem_ok", regime.main_theorem_ok},
                     {"series_ok", regime.series_ok}}},
         {"quadratic", {{"b_pair", q.b_pair}, {"b_first", q.b_first}, {"d_pair", q.d_pair}}},
         {"ln_EZ_asymptotic", finite_or_null(first_moment_total(p, MomentMode::Asymptotic))},
         {"f1_half", f1_value(0.5, p)}};
  if (p.n() <= 2000) j["ln_EZ_exact"] = finite_or_null(first_moment_total(p, MomentMode::ExactSum));
  try {
    const SecondMomentRatio r = second_moment_ratio(p);
    j["second_moment"] = {{"closed_form", r.closed_form}, {"partial_sum", r.partial_sum},
                          {"tail_bound", r.tail_bound}, {"L", r.L}};
  } catch (const DivergenceError& e) {
    j["second_moment"] = {{"divergent", true}, {"message", e.what()}};
  }
  return j;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact counting and Monte Carlo tools for 2-colourings of random k-uniform hypergraphs", "hcol"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--k", g.k, "Edge size");
  app.add_option("--n", g.n, "Vertices");
  auto* m_opt = app.add_option("--m", g.m, "Edges");
  auto* d_opt = app.add_option("--dprime", g.dprime, "Requested density; m = ceil(d' n / k)");
  m_opt->excludes(d_opt);
  app.add_option("--L", g.L, "Largest cycle length");
  app.add_option("--trials", g.trials, "Trials");
  app.add_option("--flavour", g.flavour, "replacement | simple | planted");
  app.add_option("--out", g.out, "Output file (directory for experiment)");

  auto* gen = app.add_subcommand("generate", "Draw a hypergraph");

  auto* count = app.add_subcommand("count", "Count proper 2-colourings");
  std::string count_in;
  std::optional<std::uint32_t> omega, nu;
  bool serial = false;
  count->add_option("--in", count_in, "Hypergraph file");
  count->add_option("--omega", omega, "Balanced window half-width");
  count->add_option("--nu", nu, "Strata per unit width");
  count->add_flag("--serial", serial, "Use the serial reference kernel");

  auto* cycles = app.add_subcommand("cycles", "Short cycle census");
  std::string cycles_in;
  cycles->add_option("--in", cycles_in, "Hypergraph file");

  auto* form = app.add_subcommand("formulas", "Closed-form quantities");
  std::uint32_t length = 2;
  form->add_option("--l", length, "Cycle length");

  auto* ws = app.add_subcommand("wsample", "Sample the limiting law W");
  std::uint64_t samples = 100'000;
  ws->add_option("--samples", samples, "Number of draws");

  auto* exp = app.add_subcommand("experiment", "Run a named experiment");
  std::string exp_name, config_path;
  exp->add_option("name", exp_name, "Experiment")->required()->check(CLI::IsMember(experiment_names()));
  exp->add_option("--config", config_path, "JSON config file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const ModelParams p = params_from(g);
      log_config(err, "generate", {{"params", params_json(p)}, {"seed", g.seed}, {"out", g.out}});
      const Hypergraph h = generate(p, g.seed);
      if (g.out.empty()) {
        out << hypergraph_to_json(h).dump() << '\n';
      } else {
        save_hypergraph(h, g.out);
      }
    } else if (count->parsed()) {
      const Hypergraph h = input_graph(count_in, g, err);
      std::optional<DensityGrid> grid;
      if (omega || nu) grid = DensityGrid(omega.value_or(3), nu.value_or(2), h.n());
      log_config(err, "count", {{"in", count_in}, {"n", h.n()}, {"m", h.m()}, {"k", h.k()},
                                {"omega", omega ? json(*omega) : json(nullptr)},
                                {"nu", nu ? json(*nu) : json(nullptr)}, {"serial", serial}});
      json j = count_colourings(h, grid, {32, serial ? Exec::Serial : Exec::Parallel});
      emit(j, g, out);
    } else if (cycles->parsed()) {
      const Hypergraph h = input_graph(cycles_in, g, err);
      const std::uint32_t L = g.L.value_or(3);
      log_config(err, "cycles", {{"in", cycles_in}, {"n", h.n()}, {"m", h.m()}, {"k", h.k()}, {"L", L}, {"seed", g.seed}});
      const CycleCensus c = count_cycles(h, L);
      json j{{"n", h.n()}, {"m", h.m()}, {"k", h.k()}, {"L", L}};
      for (std::uint32_t l = 2; l <= L; ++l) j["C_" + std::to_string(l)] = c.at(l);
      emit(j, g, out);
    } else if (form->parsed()) {
      const ModelParams p = params_from(g);
      log_config(err, "formulas", {{"params", params_json(p)}, {"l", length}});
      emit(formulas(p, length), g, out);
    } else if (ws->parsed()) {
      const ModelParams p = params_from(g);
      const WConfig w = make_w_config(p, g.L);
      log_config(err, "wsample", {{"params", params_json(p)}, {"L", w.L}, {"samples", samples}, {"seed", g.seed}});
      if (w.warning) err << "[hcol] warning: " << *w.warning << '\n';
      const auto xs = w_ecdf(w, samples, g.seed);
      std::vector<double> e1(xs.size()), e2(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        e1[i] = std::exp(xs[i]);
        e2[i] = std::exp(2 * xs[i]);
      }
      json quantiles = json::object();
      for (double q : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
        quantiles[std::to_string(q).substr(0, 4)] = xs[std::min(xs.size() - 1, static_cast<std::size_t>(q * xs.size()))];
      }
      json j{{"params", params_json(p)}, {"L", w.L}, {"samples", samples}, {"tail_bound", w.tail_bound},
             {"mean_W", stats::mean(xs)}, {"mean_exp_W", stats::mean(e1)}, {"mean_exp_2W", stats::mean(e2)},
             {"quantiles", quantiles}};
      try {
        const WMoments mom = w_moments(w);
        j["analytic"] = {{"mean_exp_W", mom.mean_exp_w}, {"mean_exp_2W", mom.mean_exp_2w}};
      } catch (const DivergenceError&) {
        j["analytic"] = nullptr;
      }
      if (w.warning) j["warning"] = *w.warning;
      emit(j, g, out);
    } else if (exp->parsed()) {
      json j = json::object();
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw Error("cannot open " + config_path);
        try {
          j = json::parse(in);
        } catch (const json::parse_error& e) {
          throw ParameterError(std::string("bad config JSON: ") + e.what());
        }
      }
      if (app.get_option("--seed")->count()) j["seed"] = g.seed;
      if (app.get_option("--k")->count()) j["k"] = g.k;
      if (g.n) j["n"] = *g.n;
      if (g.m) {
        j["m"] = *g.m;
        j.erase("dprime");
      }
      if (g.dprime) {
        j["dprime"] = *g.dprime;
        j.erase("m");
      }
      if (g.L) j["L"] = *g.L;
      if (g.trials) j["trials"] = *g.trials;
      if (app.get_option("--flavour")->count()) j["flavour"] = g.flavour;
      if (!g.out.empty()) j["output_path"] = g.out;
      const ExperimentConfig c = config_from_json(exp_name, j);
      log_config(err, "experiment " + exp_name, config_to_json(c));
      const Report r = run_experiment(exp_name, c);
      if (!c.output_path.empty()) write_report(r, c.output_path);
      out << report_to_json(r).dump(2) << '\n';
      for (const auto& cr : r.criteria) {
        err << "[hcol] " << (cr.passed ? "PASS" : (cr.hard ? "FAIL" : "WARN")) << " " << cr.name << ": " << cr.detail << '\n';
      }
      return r.hard_passed() ? kExitOk : kExitFailure;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace hcol
