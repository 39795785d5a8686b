#pragma once

#include "hcol/model.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hcol {

/// Everything an experiment reads. Thresholds live in `tolerances` and are
/// echoed into the report.
struct ExperimentConfig {
  ModelParams params = ModelParams::from_edges(3, 0, 3);
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  std::uint32_t L = 3;
  std::optional<std::uint32_t> omega;
  std::optional<std::uint32_t> nu;
  std::uint32_t stratum = 0;        // 0 selects the stratum containing density 1/2
  std::uint64_t w_samples = 100'000;
  std::map<std::string, double> tolerances;
  std::string output_path;
  bool parallel = true;

  double tol(const std::string& key) const;
  void validate() const;
};

struct Criterion {
  std::string name;
  bool hard = true;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

struct Report {
  std::string name;
  nlohmann::json config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Criterion> criteria;
  double wall_seconds = 0.0;

  bool hard_passed() const;
  const Criterion& criterion(std::string_view name) const;
};

std::vector<std::string> experiment_names();

/// Parameters and thresholds used when a config file leaves them out.
ExperimentConfig default_config(std::string_view name);

/// Overlays JSON keys (k, n, m | dprime, flavour, trials, seed, L, omega, nu,
/// stratum, w_samples, tolerances, output_path) onto default_config(name).
ExperimentConfig config_from_json(std::string_view name, const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

Report run_small_n_oracle(const ExperimentConfig& c);
Report run_cycle_check(const ExperimentConfig& c);
Report run_planted_cycle_check(const ExperimentConfig& c);
Report run_mc_lnz(const ExperimentConfig& c);
Report run_conditional_ratio_check(const ExperimentConfig& c);
Report run_triangle_conditioning(const ExperimentConfig& c);
Report run_contiguity_probe(const ExperimentConfig& c);

Report run_experiment(std::string_view name, const ExperimentConfig& c);

nlohmann::json report_to_json(const Report& r);
std::string rows_to_csv(const Report& r);
/// Writes report.json and rows.csv into `dir`, creating it if needed.
void write_report(const Report& r, const std::filesystem::path& dir);

}  // namespace hcol
