#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgir/search.hpp"
#include "sgir/stats.hpp"

namespace sgir {

enum class ExperimentKind {
  GroverScaling,        // P_s vs n at constant depth
  GroverDepth,          // depth to threshold vs n
  MisScaling,           // P_s vs n at constant depth, exact profiles
  MisDepth,             // depth to relaxed threshold vs n
  MisNoise,             // P_s vs depth, noiseless + depolarizing
  LargeNExtrapolated,   // P_s at n beyond the calibration window
  ErVariant             // alias: MisScaling on ER graphs
};

enum class GraphKind { Degree3, Er };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::GroverScaling;
  std::vector<int> n_values;         // kind-specific default when empty
  int p = 10;
  std::vector<std::string> families; // "lr" "rc" "sgir" "sgir-extrap" "random"
  int instances = 10;
  double lambda = 2000.0;
  GraphKind graph = GraphKind::Degree3;
  double er_edge_prob = 0.4;
  GridSpec grid;
  int shots = 10000;
  SearchObjective objective = SearchObjective::Sampled;
  double kappa = 2.0;
  // "auto" picks cumulative for MIS and local-adiabatic for Grover.
  std::string sgir_weighting = "auto";
  // "auto" uses dense up to n=10 and matrix-free Lanczos above.
  std::string profile_method = "auto";

  // depth-scaling kinds
  DepthScalingPolicy policy;
  bool relaxed_policy_threshold = false;  // threshold := 1/(0.75 n)

  // extrapolation kinds
  std::vector<int> calibration_n;  // default 6..12
  std::vector<int> eval_n;         // default {13, 14}

  // noise kind
  double p_noise = 0.001;
  int n_traj = 1000;
  int search_n_traj = 64;
  std::vector<int> p_values;  // default 2..20 step 2

  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 -> hardware concurrency
  std::string output_dir = "out";
  bool write_plots = true;

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
  void apply_kind_defaults();
};

struct ResultRow {
  std::string kind;
  int n = 0;
  int instance = -1;        // -1 for per-n aggregate rows (depth kinds)
  std::string family;
  int p = 0;                // depth used (p_required for depth kinds)
  int noisy = 0;            // mis-noise: 1 for the noisy branch
  std::uint64_t seed = 0;
  double g_min = 0.0;
  double beta_endpoint = 0.0;
  double gamma_endpoint = 0.0;
  double p_s_sampled = 0.0;
  double p_s_exact = 0.0;
  std::string status = "ok";  // or the error text; trace for depth kinds
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;
  std::map<std::string, ScalingFit> fits;  // per family, scaling kinds
  std::vector<std::string> warnings;
  std::vector<std::string> files_written;
};

// Executes the configured sweep and writes rows.csv, manifest.json and any
// plots/fits under config.output_dir. Cell failures are recorded in-row and
// the sweep continues. Fully reproducible from config + master_seed.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(std::istream& is);

// Re-plots result rows: plot_kind is "scaling" (P_s vs n, log y, fit lines),
// "depth" (p required vs n) or "noise" (P_s vs p, noisy/noiseless split).
// Returns plot warnings.
std::vector<std::string> plot_rows(std::ostream& os, const std::vector<ResultRow>& rows,
                                   const std::string& plot_kind, SearchObjective objective,
                                   const std::map<std::string, ScalingFit>& fits = {});

const char* experiment_kind_name(ExperimentKind k);
ExperimentKind experiment_kind_from_name(const std::string& name);

}  // namespace sgir
