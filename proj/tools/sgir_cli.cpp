// Command line front end: gap spectra, schedule generation, QAOA runs, grid
// searches, depth scaling and full experiment sweeps.

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sgir/common.hpp"
#include "sgir/harness.hpp"
#include "sgir/parallel.hpp"
#include "sgir/rng.hpp"
#include "sgir/search.hpp"
#include "sgir/simulator.hpp"
#include "sgir/spectra.hpp"
#include "sgir/stats.hpp"

using namespace sgir;

namespace {

struct ProblemOptions {
  std::string kind = "grover";
  int n = 6;
  std::string marked;  // bitstring, qubit 0 leftmost; random when empty
  std::string graph = "degree3";
  std::string graph_file;
  double edge_prob = 0.4;
  double lambda = 2000.0;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--problem", kind, "grover | mis")->check(CLI::IsMember({"grover", "mis"}));
    cmd->add_option("--n", n, "problem size (qubits / nodes)");
    cmd->add_option("--marked", marked, "grover marked bitstring (qubit 0 leftmost)");
    cmd->add_option("--graph", graph, "mis graph family: degree3 | er")
        ->check(CLI::IsMember({"degree3", "er"}));
    cmd->add_option("--graph-file", graph_file, "edge-list file instead of a generator");
    cmd->add_option("--edge-prob", edge_prob, "er edge probability");
    cmd->add_option("--lambda", lambda, "mis penalty coefficient");
    cmd->add_option("--instance-seed", seed, "instance generator seed");
  }

  Problem build() const {
    if (kind == "grover") {
      std::uint64_t m;
      if (marked.empty()) {
        Rng rng(derive_seed(seed, std::uint64_t{0x6d726bull}));
        m = rng.below(1ull << n);
      } else {
        if (static_cast<int>(marked.size()) != n)
          throw ParameterError("--marked length must equal --n");
        m = from_bitstring(marked);
      }
      return make_grover_problem(n, m);
    }
    Graph g;
    if (!graph_file.empty()) {
      std::ifstream in(graph_file);
      if (!in) throw ParameterError("cannot open graph file " + graph_file);
      g = Graph::load(in);
    } else if (graph == "er") {
      g = gen_er_graph(n, edge_prob, seed);
    } else {
      g = gen_near_regular_graph(n, 3, seed);
    }
    return make_mis_problem(g, lambda);
  }
};

SpectrumMethod parse_method(const std::string& m, const Problem& problem) {
  if (m == "dense") return SpectrumMethod::Dense;
  if (m == "lanczos") return SpectrumMethod::Lanczos;
  if (m == "symmetric") return SpectrumMethod::Symmetric;
  if (m == "analytic") return SpectrumMethod::Analytic;
  if (problem.kind == ProblemKind::Grover) return SpectrumMethod::Symmetric;
  return problem.n <= 9 ? SpectrumMethod::Dense : SpectrumMethod::Lanczos;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os << content;
}

std::string error_record(const std::string& kind, const std::string& message) {
  std::ostringstream os;
  os << "{\"error\": \"" << kind << "\", \"message\": \"";
  for (char c : message) {
    if (c == '"' || c == '\\') os << '\\';
    os << c;
  }
  os << "\"}";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA schedule laboratory: spectral-gap informed ramps vs baselines"};
  app.require_subcommand(1);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "emit a gap profile CSV");
  ProblemOptions spec_prob;
  spec_prob.attach(spectrum);
  int spec_p = 10;
  std::string spec_method = "auto", spec_out = "profile.csv";
  spectrum->add_option("--p", spec_p, "depth (profile has p+1 points)");
  spectrum->add_option("--method", spec_method, "auto | dense | lanczos | symmetric | analytic");
  spectrum->add_option("-o,--output", spec_out, "output CSV path");

  // schedule
  auto* schedule = app.add_subcommand("schedule", "emit a schedule CSV");
  std::string sch_family = "lr", sch_profile, sch_weighting = "cumulative";
  std::string sch_out = "schedule.csv";
  int sch_p = 10, sch_n = 6;
  double sch_beta = 0.5, sch_gamma = 1.0, sch_kappa = 2.0;
  std::uint64_t sch_seed = 1;
  schedule->add_option("--family", sch_family, "lr | rc | sgir | random")
      ->check(CLI::IsMember({"lr", "rc", "sgir", "random"}));
  schedule->add_option("--p", sch_p, "depth");
  schedule->add_option("--profile", sch_profile, "gap profile CSV (sgir)");
  schedule->add_option("--kappa", sch_kappa, "sgir concentration exponent");
  schedule->add_option("--weighting", sch_weighting, "sgir: cumulative | local-adiabatic")
      ->check(CLI::IsMember({"cumulative", "local-adiabatic"}));
  schedule->add_option("--n", sch_n, "problem size (rc)");
  schedule->add_option("--beta", sch_beta, "beta endpoint / Delta_beta");
  schedule->add_option("--gamma", sch_gamma, "gamma endpoint / Delta_gamma");
  schedule->add_option("--seed", sch_seed, "random family seed");
  schedule->add_option("-o,--output", sch_out, "output CSV path");

  // run
  auto* run = app.add_subcommand("run", "single QAOA execution");
  ProblemOptions run_prob;
  run_prob.attach(run);
  std::string run_schedule, run_counts;
  int run_shots = 10000;
  std::uint64_t run_seed = 1;
  double run_noise_p = 0.0;
  std::string run_noise_mode = "trajectories";
  int run_ntraj = 1000;
  run->add_option("--schedule", run_schedule, "schedule CSV")->required();
  run->add_option("--shots", run_shots, "measurement shots");
  run->add_option("--seed", run_seed, "sampling seed");
  run->add_option("--noise-p", run_noise_p, "depolarizing probability per gate");
  run->add_option("--noise-mode", run_noise_mode, "density-matrix | trajectories")
      ->check(CLI::IsMember({"density-matrix", "trajectories"}));
  run->add_option("--n-traj", run_ntraj, "trajectory count");
  run->add_option("-o,--output", run_counts, "counts CSV path (optional)");

  // grid-search
  auto* gsearch = app.add_subcommand("grid-search", "endpoint grid search");
  ProblemOptions gs_prob;
  gs_prob.attach(gsearch);
  std::string gs_family = "lr", gs_out, gs_objective = "sampled", gs_weighting = "auto";
  int gs_p = 10, gs_points = 11, gs_shots = 10000, gs_threads = 0;
  double gs_kappa = 2.0;
  std::vector<double> gs_log_beta{-1.5, 0.5}, gs_log_gamma{-1.0, 1.0};
  std::uint64_t gs_seed = 1;
  gsearch->add_option("--family", gs_family, "lr | rc | sgir")
      ->check(CLI::IsMember({"lr", "rc", "sgir"}));
  gsearch->add_option("--p", gs_p, "depth");
  gsearch->add_option("--points", gs_points, "grid points per axis");
  gsearch->add_option("--log-beta", gs_log_beta, "log10 beta range")->expected(2);
  gsearch->add_option("--log-gamma", gs_log_gamma, "log10 gamma range")->expected(2);
  gsearch->add_option("--shots", gs_shots, "shots per grid point");
  gsearch->add_option("--objective", gs_objective, "sampled | exact")
      ->check(CLI::IsMember({"sampled", "exact"}));
  gsearch->add_option("--kappa", gs_kappa, "sgir exponent");
  gsearch->add_option("--weighting", gs_weighting, "sgir weighting")
      ->check(CLI::IsMember({"auto", "cumulative", "local-adiabatic"}));
  gsearch->add_option("--seed", gs_seed, "search seed");
  gsearch->add_option("--threads", gs_threads, "worker threads (0 = auto)");
  gsearch->add_option("-o,--output", gs_out, "surface CSV path (optional)");

  // depth-scaling
  auto* depth = app.add_subcommand("depth-scaling", "depth to threshold");
  ProblemOptions dp_prob;
  dp_prob.attach(depth);
  std::string dp_family = "sgir", dp_threshold = "0.1";
  int dp_instances = 10, dp_start = 2, dp_step = 2, dp_max = 40, dp_shots = 10000,
      dp_threads = 0;
  std::uint64_t dp_seed = 1;
  depth->add_option("--family", dp_family, "lr | rc | sgir");
  depth->add_option("--threshold", dp_threshold, "P_s threshold, or 'relaxed' for 1/(0.75n)");
  depth->add_option("--instances", dp_instances, "instances per depth");
  depth->add_option("--p-start", dp_start, "first depth");
  depth->add_option("--p-step", dp_step, "depth increment");
  depth->add_option("--p-max", dp_max, "abort ceiling");
  depth->add_option("--shots", dp_shots, "shots per grid point");
  depth->add_option("--seed", dp_seed, "sweep seed");
  depth->add_option("--threads", dp_threads, "worker threads (0 = auto)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a config-driven sweep");
  std::string exp_config;
  experiment->add_option("config", exp_config, "JSON config file")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "exponential scaling fit of n,p_s data");
  std::string fit_file;
  fit->add_option("data", fit_file, "CSV with 'n,p_s' rows (header optional)")->required();

  // plot
  auto* plot = app.add_subcommand("plot", "render rows.csv to SVG");
  std::string plot_rows_file, plot_out = "plot.svg", plot_kind = "scaling",
              plot_objective = "sampled";
  plot->add_option("rows", plot_rows_file, "rows.csv from an experiment")->required();
  plot->add_option("--kind", plot_kind, "scaling | depth | noise")
      ->check(CLI::IsMember({"scaling", "depth", "noise"}));
  plot->add_option("--objective", plot_objective, "sampled | exact")
      ->check(CLI::IsMember({"sampled", "exact"}));
  plot->add_option("-o,--output", plot_out, "output SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) {
      const Problem problem = spec_prob.build();
      const GapProfile prof = gap_profile(problem, spec_p, parse_method(spec_method, problem));
      std::ostringstream os;
      prof.save_csv(os);
      write_file(spec_out, os.str());
      std::cout << "wrote " << spec_out << " (g_min=" << format_double(prof.g_min()) << ")\n";
    } else if (schedule->parsed()) {
      Schedule sched;
      if (sch_family == "lr") {
        sched = lr_schedule(sch_p, sch_beta, sch_gamma);
      } else if (sch_family == "rc") {
        sched = shape_to_schedule(rc_shape(sch_n, 1024), sch_p, sch_beta, sch_gamma);
      } else if (sch_family == "sgir") {
        if (sch_profile.empty()) throw ParameterError("sgir needs --profile");
        std::ifstream in(sch_profile);
        if (!in) throw ParameterError("cannot open " + sch_profile);
        const GapProfile prof = GapProfile::load_csv(in);
        const auto weighting = sch_weighting == "local-adiabatic"
                                   ? SgirWeighting::LocalAdiabatic
                                   : SgirWeighting::Cumulative;
        sched = shape_to_schedule(sgir_shape(prof, sch_kappa, weighting), sch_p, sch_beta,
                                  sch_gamma);
      } else {
        sched = random_schedule(sch_p, sch_seed);
      }
      std::ostringstream os;
      sched.save_csv(os);
      write_file(sch_out, os.str());
      std::cout << "wrote " << sch_out << "\n";
    } else if (run->parsed()) {
      const Problem problem = run_prob.build();
      std::ifstream in(run_schedule);
      if (!in) throw ParameterError("cannot open " + run_schedule);
      const Schedule sched = Schedule::load_csv(in);
      RunResult res;
      if (run_noise_p > 0.0) {
        const NoiseConfig noise{run_noise_p,
                                run_noise_mode == "density-matrix" ? NoiseMode::DensityMatrix
                                                                   : NoiseMode::Trajectories,
                                run_ntraj};
        res = run_qaoa_noisy(problem, sched, noise, run_shots, run_seed);
      } else {
        res = run_qaoa(problem, sched, run_shots, run_seed);
      }
      if (!run_counts.empty()) {
        std::ostringstream os;
        res.save_counts_csv(os, problem.n);
        write_file(run_counts, os.str());
      }
      std::cout << res.metadata_json(problem.n);
    } else if (gsearch->parsed()) {
      const Problem problem = gs_prob.build();
      GridSpec spec{gs_log_beta[0], gs_log_beta[1], gs_log_gamma[0], gs_log_gamma[1], gs_points};
      GapProfile prof;
      const GapProfile* prof_ptr = nullptr;
      ScheduleFactory factory;
      if (gs_family == "lr") {
        factory = [gs_p](double b, double g) { return lr_schedule(gs_p, b, g); };
      } else if (gs_family == "rc") {
        const auto shape = rc_shape(problem.n, 1024);
        factory = [shape, gs_p](double b, double g) {
          return shape_to_schedule(shape, gs_p, b, g);
        };
      } else {
        prof = gap_profile(problem, gs_p, parse_method("auto", problem));
        prof_ptr = &prof;
        auto weighting = SgirWeighting::Cumulative;
        if (gs_weighting == "local-adiabatic" ||
            (gs_weighting == "auto" && problem.kind == ProblemKind::Grover))
          weighting = SgirWeighting::LocalAdiabatic;
        const auto shape = sgir_shape(prof, gs_kappa, weighting);
        factory = [shape, gs_p](double b, double g) {
          return shape_to_schedule(shape, gs_p, b, g);
        };
      }
      GridSearchOptions opts;
      opts.shots = gs_shots;
      opts.objective =
          gs_objective == "exact" ? SearchObjective::Exact : SearchObjective::Sampled;
      opts.threads = gs_threads > 0 ? gs_threads : default_threads();
      const auto res = grid_search(problem, factory, spec, gs_seed, opts);
      if (!gs_out.empty()) {
        std::ostringstream os;
        res.save_surface_csv(os);
        write_file(gs_out, os.str());
      }
      std::cout << "{\"best_beta\": " << format_double(res.best.beta_endpoint)
                << ", \"best_gamma\": " << format_double(res.best.gamma_endpoint)
                << ", \"best_p_s\": " << format_double(res.best_p_s)
                << ", \"p_s_exact\": " << format_double(res.best_exact)
                << (prof_ptr ? ", \"g_min\": " + format_double(prof.g_min()) : "") << "}\n";
    } else if (depth->parsed()) {
      DepthScalingPolicy policy;
      policy.instances_per_n = dp_instances;
      policy.p_start = dp_start;
      policy.p_step = dp_step;
      policy.p_max = dp_max;
      policy.threshold =
          dp_threshold == "relaxed" ? relaxed_threshold(dp_prob.n) : std::stod(dp_threshold);
      const ProblemGenerator gen = [&dp_prob](int inst) {
        ProblemOptions o = dp_prob;
        o.seed = derive_seed(dp_prob.seed, static_cast<std::uint64_t>(inst));
        if (o.kind == "grover") o.marked.clear();
        return o.build();
      };
      const ShapeProvider shapes = [&](const Problem& problem, int p) -> ScheduleFactory {
        if (dp_family == "lr")
          return [p](double b, double g) { return lr_schedule(p, b, g); };
        if (dp_family == "rc") {
          const auto shape = rc_shape(problem.n, 1024);
          return [shape, p](double b, double g) { return shape_to_schedule(shape, p, b, g); };
        }
        const GapProfile prof = gap_profile(problem, p, parse_method("auto", problem));
        const auto weighting = problem.kind == ProblemKind::Grover
                                   ? SgirWeighting::LocalAdiabatic
                                   : SgirWeighting::Cumulative;
        const auto shape = sgir_shape(prof, 2.0, weighting);
        return [shape, p](double b, double g) { return shape_to_schedule(shape, p, b, g); };
      };
      GridSearchOptions opts;
      opts.shots = dp_shots;
      opts.threads = dp_threads > 0 ? dp_threads : default_threads();
      try {
        const auto res = depth_to_threshold(gen, shapes, policy, GridSpec{}, dp_seed, opts);
        std::cout << "{\"p_required\": " << res.p_required
                  << ", \"p_s_avg\": " << format_double(res.trace.back().p_s_avg) << "}\n";
      } catch (const DepthNotReached& e) {
        std::cout << "{\"p_required\": null, \"reason\": \"not reached by p_max\"}\n";
        return 3;
      }
    } else if (experiment->parsed()) {
      const auto config = ExperimentConfig::from_json_file(exp_config);
      const auto result = run_experiment(config);
      std::cout << "rows: " << result.rows.size() << "\n";
      for (const auto& [family, f] : result.fits)
        std::cout << "fit " << family << ": slope=" << format_double(f.slope) << " +- "
                  << format_double(f.slope_err) << "\n";
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      for (const auto& f : result.files_written) std::cout << "wrote " << f << "\n";
    } else if (fit->parsed()) {
      std::ifstream in(fit_file);
      if (!in) throw ParameterError("cannot open " + fit_file);
      std::vector<std::pair<double, double>> points;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-' || line[0] == '.'))
          continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) continue;
        points.push_back({std::stod(a), std::stod(b)});
      }
      std::vector<std::string> warnings;
      const auto f = fit_exponential(points, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "{\"slope\": " << format_double(f.slope)
                << ", \"slope_err\": " << format_double(f.slope_err)
                << ", \"intercept\": " << format_double(f.intercept)
                << ", \"points_used\": " << f.points_used << "}\n";
    } else if (plot->parsed()) {
      std::ifstream in(plot_rows_file);
      if (!in) throw ParameterError("cannot open " + plot_rows_file);
      const auto rows = rows_from_csv(in);
      std::ofstream os(plot_out);
      if (!os) throw Error("cannot write " + plot_out);
      const auto warnings = plot_rows(os, rows, plot_kind,
                                      plot_objective == "exact" ? SearchObjective::Exact
                                                                : SearchObjective::Sampled);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "wrote " << plot_out << "\n";
    }
  } catch (const ParameterError& e) {
    std::cerr << error_record("parameter", e.what()) << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << error_record("capacity", e.what()) << "\n";
    return 4;
  } catch (const ConvergenceError& e) {
    std::cerr << error_record("convergence", e.what()) << "\n";
    return 5;
  } catch (const Error& e) {
    std::cerr << error_record("error", e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_record("internal", e.what()) << "\n";
    return 1;
  }
  return 0;
}
