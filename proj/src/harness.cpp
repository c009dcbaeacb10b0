#include "sgir/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "sgir/common.hpp"
#include "sgir/parallel.hpp"
#include "sgir/plot.hpp"
#include "sgir/rng.hpp"

namespace sgir {

namespace {

using njson = nlohmann::ordered_json;

constexpr std::uint64_t kTagInstance = 0x696e7374ull;
constexpr std::uint64_t kTagCell = 0x63656c6cull;
constexpr std::uint64_t kTagRandom = 0x726e64ull;
constexpr std::uint64_t kTagDepth = 0x646570ull;
constexpr std::uint64_t kTagMarked = 0x6d726bull;

std::vector<int> range_vec(int lo, int hi, int step = 1) {
  std::vector<int> v;
  for (int x = lo; x <= hi; x += step) v.push_back(x);
  return v;
}

}  // namespace

const char* experiment_kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::GroverScaling: return "grover-scaling";
    case ExperimentKind::GroverDepth: return "grover-depth";
    case ExperimentKind::MisScaling: return "mis-scaling";
    case ExperimentKind::MisDepth: return "mis-depth";
    case ExperimentKind::MisNoise: return "mis-noise";
    case ExperimentKind::LargeNExtrapolated: return "large-n-extrapolated";
    default: return "er-variant";
  }
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::GroverScaling, ExperimentKind::GroverDepth, ExperimentKind::MisScaling,
        ExperimentKind::MisDepth, ExperimentKind::MisNoise, ExperimentKind::LargeNExtrapolated,
        ExperimentKind::ErVariant})
    if (name == experiment_kind_name(k)) return k;
  throw ParameterError("unknown experiment kind: " + name);
}

void ExperimentConfig::apply_kind_defaults() {
  switch (kind) {
    case ExperimentKind::GroverScaling:
      if (n_values.empty()) n_values = range_vec(3, 12);
      if (families.empty()) families = {"lr", "sgir", "rc", "random"};
      break;
    case ExperimentKind::GroverDepth:
      if (n_values.empty()) n_values = range_vec(8, 10);
      if (families.empty()) families = {"lr", "sgir"};
      break;
    case ExperimentKind::MisScaling:
      if (n_values.empty()) n_values = range_vec(6, 12);
      if (families.empty()) families = {"lr", "sgir"};
      break;
    case ExperimentKind::ErVariant:
      graph = GraphKind::Er;
      if (n_values.empty()) n_values = range_vec(6, 12);
      if (families.empty()) families = {"lr", "sgir"};
      break;
    case ExperimentKind::MisDepth:
      if (n_values.empty()) n_values = {6, 8, 10};
      if (families.empty()) families = {"lr", "sgir"};
      relaxed_policy_threshold = true;
      break;
    case ExperimentKind::MisNoise:
      if (n_values.empty()) n_values = {10};
      if (families.empty()) families = {"lr", "sgir"};
      if (p_values.empty()) p_values = range_vec(2, 20, 2);
      if (lambda == 2000.0) lambda = 100.0;
      if (grid.points_per_axis == 11) grid.points_per_axis = 20;
      break;
    case ExperimentKind::LargeNExtrapolated:
      if (calibration_n.empty()) calibration_n = range_vec(6, 12);
      if (eval_n.empty()) eval_n = {13, 14};
      if (families.empty()) families = {"lr", "sgir-extrap"};
      n_values = eval_n;
      break;
  }
}

// ---------------------------------------------------------------------------
// Config JSON
// ---------------------------------------------------------------------------

namespace {

void check_keys(const njson& j, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, unused] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParameterError("config: unknown key '" + key + "' in " + where);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  njson j;
  try {
    j = njson::parse(text);
  } catch (const std::exception& e) {
    throw ParameterError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j, {"kind", "n_values", "n_min", "n_max", "p", "families", "instances", "lambda",
                 "graph", "er_edge_prob", "grid", "shots", "objective", "kappa",
                 "sgir_weighting", "profile_method", "policy", "calibration_n", "eval_n",
                 "p_noise", "n_traj", "search_n_traj", "p_values", "master_seed", "threads",
                 "output_dir", "write_plots"},
             "top level");
  ExperimentConfig c;
  c.kind = experiment_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("n_values")) c.n_values = j["n_values"].get<std::vector<int>>();
  if (j.contains("n_min") || j.contains("n_max")) {
    if (!j.contains("n_min") || !j.contains("n_max") || !c.n_values.empty())
      throw ParameterError("config: give either n_values or both n_min and n_max");
    c.n_values = range_vec(j["n_min"].get<int>(), j["n_max"].get<int>());
  }
  if (j.contains("p")) c.p = j["p"].get<int>();
  if (j.contains("families")) c.families = j["families"].get<std::vector<std::string>>();
  if (j.contains("instances")) c.instances = j["instances"].get<int>();
  if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
  if (j.contains("graph")) {
    const auto g = j["graph"].get<std::string>();
    if (g == "degree3") c.graph = GraphKind::Degree3;
    else if (g == "er") c.graph = GraphKind::Er;
    else throw ParameterError("config: graph must be 'degree3' or 'er'");
  }
  if (j.contains("er_edge_prob")) c.er_edge_prob = j["er_edge_prob"].get<double>();
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, {"log_beta", "log_gamma", "points"}, "grid");
    if (g.contains("log_beta")) {
      c.grid.log_beta_lo = g["log_beta"][0].get<double>();
      c.grid.log_beta_hi = g["log_beta"][1].get<double>();
    }
    if (g.contains("log_gamma")) {
      c.grid.log_gamma_lo = g["log_gamma"][0].get<double>();
      c.grid.log_gamma_hi = g["log_gamma"][1].get<double>();
    }
    if (g.contains("points")) c.grid.points_per_axis = g["points"].get<int>();
  }
  if (j.contains("shots")) c.shots = j["shots"].get<int>();
  if (j.contains("objective")) {
    const auto o = j["objective"].get<std::string>();
    if (o == "sampled") c.objective = SearchObjective::Sampled;
    else if (o == "exact") c.objective = SearchObjective::Exact;
    else throw ParameterError("config: objective must be 'sampled' or 'exact'");
  }
  if (j.contains("kappa")) c.kappa = j["kappa"].get<double>();
  if (j.contains("sgir_weighting")) c.sgir_weighting = j["sgir_weighting"].get<std::string>();
  if (j.contains("profile_method")) c.profile_method = j["profile_method"].get<std::string>();
  if (j.contains("policy")) {
    const auto& p = j["policy"];
    check_keys(p, {"threshold", "instances_per_n", "p_start", "p_step", "p_max"}, "policy");
    if (p.contains("threshold")) {
      if (p["threshold"].is_string() && p["threshold"].get<std::string>() == "relaxed")
        c.relaxed_policy_threshold = true;
      else
        c.policy.threshold = p["threshold"].get<double>();
    }
    if (p.contains("instances_per_n")) c.policy.instances_per_n = p["instances_per_n"].get<int>();
    if (p.contains("p_start")) c.policy.p_start = p["p_start"].get<int>();
    if (p.contains("p_step")) c.policy.p_step = p["p_step"].get<int>();
    if (p.contains("p_max")) c.policy.p_max = p["p_max"].get<int>();
  }
  if (j.contains("calibration_n")) c.calibration_n = j["calibration_n"].get<std::vector<int>>();
  if (j.contains("eval_n")) c.eval_n = j["eval_n"].get<std::vector<int>>();
  if (j.contains("p_noise")) c.p_noise = j["p_noise"].get<double>();
  if (j.contains("n_traj")) c.n_traj = j["n_traj"].get<int>();
  if (j.contains("search_n_traj")) c.search_n_traj = j["search_n_traj"].get<int>();
  if (j.contains("p_values")) c.p_values = j["p_values"].get<std::vector<int>>();
  if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("write_plots")) c.write_plots = j["write_plots"].get<bool>();
  c.apply_kind_defaults();
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string ExperimentConfig::to_json() const {
  njson j;
  j["kind"] = experiment_kind_name(kind);
  j["n_values"] = n_values;
  j["p"] = p;
  j["families"] = families;
  j["instances"] = instances;
  j["lambda"] = lambda;
  j["graph"] = graph == GraphKind::Degree3 ? "degree3" : "er";
  j["er_edge_prob"] = er_edge_prob;
  j["grid"] = {{"log_beta", {grid.log_beta_lo, grid.log_beta_hi}},
               {"log_gamma", {grid.log_gamma_lo, grid.log_gamma_hi}},
               {"points", grid.points_per_axis}};
  j["shots"] = shots;
  j["objective"] = objective == SearchObjective::Sampled ? "sampled" : "exact";
  j["kappa"] = kappa;
  j["sgir_weighting"] = sgir_weighting;
  j["profile_method"] = profile_method;
  j["policy"] = {{"threshold", relaxed_policy_threshold ? njson("relaxed") : njson(policy.threshold)},
                 {"instances_per_n", policy.instances_per_n},
                 {"p_start", policy.p_start},
                 {"p_step", policy.p_step},
                 {"p_max", policy.p_max}};
  j["calibration_n"] = calibration_n;
  j["eval_n"] = eval_n;
  j["p_noise"] = p_noise;
  j["n_traj"] = n_traj;
  j["search_n_traj"] = search_n_traj;
  j["p_values"] = p_values;
  j["master_seed"] = master_seed;
  j["threads"] = threads;
  j["output_dir"] = output_dir;
  j["write_plots"] = write_plots;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Experiment machinery
// ---------------------------------------------------------------------------

namespace {

struct Ctx {
  const ExperimentConfig& cfg;
  ExperimentResult& result;
  int threads;
};

bool is_grover(ExperimentKind k) {
  return k == ExperimentKind::GroverScaling || k == ExperimentKind::GroverDepth;
}

Problem make_instance(const Ctx& ctx, int n, int inst) {
  const auto& cfg = ctx.cfg;
  const std::uint64_t seed =
      derive_seed(cfg.master_seed, kTagInstance, static_cast<std::uint64_t>(n),
                  static_cast<std::uint64_t>(inst));
  if (is_grover(cfg.kind)) {
    Rng rng(derive_seed(seed, kTagMarked));
    return make_grover_problem(n, rng.below(1ull << n));
  }
  const Graph g = cfg.graph == GraphKind::Er ? gen_er_graph(n, cfg.er_edge_prob, seed)
                                             : gen_near_regular_graph(n, 3, seed);
  return make_mis_problem(g, cfg.lambda);
}

SpectrumMethod profile_method_for(const Ctx& ctx, const Problem& problem) {
  const auto& m = ctx.cfg.profile_method;
  if (m == "dense") return SpectrumMethod::Dense;
  if (m == "lanczos") return SpectrumMethod::Lanczos;
  if (m == "symmetric") return SpectrumMethod::Symmetric;
  if (m == "analytic") return SpectrumMethod::Analytic;
  if (m != "auto") throw ParameterError("config: unknown profile_method '" + m + "'");
  if (problem.kind == ProblemKind::Grover) return SpectrumMethod::Symmetric;
  return problem.n <= 9 ? SpectrumMethod::Dense : SpectrumMethod::Lanczos;
}

SgirWeighting weighting_for(const Ctx& ctx, const Problem& problem) {
  const auto& w = ctx.cfg.sgir_weighting;
  if (w == "cumulative") return SgirWeighting::Cumulative;
  if (w == "local-adiabatic") return SgirWeighting::LocalAdiabatic;
  if (w != "auto") throw ParameterError("config: unknown sgir_weighting '" + w + "'");
  // The cumulative form slows the ramp in the right place when the gap
  // minimum sits at s=1 (MIS); the Grover minimum is interior, where the
  // local-adiabatic inversion is the schedule that tracks it.
  return problem.kind == ProblemKind::Grover ? SgirWeighting::LocalAdiabatic
                                             : SgirWeighting::Cumulative;
}

GapProfile profile_for(const Ctx& ctx, const Problem& problem, int p) {
  GapProfileOptions opts;
  opts.seed = derive_seed(ctx.cfg.master_seed, std::uint64_t{0x70726f66});
  return gap_profile(problem, p, profile_method_for(ctx, problem), opts);
}

ScheduleFactory factory_for_shape(const ScheduleShape& shape, int p) {
  return [shape, p](double b, double g) { return shape_to_schedule(shape, p, b, g); };
}

ScheduleFactory factory_for_family(const Ctx& ctx, const std::string& family,
                                   const Problem& problem, int p,
                                   const GapProfile* profile) {
  if (family == "lr")
    return [p](double b, double g) { return lr_schedule(p, b, g); };
  if (family == "rc") {
    if (problem.kind != ProblemKind::Grover)
      throw ParameterError("family 'rc' needs a Grover problem");
    return factory_for_shape(rc_shape(problem.n, 1024), p);
  }
  if (family == "sgir" || family == "sgir-extrap") {
    if (profile == nullptr) throw ParameterError("family '" + family + "' needs a gap profile");
    return factory_for_shape(sgir_shape(*profile, ctx.cfg.kappa, weighting_for(ctx, problem)), p);
  }
  throw ParameterError("unknown family '" + family + "'");
}

std::uint64_t cell_seed(const Ctx& ctx, int n, int inst, const std::string& family, int p) {
  std::uint64_t h = derive_seed(ctx.cfg.master_seed, kTagCell, static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(inst));
  h = fnv1a(h, family);
  return fnv1a(h, static_cast<std::uint64_t>(p));
}

// One scaling cell: grid search (or a single random draw) on one instance.
ResultRow scaling_cell(const Ctx& ctx, const Problem& problem, int n, int inst,
                       const std::string& family, int p, const GapProfile* profile,
                       double g_min) {
  const auto& cfg = ctx.cfg;
  ResultRow row;
  row.kind = experiment_kind_name(cfg.kind);
  row.n = n;
  row.instance = inst;
  row.family = family;
  row.p = p;
  row.seed = cell_seed(ctx, n, inst, family, p);
  row.g_min = g_min;
  try {
    if (family == "random") {
      const Schedule sched =
          random_schedule(p, derive_seed(row.seed, kTagRandom), cfg.grid.angle_ranges());
      const RunResult run = run_qaoa(problem, sched, cfg.shots, row.seed);
      row.beta_endpoint = sched.beta_endpoint;
      row.gamma_endpoint = sched.gamma_endpoint;
      row.p_s_sampled = run.p_s_sampled;
      row.p_s_exact = run.p_s_exact;
      return row;
    }
    const auto factory = factory_for_family(ctx, family, problem, p, profile);
    GridSearchOptions opts;
    opts.shots = cfg.shots;
    opts.objective = cfg.objective;
    opts.threads = ctx.threads;
    const auto gs = grid_search(problem, factory, cfg.grid, row.seed, opts);
    row.beta_endpoint = gs.best.beta_endpoint;
    row.gamma_endpoint = gs.best.gamma_endpoint;
    row.p_s_sampled = gs.best_sampled;
    row.p_s_exact = gs.best_exact;
  } catch (const Error& e) {
    row.status = e.what();
  }
  return row;
}

void add_scaling_fits(const Ctx& ctx) {
  auto& result = ctx.result;
  for (const auto& family : ctx.cfg.families) {
    std::vector<std::pair<double, double>> points;
    for (int n : ctx.cfg.n_values) {
      double sum = 0.0;
      int count = 0;
      for (const auto& row : result.rows)
        if (row.family == family && row.n == n && row.status.rfind("ok", 0) == 0) {
          sum += ctx.cfg.objective == SearchObjective::Sampled ? row.p_s_sampled : row.p_s_exact;
          ++count;
        }
      if (count > 0) points.push_back({static_cast<double>(n), sum / count});
    }
    try {
      result.fits[family] = fit_exponential(points, &result.warnings);
    } catch (const Error& e) {
      result.warnings.push_back("fit for family '" + family + "': " + e.what());
    }
  }
}

void run_scaling(Ctx& ctx) {
  const auto& cfg = ctx.cfg;
  for (int n : cfg.n_values) {
    // Grover shapes depend only on n; MIS profiles are per instance.
    GapProfile grover_profile;
    if (is_grover(cfg.kind)) {
      const Problem ref = make_grover_problem(n, 0);
      grover_profile = profile_for(ctx, ref, cfg.p);
    }
    for (int inst = 0; inst < cfg.instances; ++inst) {
      Problem problem = make_instance(ctx, n, inst);
      GapProfile mis_profile;
      std::string profile_status = "ok";
      if (!is_grover(cfg.kind)) {
        try {
          mis_profile = profile_for(ctx, problem, cfg.p);
        } catch (const Error& e) {
          profile_status = e.what();
        }
      }
      const GapProfile& profile = is_grover(cfg.kind) ? grover_profile : mis_profile;
      for (const auto& family : cfg.families) {
        if (profile_status != "ok" && (family == "sgir" || family == "sgir-extrap")) {
          ResultRow row;
          row.kind = experiment_kind_name(cfg.kind);
          row.n = n;
          row.instance = inst;
          row.family = family;
          row.p = cfg.p;
          row.status = "profile failed: " + profile_status;
          ctx.result.rows.push_back(row);
          continue;
        }
        const double g_min = profile.gaps.empty() ? 0.0 : profile.g_min();
        ctx.result.rows.push_back(
            scaling_cell(ctx, problem, n, inst, family, cfg.p, &profile, g_min));
      }
    }
  }
  add_scaling_fits(ctx);
}

void run_extrapolated(Ctx& ctx) {
  const auto& cfg = ctx.cfg;
  // Calibration: per-n mean profile over the same instance stream the
  // scaling experiment draws from.
  std::vector<std::pair<int, GapProfile>> calibration;
  for (int nc : cfg.calibration_n) {
    GapProfile mean;
    for (int inst = 0; inst < cfg.instances; ++inst) {
      const Problem problem = make_instance(ctx, nc, inst);
      const GapProfile prof = profile_for(ctx, problem, cfg.p);
      if (inst == 0) {
        mean = prof;
      } else {
        for (std::size_t j = 0; j < mean.gaps.size(); ++j) mean.gaps[j] += prof.gaps[j];
      }
    }
    for (auto& g : mean.gaps) g /= static_cast<double>(cfg.instances);
    calibration.push_back({nc, mean});
  }
  const auto variant = cfg.graph == GraphKind::Er ? ExtrapolationVariant::Er
                                                  : ExtrapolationVariant::Degree3;
  for (int ne : cfg.eval_n) {
    const GapProfile prof = extrapolated_gap_profile(calibration, ne, variant);
    for (int inst = 0; inst < cfg.instances; ++inst) {
      Problem problem = make_instance(ctx, ne, inst);
      for (const auto& family : cfg.families)
        ctx.result.rows.push_back(
            scaling_cell(ctx, problem, ne, inst, family, cfg.p, &prof, prof.g_min()));
    }
  }
  add_scaling_fits(ctx);
}

void run_depth(Ctx& ctx) {
  const auto& cfg = ctx.cfg;
  for (int n : cfg.n_values) {
    DepthScalingPolicy policy = cfg.policy;
    policy.instances_per_n = cfg.instances;
    if (cfg.relaxed_policy_threshold) policy.threshold = relaxed_threshold(n);
    for (const auto& family : cfg.families) {
      ResultRow row;
      row.kind = experiment_kind_name(cfg.kind);
      row.n = n;
      row.family = family;
      row.seed = derive_seed(cfg.master_seed, kTagDepth, static_cast<std::uint64_t>(n));
      row.g_min = 0.0;
      const ProblemGenerator gen = [&ctx, n](int inst) { return make_instance(ctx, n, inst); };
      const ShapeProvider shapes = [&ctx, &family](const Problem& problem, int p) {
        if (family == "sgir") {
          const GapProfile prof = profile_for(ctx, problem, p);
          return factory_for_family(ctx, family, problem, p, &prof);
        }
        return factory_for_family(ctx, family, problem, p, nullptr);
      };
      GridSearchOptions opts;
      opts.shots = cfg.shots;
      opts.objective = cfg.objective;
      opts.threads = ctx.threads;
      try {
        const auto res = depth_to_threshold(gen, shapes, policy, cfg.grid, row.seed, opts);
        row.p = res.p_required;
        row.p_s_sampled = row.p_s_exact = res.trace.back().p_s_avg;
        std::ostringstream trace;
        trace << "ok trace=";
        for (const auto& t : res.trace) trace << t.p << ':' << format_double(t.p_s_avg) << ';';
        row.status = trace.str();
      } catch (const DepthNotReached& e) {
        std::ostringstream trace;
        trace << "not-reached trace=";
        for (const auto& t : e.trace()) trace << t.p << ':' << format_double(t.p_s_avg) << ';';
        row.status = trace.str();
      } catch (const Error& e) {
        row.status = e.what();
      }
      ctx.result.rows.push_back(row);
    }
  }
}

void run_noise(Ctx& ctx) {
  const auto& cfg = ctx.cfg;
  const int n = cfg.n_values.front();
  for (int inst = 0; inst < cfg.instances; ++inst) {
    Problem problem = make_instance(ctx, n, inst);
    for (int p : cfg.p_values) {
      const GapProfile prof = profile_for(ctx, problem, p);
      for (const auto& family : cfg.families) {
        // noiseless branch
        ctx.result.rows.push_back(
            scaling_cell(ctx, problem, n, inst, family, p, &prof, prof.g_min()));
        ctx.result.rows.back().noisy = 0;
        // noisy branch: trajectory-sampled search, then an exact
        // density-matrix evaluation at the winning endpoints
        ResultRow row;
        row.kind = experiment_kind_name(cfg.kind);
        row.n = n;
        row.instance = inst;
        row.family = family;
        row.p = p;
        row.noisy = 1;
        row.seed = derive_seed(cell_seed(ctx, n, inst, family, p), std::uint64_t{0x6e7a});
        row.g_min = prof.g_min();
        try {
          const auto factory = factory_for_family(ctx, family, problem, p, &prof);
          GridSearchOptions sopts;
          sopts.shots = cfg.shots;
          sopts.objective = SearchObjective::Exact;  // trajectory-averaged mass
          sopts.threads = ctx.threads;
          sopts.noise = NoiseConfig{cfg.p_noise, NoiseMode::Trajectories, cfg.search_n_traj};
          const auto gs = grid_search(problem, factory, cfg.grid, row.seed, sopts);
          const Schedule sched = factory(gs.best.beta_endpoint, gs.best.gamma_endpoint);
          const NoiseConfig dm{cfg.p_noise, NoiseMode::DensityMatrix, 1};
          const RunResult final =
              run_qaoa_noisy(problem, sched, dm, cfg.shots,
                             derive_seed(row.seed, std::uint64_t{0x646d}));
          row.beta_endpoint = gs.best.beta_endpoint;
          row.gamma_endpoint = gs.best.gamma_endpoint;
          row.p_s_sampled = final.p_s_sampled;
          row.p_s_exact = final.p_s_exact;
        } catch (const Error& e) {
          row.status = e.what();
        }
        ctx.result.rows.push_back(row);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Outputs
// ---------------------------------------------------------------------------

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct SeriesStats {
  std::vector<double> xs, means, stds;
};

SeriesStats collect_series(const std::vector<ResultRow>& rows, const std::string& family,
                           int noisy, bool x_is_p, SearchObjective objective) {
  std::map<int, std::vector<double>> byx;
  for (const auto& row : rows) {
    if (row.family != family || row.noisy != noisy || row.status.rfind("ok", 0) != 0) continue;
    byx[x_is_p ? row.p : row.n].push_back(
        objective == SearchObjective::Sampled ? row.p_s_sampled : row.p_s_exact);
  }
  SeriesStats s;
  for (const auto& [x, vals] : byx) {
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    s.xs.push_back(x);
    s.means.push_back(mean);
    s.stds.push_back(vals.size() > 1 ? std::sqrt(var / (vals.size() - 1)) : 0.0);
  }
  return s;
}

void write_outputs(Ctx& ctx) {
  const auto& cfg = ctx.cfg;
  auto& result = ctx.result;
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);

  const auto path = [&](const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
  };

  {
    std::ofstream os(path("rows.csv"));
    os << rows_to_csv(result.rows);
    result.files_written.push_back(path("rows.csv"));
  }

  if (!result.fits.empty()) {
    std::ofstream os(path("fits.csv"));
    os << "family,slope,slope_err,intercept,points_used\n";
    for (const auto& [family, fit] : result.fits)
      os << family << ',' << format_double(fit.slope) << ',' << format_double(fit.slope_err)
         << ',' << format_double(fit.intercept) << ',' << fit.points_used << '\n';
    result.files_written.push_back(path("fits.csv"));
  }

  if (cfg.write_plots && !result.rows.empty()) {
    const bool depth_kind =
        cfg.kind == ExperimentKind::GroverDepth || cfg.kind == ExperimentKind::MisDepth;
    const std::string plot_kind = cfg.kind == ExperimentKind::MisNoise ? "noise"
                                  : depth_kind                         ? "depth"
                                                                       : "scaling";
    std::ofstream os(path("plot.svg"));
    const auto warn = plot_rows(os, result.rows, plot_kind, cfg.objective, result.fits);
    result.warnings.insert(result.warnings.end(), warn.begin(), warn.end());
    result.files_written.push_back(path("plot.svg"));
  }

  {
    njson manifest;
    manifest["config"] = njson::parse(cfg.to_json());
    manifest["row_count"] = result.rows.size();
    njson fits = njson::object();
    for (const auto& [family, fit] : result.fits)
      fits[family] = {{"slope", fit.slope},
                      {"slope_err", fit.slope_err},
                      {"intercept", fit.intercept},
                      {"points_used", fit.points_used}};
    manifest["fits"] = fits;
    manifest["warnings"] = result.warnings;
    manifest["files"] = result.files_written;
    std::ofstream os(path("manifest.json"));
    os << manifest.dump(2) << '\n';
    result.files_written.push_back(path("manifest.json"));
  }
}

}  // namespace

std::vector<std::string> plot_rows(std::ostream& os, const std::vector<ResultRow>& rows,
                                   const std::string& plot_kind, SearchObjective objective,
                                   const std::map<std::string, ScalingFit>& fits) {
  std::vector<std::string> families;
  for (const auto& row : rows)
    if (std::find(families.begin(), families.end(), row.family) == families.end())
      families.push_back(row.family);

  std::vector<PlotSeries> series;
  PlotSpec spec;
  if (plot_kind == "noise") {
    for (const auto& family : families)
      for (int noisy : {0, 1}) {
        const auto st = collect_series(rows, family, noisy, true, objective);
        if (st.xs.empty()) continue;
        PlotSeries ps;
        ps.label = family + (noisy ? " noisy" : " noiseless");
        ps.xs = st.xs;
        ps.ys = st.means;
        if (noisy) ps.band = st.stds;
        series.push_back(std::move(ps));
      }
    spec = {"optimal solution probability vs depth", "p", "P_s", false};
  } else if (plot_kind == "depth") {
    for (const auto& family : families) {
      std::map<int, double> byn;
      for (const auto& row : rows)
        if (row.family == family && row.status.rfind("ok", 0) == 0)
          byn[row.n] = row.p;
      if (byn.empty()) continue;
      PlotSeries ps;
      ps.label = family;
      for (const auto& [n, p] : byn) {
        ps.xs.push_back(n);
        ps.ys.push_back(p);
      }
      series.push_back(std::move(ps));
    }
    spec = {"depth to threshold", "n", "p required", false};
  } else if (plot_kind == "scaling") {
    for (const auto& family : families) {
      const auto st = collect_series(rows, family, 0, false, objective);
      if (st.xs.empty()) continue;
      PlotSeries ps;
      ps.label = family;
      ps.xs = st.xs;
      ps.ys = st.means;
      ps.band = st.stds;
      const auto it = fits.find(family);
      if (it != fits.end()) {
        constexpr double log10_2 = 0.30102999566398120;
        ps.fit = {{it->second.slope * log10_2, it->second.intercept * log10_2}};
      }
      series.push_back(std::move(ps));
    }
    spec = {"optimal solution probability vs problem size", "n", "P_s", true};
  } else {
    throw ParameterError("plot_rows: unknown plot kind '" + plot_kind + "'");
  }
  return emit_plot(os, spec, series);
}

std::vector<ResultRow> rows_from_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("kind,", 0) != 0)
    throw ParameterError("rows_from_csv: missing header");
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    // split into 13 fields; the final status field may be quoted
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (int f = 0; f < 12; ++f) {
      const auto comma = line.find(',', pos);
      if (comma == std::string::npos) throw ParameterError("rows_from_csv: short row");
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    std::string status = line.substr(pos);
    if (!status.empty() && status.front() == '"') {
      status = status.substr(1, status.size() - 2);
      std::string unescaped;
      for (std::size_t i = 0; i < status.size(); ++i) {
        if (status[i] == '"' && i + 1 < status.size() && status[i + 1] == '"') ++i;
        unescaped += status[i];
      }
      status = unescaped;
    }
    ResultRow r;
    r.kind = fields[0];
    r.n = std::stoi(fields[1]);
    r.instance = std::stoi(fields[2]);
    r.family = fields[3];
    r.p = std::stoi(fields[4]);
    r.noisy = std::stoi(fields[5]);
    r.seed = std::stoull(fields[6]);
    r.g_min = std::stod(fields[7]);
    r.beta_endpoint = std::stod(fields[8]);
    r.gamma_endpoint = std::stod(fields[9]);
    r.p_s_sampled = std::stod(fields[10]);
    r.p_s_exact = std::stod(fields[11]);
    r.status = status;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "kind,n,instance,family,p,noisy,seed,g_min,beta_endpoint,gamma_endpoint,"
        "p_s_sampled,p_s_exact,status\n";
  for (const auto& r : rows)
    os << r.kind << ',' << r.n << ',' << r.instance << ',' << r.family << ',' << r.p << ','
       << r.noisy << ',' << r.seed << ',' << format_double(r.g_min) << ','
       << format_double(r.beta_endpoint) << ',' << format_double(r.gamma_endpoint) << ','
       << format_double(r.p_s_sampled) << ',' << format_double(r.p_s_exact) << ','
       << csv_quote(r.status) << '\n';
  return os.str();
}

ExperimentResult run_experiment(const ExperimentConfig& config_in) {
  ExperimentConfig config = config_in;
  config.apply_kind_defaults();
  if (config.n_values.empty()) throw ParameterError("run_experiment: empty n range");
  config.grid.validate();

  ExperimentResult result;
  result.config = config;
  Ctx ctx{config, result, config.threads > 0 ? config.threads : default_threads()};

  switch (config.kind) {
    case ExperimentKind::GroverScaling:
    case ExperimentKind::MisScaling:
    case ExperimentKind::ErVariant:
      run_scaling(ctx);
      break;
    case ExperimentKind::LargeNExtrapolated:
      run_extrapolated(ctx);
      break;
    case ExperimentKind::GroverDepth:
    case ExperimentKind::MisDepth:
      run_depth(ctx);
      break;
    case ExperimentKind::MisNoise:
      run_noise(ctx);
      break;
  }

  write_outputs(ctx);
  return result;
}

}  // namespace sgir
