#include "sgir/search.hpp"

#include <cmath>
#include <ostream>

#include "sgir/common.hpp"
#include "sgir/parallel.hpp"

namespace sgir {

void GridSpec::validate() const {
  if (log_beta_lo >= log_beta_hi || log_gamma_lo >= log_gamma_hi)
    throw ParameterError("GridSpec: each range needs lo < hi");
  if (points_per_axis < 2) throw ParameterError("GridSpec: points_per_axis must be >= 2");
}

AngleRanges GridSpec::angle_ranges() const {
  return {log_beta_lo, log_beta_hi, log_gamma_lo, log_gamma_hi};
}

std::vector<GridPoint> log_grid(const GridSpec& spec) {
  spec.validate();
  const int m = spec.points_per_axis;
  std::vector<GridPoint> pts;
  pts.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double lb =
        spec.log_beta_lo + (spec.log_beta_hi - spec.log_beta_lo) * i / (m - 1);
    for (int j = 0; j < m; ++j) {
      const double lg =
          spec.log_gamma_lo + (spec.log_gamma_hi - spec.log_gamma_lo) * j / (m - 1);
      pts.push_back({std::pow(10.0, lb), std::pow(10.0, lg)});
    }
  }
  return pts;
}

GridSearchResult grid_search(const Problem& problem, const ScheduleFactory& factory,
                             const GridSpec& spec, std::uint64_t seed,
                             const GridSearchOptions& opts) {
  const auto points = log_grid(spec);
  GridSearchResult result;
  result.surface.resize(points.size());

  parallel_for(points.size(), opts.threads, [&](std::size_t idx) {
    const auto& pt = points[idx];
    const std::uint64_t cell_seed = derive_seed(seed, std::uint64_t{0x67726964},
                                                static_cast<std::uint64_t>(idx));
    RunResult run;
    try {
      const Schedule sched = factory(pt.beta_endpoint, pt.gamma_endpoint);
      run = opts.noise ? run_qaoa_noisy(problem, sched, *opts.noise, opts.shots, cell_seed)
                       : run_qaoa(problem, sched, opts.shots, cell_seed);
    } catch (const Error& e) {
      throw Error("grid_search at (beta=" + format_double(pt.beta_endpoint) +
                  ", gamma=" + format_double(pt.gamma_endpoint) + "): " + e.what());
    }
    result.surface[idx] = {pt.beta_endpoint, pt.gamma_endpoint, run.p_s_sampled, run.p_s_exact};
  });

  // Deterministic argmax: scan in grid order, tie-break toward smaller
  // gamma_end then smaller beta_start.
  bool first = true;
  for (const auto& cell : result.surface) {
    const double value =
        opts.objective == SearchObjective::Sampled ? cell.p_s_sampled : cell.p_s_exact;
    const bool better =
        first || value > result.best_p_s ||
        (value == result.best_p_s &&
         (cell.gamma_endpoint < result.best.gamma_endpoint ||
          (cell.gamma_endpoint == result.best.gamma_endpoint &&
           cell.beta_endpoint < result.best.beta_endpoint)));
    if (better) {
      result.best = {cell.beta_endpoint, cell.gamma_endpoint};
      result.best_p_s = value;
      result.best_sampled = cell.p_s_sampled;
      result.best_exact = cell.p_s_exact;
      first = false;
    }
  }
  return result;
}

void GridSearchResult::save_surface_csv(std::ostream& os) const {
  os << "beta_endpoint,gamma_endpoint,p_s_sampled,p_s_exact\n";
  for (const auto& c : surface)
    os << format_double(c.beta_endpoint) << ',' << format_double(c.gamma_endpoint) << ','
       << format_double(c.p_s_sampled) << ',' << format_double(c.p_s_exact) << '\n';
}

void DepthScalingPolicy::validate() const {
  if (threshold <= 0.0 || threshold > 1.0)
    throw ParameterError("DepthScalingPolicy: threshold must be in (0, 1]");
  if (instances_per_n < 1 || p_start < 1 || p_step < 1 || p_max < p_start)
    throw ParameterError("DepthScalingPolicy: bad sweep parameters");
}

double relaxed_threshold(int n) { return 1.0 / (0.75 * static_cast<double>(n)); }

DepthScalingResult depth_to_threshold(const ProblemGenerator& gen, const ShapeProvider& shapes,
                                      const DepthScalingPolicy& policy, const GridSpec& spec,
                                      std::uint64_t seed, const GridSearchOptions& opts) {
  policy.validate();
  // Instances are drawn once and reused across the whole p sweep.
  std::vector<Problem> instances;
  instances.reserve(static_cast<std::size_t>(policy.instances_per_n));
  for (int i = 0; i < policy.instances_per_n; ++i) instances.push_back(gen(i));

  std::vector<DepthTrace> trace;
  for (int p = policy.p_start; p <= policy.p_max; p += policy.p_step) {
    double sum = 0.0;
    for (int i = 0; i < policy.instances_per_n; ++i) {
      const auto& problem = instances[static_cast<std::size_t>(i)];
      const auto factory = shapes(problem, p);
      const std::uint64_t cell_seed =
          derive_seed(seed, std::uint64_t{0x646570}, static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(p));
      sum += grid_search(problem, factory, spec, cell_seed, opts).best_p_s;
    }
    const double avg = sum / static_cast<double>(policy.instances_per_n);
    trace.push_back({p, avg});
    if (avg >= policy.threshold) return {p, trace};
  }
  throw DepthNotReached("depth_to_threshold: average P_s below " +
                            format_double(policy.threshold) + " for every depth up to " +
                            std::to_string(policy.p_max),
                        trace);
}

}  // namespace sgir
