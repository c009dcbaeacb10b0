#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sgir/simulator.hpp"

namespace sgir {

struct GridSpec {
  double log_beta_lo = -1.5;
  double log_beta_hi = 0.5;
  double log_gamma_lo = -1.0;
  double log_gamma_hi = 1.0;
  int points_per_axis = 11;

  void validate() const;
  AngleRanges angle_ranges() const;
};

struct GridPoint {
  double beta_endpoint;
  double gamma_endpoint;
};

// Cartesian product of 10^v for v uniformly spaced per axis; beta-major order.
std::vector<GridPoint> log_grid(const GridSpec& spec);

// What the search maximises. Sampled is the default (10,000-shot estimates,
// matching the shot-based protocol); Exact uses the statevector mass.
enum class SearchObjective { Sampled, Exact };

struct SurfaceCell {
  double beta_endpoint = 0.0;
  double gamma_endpoint = 0.0;
  double p_s_sampled = 0.0;
  double p_s_exact = 0.0;
};

struct GridSearchResult {
  GridPoint best{};
  double best_p_s = 0.0;       // value of the search objective at the winner
  double best_sampled = 0.0;   // both metrics at the winning cell
  double best_exact = 0.0;
  std::vector<SurfaceCell> surface;  // grid order

  void save_surface_csv(std::ostream& os) const;
};

// Builds a schedule for given endpoints, e.g. from a ScheduleShape.
using ScheduleFactory = std::function<Schedule(double beta_endpoint, double gamma_endpoint)>;

struct GridSearchOptions {
  int shots = 10000;
  SearchObjective objective = SearchObjective::Sampled;
  std::optional<NoiseConfig> noise;  // set -> run_qaoa_noisy
  int threads = 1;
};

// Evaluates every grid point; ties break toward smaller gamma_end, then
// smaller beta_start. Per-point seeds derive from (seed, grid index), so the
// surface is reproducible and independent of evaluation order.
GridSearchResult grid_search(const Problem& problem, const ScheduleFactory& factory,
                             const GridSpec& spec, std::uint64_t seed,
                             const GridSearchOptions& opts = {});

struct DepthScalingPolicy {
  double threshold = 0.1;     // absolute P_s threshold
  int instances_per_n = 10;
  int p_start = 2;
  int p_step = 2;
  int p_max = 40;

  void validate() const;
};

// Relaxed MIS threshold rule 1/(0.75 n).
double relaxed_threshold(int n);

struct DepthTrace {
  int p;
  double p_s_avg;
};

class DepthNotReached : public Error {
public:
  DepthNotReached(const std::string& msg, std::vector<DepthTrace> trace)
      : Error(msg), trace_(std::move(trace)) {}
  const std::vector<DepthTrace>& trace() const { return trace_; }
};

using ProblemGenerator = std::function<Problem(int instance_index)>;
// Shape for a given problem at a given depth (profiles depend on p).
using ShapeProvider = std::function<ScheduleFactory(const Problem&, int p)>;

struct DepthScalingResult {
  int p_required;
  std::vector<DepthTrace> trace;
};

// Sweeps p upward; at each depth the same instances_per_n instances are
// grid-searched and their best P_s averaged. Returns the first depth whose
// average reaches the threshold, else throws DepthNotReached with the trace.
DepthScalingResult depth_to_threshold(const ProblemGenerator& gen, const ShapeProvider& shapes,
                                      const DepthScalingPolicy& policy, const GridSpec& spec,
                                      std::uint64_t seed, const GridSearchOptions& opts = {});

}  // namespace sgir
