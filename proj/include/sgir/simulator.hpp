#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sgir/problems.hpp"
#include "sgir/schedules.hpp"

namespace sgir {

using cplx = std::complex<double>;

class Statevector {
public:
  explicit Statevector(int n);  // |+>^n

  int n() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  const std::vector<cplx>& amplitudes() const { return amp_; }
  std::vector<cplx>& amplitudes() { return amp_; }

  double norm_sq() const;
  double probability_mass(const std::vector<std::uint64_t>& basis_states) const;

private:
  int n_;
  std::vector<cplx> amp_;
};

// amplitude[x] *= exp(-i gamma H_C[x])
void apply_cost_layer(Statevector& state, const Problem& problem, double gamma);
void apply_phase_diagonal(Statevector& state, const std::vector<double>& diag, double gamma);

// exp(-i beta X) on every qubit
void apply_mixer_layer(Statevector& state, double beta);
void apply_x_rotation(Statevector& state, int qubit, double beta);

enum class NoiseMode { DensityMatrix, Trajectories };

struct NoiseConfig {
  double p_noise = 0.0;
  NoiseMode mode = NoiseMode::Trajectories;
  int n_traj = 1000;
};

struct RunResult {
  std::map<std::uint64_t, int> counts;  // bitstring -> occurrences
  int shots = 0;
  double p_s_sampled = 0.0;  // fraction of shots in the optimal set
  double p_s_exact = 0.0;    // probability mass on the optimal set
  std::uint64_t seed = 0;
  std::uint64_t schedule_hash = 0;
  std::string noise_desc = "none";

  // CSV "bitstring,count" rows plus a JSON metadata sidecar.
  void save_counts_csv(std::ostream& os, int n) const;
  std::string metadata_json(int n) const;
};

// Statevector QAOA from |+>^n: cost layer with gamma_i, then mixer with
// beta_i, i ascending; samples `shots` bitstrings from |psi|^2.
RunResult run_qaoa(const Problem& problem, const Schedule& schedule, int shots,
                   std::uint64_t seed);

// Per-gate depolarizing noise under the gate decomposition: one ZZ phase per
// edge plus one Z phase per node for the cost layer, one X rotation per
// qubit for the mixer. Each gate is followed by a depolarizing channel on
// its qubits (a two-qubit channel after ZZ). Needs a graph-structured cost,
// i.e. an MIS problem.
RunResult run_qaoa_noisy(const Problem& problem, const Schedule& schedule,
                         const NoiseConfig& noise, int shots, std::uint64_t seed);

// Exact density-matrix simulator, exposed for tests and small spot checks.
class DensityMatrix {
public:
  explicit DensityMatrix(int n);  // |+><+|^n

  int n() const { return n_; }
  std::size_t dim() const { return dim_; }
  cplx entry(std::size_t row, std::size_t col) const { return rho_[row * dim_ + col]; }
  double trace_real() const;
  std::vector<double> diagonal() const;

  void apply_phase_diagonal(const std::vector<double>& phase);  // U = diag(exp(-i phase))
  void apply_x_rotation(int qubit, double beta);
  void depolarize(int qubit, double p);
  void depolarize_pair(int q1, int q2, double p);

private:
  int n_;
  std::size_t dim_;
  std::vector<cplx> rho_;
};

}  // namespace sgir
