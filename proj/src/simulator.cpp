#include "sgir/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "sgir/common.hpp"
#include "sgir/rng.hpp"

namespace sgir {

namespace {

constexpr int kStatevectorBudget = 26;  // 2^26 amplitudes = 1 GiB
constexpr int kDensityMatrixBudget = 12;

std::vector<double> probabilities(const std::vector<cplx>& amp) {
  std::vector<double> p(amp.size());
  for (std::size_t i = 0; i < amp.size(); ++i) p[i] = std::norm(amp[i]);
  return p;
}

std::map<std::uint64_t, int> sample_counts(const std::vector<double>& probs, int shots,
                                           Rng& rng) {
  std::vector<double> cum(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cum[i] = acc;
  }
  std::map<std::uint64_t, int> counts;
  for (int s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::uint64_t x = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cum.begin(), static_cast<std::ptrdiff_t>(cum.size()) - 1));
    ++counts[x];
  }
  return counts;
}

double mass_on(const std::vector<double>& probs, const std::vector<std::uint64_t>& set) {
  double m = 0.0;
  for (std::uint64_t x : set) m += probs[x];
  return m;
}

}  // namespace

Statevector::Statevector(int n) : n_(n) {
  if (n < 1 || n > kStatevectorBudget)
    throw CapacityError("Statevector: n out of range [1, 26]");
  const std::size_t N = 1ull << n;
  amp_.assign(N, cplx(1.0 / std::sqrt(static_cast<double>(N)), 0.0));
}

double Statevector::norm_sq() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s;
}

double Statevector::probability_mass(const std::vector<std::uint64_t>& basis_states) const {
  double m = 0.0;
  for (std::uint64_t x : basis_states) m += std::norm(amp_[x]);
  return m;
}

void apply_phase_diagonal(Statevector& state, const std::vector<double>& diag, double gamma) {
  auto& amp = state.amplitudes();
  if (diag.size() != amp.size()) throw ParameterError("apply_phase_diagonal: size mismatch");
  for (std::size_t x = 0; x < amp.size(); ++x)
    amp[x] *= std::polar(1.0, -gamma * diag[x]);
}

void apply_cost_layer(Statevector& state, const Problem& problem, double gamma) {
  apply_phase_diagonal(state, problem.hc_diag, gamma);
}

void apply_x_rotation(Statevector& state, int qubit, double beta) {
  auto& amp = state.amplitudes();
  const std::size_t stride = 1ull << qubit;
  const double c = std::cos(beta);
  const cplx is(0.0, -std::sin(beta));
  for (std::size_t base = 0; base < amp.size(); base += 2 * stride)
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amp[i];
      const cplx a1 = amp[i + stride];
      amp[i] = c * a0 + is * a1;
      amp[i + stride] = is * a0 + c * a1;
    }
}

void apply_mixer_layer(Statevector& state, double beta) {
  for (int q = 0; q < state.n(); ++q) apply_x_rotation(state, q, beta);
}

RunResult run_qaoa(const Problem& problem, const Schedule& schedule, int shots,
                   std::uint64_t seed) {
  if (schedule.p < 1) throw ParameterError("run_qaoa: schedule depth must be >= 1");
  if (shots < 1) throw ParameterError("run_qaoa: shots must be >= 1");
  Statevector state(problem.n);
  for (int i = 0; i < schedule.p; ++i) {
    apply_cost_layer(state, problem, schedule.gammas[static_cast<std::size_t>(i)]);
    apply_mixer_layer(state, schedule.betas[static_cast<std::size_t>(i)]);
  }
  const auto probs = probabilities(state.amplitudes());
  RunResult res;
  res.shots = shots;
  res.seed = seed;
  res.schedule_hash = schedule.hash();
  res.p_s_exact = mass_on(probs, problem.optima);
  Rng rng(derive_seed(seed, std::uint64_t{0x73686f74}));
  res.counts = sample_counts(probs, shots, rng);
  int hits = 0;
  for (std::uint64_t x : problem.optima) {
    const auto it = res.counts.find(x);
    if (it != res.counts.end()) hits += it->second;
  }
  res.p_s_sampled = static_cast<double>(hits) / static_cast<double>(shots);
  return res;
}

// ---------------------------------------------------------------------------
// Noisy path
// ---------------------------------------------------------------------------

namespace {

struct Gate {
  enum class Type { ZzPhase, ZPhase, XRotation } type;
  int q1 = 0;
  int q2 = 0;
  double angle = 0.0;  // phase coefficient; X rotations carry beta here
};

// exp(-i gamma H_C) as one ZZ phase per edge and one Z phase per node:
// H_C = const + sum_i (1/2 - lambda deg_i / 4) z_i + sum_(uv) lambda/4 z_u z_v
std::vector<Gate> cost_gates(const Problem& problem, double gamma) {
  std::vector<Gate> gates;
  const auto deg = problem.graph.degrees();
  for (const auto& [u, v] : problem.graph.edges)
    gates.push_back({Gate::Type::ZzPhase, u, v, gamma * problem.lambda / 4.0});
  for (int i = 0; i < problem.n; ++i) {
    const double coeff = 0.5 - problem.lambda * deg[static_cast<std::size_t>(i)] / 4.0;
    gates.push_back({Gate::Type::ZPhase, i, 0, gamma * coeff});
  }
  return gates;
}

std::vector<Gate> mixer_gates(int n, double beta) {
  std::vector<Gate> gates;
  for (int q = 0; q < n; ++q) gates.push_back({Gate::Type::XRotation, q, 0, beta});
  return gates;
}

inline double zsign(std::uint64_t x, int q) { return ((x >> q) & 1) ? -1.0 : 1.0; }

void apply_gate_state(Statevector& state, const Gate& g) {
  auto& amp = state.amplitudes();
  switch (g.type) {
    case Gate::Type::ZzPhase:
      for (std::size_t x = 0; x < amp.size(); ++x)
        amp[x] *= std::polar(1.0, -g.angle * zsign(x, g.q1) * zsign(x, g.q2));
      break;
    case Gate::Type::ZPhase:
      for (std::size_t x = 0; x < amp.size(); ++x)
        amp[x] *= std::polar(1.0, -g.angle * zsign(x, g.q1));
      break;
    case Gate::Type::XRotation:
      apply_x_rotation(state, g.q1, g.angle);
      break;
  }
}

void apply_pauli(Statevector& state, int q, int pauli) {  // 1=X, 2=Y, 3=Z
  auto& amp = state.amplitudes();
  const std::size_t stride = 1ull << q;
  if (pauli == 3) {
    for (std::size_t x = 0; x < amp.size(); ++x)
      if ((x >> q) & 1) amp[x] = -amp[x];
    return;
  }
  for (std::size_t base = 0; base < amp.size(); base += 2 * stride)
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amp[i];
      const cplx a1 = amp[i + stride];
      if (pauli == 1) {
        amp[i] = a1;
        amp[i + stride] = a0;
      } else {  // Y
        amp[i] = cplx(0.0, -1.0) * a1;
        amp[i + stride] = cplx(0.0, 1.0) * a0;
      }
    }
}

void inject_noise_state(Statevector& state, const Gate& g, double p_noise, Rng& rng) {
  if (p_noise <= 0.0) return;
  if (g.type == Gate::Type::ZzPhase) {
    // two-qubit depolarizing channel: uniform non-identity two-qubit Pauli
    // with probability 15/16 p
    if (rng.uniform() < p_noise * 15.0 / 16.0) {
      const int idx = static_cast<int>(rng.below(15)) + 1;  // base-4 digits (p1, p2)
      const int p1 = idx / 4, p2 = idx % 4;
      if (p1) apply_pauli(state, g.q1, p1);
      if (p2) apply_pauli(state, g.q2, p2);
    }
  } else {
    if (rng.uniform() < p_noise * 3.0 / 4.0)
      apply_pauli(state, g.q1, static_cast<int>(rng.below(3)) + 1);
  }
}

std::vector<Gate> layer_gates(const Problem& problem, const Schedule& schedule) {
  std::vector<Gate> all;
  for (int i = 0; i < schedule.p; ++i) {
    const auto cg = cost_gates(problem, schedule.gammas[static_cast<std::size_t>(i)]);
    all.insert(all.end(), cg.begin(), cg.end());
    const auto mg = mixer_gates(problem.n, schedule.betas[static_cast<std::size_t>(i)]);
    all.insert(all.end(), mg.begin(), mg.end());
  }
  return all;
}

}  // namespace

DensityMatrix::DensityMatrix(int n) : n_(n), dim_(1ull << n) {
  if (n < 1 || n > kDensityMatrixBudget)
    throw CapacityError("DensityMatrix: n out of range [1, 12]");
  const double v = 1.0 / static_cast<double>(dim_);
  rho_.assign(dim_ * dim_, cplx(v, 0.0));
}

double DensityMatrix::trace_real() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += rho_[i * dim_ + i].real();
  return t;
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> d(dim_);
  for (std::size_t i = 0; i < dim_; ++i) d[i] = rho_[i * dim_ + i].real();
  return d;
}

void DensityMatrix::apply_phase_diagonal(const std::vector<double>& phase) {
  if (phase.size() != dim_) throw ParameterError("DensityMatrix: phase size mismatch");
  std::vector<cplx> u(dim_);
  for (std::size_t x = 0; x < dim_; ++x) u[x] = std::polar(1.0, -phase[x]);
  for (std::size_t x = 0; x < dim_; ++x) {
    const cplx ux = u[x];
    for (std::size_t y = 0; y < dim_; ++y) rho_[x * dim_ + y] *= ux * std::conj(u[y]);
  }
}

void DensityMatrix::apply_x_rotation(int qubit, double beta) {
  const std::size_t stride = 1ull << qubit;
  const double c = std::cos(beta);
  const cplx is(0.0, -std::sin(beta));
  // rho -> R rho, rows combine
  for (std::size_t base = 0; base < dim_; base += 2 * stride)
    for (std::size_t r = base; r < base + stride; ++r)
      for (std::size_t y = 0; y < dim_; ++y) {
        const cplx a0 = rho_[r * dim_ + y];
        const cplx a1 = rho_[(r + stride) * dim_ + y];
        rho_[r * dim_ + y] = c * a0 + is * a1;
        rho_[(r + stride) * dim_ + y] = is * a0 + c * a1;
      }
  // rho -> rho R^dag, columns combine with conj(is)
  const cplx isd = std::conj(is);
  for (std::size_t x = 0; x < dim_; ++x) {
    cplx* row = &rho_[x * dim_];
    for (std::size_t base = 0; base < dim_; base += 2 * stride)
      for (std::size_t cidx = base; cidx < base + stride; ++cidx) {
        const cplx a0 = row[cidx];
        const cplx a1 = row[cidx + stride];
        row[cidx] = c * a0 + isd * a1;
        row[cidx + stride] = isd * a0 + c * a1;
      }
  }
}

void DensityMatrix::depolarize(int qubit, double p) {
  if (p <= 0.0) return;
  // Delta_p(rho) = (1-p) rho + p I/2 (x) tr_q rho
  const std::size_t stride = 1ull << qubit;
  for (std::size_t x = 0; x < dim_; ++x) {
    const bool xb = (x >> qubit) & 1;
    const std::size_t x0 = xb ? x - stride : x;
    for (std::size_t y = 0; y < dim_; ++y) {
      const bool yb = (y >> qubit) & 1;
      if (xb != yb) {
        rho_[x * dim_ + y] *= (1.0 - p);
      } else if (!xb) {
        const std::size_t y0 = y;
        const cplx a = rho_[x0 * dim_ + y0];
        const cplx d = rho_[(x0 + stride) * dim_ + (y0 + stride)];
        const cplx s = 0.5 * (a + d);
        rho_[x0 * dim_ + y0] = (1.0 - p) * a + p * s;
        rho_[(x0 + stride) * dim_ + (y0 + stride)] = (1.0 - p) * d + p * s;
      }
    }
  }
}

void DensityMatrix::depolarize_pair(int q1, int q2, double p) {
  if (p <= 0.0) return;
  const std::size_t s1 = 1ull << q1;
  const std::size_t s2 = 1ull << q2;
  const std::size_t offs[4] = {0, s1, s2, s1 + s2};
  for (std::size_t x = 0; x < dim_; ++x) {
    if ((x & s1) || (x & s2)) continue;  // visit each 4-block once via its base
    for (std::size_t y = 0; y < dim_; ++y) {
      if ((y & s1) || (y & s2)) continue;
      cplx sum(0.0, 0.0);
      for (const auto o : offs) sum += rho_[(x + o) * dim_ + (y + o)];
      const cplx add = p * 0.25 * sum;
      for (const auto ox : offs)
        for (const auto oy : offs) {
          cplx& e = rho_[(x + ox) * dim_ + (y + oy)];
          e *= (1.0 - p);
          if (ox == oy) e += add;
        }
    }
  }
}

namespace {

void apply_gate_dm(DensityMatrix& dm, const Gate& g, const NoiseConfig& noise) {
  switch (g.type) {
    case Gate::Type::ZzPhase: {
      std::vector<double> phase(dm.dim());
      for (std::size_t x = 0; x < dm.dim(); ++x)
        phase[x] = g.angle * zsign(x, g.q1) * zsign(x, g.q2);
      dm.apply_phase_diagonal(phase);
      dm.depolarize_pair(g.q1, g.q2, noise.p_noise);
      break;
    }
    case Gate::Type::ZPhase: {
      std::vector<double> phase(dm.dim());
      for (std::size_t x = 0; x < dm.dim(); ++x) phase[x] = g.angle * zsign(x, g.q1);
      dm.apply_phase_diagonal(phase);
      dm.depolarize(g.q1, noise.p_noise);
      break;
    }
    case Gate::Type::XRotation:
      dm.apply_x_rotation(g.q1, g.angle);
      dm.depolarize(g.q1, noise.p_noise);
      break;
  }
}

}  // namespace

RunResult run_qaoa_noisy(const Problem& problem, const Schedule& schedule,
                         const NoiseConfig& noise, int shots, std::uint64_t seed) {
  if (problem.kind != ProblemKind::Mis)
    throw ParameterError("run_qaoa_noisy: the gate decomposition needs a graph-structured cost");
  if (noise.p_noise < 0.0 || noise.p_noise > 1.0)
    throw ParameterError("run_qaoa_noisy: p_noise must be in [0, 1]");
  if (schedule.p < 1 || shots < 1) throw ParameterError("run_qaoa_noisy: bad arguments");

  const auto gates = layer_gates(problem, schedule);
  std::vector<double> probs;

  RunResult res;
  res.shots = shots;
  res.seed = seed;
  res.schedule_hash = schedule.hash();

  if (noise.mode == NoiseMode::DensityMatrix) {
    DensityMatrix dm(problem.n);
    for (const auto& g : gates) apply_gate_dm(dm, g, noise);
    probs = dm.diagonal();
    res.noise_desc = "density-matrix p=" + format_double(noise.p_noise);
  } else {
    if (noise.n_traj < 1) throw ParameterError("run_qaoa_noisy: n_traj must be >= 1");
    const int ntraj = noise.p_noise == 0.0 ? 1 : noise.n_traj;
    probs.assign(1ull << problem.n, 0.0);
    for (int t = 0; t < ntraj; ++t) {
      Statevector state(problem.n);
      Rng rng(derive_seed(seed, std::uint64_t{0x7472616a}, static_cast<std::uint64_t>(t)));
      for (const auto& g : gates) {
        apply_gate_state(state, g);
        inject_noise_state(state, g, noise.p_noise, rng);
      }
      const auto& amp = state.amplitudes();
      for (std::size_t x = 0; x < probs.size(); ++x) probs[x] += std::norm(amp[x]);
    }
    for (auto& v : probs) v /= ntraj;
    res.noise_desc = "trajectories n=" + std::to_string(ntraj) +
                     " p=" + format_double(noise.p_noise);
  }

  res.p_s_exact = mass_on(probs, problem.optima);
  Rng rng(derive_seed(seed, std::uint64_t{0x73686f74}));
  res.counts = sample_counts(probs, shots, rng);
  int hits = 0;
  for (std::uint64_t x : problem.optima) {
    const auto it = res.counts.find(x);
    if (it != res.counts.end()) hits += it->second;
  }
  res.p_s_sampled = static_cast<double>(hits) / static_cast<double>(shots);
  return res;
}

void RunResult::save_counts_csv(std::ostream& os, int n) const {
  os << "bitstring,count\n";
  for (const auto& [x, c] : counts) os << to_bitstring(x, n) << ',' << c << '\n';
}

std::string RunResult::metadata_json(int n) const {
  std::ostringstream os;
  os << "{\n"
     << "  \"n\": " << n << ",\n"
     << "  \"shots\": " << shots << ",\n"
     << "  \"seed\": " << seed << ",\n"
     << "  \"schedule_hash\": " << schedule_hash << ",\n"
     << "  \"p_s_exact\": " << format_double(p_s_exact) << ",\n"
     << "  \"p_s_sampled\": " << format_double(p_s_sampled) << ",\n"
     << "  \"noise\": \"" << noise_desc << "\"\n"
     << "}\n";
  return os.str();
}

}  // namespace sgir
