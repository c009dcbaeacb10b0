#include "sgir/problems.hpp"

#include <bit>
#include <cmath>

#include "sgir/common.hpp"

namespace sgir {

namespace {

constexpr int kEnumerationBudget = 30;
constexpr int kDiagonalBudget = 24;  // 2^24 doubles = 128 MiB

// Per-vertex adjacency bitmasks for O(n) violation counting.
std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.n), 0);
  for (const auto& [u, v] : g.edges) {
    adj[static_cast<std::size_t>(u)] |= 1ull << v;
    adj[static_cast<std::size_t>(v)] |= 1ull << u;
  }
  return adj;
}

int violated_edges(const std::vector<std::uint64_t>& adj, std::uint64_t x) {
  int twice = 0;
  std::uint64_t rest = x;
  while (rest) {
    const int v = std::countr_zero(rest);
    rest &= rest - 1;
    twice += std::popcount(adj[static_cast<std::size_t>(v)] & x);
  }
  return twice / 2;
}

}  // namespace

double mis_cost(const Graph& g, double lambda, std::uint64_t x, int n_bits) {
  if (n_bits != g.n) throw ParameterError("mis_cost: bitstring length mismatch");
  const auto adj = adjacency_masks(g);
  return static_cast<double>(std::popcount(x)) - lambda * violated_edges(adj, x);
}

double mis_cost(const Graph& g, double lambda, const std::string& bits) {
  return mis_cost(g, lambda, from_bitstring(bits), static_cast<int>(bits.size()));
}

ExactSolution solve_exact(const Graph& g, double lambda) {
  if (g.n > kEnumerationBudget)
    throw CapacityError("solve_exact: n exceeds the enumeration budget of 30");
  const auto adj = adjacency_masks(g);
  ExactSolution sol{-1.0, {}};  // empty set scores 0, so any start below that works
  sol.value = 0.0;
  sol.optima = {0};
  const std::uint64_t total = 1ull << g.n;
  for (std::uint64_t x = 1; x < total; ++x) {
    // Independent sets dominate all violating sets for lambda > n, but the
    // scan stays exact for any lambda > 0.
    const double c =
        static_cast<double>(std::popcount(x)) - lambda * violated_edges(adj, x);
    if (c > sol.value) {
      sol.value = c;
      sol.optima.assign(1, x);
    } else if (c == sol.value) {
      sol.optima.push_back(x);
    }
  }
  return sol;
}

Problem make_mis_problem(const Graph& g, double lambda) {
  if (lambda <= 0.0) throw ParameterError("make_mis_problem: lambda must be > 0");
  if (g.n > kDiagonalBudget)
    throw CapacityError("make_mis_problem: n exceeds the diagonal budget of 24");
  Problem p;
  p.kind = ProblemKind::Mis;
  p.n = g.n;
  p.graph = g;
  p.lambda = lambda;
  const auto adj = adjacency_masks(g);
  const std::uint64_t total = 1ull << g.n;
  p.hc_diag.resize(total);
  double best = 0.0;
  for (std::uint64_t x = 0; x < total; ++x) {
    const double c =
        static_cast<double>(std::popcount(x)) - lambda * violated_edges(adj, x);
    p.hc_diag[x] = -c;  // ground state of H_C encodes the optimum
    if (c > best) best = c;
  }
  p.optimal_value = best;
  for (std::uint64_t x = 0; x < total; ++x)
    if (-p.hc_diag[x] == best) p.optima.push_back(x);
  return p;
}

Problem make_grover_problem(int n, std::uint64_t marked) {
  if (n < 1 || n > kDiagonalBudget)
    throw CapacityError("make_grover_problem: n out of range [1, 24]");
  if (marked >> n)
    throw ParameterError("make_grover_problem: marked state out of range");
  Problem p;
  p.kind = ProblemKind::Grover;
  p.n = n;
  p.marked = marked;
  p.hc_diag.assign(1ull << n, 1.0);
  p.hc_diag[marked] = 0.0;
  p.optima = {marked};
  p.optimal_value = 0.0;
  return p;
}

std::uint64_t Problem::hash() const {
  std::uint64_t h = fnv1a(kFnvOffset, static_cast<std::uint64_t>(kind));
  h = fnv1a(h, static_cast<std::uint64_t>(n));
  if (kind == ProblemKind::Mis) {
    h = fnv1a(h, graph.hash());
    h = fnv1a(h, lambda);
  } else {
    h = fnv1a(h, marked);
  }
  return h;
}

std::string Problem::describe() const {
  if (kind == ProblemKind::Grover)
    return "grover n=" + std::to_string(n) + " marked=" + to_bitstring(marked, n);
  return "mis n=" + std::to_string(n) + " m=" + std::to_string(graph.edges.size()) +
         " lambda=" + format_double(lambda);
}

}  // namespace sgir
