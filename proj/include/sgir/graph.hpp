#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace sgir {

using Edge = std::pair<int, int>;  // stored with first < second

// Simple undirected graph: no self-loops, no duplicate edges.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;  // sorted lexicographically

  std::vector<int> degrees() const;
  bool is_regular(int degree) const;

  // Plain-text edge list: first line "n m", then m lines "u v".
  void save(std::ostream& os) const;
  static Graph load(std::istream& is);

  std::uint64_t hash() const;
};

// Erdos-Renyi G(n, p): each pair kept independently with probability
// edge_prob. Deterministic per seed.
Graph gen_er_graph(int n, double edge_prob, std::uint64_t seed);

// Uniform-ish simple d-regular graph via the configuration model with
// rejection of self-loops and multi-edges. Requires n*degree even and
// degree < n.
Graph gen_regular_graph(int n, int degree, std::uint64_t seed);

// Like gen_regular_graph, but when n*degree is odd one random vertex gets
// degree-1 stubs so the pairing is feasible. Used by experiment sweeps that
// span odd n.
Graph gen_near_regular_graph(int n, int degree, std::uint64_t seed);

}  // namespace sgir
