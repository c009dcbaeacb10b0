#include "sgir/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "sgir/common.hpp"
#include "sgir/rng.hpp"

namespace sgir {

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : edges) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  return deg;
}

bool Graph::is_regular(int degree) const {
  const auto deg = degrees();
  return std::all_of(deg.begin(), deg.end(), [degree](int d) { return d == degree; });
}

void Graph::save(std::ostream& os) const {
  os << n << ' ' << edges.size() << '\n';
  for (const auto& [u, v] : edges) os << u << ' ' << v << '\n';
}

Graph Graph::load(std::istream& is) {
  Graph g;
  std::size_t m = 0;
  if (!(is >> g.n >> m)) throw ParameterError("graph file: bad header");
  if (g.n < 0) throw ParameterError("graph file: negative node count");
  std::set<Edge> seen;
  for (std::size_t i = 0; i < m; ++i) {
    int u = 0, v = 0;
    if (!(is >> u >> v)) throw ParameterError("graph file: truncated edge list");
    if (u == v) throw ParameterError("graph file: self-loop");
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= g.n) throw ParameterError("graph file: endpoint out of range");
    if (!seen.insert({u, v}).second) throw ParameterError("graph file: duplicate edge");
  }
  g.edges.assign(seen.begin(), seen.end());
  return g;
}

std::uint64_t Graph::hash() const {
  std::uint64_t h = fnv1a(kFnvOffset, static_cast<std::uint64_t>(n));
  for (const auto& [u, v] : edges) {
    h = fnv1a(h, static_cast<std::uint64_t>(u));
    h = fnv1a(h, static_cast<std::uint64_t>(v));
  }
  return h;
}

Graph gen_er_graph(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw ParameterError("gen_er_graph: n must be >= 1");
  if (edge_prob < 0.0 || edge_prob > 1.0)
    throw ParameterError("gen_er_graph: edge_prob must be in [0, 1]");
  Rng rng(seed);
  Graph g;
  g.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform() < edge_prob) g.edges.push_back({u, v});
  return g;
}

namespace {

// One pairing attempt over the given stub multiset; empty on rejection.
bool try_pairing(std::vector<int>& stubs, Rng& rng, std::set<Edge>& out) {
  out.clear();
  // Fisher-Yates shuffle, then pair consecutive stubs.
  for (std::size_t i = stubs.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(stubs[i - 1], stubs[j]);
  }
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    int u = stubs[i], v = stubs[i + 1];
    if (u == v) return false;
    if (u > v) std::swap(u, v);
    if (!out.insert({u, v}).second) return false;
  }
  return true;
}

Graph regular_from_stub_counts(int n, const std::vector<int>& stub_count, std::uint64_t seed) {
  std::vector<int> stubs;
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < stub_count[static_cast<std::size_t>(v)]; ++k) stubs.push_back(v);
  Rng rng(seed);
  std::set<Edge> edges;
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    if (try_pairing(stubs, rng, edges)) {
      Graph g;
      g.n = n;
      g.edges.assign(edges.begin(), edges.end());
      return g;
    }
  }
  throw ParameterError("configuration model failed to produce a simple graph");
}

}  // namespace

Graph gen_regular_graph(int n, int degree, std::uint64_t seed) {
  if (n < 1 || degree < 0) throw ParameterError("gen_regular_graph: bad arguments");
  if (degree >= n) throw ParameterError("gen_regular_graph: degree must be < n");
  if ((static_cast<long long>(n) * degree) % 2 != 0)
    throw ParameterError("gen_regular_graph: n*degree must be even");
  return regular_from_stub_counts(n, std::vector<int>(static_cast<std::size_t>(n), degree), seed);
}

Graph gen_near_regular_graph(int n, int degree, std::uint64_t seed) {
  if (n < 1 || degree < 0) throw ParameterError("gen_near_regular_graph: bad arguments");
  if (degree >= n) throw ParameterError("gen_near_regular_graph: degree must be < n");
  std::vector<int> counts(static_cast<std::size_t>(n), degree);
  if ((static_cast<long long>(n) * degree) % 2 != 0) {
    Rng rng(derive_seed(seed, std::uint64_t{0x6f6464}));
    counts[rng.below(static_cast<std::uint64_t>(n))] -= 1;
  }
  return regular_from_stub_counts(n, counts, seed);
}

}  // namespace sgir
