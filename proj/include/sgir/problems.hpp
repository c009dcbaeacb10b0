#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgir/graph.hpp"

namespace sgir {

enum class ProblemKind { Grover, Mis };

// A problem instance in the form every downstream module consumes: the
// diagonal of the cost Hamiltonian H_C (ground state = optimum) plus the
// exact optimal set. For MIS the objective C(x) of the penalty form is kept
// as well; H_C = -C so that maximising C means finding the ground state.
struct Problem {
  ProblemKind kind;
  int n = 0;
  std::vector<double> hc_diag;        // H_C[x], 2^n entries
  std::vector<std::uint64_t> optima;  // sorted; all maximisers of the objective
  double optimal_value = 0.0;         // objective value at the optimum

  // MIS fields
  Graph graph;
  double lambda = 0.0;
  // Grover fields
  std::uint64_t marked = 0;

  std::size_t dim() const { return hc_diag.size(); }
  std::uint64_t hash() const;
  std::string describe() const;
};

// Eq-8-style penalty objective: |x| - lambda * (# violated edges).
double mis_cost(const Graph& g, double lambda, std::uint64_t x, int n_bits);
double mis_cost(const Graph& g, double lambda, const std::string& bits);

// Exhaustive scan of the objective diagonal. Enumeration budget n <= 30.
struct ExactSolution {
  double value;
  std::vector<std::uint64_t> optima;
};
ExactSolution solve_exact(const Graph& g, double lambda);

Problem make_mis_problem(const Graph& g, double lambda);
Problem make_grover_problem(int n, std::uint64_t marked);

}  // namespace sgir
