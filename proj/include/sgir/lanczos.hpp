#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace sgir {

// y = H x for a real symmetric operator.
using MatVec = std::function<void(const std::vector<double>& x, std::vector<double>& y)>;

struct LanczosOptions {
  double tol = 1e-8;        // residual ||Hv - lambda v|| per returned pair
  std::uint64_t seed = 0x5eedull;
  int max_iter = 0;         // 0 -> 20*sqrt(dim) + 200, per pass
  int extra_ritz = 6;       // subspace head-room beyond k
};

// k lowest eigenvalues (ascending, counting multiplicity) of a real symmetric
// operator given only through matrix-vector products.
//
// The Krylov basis is fully reorthogonalised, which keeps the iteration
// stable on the near-degenerate spectra produced by large-penalty MIS
// Hamiltonians. Exactly degenerate copies cannot emerge from a single Krylov
// sequence, so after a pass converges the solver deflates the converged Ritz
// vectors and starts a fresh pass in the orthogonal complement; breakdown
// (an exhausted invariant subspace) triggers the same restart within a pass.
std::vector<double> lanczos_lowest(const MatVec& matvec, std::size_t dim, int k,
                                   const LanczosOptions& opts = {});

}  // namespace sgir
