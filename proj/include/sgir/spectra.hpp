#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgir/lanczos.hpp"
#include "sgir/problems.hpp"

namespace sgir {

// Interpolation H(s) = (1-s) H_0 + s H_C.
//
//   GroverProjector:    H_0 = I - |psi_0><psi_0|,  H_C = I - |sol><sol|
//   MixerInterpolation: H_0 = -sum_i X_i,          H_C = problem diagonal
//
// The mixer sign makes |+>^n the ground state of H_0, so the state QAOA
// starts from is the one the adiabatic picture tracks.
enum class OperatorKind { GroverProjector, MixerInterpolation };

class AdiabaticOperator {
public:
  AdiabaticOperator(const Problem& problem, double s, OperatorKind kind);

  std::size_t dim() const { return dim_; }
  double s() const { return s_; }
  OperatorKind kind() const { return kind_; }
  const Problem& problem() const { return *problem_; }

  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  MatVec matvec() const;

  // Dense symmetric matrix, row-major. Capacity error above dim 2^14.
  std::vector<double> dense() const;

private:
  const Problem* problem_;
  double s_;
  OperatorKind kind_;
  std::size_t dim_;
};

// k lowest eigenvalues (ascending, counting multiplicity) of a dense
// symmetric operator. Capacity error above dim 2^14.
std::vector<double> dense_spectrum(const AdiabaticOperator& op, int k);
std::vector<double> dense_spectrum(const std::vector<double>& matrix, std::size_t dim, int k);

// All n+1 eigenvalues of the mixer-interpolation Grover operator restricted
// to the permutation-symmetric sector (marked state conjugated to all-zeros;
// bit flips commute with the mixer so the spectrum is unchanged).
std::vector<double> grover_symmetric_spectrum(int n, double s);

// Closed form for the Eq-2 projector interpolation: sqrt(1 - 4s(1-s)(1-1/N)).
double grover_analytic_gap(int n, double s);

// E1 - E0 of the projector interpolation computed numerically from its 2x2
// invariant block; independent route against grover_analytic_gap.
double grover_projector_gap_numeric(int n, double s);

enum class GapKind { FirstExcited, SecondExcited };
enum class ProfileSource { Exact, Extrapolated, Analytic };
enum class SpectrumMethod { Dense, Lanczos, Symmetric, Analytic };

struct GapProfile {
  std::vector<double> s_grid;  // 0 = s_0 < ... < s_p = 1
  std::vector<double> gaps;    // g(s_j) >= 0
  GapKind gap_kind = GapKind::FirstExcited;
  ProfileSource source = ProfileSource::Exact;
  int n = 0;
  std::uint64_t problem_hash = 0;
  std::string method = "";

  double g_min() const;
  void validate() const;

  // CSV: "# key=value ..." header line, then "s,gap,gap_kind,source" rows.
  void save_csv(std::ostream& os) const;
  static GapProfile load_csv(std::istream& is);
};

struct GapProfileOptions {
  double lanczos_tol = 0.0;  // 0 -> 1e-10 * max(1, ||H_C||_inf)
  std::uint64_t seed = 0x9a9ull;
};

// Gap samples of the mixer-interpolation operator at s_j = j/p (the Analytic
// method instead samples the Eq-5 projector gap). Gap kind is E1-E0 for
// Grover and E2-E0 for MIS, whose ground state is degenerate at s=1.
GapProfile gap_profile(const Problem& problem, int p, SpectrumMethod method,
                       const GapProfileOptions& opts = {});

enum class ExtrapolationVariant { Degree3, Er };

// Large-n profile from small-n calibration data: interior points are the
// pointwise mean of the calibration profiles, g(0) := 4 (the mixer's E2-E0
// level spacing), and g(1) := 0 for the degree-3 variant or the value of an
// exponential fit a*2^(b*n) to the calibration g_min series for the ER one.
GapProfile extrapolated_gap_profile(const std::vector<std::pair<int, GapProfile>>& calibration,
                                    int target_n, ExtrapolationVariant variant);

}  // namespace sgir
