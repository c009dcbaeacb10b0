#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgir/spectra.hpp"

namespace sgir {

enum class ScheduleFamily { Lr, Rc, Sgir, Random };

// Normalised monotone ramp profile f on a grid, f(0)=0, f(1)=1.
struct ScheduleShape {
  std::vector<double> s_grid;
  std::vector<double> f;
  ScheduleFamily family = ScheduleFamily::Lr;
  std::optional<double> kappa;  // SGIR only
  std::string provenance;       // e.g. "degenerate-profile linear fallback"

  void validate() const;
  double at(double s) const;  // monotone linear interpolation
  std::uint64_t hash() const;
};

// Concrete per-layer angles.
struct Schedule {
  int p = 0;
  std::vector<double> betas;
  std::vector<double> gammas;
  ScheduleFamily family = ScheduleFamily::Lr;
  double beta_endpoint = 0.0;   // beta_start (Delta_beta for the linear ramp)
  double gamma_endpoint = 0.0;  // gamma_end  (Delta_gamma for the linear ramp)
  std::optional<double> kappa;
  std::uint64_t shape_hash = 0;

  std::uint64_t hash() const;
  // CSV: provenance header, then "i,beta,gamma" rows.
  void save_csv(std::ostream& os) const;
  static Schedule load_csv(std::istream& is);
};

ScheduleShape linear_shape(int p);

// beta_i = (1 - i/p) Delta_beta, gamma_i = ((i+1)/p) Delta_gamma.
Schedule lr_schedule(int p, double delta_beta, double delta_gamma);

// How the gap weights (g - g_min)^kappa turn into a ramp.
//
//   Cumulative:     f(s) is the normalised cumulative trapezoid of the
//                   weights over the profile grid. Degenerate profiles
//                   (g identically g_min) fall back to the linear shape,
//                   flagged in provenance.
//   LocalAdiabatic: f inverts t(u) = int_0^u dv / g(v)^kappa, i.e. the ramp
//                   velocity follows the gap at the current schedule value,
//                   the construction behind the Roland-Cerf schedule.
//                   Requires strictly positive gap samples.
enum class SgirWeighting { Cumulative, LocalAdiabatic };

ScheduleShape sgir_shape(const GapProfile& profile, double kappa,
                         SgirWeighting weighting = SgirWeighting::Cumulative);

// Local-adiabatic ramp for the analytic Grover gap of the projector
// interpolation, evaluated by quadrature and monotone inversion onto a
// (resolution+1)-point output grid.
ScheduleShape rc_shape(int n, int resolution);

// Closed-form Roland-Cerf ramp; independent oracle for rc_shape in tests.
double rc_closed_form(int n, double u);

struct AngleRanges {
  double log10_beta_lo = -1.5;
  double log10_beta_hi = 0.5;
  double log10_gamma_lo = -1.0;
  double log10_gamma_hi = 1.0;
};

// Every angle drawn independently, log-uniform over the same ranges the grid
// search spans.
Schedule random_schedule(int p, std::uint64_t seed, const AngleRanges& ranges = {});

// gamma_i = gamma_end f((i+1)/p), beta_i = beta_start (1 - f(i/p)).
Schedule shape_to_schedule(const ScheduleShape& shape, int p, double beta_start,
                           double gamma_end);

const char* family_name(ScheduleFamily f);
ScheduleFamily family_from_name(const std::string& name);

}  // namespace sgir
