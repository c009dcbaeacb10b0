#include "sgir/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "sgir/common.hpp"
#include "sgir/rng.hpp"

namespace sgir {

void ScheduleShape::validate() const {
  if (s_grid.size() != f.size() || s_grid.size() < 2)
    throw ParameterError("ScheduleShape: grid/value size mismatch");
  if (s_grid.front() != 0.0 || s_grid.back() != 1.0)
    throw ParameterError("ScheduleShape: grid must span [0, 1]");
  if (f.front() != 0.0 || f.back() != 1.0)
    throw ParameterError("ScheduleShape: endpoints must be exactly 0 and 1");
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    if (!(s_grid[i] < s_grid[i + 1])) throw ParameterError("ScheduleShape: grid not increasing");
    if (f[i] > f[i + 1]) throw ParameterError("ScheduleShape: f not monotone");
  }
}

double ScheduleShape::at(double s) const {
  if (s <= s_grid.front()) return f.front();
  if (s >= s_grid.back()) return f.back();
  const auto it = std::upper_bound(s_grid.begin(), s_grid.end(), s);
  const std::size_t hi = static_cast<std::size_t>(it - s_grid.begin());
  const std::size_t lo = hi - 1;
  if (s == s_grid[lo]) return f[lo];  // exact node hit, no arithmetic
  const double t = (s - s_grid[lo]) / (s_grid[hi] - s_grid[lo]);
  return f[lo] + t * (f[hi] - f[lo]);
}

std::uint64_t ScheduleShape::hash() const {
  std::uint64_t h = fnv1a(kFnvOffset, static_cast<std::uint64_t>(family));
  for (double s : s_grid) h = fnv1a(h, s);
  for (double v : f) h = fnv1a(h, v);
  if (kappa) h = fnv1a(h, *kappa);
  h = fnv1a(h, provenance);
  return h;
}

std::uint64_t Schedule::hash() const {
  std::uint64_t h = fnv1a(kFnvOffset, static_cast<std::uint64_t>(family));
  h = fnv1a(h, static_cast<std::uint64_t>(p));
  for (double b : betas) h = fnv1a(h, b);
  for (double g : gammas) h = fnv1a(h, g);
  return h;
}

ScheduleShape linear_shape(int p) {
  if (p < 1) throw ParameterError("linear_shape: p must be >= 1");
  ScheduleShape shape;
  shape.family = ScheduleFamily::Lr;
  for (int j = 0; j <= p; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(p);
    shape.s_grid.push_back(s);
    shape.f.push_back(s);
  }
  return shape;
}

Schedule shape_to_schedule(const ScheduleShape& shape, int p, double beta_start,
                           double gamma_end) {
  if (p < 1) throw ParameterError("shape_to_schedule: p must be >= 1");
  shape.validate();
  Schedule sched;
  sched.p = p;
  sched.family = shape.family;
  sched.beta_endpoint = beta_start;
  sched.gamma_endpoint = gamma_end;
  sched.kappa = shape.kappa;
  sched.shape_hash = shape.hash();
  sched.betas.reserve(static_cast<std::size_t>(p));
  sched.gammas.reserve(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    const double fb = shape.at(static_cast<double>(i) / static_cast<double>(p));
    const double fg = shape.at(static_cast<double>(i + 1) / static_cast<double>(p));
    sched.betas.push_back(beta_start * (1.0 - fb));
    sched.gammas.push_back(gamma_end * fg);
  }
  return sched;
}

Schedule lr_schedule(int p, double delta_beta, double delta_gamma) {
  if (delta_beta <= 0.0 || delta_gamma <= 0.0)
    throw ParameterError("lr_schedule: ramp gradients must be positive");
  // Shared kernel with the generic path so the linear shape reproduces the
  // ramp bitwise.
  return shape_to_schedule(linear_shape(p), p, delta_beta, delta_gamma);
}

ScheduleShape sgir_shape(const GapProfile& profile, double kappa, SgirWeighting weighting) {
  profile.validate();
  if (profile.s_grid.size() < 2) throw ParameterError("sgir_shape: need at least 2 points");
  const double gmin = profile.g_min();
  const std::size_t np = profile.s_grid.size();

  ScheduleShape shape;
  shape.family = ScheduleFamily::Sgir;
  shape.kappa = kappa;

  if (weighting == SgirWeighting::Cumulative) {
    shape.s_grid = profile.s_grid;
    std::vector<double> w(np);
    for (std::size_t j = 0; j < np; ++j) w[j] = std::pow(profile.gaps[j] - gmin, kappa);
    std::vector<double> cum(np, 0.0);
    for (std::size_t j = 1; j < np; ++j)
      cum[j] = cum[j - 1] + 0.5 * (w[j] + w[j - 1]) * (profile.s_grid[j] - profile.s_grid[j - 1]);
    const double total = cum.back();
    if (total <= 0.0) {
      // g identically g_min: no weight anywhere, fall back to a linear ramp
      shape.f = profile.s_grid;
      shape.provenance = "degenerate-profile linear fallback";
      shape.validate();
      return shape;
    }
    shape.f.resize(np);
    for (std::size_t j = 0; j < np; ++j) shape.f[j] = cum[j] / total;
    shape.f.front() = 0.0;
    shape.f.back() = 1.0;
    shape.provenance = "cumulative";
    shape.validate();
    return shape;
  }

  // Local-adiabatic weighting: invert t(u) = int_0^u dv / g(v)^kappa on a
  // fine grid, then sample the inverse back onto the profile grid.
  for (double g : profile.gaps)
    if (g <= 0.0)
      throw ParameterError("sgir_shape: local-adiabatic weighting needs positive gaps");
  const int fine = 4096;
  std::vector<double> u(fine + 1), t(fine + 1, 0.0);
  auto gap_at = [&](double s) {
    const auto it =
        std::upper_bound(profile.s_grid.begin(), profile.s_grid.end(), s);
    std::size_t hi = std::min<std::size_t>(
        static_cast<std::size_t>(it - profile.s_grid.begin()), np - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double frac = (s - profile.s_grid[lo]) / (profile.s_grid[hi] - profile.s_grid[lo]);
    return profile.gaps[lo] + frac * (profile.gaps[hi] - profile.gaps[lo]);
  };
  double prev_w = std::pow(gap_at(0.0), -kappa);
  for (int i = 0; i <= fine; ++i) u[static_cast<std::size_t>(i)] = static_cast<double>(i) / fine;
  for (int i = 1; i <= fine; ++i) {
    const double w = std::pow(gap_at(u[static_cast<std::size_t>(i)]), -kappa);
    t[static_cast<std::size_t>(i)] =
        t[static_cast<std::size_t>(i - 1)] + 0.5 * (w + prev_w) / fine;
    prev_w = w;
  }
  const double total = t.back();
  for (auto& v : t) v /= total;
  shape.s_grid = profile.s_grid;
  shape.f.resize(np);
  for (std::size_t j = 0; j < np; ++j) {
    const double s = profile.s_grid[j];
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - t.begin()), t.size() - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double frac = t[hi] == t[lo] ? 0.0 : (s - t[lo]) / (t[hi] - t[lo]);
    shape.f[j] = u[lo] + frac * (u[hi] - u[lo]);
  }
  shape.f.front() = 0.0;
  shape.f.back() = 1.0;
  for (std::size_t j = 1; j < np; ++j) shape.f[j] = std::max(shape.f[j], shape.f[j - 1]);
  shape.provenance = "local-adiabatic";
  shape.validate();
  return shape;
}

double rc_closed_form(int n, double u) {
  const double N = std::ldexp(1.0, n);
  const double a = std::sqrt(1.0 / N);
  const double b = std::sqrt(1.0 - 1.0 / N);
  return 0.5 + (a / (2.0 * b)) * std::tan((2.0 * u - 1.0) * std::atan(b / a));
}

ScheduleShape rc_shape(int n, int resolution) {
  if (resolution < 16) throw ParameterError("rc_shape: resolution must be >= 16");
  // t(u) = int_0^u dv / g^2(v) with the analytic projector gap, normalised;
  // f is the monotone inverse sampled on the output grid.
  const int fine = std::max(resolution * 8, 4096);
  std::vector<double> t(static_cast<std::size_t>(fine) + 1, 0.0);
  double prev_w = 1.0 / std::pow(grover_analytic_gap(n, 0.0), 2.0);
  for (int i = 1; i <= fine; ++i) {
    const double v = static_cast<double>(i) / fine;
    const double w = 1.0 / std::pow(grover_analytic_gap(n, v), 2.0);
    t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i - 1)] + 0.5 * (w + prev_w) / fine;
    prev_w = w;
  }
  const double total = t.back();
  for (auto& v : t) v /= total;

  ScheduleShape shape;
  shape.family = ScheduleFamily::Rc;
  std::size_t cursor = 0;
  for (int j = 0; j <= resolution; ++j) {
    const double s = static_cast<double>(j) / resolution;
    shape.s_grid.push_back(s);
    while (cursor + 1 < t.size() && t[cursor + 1] < s) ++cursor;
    const std::size_t hi = std::min(cursor + 1, t.size() - 1);
    const double frac = t[hi] == t[cursor] ? 0.0 : (s - t[cursor]) / (t[hi] - t[cursor]);
    const double f =
        (static_cast<double>(cursor) + frac) / static_cast<double>(fine);
    shape.f.push_back(std::clamp(f, 0.0, 1.0));
  }
  shape.f.front() = 0.0;
  shape.f.back() = 1.0;
  for (std::size_t j = 1; j < shape.f.size(); ++j)
    shape.f[j] = std::max(shape.f[j], shape.f[j - 1]);
  shape.validate();
  return shape;
}

Schedule random_schedule(int p, std::uint64_t seed, const AngleRanges& ranges) {
  if (p < 1) throw ParameterError("random_schedule: p must be >= 1");
  if (ranges.log10_beta_lo > ranges.log10_beta_hi ||
      ranges.log10_gamma_lo > ranges.log10_gamma_hi)
    throw ParameterError("random_schedule: empty range");
  Rng rng(seed);
  Schedule sched;
  sched.p = p;
  sched.family = ScheduleFamily::Random;
  for (int i = 0; i < p; ++i)
    sched.betas.push_back(std::pow(10.0, rng.uniform(ranges.log10_beta_lo, ranges.log10_beta_hi)));
  for (int i = 0; i < p; ++i)
    sched.gammas.push_back(
        std::pow(10.0, rng.uniform(ranges.log10_gamma_lo, ranges.log10_gamma_hi)));
  sched.beta_endpoint = sched.betas.front();
  sched.gamma_endpoint = sched.gammas.back();
  return sched;
}

void Schedule::save_csv(std::ostream& os) const {
  os << "# family=" << family_name(family) << " p=" << p
     << " beta_endpoint=" << format_double(beta_endpoint)
     << " gamma_endpoint=" << format_double(gamma_endpoint);
  if (kappa) os << " kappa=" << format_double(*kappa);
  os << " shape_hash=" << shape_hash << '\n';
  os << "i,beta,gamma\n";
  for (int i = 0; i < p; ++i)
    os << i << ',' << format_double(betas[static_cast<std::size_t>(i)]) << ','
       << format_double(gammas[static_cast<std::size_t>(i)]) << '\n';
}

Schedule Schedule::load_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
    throw ParameterError("Schedule::load_csv: missing header comment");
  Schedule sched;
  {
    std::istringstream hs(line.substr(2));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "family") sched.family = family_from_name(val);
      else if (key == "p") sched.p = std::stoi(val);
      else if (key == "beta_endpoint") sched.beta_endpoint = std::stod(val);
      else if (key == "gamma_endpoint") sched.gamma_endpoint = std::stod(val);
      else if (key == "kappa") sched.kappa = std::stod(val);
      else if (key == "shape_hash") sched.shape_hash = std::stoull(val);
    }
  }
  if (!std::getline(is, line) || line != "i,beta,gamma")
    throw ParameterError("Schedule::load_csv: missing column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string i_str, b_str, g_str;
    if (!std::getline(ls, i_str, ',') || !std::getline(ls, b_str, ',') ||
        !std::getline(ls, g_str))
      throw ParameterError("Schedule::load_csv: malformed row");
    sched.betas.push_back(std::stod(b_str));
    sched.gammas.push_back(std::stod(g_str));
  }
  if (static_cast<int>(sched.betas.size()) != sched.p || sched.betas.size() != sched.gammas.size())
    throw ParameterError("Schedule::load_csv: row count does not match p");
  return sched;
}

const char* family_name(ScheduleFamily f) {
  switch (f) {
    case ScheduleFamily::Lr: return "lr";
    case ScheduleFamily::Rc: return "rc";
    case ScheduleFamily::Sgir: return "sgir";
    default: return "random";
  }
}

ScheduleFamily family_from_name(const std::string& name) {
  if (name == "lr") return ScheduleFamily::Lr;
  if (name == "rc") return ScheduleFamily::Rc;
  if (name == "sgir") return ScheduleFamily::Sgir;
  if (name == "random") return ScheduleFamily::Random;
  throw ParameterError("unknown schedule family: " + name);
}

}  // namespace sgir
