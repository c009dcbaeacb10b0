#include "sgir/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "sgir/common.hpp"

namespace sgir {

namespace {

constexpr std::size_t kDenseBudget = 1ull << 14;

double pow2d(int n) { return std::ldexp(1.0, n); }

}  // namespace

AdiabaticOperator::AdiabaticOperator(const Problem& problem, double s, OperatorKind kind)
    : problem_(&problem), s_(s), kind_(kind), dim_(problem.dim()) {
  if (s < 0.0 || s > 1.0) throw ParameterError("AdiabaticOperator: s must be in [0, 1]");
  if (kind == OperatorKind::GroverProjector && problem.kind != ProblemKind::Grover)
    throw ParameterError("AdiabaticOperator: projector interpolation needs a Grover problem");
}

void AdiabaticOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t N = dim_;
  if (x.size() != N) throw ParameterError("AdiabaticOperator::apply: size mismatch");
  y.resize(N);
  if (kind_ == OperatorKind::GroverProjector) {
    // H = I - (1-s)|psi0><psi0| - s|sol><sol|, psi0 uniform
    double sum = 0.0;
    for (double v : x) sum += v;
    const double proj = sum / std::sqrt(static_cast<double>(N));
    const double c0 = (1.0 - s_) * proj / std::sqrt(static_cast<double>(N));
    for (std::size_t i = 0; i < N; ++i) y[i] = x[i] - c0;
    y[problem_->marked] -= s_ * x[problem_->marked];
    return;
  }
  // H = (1-s)(-sum X_i) + s diag(H_C)
  const auto& d = problem_->hc_diag;
  for (std::size_t i = 0; i < N; ++i) y[i] = s_ * d[i] * x[i];
  const double c = -(1.0 - s_);
  for (int q = 0; q < problem_->n; ++q) {
    const std::size_t stride = 1ull << q;
    for (std::size_t base = 0; base < N; base += 2 * stride)
      for (std::size_t i = base; i < base + stride; ++i) {
        y[i] += c * x[i + stride];
        y[i + stride] += c * x[i];
      }
  }
}

MatVec AdiabaticOperator::matvec() const {
  return [this](const std::vector<double>& x, std::vector<double>& y) { apply(x, y); };
}

std::vector<double> AdiabaticOperator::dense() const {
  const std::size_t N = dim_;
  if (N > kDenseBudget)
    throw CapacityError("AdiabaticOperator::dense: dimension exceeds 2^14");
  std::vector<double> H(N * N, 0.0);
  if (kind_ == OperatorKind::GroverProjector) {
    const double off = -(1.0 - s_) / static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) H[i * N + j] = off + (i == j ? 1.0 : 0.0);
    H[problem_->marked * N + problem_->marked] -= s_;
    return H;
  }
  const auto& d = problem_->hc_diag;
  for (std::size_t i = 0; i < N; ++i) H[i * N + i] = s_ * d[i];
  for (int q = 0; q < problem_->n; ++q)
    for (std::size_t i = 0; i < N; ++i) H[i * N + (i ^ (1ull << q))] -= (1.0 - s_);
  return H;
}

std::vector<double> dense_spectrum(const std::vector<double>& matrix, std::size_t dim, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > dim)
    throw ParameterError("dense_spectrum: k out of range");
  if (dim > kDenseBudget) throw CapacityError("dense_spectrum: dimension exceeds 2^14");
  Eigen::Map<const Eigen::MatrixXd> H(matrix.data(), static_cast<Eigen::Index>(dim),
                                      static_cast<Eigen::Index>(dim));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + k};
}

std::vector<double> dense_spectrum(const AdiabaticOperator& op, int k) {
  return dense_spectrum(op.dense(), op.dim(), k);
}

std::vector<double> grover_symmetric_spectrum(int n, double s) {
  if (n < 1) throw ParameterError("grover_symmetric_spectrum: n must be >= 1");
  if (s < 0.0 || s > 1.0) throw ParameterError("grover_symmetric_spectrum: s in [0, 1]");
  // Hamming-weight basis |w>. The mixer couples adjacent weights with
  // sqrt((w+1)(n-w)); the cost is diag(0, 1, ..., 1) once the marked state
  // is conjugated to all-zeros.
  const int m = n + 1;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
  for (int w = 1; w < m; ++w) H(w, w) = s;
  for (int w = 0; w + 1 < m; ++w) {
    const double t = -(1.0 - s) * std::sqrt(static_cast<double>(w + 1) *
                                            static_cast<double>(n - w));
    H(w, w + 1) = t;
    H(w + 1, w) = t;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + m};
}

double grover_analytic_gap(int n, double s) {
  if (s < 0.0 || s > 1.0) throw ParameterError("grover_analytic_gap: s in [0, 1]");
  const double N = pow2d(n);
  return std::sqrt(1.0 - 4.0 * s * (1.0 - s) * (1.0 - 1.0 / N));
}

double grover_projector_gap_numeric(int n, double s) {
  if (s < 0.0 || s > 1.0) throw ParameterError("grover_projector_gap_numeric: s in [0, 1]");
  // In the basis {|sol>, orthonormalised remainder of |psi0>} the operator is
  // a 2x2 block plus the identity on the complement; the two lowest
  // eigenvalues both live in the block.
  // With |psi0> = a|sol> + b|perp>:
  //   H = I - (1-s)|psi0><psi0| - s|sol><sol|
  const double N = pow2d(n);
  const double a2 = 1.0 / N;  // |<sol|psi0>|^2
  const double a = std::sqrt(a2);
  const double b = std::sqrt(1.0 - a2);
  Eigen::Matrix2d H;
  H(0, 0) = 1.0 - (1.0 - s) * a2 - s;
  H(0, 1) = H(1, 0) = -(1.0 - s) * a * b;
  H(1, 1) = 1.0 - (1.0 - s) * (b * b);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[1] - es.eigenvalues()[0];
}

double GapProfile::g_min() const {
  if (gaps.empty()) throw ParameterError("GapProfile: empty profile");
  return *std::min_element(gaps.begin(), gaps.end());
}

void GapProfile::validate() const {
  if (s_grid.size() != gaps.size() || s_grid.size() < 2)
    throw ParameterError("GapProfile: grid/gap size mismatch");
  if (s_grid.front() != 0.0 || s_grid.back() != 1.0)
    throw ParameterError("GapProfile: grid must span [0, 1]");
  for (std::size_t i = 0; i + 1 < s_grid.size(); ++i)
    if (!(s_grid[i] < s_grid[i + 1])) throw ParameterError("GapProfile: grid not increasing");
  for (double g : gaps)
    if (g < 0.0) throw ParameterError("GapProfile: negative gap");
}

namespace {

double clamp_gap(double g, double s) {
  if (g >= 0.0) return g;
  if (g >= -1e-12) return 0.0;
  throw Error("gap_profile: negative gap " + format_double(g) + " at s=" +
              format_double(s) + " (mis-sorted eigensolver output)");
}

const char* gap_kind_name(GapKind k) {
  return k == GapKind::FirstExcited ? "first-excited" : "second-excited";
}

const char* source_name(ProfileSource s) {
  switch (s) {
    case ProfileSource::Exact: return "exact";
    case ProfileSource::Extrapolated: return "extrapolated";
    default: return "analytic";
  }
}

}  // namespace

GapProfile gap_profile(const Problem& problem, int p, SpectrumMethod method,
                       const GapProfileOptions& opts) {
  if (p < 1) throw ParameterError("gap_profile: depth must be >= 1");
  if (problem.kind != ProblemKind::Grover &&
      (method == SpectrumMethod::Symmetric || method == SpectrumMethod::Analytic))
    throw ParameterError("gap_profile: method requires a Grover problem");

  GapProfile out;
  out.n = problem.n;
  out.problem_hash = problem.hash();
  out.gap_kind =
      problem.kind == ProblemKind::Grover ? GapKind::FirstExcited : GapKind::SecondExcited;
  out.source = method == SpectrumMethod::Analytic ? ProfileSource::Analytic
                                                  : ProfileSource::Exact;
  switch (method) {
    case SpectrumMethod::Dense: out.method = "dense"; break;
    case SpectrumMethod::Lanczos: out.method = "lanczos"; break;
    case SpectrumMethod::Symmetric: out.method = "symmetric"; break;
    case SpectrumMethod::Analytic: out.method = "analytic"; break;
  }
  const int upper = out.gap_kind == GapKind::FirstExcited ? 1 : 2;

  double lanczos_tol = opts.lanczos_tol;
  if (lanczos_tol == 0.0) {
    double scale = 1.0;
    for (double d : problem.hc_diag) scale = std::max(scale, std::abs(d));
    lanczos_tol = 1e-10 * scale;
  }

  for (int j = 0; j <= p; ++j) {
    const double s = static_cast<double>(j) / static_cast<double>(p);
    out.s_grid.push_back(s);
    double gap = 0.0;
    try {
      switch (method) {
        case SpectrumMethod::Analytic:
          gap = grover_analytic_gap(problem.n, s);
          break;
        case SpectrumMethod::Symmetric: {
          const auto ev = grover_symmetric_spectrum(problem.n, s);
          gap = ev[static_cast<std::size_t>(upper)] - ev[0];
          break;
        }
        case SpectrumMethod::Dense: {
          const AdiabaticOperator op(problem, s, OperatorKind::MixerInterpolation);
          const auto ev = dense_spectrum(op, upper + 1);
          gap = ev[static_cast<std::size_t>(upper)] - ev[0];
          break;
        }
        case SpectrumMethod::Lanczos: {
          const AdiabaticOperator op(problem, s, OperatorKind::MixerInterpolation);
          LanczosOptions lo;
          lo.tol = lanczos_tol;
          lo.seed = derive_seed(opts.seed, problem.hash(), static_cast<std::uint64_t>(j));
          const auto ev = lanczos_lowest(op.matvec(), op.dim(), upper + 1, lo);
          gap = ev[static_cast<std::size_t>(upper)] - ev[0];
          break;
        }
      }
    } catch (const Error& e) {
      throw Error("gap_profile at s=" + format_double(s) + ": " + e.what());
    }
    out.gaps.push_back(clamp_gap(gap, s));
  }
  out.validate();
  return out;
}

GapProfile extrapolated_gap_profile(const std::vector<std::pair<int, GapProfile>>& calibration,
                                    int target_n, ExtrapolationVariant variant) {
  if (calibration.size() < 2)
    throw ParameterError("extrapolated_gap_profile: need at least 2 calibration profiles");
  const auto& ref = calibration.front().second;
  ref.validate();
  int max_n = 0;
  for (const auto& [n, prof] : calibration) {
    prof.validate();
    if (prof.s_grid != ref.s_grid)
      throw ParameterError("extrapolated_gap_profile: calibration profiles must share a grid");
    max_n = std::max(max_n, n);
  }
  if (target_n <= max_n)
    throw ParameterError("extrapolated_gap_profile: target_n must exceed calibration sizes");

  GapProfile out;
  out.s_grid = ref.s_grid;
  out.n = target_n;
  out.gap_kind = ref.gap_kind;
  out.source = ProfileSource::Extrapolated;
  out.method = variant == ExtrapolationVariant::Degree3 ? "extrapolated-degree3"
                                                        : "extrapolated-er";
  out.problem_hash = 0;

  const std::size_t np = ref.s_grid.size();
  out.gaps.assign(np, 0.0);
  for (std::size_t j = 1; j + 1 < np; ++j) {
    double sum = 0.0;
    for (const auto& [n, prof] : calibration) sum += prof.gaps[j];
    out.gaps[j] = sum / static_cast<double>(calibration.size());
  }
  out.gaps.front() = 4.0;  // mixer E2 - E0 level spacing, known analytically
  if (variant == ExtrapolationVariant::Degree3) {
    out.gaps.back() = 0.0;
  } else {
    // log2(g_min) vs n least squares, evaluated at target_n.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(calibration.size());
    for (const auto& [n, prof] : calibration) {
      const double g = prof.g_min();
      if (g <= 0.0)
        throw ParameterError("extrapolated_gap_profile: ER fit needs positive g_min values");
      const double x = static_cast<double>(n), y = std::log2(g);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) throw ParameterError("extrapolated_gap_profile: degenerate fit");
    const double b = (m * sxy - sx * sy) / denom;
    const double a = (sy - b * sx) / m;
    out.gaps.back() = std::exp2(a + b * static_cast<double>(target_n));
  }
  out.validate();
  return out;
}

void GapProfile::save_csv(std::ostream& os) const {
  os << "# n=" << n << " problem_hash=" << problem_hash << " method=" << method << '\n';
  os << "s,gap,gap_kind,source\n";
  for (std::size_t j = 0; j < s_grid.size(); ++j)
    os << format_double(s_grid[j]) << ',' << format_double(gaps[j]) << ','
       << gap_kind_name(gap_kind) << ',' << source_name(source) << '\n';
}

GapProfile GapProfile::load_csv(std::istream& is) {
  GapProfile out;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
    throw ParameterError("GapProfile::load_csv: missing header comment");
  {
    std::istringstream hs(line.substr(2));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "n") out.n = std::stoi(val);
      else if (key == "problem_hash") out.problem_hash = std::stoull(val);
      else if (key == "method") out.method = val;
    }
  }
  if (!std::getline(is, line) || line != "s,gap,gap_kind,source")
    throw ParameterError("GapProfile::load_csv: missing column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string s_str, g_str, kind_str, src_str;
    if (!std::getline(ls, s_str, ',') || !std::getline(ls, g_str, ',') ||
        !std::getline(ls, kind_str, ',') || !std::getline(ls, src_str))
      throw ParameterError("GapProfile::load_csv: malformed row");
    out.s_grid.push_back(std::stod(s_str));
    out.gaps.push_back(std::stod(g_str));
    out.gap_kind = kind_str == "second-excited" ? GapKind::SecondExcited : GapKind::FirstExcited;
    if (src_str == "extrapolated") out.source = ProfileSource::Extrapolated;
    else if (src_str == "analytic") out.source = ProfileSource::Analytic;
    else out.source = ProfileSource::Exact;
  }
  out.validate();
  return out;
}

}  // namespace sgir
