#include "sgir/stats.hpp"

#include <cmath>
#include <string>

#include "sgir/common.hpp"

namespace sgir {

ScalingFit fit_exponential(const std::vector<std::pair<double, double>>& points,
                           std::vector<std::string>* warnings) {
  std::vector<std::pair<double, double>> usable;
  for (const auto& [n, ps] : points) {
    if (ps > 0.0) {
      usable.push_back({n, std::log2(ps)});
    } else if (warnings) {
      warnings->push_back("fit_exponential: dropped non-positive p_s at n=" + format_double(n));
    }
  }
  const int m = static_cast<int>(usable.size());
  if (m < 3) throw ParameterError("fit_exponential: fewer than 3 usable points");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : usable) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw ParameterError("fit_exponential: degenerate abscissae");
  ScalingFit fit;
  fit.points_used = m;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  double ssr = 0.0;
  for (const auto& [x, y] : usable) {
    const double r = y - (fit.intercept + fit.slope * x);
    ssr += r * r;
  }
  const double sxx_centered = sxx - sx * sx / m;
  fit.slope_err = m > 2 ? std::sqrt(ssr / (m - 2) / sxx_centered) : 0.0;
  return fit;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ParameterError("pearson: need two series of equal length >= 2");
  const double m = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ParameterError("pearson: correlation undefined for a constant series");
  return sxy / std::sqrt(sxx * syy);
}

double percentage_improvement(double p_s_sgir, double p_s_lr) {
  if (p_s_lr == 0.0) throw ParameterError("percentage_improvement: zero baseline");
  return 100.0 * (p_s_sgir - p_s_lr) / p_s_lr;
}

}  // namespace sgir
