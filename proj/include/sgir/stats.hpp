#pragma once

#include <utility>
#include <vector>

namespace sgir {

struct ScalingFit {
  double slope = 0.0;      // exponent b in P_s ~ 2^(b n)
  double slope_err = 0.0;  // standard error of b
  double intercept = 0.0;  // log2 intercept
  int points_used = 0;
};

// Least squares of log2(p_s) against n. Non-positive p_s points are dropped
// with a note appended to `warnings` (when given); fewer than 3 usable
// points is an error.
ScalingFit fit_exponential(const std::vector<std::pair<double, double>>& points,
                           std::vector<std::string>* warnings = nullptr);

// Product-moment correlation; errors on constant series.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// 100 (a - b) / b; errors when b is zero.
double percentage_improvement(double p_s_sgir, double p_s_lr);

}  // namespace sgir
