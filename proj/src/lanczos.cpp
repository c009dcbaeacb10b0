#include "sgir/lanczos.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "sgir/common.hpp"
#include "sgir/rng.hpp"

namespace sgir {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double c, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

// Two rounds of classical Gram-Schmidt against every vector in each basis.
void orthogonalize(std::vector<double>& w, const std::vector<std::vector<double>>& basis_a,
                   const std::vector<std::vector<double>>& basis_b) {
  for (int round = 0; round < 2; ++round) {
    for (const auto& v : basis_a) axpy(-dot(v, w), v, w);
    for (const auto& v : basis_b) axpy(-dot(v, w), v, w);
  }
}

bool random_orthonormal(std::vector<double>& v, Rng& rng,
                        const std::vector<std::vector<double>>& basis_a,
                        const std::vector<std::vector<double>>& basis_b) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    orthogonalize(v, basis_a, basis_b);
    const double nrm = norm(v);
    if (nrm > 1e-8 * std::sqrt(static_cast<double>(v.size()))) {
      for (auto& x : v) x /= nrm;
      return true;
    }
  }
  return false;  // complement exhausted
}

struct RitzPair {
  double value;
  std::vector<double> vec;
  double residual;
};

}  // namespace

std::vector<double> lanczos_lowest(const MatVec& matvec, std::size_t dim, int k,
                                   const LanczosOptions& opts) {
  if (k < 1) throw ParameterError("lanczos_lowest: k must be >= 1");
  if (dim < static_cast<std::size_t>(k))
    throw ParameterError("lanczos_lowest: dim must be >= k");

  const int per_pass_iter =
      opts.max_iter > 0
          ? opts.max_iter
          : static_cast<int>(20.0 * std::sqrt(static_cast<double>(dim))) + 200;
  Rng rng(opts.seed);

  std::vector<RitzPair> locked;
  double scale_est = 0.0;

  const int max_passes = k + 2;
  for (int pass = 0; pass < max_passes; ++pass) {
    if (static_cast<int>(locked.size()) >= k && pass >= k) break;
    if (locked.size() >= dim) break;

    std::vector<std::vector<double>> locked_vecs;
    locked_vecs.reserve(locked.size());
    for (const auto& p : locked) locked_vecs.push_back(p.vec);

    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}; 0 marks a seam
    std::vector<double> v(dim), w(dim);
    if (!random_orthonormal(v, rng, locked_vecs, basis)) break;
    basis.push_back(v);

    const int want = std::min<std::size_t>(static_cast<std::size_t>(k), dim - locked.size());
    std::vector<double> prev_theta;
    std::vector<RitzPair> pass_result;
    bool exhausted = false;

    const std::size_t basis_cap = dim - locked.size();
    int next_check = std::min(per_pass_iter, std::max(8, want + opts.extra_ritz));

    for (int it = 0; it < per_pass_iter; ++it) {
      matvec(basis.back(), w);
      const double a = dot(basis.back(), w);
      alpha.push_back(a);
      scale_est = std::max({scale_est, std::abs(a),
                            beta.empty() ? 0.0 : std::abs(beta.back())});
      axpy(-a, basis.back(), w);
      if (basis.size() >= 2 && !beta.empty() && beta.back() != 0.0)
        axpy(-beta.back(), basis[basis.size() - 2], w);
      orthogonalize(w, basis, locked_vecs);
      const double b = norm(w);
      const double breakdown = 1e-13 * std::max(1.0, scale_est);

      const bool at_cap = basis.size() >= basis_cap;
      if (b <= breakdown || at_cap) {
        if (at_cap || basis.size() + locked.size() >= dim) {
          exhausted = true;
        } else {
          // invariant subspace found; continue in a fresh random direction
          beta.push_back(0.0);
          if (!random_orthonormal(w, rng, basis, locked_vecs)) {
            exhausted = true;
          } else {
            basis.push_back(w);
          }
        }
        if (exhausted) next_check = it;  // force a final extraction below
      } else {
        beta.push_back(b);
        for (auto& x : w) x /= b;
        basis.push_back(w);
      }

      const int m = static_cast<int>(alpha.size());
      if (it < next_check && !exhausted && m < static_cast<int>(basis_cap)) continue;
      next_check = it + std::max(20, m / 4);

      // Ritz values of the (possibly seamed) tridiagonal matrix.
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max(0, m - 1));
      for (int j = 0; j + 1 < m; ++j) sub[j] = beta[static_cast<std::size_t>(j)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      const int navail = std::min(want, m);
      std::vector<double> theta(es.eigenvalues().data(), es.eigenvalues().data() + navail);

      const bool stationary =
          prev_theta.size() == theta.size() &&
          std::equal(theta.begin(), theta.end(), prev_theta.begin(),
                     [&](double x, double y) {
                       return std::abs(x - y) <= 1e-3 * opts.tol * std::max(1.0, scale_est);
                     });
      prev_theta = theta;
      if (!stationary && !exhausted && m < static_cast<int>(basis_cap)) continue;

      // Candidate pairs look converged (or the space is exhausted): compute
      // eigenvectors and explicit residuals.
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      pass_result.clear();
      bool all_ok = true;
      // Lock tighter than the contract tolerance so that deflated passes do
      // not produce ghost copies of already-locked eigenvalues.
      const double lock_tol =
          std::min(opts.tol, std::max(1e-11 * std::max(1.0, scale_est), 1e-14));
      std::vector<double> hy(dim);
      for (int c = 0; c < navail; ++c) {
        RitzPair p;
        p.value = es.eigenvalues()[c];
        p.vec.assign(dim, 0.0);
        for (int j = 0; j < m; ++j)
          axpy(es.eigenvectors()(j, c), basis[static_cast<std::size_t>(j)], p.vec);
        const double vn = norm(p.vec);
        if (vn > 0) for (auto& x : p.vec) x /= vn;
        matvec(p.vec, hy);
        axpy(-p.value, p.vec, hy);
        p.residual = norm(hy);
        pass_result.push_back(std::move(p));
        if (pass_result.back().residual > lock_tol) all_ok = false;
      }
      if (all_ok || exhausted || it + 1 >= per_pass_iter) break;
    }

    // Lock every pair that meets the contract tolerance.
    bool progressed = false;
    std::vector<double> failed_residuals;
    for (auto& p : pass_result) {
      if (p.residual <= opts.tol) {
        locked.push_back(std::move(p));
        progressed = true;
      } else {
        failed_residuals.push_back(p.residual);
      }
    }
    if (!progressed && static_cast<int>(locked.size()) < k)
      throw ConvergenceError("lanczos_lowest: no Ritz pair reached tolerance " +
                                 format_double(opts.tol) + " within " +
                                 std::to_string(per_pass_iter) + " iterations",
                             failed_residuals);
    if (exhausted && locked.size() >= dim) break;
  }

  if (static_cast<int>(locked.size()) < k)
    throw ConvergenceError("lanczos_lowest: converged only " +
                               std::to_string(locked.size()) + " of " + std::to_string(k) +
                               " requested eigenvalues",
                           {});
  std::vector<double> values;
  values.reserve(locked.size());
  for (const auto& p : locked) values.push_back(p.value);
  std::sort(values.begin(), values.end());
  values.resize(static_cast<std::size_t>(k));
  return values;
}

}  // namespace sgir
