#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sumsq/fd_oracle.hpp"
#include "sumsq/hermite.hpp"
#include "sumsq/power_law.hpp"

namespace sumsq {

/// sigma(tau) > 0 solving sigma^2 = tau * lambda.
inline double sigma_of(double tau, double lambda) {
  if (lambda < 0.0) throw std::domain_error("sigma_of: lambda >= 0 required");
  return std::sqrt(tau * lambda);
}

/// One tau sample of the sweep. `error` is empty on success; failed rows keep
/// their tau and carry the solver message.
struct ScalingRow {
  double tau = 0.0;
  int k = 0;
  double lambda = 0.0;
  double lambda_tau_k = 0.0;
  double sigma = 0.0;
  int n_used = 0;
  double residual = 0.0;
  double ynorm = 0.0;
  double dnorm = 0.0;
  double overlap = 0.0;
  double gnorm = 0.0;
  double sup_near0 = 0.0;
  std::string error;
};

inline ScalingRow scaling_row(int k, double tau, double tol) {
  ScalingRow row;
  row.tau = tau;
  row.k = k;
  try {
    GroundState gs = adaptive_ground_state(k, tau, tol);
    NormProfile np = derived_norms(gs.coeffs);
    row.lambda = gs.lambda;
    row.lambda_tau_k = gs.lambda * std::pow(tau, k);
    row.sigma = sigma_of(tau, gs.lambda);
    row.n_used = gs.n_basis;
    row.residual = gs.residual;
    row.ynorm = np.ynorm;
    row.dnorm = np.dnorm;
    row.overlap = np.overlap;
    row.gnorm = np.gnorm;
    row.sup_near0 = np.sup_near0;
  } catch (const std::exception& e) {
    row.lambda = row.lambda_tau_k = row.sigma = std::nan("");
    row.error = e.what();
  }
  return row;
}

/// Geometric grid from tau_min to tau_max inclusive.
inline std::vector<double> geometric_grid(double tau_min, double tau_max, int points) {
  if (points < 1 || tau_min <= 0.0 || tau_max < tau_min)
    throw std::invalid_argument("geometric_grid: bad range");
  std::vector<double> out(static_cast<std::size_t>(points));
  if (points == 1) {
    out[0] = tau_min;
    return out;
  }
  const double ratio = std::log(tau_max / tau_min) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = tau_min * std::exp(ratio * i);
  return out;
}

/// One row per tau, ordered by tau regardless of execution order. Rows for
/// which the solver fails are tagged, not dropped.
inline std::vector<ScalingRow> sweep(int k, std::span<const double> taus, double tol = 1e-8,
                                     int threads = 1) {
  for (double tau : taus)
    if (tau < 1.0) throw std::invalid_argument("sweep: tau >= 1 required");
  std::vector<double> sorted(taus.begin(), taus.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<ScalingRow> rows(sorted.size());
  const int nthreads = std::max(1, threads);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < sorted.size(); ++i) rows[i] = scaling_row(k, sorted[i], tol);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t]() {
        for (std::size_t i = static_cast<std::size_t>(t); i < sorted.size();
             i += static_cast<std::size_t>(nthreads))
          rows[i] = scaling_row(k, sorted[i], tol);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

/// Sweep rows plus the two power-law fits over tau >= fit_tau_min. The
/// empirical range of lambda*tau^k stands in for the two implicit constants of
/// the two-sided eigenvalue bound (their ordering is reported, not asserted).
struct ScalingReport {
  int k = 0;
  std::vector<ScalingRow> rows;
  PowerLawFit lambda_fit;
  PowerLawFit sigma_fit;
  double fit_tau_min = 64.0;
  double lambda_tau_k_inf = 0.0;
  double lambda_tau_k_sup = 0.0;
  int failed_rows = 0;
};

inline ScalingReport analyze_sweep(int k, std::vector<ScalingRow> rows, double fit_tau_min = 64.0) {
  ScalingReport rep;
  rep.k = k;
  rep.fit_tau_min = fit_tau_min;
  rep.rows = std::move(rows);
  rep.lambda_tau_k_inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> lam, sig;
  for (const auto& r : rep.rows) {
    if (!r.error.empty()) {
      ++rep.failed_rows;
      continue;
    }
    rep.lambda_tau_k_inf = std::min(rep.lambda_tau_k_inf, r.lambda_tau_k);
    rep.lambda_tau_k_sup = std::max(rep.lambda_tau_k_sup, r.lambda_tau_k);
    if (r.tau >= fit_tau_min) {
      lam.emplace_back(r.tau, r.lambda);
      sig.emplace_back(r.tau, r.sigma);
    }
  }
  rep.lambda_fit = fit_power_law(lam);
  rep.sigma_fit = fit_power_law(sig);
  return rep;
}

}  // namespace sumsq
