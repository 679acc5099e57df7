#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumsq/band_matrix.hpp"

namespace sumsq {

/// Principal eigenpair of an assembled operator.
struct GroundState {
  double lambda = 0.0;
  std::vector<double> coeffs;  // unit Euclidean norm, coeffs[0] sign-normalized >= 0
  int n_basis = 0;
  double residual = 0.0;  // ||M c - lambda c||
  double gap = 0.0;       // distance to the second eigenvalue
  double tau = 0.0;
  int k = 0;
};

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, GroundState best_so_far)
      : std::runtime_error(what), best(std::move(best_so_far)) {}
  GroundState best;
};

/// LDL^T factorization of M - sigma*I without pivoting; tiny pivots are
/// perturbed so the factorization always completes (standard bisection trick).
class BandLdlt {
 public:
  BandLdlt(const SymBandMatrix& m, double sigma) : n_(m.size()), b_(m.halfband()) {
    l_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(b_), 0.0);
    d_.assign(static_cast<std::size_t>(n_), 0.0);
    const double tiny =
        std::numeric_limits<double>::epsilon() * std::max(m.inf_norm() + std::abs(sigma), 1.0) * 1e-3;
    for (int j = 0; j < n_; ++j) {
      double dj = m.at(j, j) - sigma;
      const int klo = std::max(0, j - b_);
      for (int k = klo; k < j; ++k) {
        const double ljk = lentry(j, k);
        dj -= ljk * ljk * d_[static_cast<std::size_t>(k)];
      }
      if (std::abs(dj) < tiny) dj = (dj < 0.0) ? -tiny : tiny;
      if (dj < 0.0) ++negcount_;
      d_[static_cast<std::size_t>(j)] = dj;
      const int ihi = std::min(n_ - 1, j + b_);
      for (int i = j + 1; i <= ihi; ++i) {
        double s = m.at(i, j);
        const int kk = std::max({0, i - b_, j - b_});
        for (int k = kk; k < j; ++k)
          s -= lentry(i, k) * lentry(j, k) * d_[static_cast<std::size_t>(k)];
        lentry(i, j) = s / dj;
      }
    }
  }

  int negative_pivots() const { return negcount_; }

  /// Solve (M - sigma I) x = rhs in place.
  void solve(std::vector<double>& x) const {
    for (int i = 0; i < n_; ++i) {
      double s = x[static_cast<std::size_t>(i)];
      const int klo = std::max(0, i - b_);
      for (int k = klo; k < i; ++k) s -= lentry_c(i, k) * x[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(i)] = s;
    }
    for (int i = 0; i < n_; ++i) x[static_cast<std::size_t>(i)] /= d_[static_cast<std::size_t>(i)];
    for (int i = n_ - 1; i >= 0; --i) {
      double s = x[static_cast<std::size_t>(i)];
      const int khi = std::min(n_ - 1, i + b_);
      for (int k = i + 1; k <= khi; ++k) s -= lentry_c(k, i) * x[static_cast<std::size_t>(k)];
      x[static_cast<std::size_t>(i)] = s;
    }
  }

 private:
  double& lentry(int i, int j) {
    return l_[static_cast<std::size_t>(j) * static_cast<std::size_t>(b_) +
              static_cast<std::size_t>(i - j - 1)];
  }
  double lentry_c(int i, int j) const {
    return l_[static_cast<std::size_t>(j) * static_cast<std::size_t>(b_) +
              static_cast<std::size_t>(i - j - 1)];
  }

  int n_, b_;
  int negcount_ = 0;
  std::vector<double> l_;
  std::vector<double> d_;
};

/// Number of eigenvalues of M strictly below x (Sylvester inertia).
inline int inertia_below(const SymBandMatrix& m, double x) {
  return BandLdlt(m, x).negative_pivots();
}

namespace detail {

inline std::pair<double, double> gershgorin_interval(const SymBandMatrix& m) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m.size(); ++i) {
    double r = 0.0;
    for (int j = std::max(0, i - m.halfband()); j <= std::min(m.size() - 1, i + m.halfband()); ++j)
      if (j != i) r += std::abs(m.at(i, j));
    lo = std::min(lo, m.at(i, i) - r);
    hi = std::max(hi, m.at(i, i) + r);
  }
  return {lo, hi};
}

/// k-th smallest eigenvalue (1-based) to absolute tolerance by bisection.
inline double bisect_kth_eigenvalue(const SymBandMatrix& m, int kth, double abs_tol) {
  auto [lo, hi] = gershgorin_interval(m);
  const double pad = std::max(1.0, std::abs(lo) + std::abs(hi)) * 1e-12;
  lo -= pad;
  hi += pad;
  int guard = 0;
  while (hi - lo > abs_tol && guard++ < 2000) {
    const double mid = 0.5 * (lo + hi);
    if (inertia_below(m, mid) >= kth)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Deterministic smallest eigenpair of a symmetric band matrix: bisection on
/// LDL^T inertia brackets the eigenvalue, shifted inverse iteration recovers
/// the eigenvector, and `quad_form` (when given) supplies a cancellation-free
/// Rayleigh quotient for the final eigenvalue.
inline GroundState ground_state(
    const SymBandMatrix& m, double tol = 1e-10,
    const std::function<double(std::span<const double>)>& quad_form = nullptr) {
  const int n = m.size();
  const double scale = std::max(m.inf_norm(), 1e-300);
  const double eps = std::numeric_limits<double>::epsilon();

  GroundState gs;
  gs.n_basis = n;
  if (n == 1) {
    gs.lambda = m.at(0, 0);
    gs.coeffs = {1.0};
    gs.gap = 0.0;
    return gs;
  }

  const double abs_tol = 4.0 * eps * scale;
  const double lambda1 = detail::bisect_kth_eigenvalue(m, 1, abs_tol);
  const double lambda2 = detail::bisect_kth_eigenvalue(m, 2, std::max(1e-10 * scale, abs_tol));

  const double shift = lambda1 - 8.0 * abs_tol;
  BandLdlt fac(m, shift);

  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = 1.0 / (1.0 + i);

  auto normalize = [&](std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    s = std::sqrt(s);
    for (double& e : x) e /= s;
  };
  normalize(v);

  double lambda_rq = 0.0, residual = 0.0;
  for (int it = 0; it < 30; ++it) {
    fac.solve(v);
    normalize(v);
    std::vector<double> mv = m.matvec(v);
    lambda_rq = 0.0;
    for (int i = 0; i < n; ++i) lambda_rq += v[static_cast<std::size_t>(i)] * mv[static_cast<std::size_t>(i)];
    residual = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = mv[static_cast<std::size_t>(i)] - lambda_rq * v[static_cast<std::size_t>(i)];
      residual += r * r;
    }
    residual = std::sqrt(residual);
    if (residual <= tol * scale) break;
  }

  // sign convention: leading coefficient non-negative
  double lead = v[0];
  if (lead == 0.0)
    for (double e : v)
      if (e != 0.0) {
        lead = e;
        break;
      }
  if (lead < 0.0)
    for (double& e : v) e = -e;

  gs.coeffs = std::move(v);
  gs.lambda = quad_form ? quad_form(gs.coeffs) : lambda_rq;
  if (gs.lambda < 0.0 && -gs.lambda <= 1e-10 * scale) gs.lambda = 0.0;
  gs.residual = residual;
  gs.gap = std::max(0.0, lambda2 - lambda1);

  if (residual > tol * scale)
    throw SolveError("ground_state: inverse iteration did not reach tolerance", gs);
  return gs;
}

}  // namespace sumsq
