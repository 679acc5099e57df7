#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sumsq/band_matrix.hpp"
#include "sumsq/diff_op.hpp"
#include "sumsq/eigensolver.hpp"

namespace sumsq {

struct LadderPair {
  BandedMatrix y;  // multiplication by y
  BandedMatrix d;  // d/dy
};

/// Matrices of y and d/dy on the orthonormal Hermite-function basis, size
/// N + pad. Both are exactly bidiagonal:
///   Y(n+1,n) = Y(n,n+1) = sqrt((n+1)/2),
///   D(n,n+1) = sqrt((n+1)/2), D(n+1,n) = -sqrt((n+1)/2).
inline LadderPair ladder_matrices(int n, int pad = 0) {
  if (n < 1 || pad < 0) throw std::invalid_argument("ladder_matrices: bad sizes");
  const int m = n + pad;
  BandedMatrix y(m, 1, 1), d(m, 1, 1);
  for (int i = 0; i + 1 < m; ++i) {
    const double c = std::sqrt(0.5 * (i + 1));
    y.ref(i + 1, i) = c;
    y.ref(i, i + 1) = c;
    d.ref(i, i + 1) = c;
    d.ref(i + 1, i) = -c;
  }
  return {std::move(y), std::move(d)};
}

/// Galerkin matrix of a real-coefficient ODE operator: substitute ladder
/// matrices at size N + pad (pad = coefficient degree + order), multiply,
/// truncate the product to the leading N-by-N block, and symmetrize. Refuses
/// operators whose truncated block is asymmetric beyond 1e-8 relative.
inline SymBandMatrix assemble(const OdeOp& op, int n) {
  if (n < 1) throw std::invalid_argument("assemble: N >= 1 required");
  const int pad = op.op().coeff_degree() + op.max_order();
  auto [y, d] = ladder_matrices(n, pad);
  const int m = n + pad;

  BandedMatrix acc(m, 0, 0);
  BandedMatrix dpow = BandedMatrix::identity(m);
  for (int ord = 0; ord <= op.max_order(); ++ord) {
    if (ord > 0) dpow = dpow * d;
    if (op.coeff(ord).is_zero()) continue;
    const std::vector<double> cs = op.dense_real_coeffs(ord);
    BandedMatrix cy(m, 0, 0);
    BandedMatrix ypow = BandedMatrix::identity(m);
    for (std::size_t deg = 0; deg < cs.size(); ++deg) {
      if (deg > 0) ypow = ypow * y;
      if (cs[deg] == 0.0) continue;
      BandedMatrix term = ypow;
      term *= cs[deg];
      cy = cy + term;
    }
    acc = acc + cy * dpow;
  }
  return SymBandMatrix::from_banded_truncate(acc, n, 1e-8);
}

/// The two first-order factors of the quadratic form
///   <Q_tau f, f> = ||(d+y) f||^2 + tau^{-k} ||y^k (d-y) f||^2
/// held at padded size so their Gram matrices are the exact Galerkin blocks.
class FactoredOperator {
 public:
  FactoredOperator(int k, double tau, int n)
      : k_(k), tau_(tau), n_(n), weight_(std::pow(tau, -k)),
        g_plus_(1, 0, 0), g_k_(1, 0, 0),
        matrix_(1, 0) {
    if (k < 0) throw std::invalid_argument("FactoredOperator: k >= 0 required");
    if (tau <= 0.0) throw std::domain_error("FactoredOperator: tau > 0 required");
    if (n < 1) throw std::invalid_argument("FactoredOperator: N >= 1 required");
    const int pad = 2 * k + 2;
    auto [y, d] = ladder_matrices(n, pad);
    g_plus_ = d + y;
    BandedMatrix yk = BandedMatrix::identity(n + pad);
    for (int i = 0; i < k; ++i) yk = yk * y;
    BandedMatrix minus = d + (BandedMatrix(y) *= -1.0);
    g_k_ = yk * minus;
    matrix_ = SymBandMatrix::weighted_sum(1.0, SymBandMatrix::gram_truncated(g_plus_, n),
                                          weight_, SymBandMatrix::gram_truncated(g_k_, n));
  }

  int k() const { return k_; }
  double tau() const { return tau_; }
  int n() const { return n_; }
  const SymBandMatrix& matrix() const { return matrix_; }

  /// <M v, v> evaluated through the factors: a sum of squares, no cancellation.
  double quad_form(std::span<const double> v) const {
    const std::vector<double> a = g_plus_.apply_padded(v);
    const std::vector<double> b = g_k_.apply_padded(v);
    double qa = 0.0, qb = 0.0;
    for (double x : a) qa += x * x;
    for (double x : b) qb += x * x;
    return qa + weight_ * qb;
  }

 private:
  int k_;
  double tau_;
  int n_;
  double weight_;
  BandedMatrix g_plus_;
  BandedMatrix g_k_;
  SymBandMatrix matrix_;
};

/// M = G+^T G+ + tau^{-k} G^T G; exactly symmetric positive semidefinite.
inline SymBandMatrix assemble_factored(int k, double tau, int n) {
  return FactoredOperator(k, tau, n).matrix();
}

/// Ground state of Q_tau at fixed truncation, eigenvalue through the factored
/// quadratic form.
inline GroundState solve_ground_state(int k, double tau, int n, double tol = 1e-10) {
  FactoredOperator fo(k, tau, n);
  GroundState gs = ground_state(fo.matrix(), tol,
                                [&fo](std::span<const double> v) { return fo.quad_form(v); });
  gs.tau = tau;
  gs.k = k;
  return gs;
}

/// Doubles the truncation until |lambda_N - lambda_2N| <= tol * lambda_2N.
inline GroundState adaptive_ground_state(int k, double tau, double tol = 1e-8, int n0 = 32,
                                         int n_cap = 8192) {
  if (n0 < 2) throw std::invalid_argument("adaptive_ground_state: N0 >= 2 required");
  const double inner = std::max(tol * 1e-2, 1e-13);
  GroundState prev = solve_ground_state(k, tau, n0, inner);
  for (int n = 2 * n0; n <= n_cap; n *= 2) {
    GroundState cur = solve_ground_state(k, tau, n, inner);
    if (std::abs(cur.lambda - prev.lambda) <= tol * std::max(std::abs(cur.lambda), 1e-300))
      return cur;
    prev = std::move(cur);
  }
  throw SolveError("adaptive_ground_state: truncation cap reached without convergence", prev);
}

/// psi(y) = sum c_n h_n(y) with the stable normalized recurrence
///   h_{n+1} = sqrt(2/(n+1)) y h_n - sqrt(n/(n+1)) h_{n-1},
/// h_0 = pi^{-1/4} exp(-y^2/2). Extended precision keeps the Gaussian seed
/// alive out to |y| ~ sqrt(2N)+4 for large N.
inline std::vector<double> eval_eigenfunction(std::span<const double> c,
                                              std::span<const double> ys) {
  static const long double h0_const =
      std::pow(3.141592653589793238462643383279502884L, -0.25L);
  const std::size_t n = c.size();
  std::vector<long double> up(n), down(n);
  for (std::size_t m = 1; m < n; ++m) {
    up[m] = std::sqrt(2.0L / static_cast<long double>(m));
    down[m] = std::sqrt(static_cast<long double>(m - 1) / static_cast<long double>(m));
  }
  std::vector<double> out(ys.size(), 0.0);
  for (std::size_t p = 0; p < ys.size(); ++p) {
    const long double y = ys[p];
    long double hprev = 0.0L;
    long double h = h0_const * std::exp(-0.5L * y * y);
    long double acc = n > 0 ? c[0] * h : 0.0L;
    for (std::size_t m = 1; m < n; ++m) {
      const long double hn = up[m] * y * h - down[m] * hprev;
      hprev = h;
      h = hn;
      acc += c[m] * h;
    }
    out[p] = static_cast<double>(acc);
  }
  return out;
}

/// L2 and sup-norm diagnostics of a unit coefficient vector.
struct NormProfile {
  double ynorm = 0.0;      // ||y psi||
  double dnorm = 0.0;      // ||psi'||
  double overlap = 0.0;    // |c_0|, the Gaussian component
  double gnorm = 0.0;      // ||psi - c_0 h_0||
  double supnorm = 0.0;    // max |psi| on the wide grid
  double sup_near0 = 0.0;  // max |psi| on |y| <= 4
};

inline NormProfile derived_norms(std::span<const double> c) {
  const int n = static_cast<int>(c.size());
  if (n < 1) throw std::invalid_argument("derived_norms: empty coefficient vector");
  auto [y, d] = ladder_matrices(n, 1);
  const std::vector<double> yv = y.apply_padded(c);
  const std::vector<double> dv = d.apply_padded(c);
  auto l2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  NormProfile np;
  np.ynorm = l2(yv);
  np.dnorm = l2(dv);
  np.overlap = std::abs(c[0]);
  np.gnorm = std::sqrt(std::max(0.0, 1.0 - np.overlap * np.overlap));

  auto sup_on = [&c](double lo, double hi, int pts) {
    std::vector<double> ys(static_cast<std::size_t>(pts));
    for (int i = 0; i < pts; ++i) ys[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (pts - 1);
    double m = 0.0;
    for (double v : eval_eigenfunction(c, ys)) m = std::max(m, std::abs(v));
    return m;
  };

  np.sup_near0 = sup_on(-4.0, 4.0, 1601);
  const double span = std::max(8.0, std::sqrt(2.0 * n) + 4.0);
  const int pts = 2 * static_cast<int>(std::llround(span / 0.01)) + 1;
  np.supnorm = sup_on(-span, span, pts);
  return np;
}

}  // namespace sumsq
