#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "sumsq/band_matrix.hpp"
#include "sumsq/eigensolver.hpp"

namespace sumsq {

/// Finite-difference discretization of the quadratic form
///   ||(d+y) f||^2 + tau^{-k} ||y^k (d-y) f||^2
/// on [-R, R] with Dirichlet ends: each first-order factor is a forward
/// difference plus midpoint multiplication, and the matrix is assembled as a
/// sum of normal equations, so it is exactly symmetric positive semidefinite.
/// Second-order accurate in the grid spacing.
inline GroundState fd_ground_state(int k, double tau, double r = 12.0, int m = 4096,
                                   double tol = 1e-10) {
  if (k < 0) throw std::invalid_argument("fd_ground_state: k >= 0 required");
  if (tau <= 0.0) throw std::domain_error("fd_ground_state: tau > 0 required");
  if (r < 8.0) throw std::invalid_argument("fd_ground_state: R >= 8 required");
  // M >= 512 gives oracle-grade accuracy; coarser grids down to 16 are allowed
  // so callers can probe the discretization alarm.
  if (m < 16) throw std::invalid_argument("fd_ground_state: M >= 16 required");

  const int n = m - 1;  // interior nodes
  const double h = 2.0 * r / m;
  const double weight = std::pow(tau, -k);

  // per-midpoint factor coefficients on (f_left, f_right)
  std::vector<double> al(static_cast<std::size_t>(m)), ar(static_cast<std::size_t>(m));
  std::vector<double> bl(static_cast<std::size_t>(m)), br(static_cast<std::size_t>(m));
  for (int row = 0; row < m; ++row) {
    const double ymid = -r + (row + 0.5) * h;
    al[row] = -1.0 / h + 0.5 * ymid;
    ar[row] = 1.0 / h + 0.5 * ymid;
    const double w = std::pow(ymid, k);
    bl[row] = w * (-1.0 / h - 0.5 * ymid);
    br[row] = w * (1.0 / h - 0.5 * ymid);
  }

  SymBandMatrix mat(n, 1);
  for (int row = 0; row < m; ++row) {
    const int jl = row - 1;  // unknown index of f_row; -1 means boundary zero
    const int jr = row;      // unknown index of f_{row+1}; n means boundary zero
    const double wll = al[row] * al[row] + weight * bl[row] * bl[row];
    const double wlr = al[row] * ar[row] + weight * bl[row] * br[row];
    const double wrr = ar[row] * ar[row] + weight * br[row] * br[row];
    if (jl >= 0) mat.band(0, jl) += wll;
    if (jr < n) mat.band(0, jr) += wrr;
    if (jl >= 0 && jr < n) mat.band(1, jl) += wlr;
  }

  auto quad = [&](std::span<const double> v) {
    double acc = 0.0;
    for (int row = 0; row < m; ++row) {
      const double fl = row == 0 ? 0.0 : v[static_cast<std::size_t>(row - 1)];
      const double fr = row == m - 1 ? 0.0 : v[static_cast<std::size_t>(row)];
      const double qa = al[row] * fl + ar[row] * fr;
      const double qb = bl[row] * fl + br[row] * fr;
      acc += qa * qa + weight * qb * qb;
    }
    return acc;
  };

  GroundState gs = ground_state(mat, tol, quad);
  gs.tau = tau;
  gs.k = k;
  return gs;
}

}  // namespace sumsq
