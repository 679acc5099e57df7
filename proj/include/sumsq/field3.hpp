#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sumsq/hermite.hpp"
#include "sumsq/scaling.hpp"

namespace sumsq {

/// Uniform sampling of one axis, endpoints included.
struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 2;

  double step() const { return (hi - lo) / (n - 1); }
  double coord(int i) const { return lo + step() * i; }
  bool valid() const { return n >= 2 && hi > lo; }

  /// Halve the spacing r times; point count goes n -> (n-1)*2^r + 1.
  Axis refined(int r) const {
    Axis a = *this;
    for (int i = 0; i < r; ++i) a.n = 2 * a.n - 1;
    return a;
  }
};

struct GridSpec {
  Axis x, t, s;

  bool valid() const { return x.valid() && t.valid() && s.valid(); }
  std::size_t count() const {
    return static_cast<std::size_t>(x.n) * static_cast<std::size_t>(t.n) *
           static_cast<std::size_t>(s.n);
  }
  GridSpec refined(int r) const { return {x.refined(r), t.refined(r), s.refined(r)}; }
};

/// Closed box in (x, t, s).
struct Box3 {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};

  static Box3 cube(double r) { return {{-r, -r, -r}, {r, r, r}}; }

  bool valid() const { return lo[0] < hi[0] && lo[1] < hi[1] && lo[2] < hi[2]; }
  bool contains_origin() const {
    return lo[0] <= 0 && hi[0] >= 0 && lo[1] <= 0 && hi[1] >= 0 && lo[2] <= 0 && hi[2] >= 0;
  }
  bool contains(const Box3& inner) const {
    for (int a = 0; a < 3; ++a)
      if (inner.lo[a] < lo[a] || inner.hi[a] > hi[a]) return false;
    return true;
  }
  bool contains_point(double x, double t, double s, double slack = 1e-12) const {
    return x >= lo[0] - slack && x <= hi[0] + slack && t >= lo[1] - slack && t <= hi[1] + slack &&
           s >= lo[2] - slack && s <= hi[2] + slack;
  }
};

inline Box3 grid_bounds(const GridSpec& g) {
  return {{g.x.lo, g.t.lo, g.s.lo}, {g.x.hi, g.t.hi, g.s.hi}};
}

/// Complex samples of a function on a grid, x-major layout
/// data[(ix * nt + it) * ns + is]. Carries the construction parameters.
struct Field3 {
  GridSpec grid;
  std::vector<Complex> data;
  int k = 0;
  double tau = 0.0;
  double sigma = 0.0;
  int n_basis = 0;

  std::size_t index(int ix, int it, int is) const {
    return (static_cast<std::size_t>(ix) * static_cast<std::size_t>(grid.t.n) +
            static_cast<std::size_t>(it)) *
               static_cast<std::size_t>(grid.s.n) +
           static_cast<std::size_t>(is);
  }
  Complex at(int ix, int it, int is) const { return data[index(ix, it, is)]; }
};

/// Samples of e^{i tau t} e^{sigma s} psi(sqrt(tau) x) from a coefficient
/// vector; the three factors are tensorized per axis.
inline Field3 sample_separated(const GroundState& gs, double sigma, const GridSpec& grid) {
  if (!grid.valid()) throw std::invalid_argument("sample_separated: invalid grid");
  Field3 f;
  f.grid = grid;
  f.k = gs.k;
  f.tau = gs.tau;
  f.sigma = sigma;
  f.n_basis = gs.n_basis;

  const double root_tau = std::sqrt(gs.tau);
  std::vector<double> ys(static_cast<std::size_t>(grid.x.n));
  for (int i = 0; i < grid.x.n; ++i) ys[static_cast<std::size_t>(i)] = root_tau * grid.x.coord(i);
  const std::vector<double> psi = eval_eigenfunction(gs.coeffs, ys);

  std::vector<Complex> phase(static_cast<std::size_t>(grid.t.n));
  for (int i = 0; i < grid.t.n; ++i) {
    const double a = gs.tau * grid.t.coord(i);
    phase[static_cast<std::size_t>(i)] = Complex(std::cos(a), std::sin(a));
  }
  std::vector<double> expo(static_cast<std::size_t>(grid.s.n));
  for (int i = 0; i < grid.s.n; ++i)
    expo[static_cast<std::size_t>(i)] = std::exp(sigma * grid.s.coord(i));

  for (double e : expo)
    if (!std::isfinite(e))
      throw std::runtime_error("sample_separated: e^{sigma s} overflows on this grid");

  f.data.resize(grid.count());
  for (int ix = 0; ix < grid.x.n; ++ix)
    for (int it = 0; it < grid.t.n; ++it) {
      const Complex px = psi[static_cast<std::size_t>(ix)] * phase[static_cast<std::size_t>(it)];
      const std::size_t base = f.index(ix, it, 0);
      for (int is = 0; is < grid.s.n; ++is)
        f.data[base + static_cast<std::size_t>(is)] = px * expo[static_cast<std::size_t>(is)];
    }
  return f;
}

/// u_tau(x,t,s) = e^{i tau t} e^{sigma(tau) s} psi_tau(sqrt(tau) x) with
/// psi_tau the adaptive ground state and sigma^2 = tau lambda(tau).
inline Field3 build_u(int k, double tau, const GridSpec& grid, double tol = 1e-8) {
  if (tau < 1.0) throw std::invalid_argument("build_u: tau >= 1 required");
  const GroundState gs = adaptive_ground_state(k, tau, tol);
  return sample_separated(gs, sigma_of(tau, gs.lambda), grid);
}

}  // namespace sumsq
