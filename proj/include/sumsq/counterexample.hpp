#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumsq/diff_op.hpp"
#include "sumsq/field3.hpp"
#include "sumsq/model.hpp"
#include "sumsq/power_law.hpp"
#include "sumsq/scaling.hpp"

namespace sumsq {

struct SupNorms {
  double sup_u = 0.0;
  double sup_dtu = 0.0;  // exact: |d_t u| = tau |u| pointwise
};

/// Grid-sampled sup of |u| (and of |d_t u| = tau |u|) over a box. The box must
/// lie within the grid bounds.
inline SupNorms sup_norms(const Field3& u, const Box3& box, bool with_dt = true) {
  if (!box.valid()) throw std::invalid_argument("sup_norms: degenerate box");
  if (!grid_bounds(u.grid).contains(box)) throw std::invalid_argument("sup_norms: box outside grid");
  SupNorms out;
  for (int ix = 0; ix < u.grid.x.n; ++ix) {
    const double x = u.grid.x.coord(ix);
    if (x < box.lo[0] - 1e-12 || x > box.hi[0] + 1e-12) continue;
    for (int it = 0; it < u.grid.t.n; ++it) {
      const double t = u.grid.t.coord(it);
      if (t < box.lo[1] - 1e-12 || t > box.hi[1] + 1e-12) continue;
      for (int is = 0; is < u.grid.s.n; ++is) {
        const double s = u.grid.s.coord(is);
        if (s < box.lo[2] - 1e-12 || s > box.hi[2] + 1e-12) continue;
        out.sup_u = std::max(out.sup_u, std::abs(u.at(ix, it, is)));
      }
    }
  }
  if (with_dt) out.sup_dtu = u.tau * out.sup_u;
  return out;
}

namespace detail {

// Second-order centered stencil for the m-th derivative, offsets -1..1.
inline void stencil_1d(int m, double h, std::array<double, 3>& w) {
  switch (m) {
    case 0: w = {0.0, 1.0, 0.0}; break;
    case 1: w = {-0.5 / h, 0.0, 0.5 / h}; break;
    case 2: w = {1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)}; break;
    default: throw std::invalid_argument("stencil_1d: derivative order > 2 per axis unsupported");
  }
}

}  // namespace detail

/// Applies a polynomial-coefficient operator to sampled data with composed
/// second-order centered stencils; returns the sup of |L u| over grid points
/// of `box` that keep the stencil inside the grid.
inline double fd_apply_sup(const DiffOp& op, const Field3& u, const Box3& box) {
  if (op.vars() != space_vars()) throw std::invalid_argument("fd_apply_sup: operator must act on (x,t,s)");
  const auto& g = u.grid;
  struct Term {
    std::array<int, 3> order;
    std::array<std::array<double, 3>, 3> w;
    const Polynomial* coeff;
  };
  std::vector<Term> terms;
  const double hs[3] = {g.x.step(), g.t.step(), g.s.step()};
  for (const auto& [mi, p] : op.terms()) {
    Term t;
    t.order = {mi[0], mi[1], mi[2]};
    for (int a = 0; a < 3; ++a) detail::stencil_1d(t.order[a], hs[a], t.w[a]);
    t.coeff = &p;
    terms.push_back(t);
  }

  double sup = 0.0;
  for (int ix = 1; ix + 1 < g.x.n; ++ix) {
    const double x = g.x.coord(ix);
    if (x < box.lo[0] - 1e-12 || x > box.hi[0] + 1e-12) continue;
    for (int it = 1; it + 1 < g.t.n; ++it) {
      const double t = g.t.coord(it);
      if (t < box.lo[1] - 1e-12 || t > box.hi[1] + 1e-12) continue;
      for (int is = 1; is + 1 < g.s.n; ++is) {
        const double s = g.s.coord(is);
        if (s < box.lo[2] - 1e-12 || s > box.hi[2] + 1e-12) continue;
        const double point[3] = {x, t, s};
        Complex acc(0.0);
        for (const auto& term : terms) {
          Complex val(0.0);
          for (int ox = -1; ox <= 1; ++ox) {
            const double wx = term.w[0][static_cast<std::size_t>(ox + 1)];
            if (wx == 0.0 && term.order[0] != 0) continue;
            if (term.order[0] == 0 && ox != 0) continue;
            for (int ot = -1; ot <= 1; ++ot) {
              const double wt = term.w[1][static_cast<std::size_t>(ot + 1)];
              if (wt == 0.0 && term.order[1] != 0) continue;
              if (term.order[1] == 0 && ot != 0) continue;
              for (int os = -1; os <= 1; ++os) {
                const double ws = term.w[2][static_cast<std::size_t>(os + 1)];
                if (ws == 0.0 && term.order[2] != 0) continue;
                if (term.order[2] == 0 && os != 0) continue;
                val += wx * wt * ws * u.at(ix + ox, it + ot, is + os);
              }
            }
          }
          acc += term.coeff->evaluate(point) * val;
        }
        sup = std::max(sup, std::abs(acc));
      }
    }
  }
  return sup;
}

struct ResidualLevel {
  double hx = 0.0, ht = 0.0, hs = 0.0;
  double sup_residual = 0.0;
};

struct ResidualReport {
  std::vector<ResidualLevel> levels;
  std::vector<double> orders;  // log2(r_i / r_{i+1}) between consecutive levels
};

/// Interior residual of L applied to refined samplings of a field family.
/// `make_field` is called once per refinement level; the base grid must give
/// at least `min_pts_per_period` t-points per oscillation period 2 pi / tau.
inline ResidualReport apply_L_fd(const DiffOp& op,
                                 const std::function<Field3(const GridSpec&)>& make_field,
                                 const GridSpec& base, int refinements, const Box3& eval_box,
                                 int min_pts_per_period = 10) {
  if (refinements < 0) throw std::invalid_argument("apply_L_fd: refinements >= 0 required");
  if (!grid_bounds(base).contains(eval_box))
    throw std::invalid_argument("apply_L_fd: evaluation box outside grid");
  ResidualReport rep;
  for (int level = 0; level <= refinements; ++level) {
    const GridSpec grid = base.refined(level);
    Field3 u = make_field(grid);
    if (u.tau > 0.0) {
      const double period = 2.0 * M_PI / u.tau;
      if (grid.t.step() > period / min_pts_per_period)
        throw std::invalid_argument("apply_L_fd: t-grid too coarse to resolve e^{i tau t}");
    }
    rep.levels.push_back({grid.x.step(), grid.t.step(), grid.s.step(),
                          fd_apply_sup(op, u, eval_box)});
  }
  for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i) {
    const double a = rep.levels[i].sup_residual, b = rep.levels[i + 1].sup_residual;
    rep.orders.push_back(b > 0.0 ? std::log2(a / b) : std::numeric_limits<double>::infinity());
  }
  return rep;
}

/// Rebuild-from-provenance convenience: refines the field's own grid.
inline ResidualReport apply_L_fd(const DiffOp& op, const Field3& u, int refinements,
                                 const Box3& eval_box, double tol = 1e-8) {
  const int k = u.k;
  const double tau = u.tau;
  return apply_L_fd(
      op, [k, tau, tol](const GridSpec& g) { return build_u(k, tau, g, tol); }, u.grid,
      refinements, eval_box);
}

struct CounterexampleRow {
  double tau = 0.0;
  double sup_u_vprime = 0.0;
  double sup_dtu_v = 0.0;
  double ratio = 0.0;  // sup_V |d_t u| / sup_V' |u|
  std::optional<double> fd_residual;
  std::optional<double> h_used;
  std::optional<double> fd_order;  // empirical convergence order of the residual
  std::string error;
};

struct CounterexampleReport {
  int k = 0;
  bool comparison_elliptic = false;
  Box3 v, vprime;
  std::vector<CounterexampleRow> rows;
  PowerLawFit growth_fit;   // of ratio vs tau
  PowerLawFit supv_fit;     // of sup_V' |u| vs tau, the boundedness probe
  bool falsified = false;   // growth slope >= 0.95 and sup_V' bounded
  bool sup_bounded = false;
  double max_sup_vprime = 0.0;
  int failed_rows = 0;
};

struct FalsifyOptions {
  double tol = 1e-8;
  bool comparison_elliptic = false;  // replace Z2 = x^k L by L (the k = 0 form)
  bool check_pde = false;            // FD residual column for rows with tau <= pde_tau_cap
  double pde_tau_cap = 64.0;
  int nt = 9;
  int ns = 129;
  double x_spacing_factor = 0.5;  // x spacing <= factor * tau^{-1/2}
};

/// Grid for norm sweeps: x resolves the tau^{-1/2} Gaussian core, t is coarse
/// (d_t is exact), s resolves the smooth exponential.
inline GridSpec norm_grid(const Box3& vprime, double tau, const FalsifyOptions& opt) {
  const double dx_target = opt.x_spacing_factor / std::sqrt(tau);
  const double len = vprime.hi[0] - vprime.lo[0];
  const int nx = std::max(33, 2 * static_cast<int>(std::ceil(0.5 * len / dx_target)) + 1);
  return {Axis{vprime.lo[0], vprime.hi[0], nx}, Axis{vprime.lo[1], vprime.hi[1], opt.nt},
          Axis{vprime.lo[2], vprime.hi[2], opt.ns}};
}

/// For each tau: R(tau) = sup_V |d_t u_tau| / sup_V' |u_tau|, a lower bound on
/// the constant in the C^1/C^0 a-priori inequality (L u_tau = 0 identically).
/// The fit of log R against log tau certifies unbounded growth; the run only
/// counts as falsifying when sup_V' |u| stays bounded as well.
inline CounterexampleReport falsify_baire(int k, std::span<const double> taus, const Box3& v,
                                          const Box3& vprime, const FalsifyOptions& opt = {}) {
  if (!v.valid() || !vprime.valid() || !vprime.contains(v) || !v.contains_origin())
    throw std::invalid_argument("falsify_baire: need 0 in V and V inside V'");
  if (taus.size() < 2) throw std::invalid_argument("falsify_baire: at least two tau values");
  for (std::size_t i = 0; i + 1 < taus.size(); ++i)
    if (taus[i] >= taus[i + 1]) throw std::invalid_argument("falsify_baire: tau list must increase");

  CounterexampleReport rep;
  rep.k = k;
  rep.comparison_elliptic = opt.comparison_elliptic;
  rep.v = v;
  rep.vprime = vprime;
  const int k_eff = opt.comparison_elliptic ? 0 : k;

  DiffOp op(space_vars());
  if (opt.check_pde && !opt.comparison_elliptic) op = sum_of_squares(std::span<const VectorField>(model_fields(k)));

  for (double tau : taus) {
    CounterexampleRow row;
    row.tau = tau;
    try {
      const GroundState gs = adaptive_ground_state(k_eff, tau, opt.tol);
      const Field3 u = sample_separated(gs, sigma_of(tau, gs.lambda), norm_grid(vprime, tau, opt));
      row.sup_u_vprime = sup_norms(u, vprime, false).sup_u;
      row.sup_dtu_v = sup_norms(u, v).sup_dtu;
      row.ratio = row.sup_dtu_v / row.sup_u_vprime;

      if (opt.check_pde && !opt.comparison_elliptic && tau <= opt.pde_tau_cap) {
        // compact PDE-check grid: t resolved to >= 20 points per period
        const double margin = 0.15;
        Box3 pde_box = v;
        GridSpec g;
        g.x = {v.lo[0] - margin, v.hi[0] + margin, 65};
        const double tlen = v.hi[1] - v.lo[1] + 2 * margin;
        const int nt = std::max(33, static_cast<int>(std::ceil(tlen * tau / (2.0 * M_PI) * 20)) + 1);
        g.t = {v.lo[1] - margin, v.hi[1] + margin, nt};
        g.s = {v.lo[2] - margin, v.hi[2] + margin, 33};
        auto res = apply_L_fd(
            op, [&](const GridSpec& gg) { return build_u(k, tau, gg, opt.tol); }, g, 1, pde_box);
        row.fd_residual = res.levels.back().sup_residual;
        row.h_used = res.levels.back().hx;
        if (!res.orders.empty()) row.fd_order = res.orders.back();
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      ++rep.failed_rows;
    }
    rep.rows.push_back(std::move(row));
  }

  std::vector<std::pair<double, double>> growth, supv;
  for (const auto& r : rep.rows) {
    if (!r.error.empty()) continue;
    growth.emplace_back(r.tau, r.ratio);
    supv.emplace_back(r.tau, r.sup_u_vprime);
    rep.max_sup_vprime = std::max(rep.max_sup_vprime, r.sup_u_vprime);
  }
  rep.growth_fit = fit_power_law(growth);
  rep.supv_fit = fit_power_law(supv);
  rep.sup_bounded = rep.supv_fit.slope <= 0.1;
  rep.falsified = rep.growth_fit.slope >= 0.95 && rep.sup_bounded;
  return rep;
}

}  // namespace sumsq
