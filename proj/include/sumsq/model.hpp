#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sumsq/diff_op.hpp"
#include "sumsq/polynomial.hpp"
#include "sumsq/vector_field.hpp"

namespace sumsq {

inline std::vector<std::string> plane_vars() { return {"x", "t"}; }
inline std::vector<std::string> space_vars() { return {"x", "t", "s"}; }

/// Lbar = d_x - i x d_t over any variable list starting (x, t, ...).
inline VectorField field_lbar(const std::vector<std::string>& vars) {
  VectorField f(vars);
  f.set_coeff(0, Polynomial::constant(vars, Complex(1.0)));
  f.set_coeff(1, Polynomial::variable(vars, 0) * Complex(0.0, -1.0));
  return f;
}

/// L = d_x + i x d_t.
inline VectorField field_l(const std::vector<std::string>& vars) {
  VectorField f(vars);
  f.set_coeff(0, Polynomial::constant(vars, Complex(1.0)));
  f.set_coeff(1, Polynomial::variable(vars, 0) * Complex(0.0, 1.0));
  return f;
}

/// x^k * X, multiplying every coefficient.
inline VectorField premultiply_xk(const VectorField& f, int k) {
  const auto& vars = f.vars();
  Polynomial xk = Polynomial::monomial(vars, [&] {
    Polynomial::Exponents e(vars.size(), 0);
    e[0] = k;
    return e;
  }(), Complex(1.0));
  std::vector<Polynomial> cs;
  cs.reserve(vars.size());
  for (const auto& c : f.coeffs()) cs.push_back(xk * c);
  return {vars, std::move(cs)};
}

/// The degenerate triple (Z1, Z2, Z3) = (Lbar, x^k L, d_s) on (x, t, s).
inline std::array<VectorField, 3> model_fields(int k) {
  if (k < 1) throw std::invalid_argument("model_fields: k >= 1 required");
  const auto vars = space_vars();
  VectorField z3(vars);
  z3.set_coeff(2, Polynomial::constant(vars, Complex(1.0)));
  return {field_lbar(vars), premultiply_xk(field_l(vars), k), z3};
}

/// The same pair restricted to the (x, t) plane: (Lbar, x^k L).
inline std::array<VectorField, 2> model_fields_plane(int k) {
  if (k < 1) throw std::invalid_argument("model_fields_plane: k >= 1 required");
  const auto vars = plane_vars();
  return {field_lbar(vars), premultiply_xk(field_l(vars), k)};
}

namespace detail {
// First-order 1-variable operator  a1(v) d + a0(v).
inline DiffOp ode_factor(const std::string& var, const Polynomial& a1, const Polynomial& a0) {
  DiffOp op({var});
  op.add_term({1}, a1);
  op.add_term({0}, a0);
  return op;
}
}  // namespace detail

/// P_tau = -(d_x - x tau)(d_x + x tau) - (d_x + x tau) x^{2k} (d_x - x tau),
/// expanded from the factored form.
inline OdeOp p_tau(int k, double tau) {
  if (k < 1) throw std::invalid_argument("p_tau: k >= 1 required");
  if (tau <= 0.0) throw std::domain_error("p_tau: tau > 0 required");
  const std::vector<std::string> v{"x"};
  const Polynomial one = Polynomial::constant(v, Complex(1.0));
  const Polynomial xt = Polynomial::variable(v, 0) * Complex(tau);
  const Polynomial x2k = Polynomial::monomial(v, {2 * k}, Complex(1.0));
  DiffOp minus = detail::ode_factor("x", one, xt * Complex(-1.0));   // d - x tau
  DiffOp plus = detail::ode_factor("x", one, xt);                    // d + x tau
  DiffOp out = -compose(minus, plus) - compose(plus, compose(DiffOp::multiplication(x2k), minus));
  return OdeOp(out);
}

/// Q_tau = -(d_y - y)(d_y + y) - tau^{-k} (d_y + y) y^{2k} (d_y - y).
inline OdeOp q_tau(int k, double tau) {
  if (k < 1) throw std::invalid_argument("q_tau: k >= 1 required");
  if (tau <= 0.0) throw std::domain_error("q_tau: tau > 0 required");
  const std::vector<std::string> v{"y"};
  const Polynomial one = Polynomial::constant(v, Complex(1.0));
  const Polynomial y = Polynomial::variable(v, 0);
  const Polynomial y2k = Polynomial::monomial(v, {2 * k}, Complex(1.0));
  DiffOp minus = detail::ode_factor("y", one, y * Complex(-1.0));
  DiffOp plus = detail::ode_factor("y", one, y);
  DiffOp out = -compose(minus, plus) -
               Complex(std::pow(tau, -k)) *
                   compose(plus, compose(DiffOp::multiplication(y2k), minus));
  return OdeOp(out);
}

/// One field in the bracket closure, with its provenance label, e.g. "[Z1,[Z1,Z2]]".
struct ClosureEntry {
  VectorField field;
  std::string label;
  int depth = 1;
};

/// Breadth-first bracket closure: depth-1 entries are the generators; each
/// further depth brackets every previous-depth field with every generator.
/// No symbolic deduplication.
inline std::vector<ClosureEntry> bracket_closure(std::span<const VectorField> generators,
                                                 int depth) {
  if (depth < 1) throw std::invalid_argument("bracket_closure: depth >= 1 required");
  std::vector<ClosureEntry> all;
  std::vector<ClosureEntry> level;
  for (std::size_t i = 0; i < generators.size(); ++i)
    level.push_back({generators[i], "Z" + std::to_string(i + 1), 1});
  all = level;
  for (int d = 2; d <= depth; ++d) {
    std::vector<ClosureEntry> next;
    for (const auto& entry : level)
      for (std::size_t i = 0; i < generators.size(); ++i)
        next.push_back({bracket(entry.field, generators[i]),
                        "[" + entry.label + ",Z" + std::to_string(i + 1) + "]", d});
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return all;
}

struct RankReport {
  int rank = 0;            // complex rank of the evaluated closure
  int real_rank = 0;       // real rank of {Re, Im} parts
  std::vector<int> rank_at_depth;  // rank using entries of depth <= d, d = 1..depth
  std::vector<ClosureEntry> witness;  // minimal sub-list achieving `rank`
};

namespace detail {

// Greedy complex row reduction with magnitude pivoting. Returns indices of the
// accepted (pivot) vectors.
inline std::vector<std::size_t> pivot_rows(const std::vector<std::vector<Complex>>& rows,
                                           double tol) {
  std::vector<std::pair<std::size_t, std::vector<Complex>>> basis;  // (pivot col, row)
  std::vector<std::size_t> picked;
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<Complex> v = rows[r];
    for (const auto& [pc, b] : basis) {
      const Complex f = v[pc];
      for (std::size_t c = 0; c < dim; ++c) v[c] -= f * b[c];
      v[pc] = Complex(0.0);
    }
    std::size_t pc = 0;
    double best = 0.0;
    for (std::size_t c = 0; c < dim; ++c)
      if (std::abs(v[c]) > best) {
        best = std::abs(v[c]);
        pc = c;
      }
    if (best <= tol) continue;
    const Complex inv = Complex(1.0) / v[pc];
    for (auto& x : v) x *= inv;
    v[pc] = Complex(1.0);
    basis.emplace_back(pc, std::move(v));
    picked.push_back(r);
    if (basis.size() == dim) break;
  }
  return picked;
}

inline int real_rank(const std::vector<std::vector<Complex>>& rows, double tol) {
  std::vector<std::vector<Complex>> re_im;
  for (const auto& v : rows) {
    std::vector<Complex> re(v.size()), im(v.size());
    for (std::size_t c = 0; c < v.size(); ++c) {
      re[c] = Complex(v[c].real());
      im[c] = Complex(v[c].imag());
    }
    re_im.push_back(std::move(re));
    re_im.push_back(std::move(im));
  }
  return static_cast<int>(pivot_rows(re_im, tol).size());
}

}  // namespace detail

/// Rank of the iterated-bracket span at a point. A pivot counts as zero when
/// its magnitude is below 1e-9 times the largest evaluated row norm.
inline RankReport hormander_rank(std::span<const VectorField> generators,
                                 std::span<const double> point, int depth) {
  if (depth < 1) throw std::invalid_argument("hormander_rank: depth >= 1 required");
  auto closure = bracket_closure(generators, depth);
  std::vector<std::vector<Complex>> rows;
  rows.reserve(closure.size());
  double max_norm = 0.0;
  for (const auto& e : closure) {
    rows.push_back(e.field.evaluate(point));
    double n2 = 0.0;
    for (const auto& c : rows.back()) n2 += std::norm(c);
    max_norm = std::max(max_norm, std::sqrt(n2));
  }
  const double tol = 1e-9 * std::max(max_norm, 1e-300);

  RankReport report;
  auto picked = detail::pivot_rows(rows, tol);
  report.rank = static_cast<int>(picked.size());
  report.real_rank = detail::real_rank(rows, tol);
  for (std::size_t idx : picked) report.witness.push_back(closure[idx]);

  report.rank_at_depth.resize(static_cast<std::size_t>(depth), 0);
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::vector<Complex>> sub;
    for (std::size_t i = 0; i < closure.size(); ++i)
      if (closure[i].depth <= d) sub.push_back(rows[i]);
    report.rank_at_depth[static_cast<std::size_t>(d - 1)] =
        static_cast<int>(detail::pivot_rows(sub, tol).size());
  }
  return report;
}

}  // namespace sumsq
