#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumsq/polynomial.hpp"
#include "sumsq/vector_field.hpp"

namespace sumsq {

/// Linear differential operator with polynomial coefficients:
/// sum over derivative multi-indices of  p_alpha(x) * d^alpha.
class DiffOp {
 public:
  using MultiIndex = std::vector<int>;
  using TermMap = std::map<MultiIndex, Polynomial>;

  DiffOp() = default;
  explicit DiffOp(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static DiffOp identity(std::vector<std::string> vars) {
    DiffOp op(vars);
    op.add_term(MultiIndex(op.vars_.size(), 0), Polynomial::constant(vars, Complex(1.0)));
    return op;
  }

  static DiffOp multiplication(Polynomial p) {
    DiffOp op(p.vars());
    op.add_term(MultiIndex(op.vars_.size(), 0), std::move(p));
    return op;
  }

  static DiffOp from_first_order(const FirstOrderOp& z) {
    DiffOp op(z.field.vars());
    const std::size_t n = op.vars_.size();
    for (std::size_t j = 0; j < n; ++j) {
      MultiIndex mi(n, 0);
      mi[j] = 1;
      op.add_term(std::move(mi), z.field.coeff(j));
    }
    op.add_term(MultiIndex(n, 0), z.zeroth);
    return op;
  }

  static DiffOp from_vector_field(const VectorField& x) { return from_first_order(FirstOrderOp(x)); }

  const std::vector<std::string>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int order() const {
    int d = 0;
    for (const auto& [mi, p] : terms_) d = std::max(d, total(mi));
    return d;
  }

  /// Max total degree over all coefficient polynomials.
  int coeff_degree() const {
    int d = 0;
    for (const auto& [mi, p] : terms_) d = std::max(d, p.total_degree());
    return d;
  }

  Polynomial coeff(const MultiIndex& mi) const {
    auto it = terms_.find(mi);
    return it == terms_.end() ? Polynomial(vars_) : it->second;
  }

  void add_term(MultiIndex mi, Polynomial p) {
    if (mi.size() != vars_.size()) throw std::invalid_argument("DiffOp: multi-index length mismatch");
    p.require_same_vars(Polynomial(vars_));
    if (p.is_zero()) return;
    auto it = terms_.find(mi);
    if (it == terms_.end()) {
      terms_.emplace(std::move(mi), std::move(p));
    } else {
      it->second += p;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  DiffOp& operator+=(const DiffOp& o) {
    require_same_vars(o);
    for (const auto& [mi, p] : o.terms_) add_raw(mi, p);
    return *this;
  }
  DiffOp& operator-=(const DiffOp& o) {
    require_same_vars(o);
    for (const auto& [mi, p] : o.terms_) add_raw(mi, p * Complex(-1.0));
    return *this;
  }
  DiffOp& operator*=(Complex s) {
    TermMap out;
    for (auto& [mi, p] : terms_) {
      Polynomial q = p * s;
      if (!q.is_zero()) out.emplace(mi, std::move(q));
    }
    terms_ = std::move(out);
    return *this;
  }

  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(DiffOp a, Complex s) { return a *= s; }
  friend DiffOp operator*(Complex s, DiffOp a) { return a *= s; }
  friend DiffOp operator-(DiffOp a) { return a *= Complex(-1.0); }

  friend bool operator==(const DiffOp& a, const DiffOp& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  bool approx_equal(const DiffOp& o, double tol) const {
    if (vars_ != o.vars_) return false;
    for (const auto& [mi, p] : terms_)
      if (!p.approx_equal(o.coeff(mi), tol)) return false;
    for (const auto& [mi, p] : o.terms_)
      if (!coeff(mi).approx_equal(p, tol)) return false;
    return true;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += "(" + it->second.to_string() + ")";
      for (std::size_t j = 0; j < vars_.size(); ++j) {
        if (it->first[j] == 0) continue;
        out += " d" + std::to_string(it->first[j]) + "/d" + vars_[j];
        if (it->first[j] > 1) out += std::to_string(it->first[j]);
      }
    }
    return out;
  }

  void require_same_vars(const DiffOp& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("DiffOp: mismatched variable lists");
  }

  static int total(const MultiIndex& mi) {
    int t = 0;
    for (int x : mi) t += x;
    return t;
  }

 private:
  // bulk path for += / -=: add_term taking const refs
  void add_raw(const MultiIndex& mi, const Polynomial& p) {
    if (p.is_zero()) return;
    auto it = terms_.find(mi);
    if (it == terms_.end()) {
      terms_.emplace(mi, p);
    } else {
      it->second += p;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  std::vector<std::string> vars_;
  TermMap terms_;
};

namespace detail {
inline double binom(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Iterate all gamma <= alpha componentwise.
template <typename F>
void for_each_below(const DiffOp::MultiIndex& alpha, F&& f) {
  DiffOp::MultiIndex g(alpha.size(), 0);
  while (true) {
    f(g);
    std::size_t i = 0;
    for (; i < g.size(); ++i) {
      if (g[i] < alpha[i]) {
        ++g[i];
        break;
      }
      g[i] = 0;
    }
    if (i == g.size()) return;
  }
}
}  // namespace detail

/// P o Q expanded by the Leibniz rule:
/// p_a d^a (q_b d^b u) = sum_{g<=a} C(a,g) p_a d^g(q_b) d^{a-g+b} u.
inline DiffOp compose(const DiffOp& p, const DiffOp& q) {
  p.require_same_vars(q);
  DiffOp out(p.vars());
  const std::size_t n = p.vars().size();
  for (const auto& [a, pa] : p.terms()) {
    for (const auto& [b, qb] : q.terms()) {
      detail::for_each_below(a, [&](const DiffOp::MultiIndex& g) {
        Polynomial dq = qb;
        double c = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          c *= detail::binom(a[i], g[i]);
          for (int r = 0; r < g[i]; ++r) dq = dq.derivative(i);
        }
        if (dq.is_zero()) return;
        DiffOp::MultiIndex mi(n);
        for (std::size_t i = 0; i < n; ++i) mi[i] = a[i] - g[i] + b[i];
        out.add_term(std::move(mi), pa * dq * Complex(c));
      });
    }
  }
  return out;
}

/// (p d^a)^* = (-1)^{|a|} d^a (conj(p) . ), extended by linearity.
inline DiffOp formal_adjoint(const DiffOp& op) {
  DiffOp out(op.vars());
  for (const auto& [alpha, p] : op.terms()) {
    DiffOp dalpha(op.vars());
    dalpha.add_term(alpha, Polynomial::constant(op.vars(), Complex(1.0)));
    const double sign = DiffOp::total(alpha) % 2 ? -1.0 : 1.0;
    out += Complex(sign) * compose(dalpha, DiffOp::multiplication(p.conjugated()));
  }
  return out;
}

/// sum_j Z_j^* Z_j.
inline DiffOp sum_of_squares(std::span<const FirstOrderOp> fields) {
  if (fields.empty()) throw std::invalid_argument("sum_of_squares: empty field list");
  DiffOp total(fields.front().field.vars());
  for (const auto& z : fields) {
    if (z.field.vars() != total.vars())
      throw std::invalid_argument("sum_of_squares: mismatched variable lists");
    total += compose(DiffOp::from_first_order(formal_adjoint(z)), DiffOp::from_first_order(z));
  }
  return total;
}

inline DiffOp sum_of_squares(std::span<const VectorField> fields) {
  std::vector<FirstOrderOp> ops;
  ops.reserve(fields.size());
  for (const auto& f : fields) ops.emplace_back(f);
  return sum_of_squares(std::span<const FirstOrderOp>(ops));
}

/// Ordinary differential operator in one variable, complex polynomial coefficients.
class OdeOp {
 public:
  OdeOp() = default;

  explicit OdeOp(DiffOp op) : op_(std::move(op)) {
    if (op_.vars().size() != 1)
      throw std::invalid_argument("OdeOp: operator must involve exactly one variable");
  }

  const DiffOp& op() const { return op_; }
  const std::string& var() const { return op_.vars().front(); }
  int max_order() const { return op_.order(); }

  Polynomial coeff(int m) const { return op_.coeff({m}); }

  bool approx_equal(const OdeOp& o, double tol) const { return op_.approx_equal(o.op_, tol); }
  std::string to_string() const { return op_.to_string(); }

  friend OdeOp operator*(OdeOp a, Complex s) { return OdeOp(a.op_ * s); }

  /// Substitute old_var = new_var / alpha:  c x^d d^m  ->  c alpha^(m-d) y^d d^m.
  OdeOp rescaled(double alpha, const std::string& new_var) const {
    DiffOp out({new_var});
    for (const auto& [mi, p] : op_.terms()) {
      const int m = mi[0];
      Polynomial q({new_var});
      for (const auto& [e, c] : p.terms()) {
        const int d = e[0];
        q.add_term({d}, c * std::pow(alpha, m - d));
      }
      out.add_term({m}, std::move(q));
    }
    return OdeOp(out);
  }

  /// Dense real coefficient vector (degree-indexed) of the order-m term.
  /// Rejects genuinely complex coefficients.
  std::vector<double> dense_real_coeffs(int m, double imag_tol = 1e-9) const {
    Polynomial p = coeff(m);
    std::vector<double> out(static_cast<std::size_t>(p.total_degree()) + 1, 0.0);
    const double scale = std::max(1.0, p.max_abs_coeff());
    for (const auto& [e, c] : p.terms()) {
      if (std::abs(c.imag()) > imag_tol * scale)
        throw std::runtime_error("OdeOp: complex coefficient where a real one is required");
      out[static_cast<std::size_t>(e[0])] = c.real();
    }
    return out;
  }

 private:
  DiffOp op_;
};

/// Separation of variables: replace d/d(var) by the given scalar for each named
/// mode, e.g. {{"t", i*tau}, {"s", 0}}. Coefficients must not depend on the
/// reduced variables; exactly one variable must remain.
inline OdeOp fourier_reduce(const DiffOp& op,
                            const std::vector<std::pair<std::string, Complex>>& modes) {
  const auto& vars = op.vars();
  std::vector<Complex> scalar(vars.size());
  std::vector<bool> reduced(vars.size(), false);
  for (const auto& [name, value] : modes) {
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw std::invalid_argument("fourier_reduce: unknown variable " + name);
    const auto j = static_cast<std::size_t>(it - vars.begin());
    reduced[j] = true;
    scalar[j] = value;
  }
  std::size_t kept = vars.size();
  for (std::size_t j = 0; j < vars.size(); ++j)
    if (!reduced[j]) {
      if (kept != vars.size())
        throw std::invalid_argument("fourier_reduce: more than one variable would remain");
      kept = j;
    }
  if (kept == vars.size()) throw std::invalid_argument("fourier_reduce: no variable remains");

  for (const auto& [mi, p] : op.terms())
    for (std::size_t j = 0; j < vars.size(); ++j)
      if (reduced[j] && p.depends_on(j))
        throw std::invalid_argument("fourier_reduce: coefficient depends on reduced variable " + vars[j]);

  DiffOp out({vars[kept]});
  for (const auto& [mi, p] : op.terms()) {
    Complex factor(1.0);
    for (std::size_t j = 0; j < vars.size(); ++j)
      if (reduced[j])
        for (int r = 0; r < mi[j]; ++r) factor *= scalar[j];
    if (std::abs(factor) < kCanonicalEps) continue;
    out.add_term({mi[kept]}, p.restricted_to(kept, vars[kept]) * factor);
  }
  return OdeOp(out);
}

}  // namespace sumsq
