#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumsq {

using Complex = std::complex<double>;

/// Terms with coefficient magnitude below this are dropped on canonicalization.
/// Inputs are small integers and imaginary units, so every symbolic identity in
/// this library is exact well above the threshold.
inline constexpr double kCanonicalEps = 1e-12;

/// Sparse multivariate polynomial with complex coefficients over a fixed,
/// ordered list of named real variables. Canonical form: term map keyed by
/// exponent vector, no near-zero coefficients stored.
class Polynomial {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, Complex>;

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static Polynomial constant(std::vector<std::string> vars, Complex c) {
    Polynomial p(std::move(vars));
    p.add_term(Exponents(p.vars_.size(), 0), c);
    return p;
  }

  static Polynomial variable(std::vector<std::string> vars, std::size_t index) {
    if (index >= vars.size()) throw std::invalid_argument("Polynomial::variable: index out of range");
    Polynomial p(std::move(vars));
    Exponents e(p.vars_.size(), 0);
    e[index] = 1;
    p.add_term(e, Complex(1.0));
    return p;
  }

  static Polynomial monomial(std::vector<std::string> vars, Exponents exps, Complex c) {
    Polynomial p(std::move(vars));
    if (exps.size() != p.vars_.size())
      throw std::invalid_argument("Polynomial::monomial: exponent vector length mismatch");
    p.add_term(std::move(exps), c);
    return p;
  }

  const std::vector<std::string>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Complex coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Complex(0.0) : it->second;
  }

  void add_term(Exponents e, Complex c) {
    if (e.size() != vars_.size())
      throw std::invalid_argument("Polynomial: exponent vector length mismatch");
    for (int x : e)
      if (x < 0) throw std::invalid_argument("Polynomial: negative exponent");
    auto [it, inserted] = terms_.emplace(std::move(e), c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) < kCanonicalEps) terms_.erase(it);
  }

  Polynomial& operator+=(const Polynomial& o) {
    require_same_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    require_same_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(Complex s) {
    if (std::abs(s) < kCanonicalEps) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    canonicalize();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Complex(-1.0); }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.require_same_vars(b);
    Polynomial out(a.vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        out.add_term(std::move(e), ca * cb);
      }
    return out;
  }

  /// Partial derivative with respect to variable `index`.
  Polynomial derivative(std::size_t index) const {
    if (index >= vars_.size()) throw std::invalid_argument("Polynomial::derivative: index out of range");
    Polynomial out(vars_);
    for (const auto& [e, c] : terms_) {
      if (e[index] == 0) continue;
      Exponents d(e);
      --d[index];
      out.add_term(std::move(d), c * static_cast<double>(e[index]));
    }
    return out;
  }

  /// Complex conjugation of coefficients; variables are real.
  Polynomial conjugated() const {
    Polynomial out(vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, std::conj(c));
    return out;
  }

  Complex evaluate(std::span<const double> point) const {
    if (point.size() != vars_.size())
      throw std::invalid_argument("Polynomial::evaluate: point dimension mismatch");
    Complex acc(0.0);
    for (const auto& [e, c] : terms_) {
      double m = 1.0;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int p = 0; p < e[i]; ++p) m *= point[i];
      acc += c * m;
    }
    return acc;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int t = 0;
      for (int x : e) t += x;
      d = std::max(d, t);
    }
    return d;
  }

  int degree_in(std::size_t index) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[index]);
    return d;
  }

  bool depends_on(std::size_t index) const { return degree_in(index) > 0; }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Keep only the variable `index`, requiring independence from all others.
  Polynomial restricted_to(std::size_t index, std::string new_name) const {
    Polynomial out(std::vector<std::string>{std::move(new_name)});
    for (const auto& [e, c] : terms_) {
      for (std::size_t i = 0; i < e.size(); ++i)
        if (i != index && e[i] != 0)
          throw std::invalid_argument("Polynomial::restricted_to: coefficient depends on eliminated variable");
      out.add_term({e[index]}, c);
    }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  /// Coefficientwise comparison, tolerance relative to the larger scale.
  bool approx_equal(const Polynomial& o, double tol) const {
    if (vars_ != o.vars_) return false;
    double scale = std::max({1.0, max_abs_coeff(), o.max_abs_coeff()});
    for (const auto& [e, c] : terms_)
      if (std::abs(c - o.coeff(e)) > tol * scale) return false;
    for (const auto& [e, c] : o.terms_)
      if (std::abs(coeff(e) - c) > tol * scale) return false;
    return true;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += vars_[i];
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      std::string cs = format_complex(c, !mono.empty());
      const bool neg = !cs.empty() && cs[0] == '-';
      if (neg) cs.erase(0, 1);
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      out += cs;
      if (!mono.empty() && !cs.empty()) out += "*";
      out += mono;
    }
    return out;
  }

  void require_same_vars(const Polynomial& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("Polynomial: mismatched variable lists");
  }

  static std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
  }

  /// "2", "-i", "3*i", "(1+2*i)"; empty string means an implicit 1 before a monomial.
  static std::string format_complex(Complex c, bool has_monomial) {
    const double re = c.real(), im = c.imag();
    if (std::abs(im) < kCanonicalEps) {
      if (has_monomial && re == 1.0) return "";
      if (has_monomial && re == -1.0) return "-";
      return format_real(re);
    }
    if (std::abs(re) < kCanonicalEps) {
      if (im == 1.0) return "i";
      if (im == -1.0) return "-i";
      return format_real(im) + "*i";
    }
    std::string s = "(" + format_real(re);
    if (im >= 0) s += "+";
    s += format_real(im) + "*i)";
    return s;
  }

 private:
  void canonicalize() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = std::abs(it->second) < kCanonicalEps ? terms_.erase(it) : std::next(it);
  }

  std::vector<std::string> vars_;
  TermMap terms_;
};

}  // namespace sumsq
