#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumsq/polynomial.hpp"

namespace sumsq {

/// First-order homogeneous differential operator sum_j a_j(x) d/dx_j with
/// polynomial coefficients, one per variable.
class VectorField {
 public:
  VectorField() = default;

  explicit VectorField(std::vector<std::string> vars)
      : vars_(std::move(vars)), coeffs_(vars_.size(), Polynomial(vars_)) {}

  VectorField(std::vector<std::string> vars, std::vector<Polynomial> coeffs)
      : vars_(std::move(vars)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != vars_.size())
      throw std::invalid_argument("VectorField: one coefficient per variable required");
    for (const auto& c : coeffs_)
      if (c.vars() != vars_) throw std::invalid_argument("VectorField: coefficient variable mismatch");
  }

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<Polynomial>& coeffs() const { return coeffs_; }
  const Polynomial& coeff(std::size_t j) const { return coeffs_.at(j); }
  void set_coeff(std::size_t j, Polynomial p) {
    p.require_same_vars(Polynomial(vars_));
    coeffs_.at(j) = std::move(p);
  }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }

  /// X(p) = sum_j a_j * dp/dx_j.
  Polynomial apply(const Polynomial& p) const {
    if (p.vars() != vars_) throw std::invalid_argument("VectorField::apply: mismatched variable lists");
    Polynomial out(vars_);
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (coeffs_[j].is_zero()) continue;
      out += coeffs_[j] * p.derivative(j);
    }
    return out;
  }

  /// Coefficient vector at a real point.
  std::vector<Complex> evaluate(std::span<const double> point) const {
    if (point.size() != vars_.size())
      throw std::invalid_argument("VectorField::evaluate: point dimension mismatch");
    std::vector<Complex> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c.evaluate(point));
    return out;
  }

  VectorField conjugated() const {
    std::vector<Polynomial> cs;
    cs.reserve(coeffs_.size());
    for (const auto& c : coeffs_) cs.push_back(c.conjugated());
    return {vars_, std::move(cs)};
  }

  friend VectorField operator-(const VectorField& x) {
    std::vector<Polynomial> cs;
    cs.reserve(x.coeffs_.size());
    for (const auto& c : x.coeffs_) cs.push_back(c * Complex(-1.0));
    return {x.vars_, std::move(cs)};
  }

  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    if (a.vars_ != b.vars_) throw std::invalid_argument("VectorField: mismatched variable lists");
    std::vector<Polynomial> cs;
    cs.reserve(a.coeffs_.size());
    for (std::size_t j = 0; j < a.coeffs_.size(); ++j) cs.push_back(a.coeffs_[j] + b.coeffs_[j]);
    return {a.vars_, std::move(cs)};
  }

  friend bool operator==(const VectorField& a, const VectorField& b) {
    return a.vars_ == b.vars_ && a.coeffs_ == b.coeffs_;
  }

  bool approx_equal(const VectorField& o, double tol) const {
    if (vars_ != o.vars_ || coeffs_.size() != o.coeffs_.size()) return false;
    for (std::size_t j = 0; j < coeffs_.size(); ++j)
      if (!coeffs_[j].approx_equal(o.coeffs_[j], tol)) return false;
    return true;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (coeffs_[j].is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += "(" + coeffs_[j].to_string() + ")*d_" + vars_[j];
    }
    return out.empty() ? "0" : out;
  }

 private:
  std::vector<std::string> vars_;
  std::vector<Polynomial> coeffs_;
};

/// [X,Y], j-th coefficient X(Y_j) - Y(X_j).
inline VectorField bracket(const VectorField& x, const VectorField& y) {
  if (x.vars() != y.vars()) throw std::invalid_argument("bracket: mismatched variable lists");
  std::vector<Polynomial> cs;
  cs.reserve(x.vars().size());
  for (std::size_t j = 0; j < x.vars().size(); ++j)
    cs.push_back(x.apply(y.coeff(j)) - y.apply(x.coeff(j)));
  return {x.vars(), std::move(cs)};
}

/// Vector field plus a zeroth-order (multiplication) term.
struct FirstOrderOp {
  VectorField field;
  Polynomial zeroth;

  explicit FirstOrderOp(VectorField f)
      : field(std::move(f)), zeroth(Polynomial(field.vars())) {}
  FirstOrderOp(VectorField f, Polynomial z) : field(std::move(f)), zeroth(std::move(z)) {
    zeroth.require_same_vars(Polynomial(field.vars()));
  }

  bool approx_equal(const FirstOrderOp& o, double tol) const {
    return field.approx_equal(o.field, tol) && zeroth.approx_equal(o.zeroth, tol);
  }

  std::string to_string() const {
    std::string out = field.to_string();
    if (!zeroth.is_zero()) {
      if (out == "0") out.clear();
      if (!out.empty()) out += " + ";
      out += "(" + zeroth.to_string() + ")";
    }
    return out.empty() ? "0" : out;
  }
};

/// Formal adjoint in L^2 with Lebesgue measure:
/// (sum a_j d_j + b)^* = -sum conj(a_j) d_j - sum d_j(conj a_j) + conj(b).
inline FirstOrderOp formal_adjoint(const FirstOrderOp& z) {
  const auto& vars = z.field.vars();
  std::vector<Polynomial> cs;
  cs.reserve(vars.size());
  Polynomial divergence(vars);
  for (std::size_t j = 0; j < vars.size(); ++j) {
    Polynomial cj = z.field.coeff(j).conjugated();
    divergence += cj.derivative(j);
    cs.push_back(cj * Complex(-1.0));
  }
  return {VectorField(vars, std::move(cs)), z.zeroth.conjugated() - divergence};
}

inline FirstOrderOp formal_adjoint(const VectorField& z) { return formal_adjoint(FirstOrderOp(z)); }

}  // namespace sumsq
