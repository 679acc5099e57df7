#include <doctest.h>

#include "sumsq/polynomial.hpp"

using namespace sumsq;

namespace {
const std::vector<std::string> kXts{"x", "t", "s"};

Polynomial x() { return Polynomial::variable(kXts, 0); }
Polynomial t() { return Polynomial::variable(kXts, 1); }
}  // namespace

TEST_CASE("construction is canonical") {
  // same term multiset, different insertion order
  Polynomial a(kXts);
  a.add_term({1, 0, 0}, 2.0);
  a.add_term({0, 2, 0}, Complex(0.0, 1.0));
  Polynomial b(kXts);
  b.add_term({0, 2, 0}, Complex(0.0, 1.0));
  b.add_term({1, 0, 0}, 2.0);
  CHECK(a == b);

  // coefficients below the canonicalization threshold vanish
  Polynomial c(kXts);
  c.add_term({1, 0, 0}, 1e-13);
  CHECK(c.is_zero());
  c.add_term({1, 0, 0}, 1.0);
  c.add_term({1, 0, 0}, -1.0);
  CHECK(c.is_zero());
}

TEST_CASE("arithmetic") {
  Polynomial p = (x() + t()) * (x() - t());
  Polynomial want(kXts);
  want.add_term({2, 0, 0}, 1.0);
  want.add_term({0, 2, 0}, -1.0);
  CHECK(p == want);

  CHECK((x() * Complex(0.0, 1.0)).conjugated() == x() * Complex(0.0, -1.0));
  CHECK(p.total_degree() == 2);
  CHECK(p.degree_in(0) == 2);
  CHECK_FALSE(p.depends_on(2));
}

TEST_CASE("derivative and evaluation") {
  Polynomial p = x() * x() * t();  // x^2 t
  CHECK(p.derivative(0) == Complex(2.0) * (x() * t()));
  CHECK(p.derivative(2).is_zero());
  const double pt[3] = {2.0, 3.0, -1.0};
  CHECK(p.evaluate(pt) == Complex(12.0));
  const double bad[2] = {1.0, 2.0};
  CHECK_THROWS_AS(p.evaluate(bad), std::invalid_argument);
}

TEST_CASE("variable list mismatches are usage errors") {
  Polynomial q = Polynomial::variable({"y"}, 0);
  CHECK_THROWS_AS(x() + q, std::invalid_argument);
  CHECK_THROWS_AS(x() * q, std::invalid_argument);
}

TEST_CASE("restriction to one variable") {
  Polynomial p = x() * x() * Complex(3.0);
  Polynomial r = p.restricted_to(0, "y");
  CHECK(r.vars() == std::vector<std::string>{"y"});
  CHECK(r.coeff({2}) == Complex(3.0));
  CHECK_THROWS_AS((x() * t()).restricted_to(0, "y"), std::invalid_argument);
}

TEST_CASE("rendering") {
  Polynomial one = Polynomial::constant(kXts, 1.0);
  CHECK((one + x() * x() * Complex(-1.0)).to_string() == "1 - x^2");
  CHECK((x() * Complex(0.0, 3.0)).to_string() == "3*i*x");
  CHECK(Polynomial(kXts).to_string() == "0");
}
