#include <doctest.h>

#include <random>

#include "sumsq/diff_op.hpp"
#include "sumsq/model.hpp"

using namespace sumsq;

namespace {

const std::vector<std::string> kXts{"x", "t", "s"};
constexpr double kTol = 1e-12;

Polynomial mono(std::vector<int> e, Complex c) { return Polynomial::monomial(kXts, std::move(e), c); }

VectorField field(Polynomial cx, Polynomial ct, Polynomial cs) {
  return {kXts, {std::move(cx), std::move(ct), std::move(cs)}};
}

Polynomial zero3() { return Polynomial(kXts); }

// random polynomial of total degree <= 3, small integer coefficients
Polynomial random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> exp_d(0, 3), coeff_d(-2, 2), terms_d(1, 3);
  Polynomial p(kXts);
  const int nterms = terms_d(rng);
  for (int i = 0; i < nterms; ++i) {
    int ex = exp_d(rng), et = exp_d(rng), es = exp_d(rng);
    if (ex + et + es > 3) es = 0, et = std::min(et, 3 - ex);
    p.add_term({ex, et, es}, Complex(coeff_d(rng), coeff_d(rng)));
  }
  return p;
}

VectorField random_field(std::mt19937& rng) {
  return field(random_poly(rng), random_poly(rng), random_poly(rng));
}

}  // namespace

TEST_CASE("model field coefficients") {
  auto z1 = model_fields(1);
  CHECK(z1[1].coeff(0) == mono({1, 0, 0}, 1.0));                // x
  CHECK(z1[1].coeff(1) == mono({2, 0, 0}, Complex(0.0, 1.0)));  // i x^2
  auto z2 = model_fields(2);
  CHECK(z2[1].coeff(0) == mono({2, 0, 0}, 1.0));                // x^2
  CHECK(z2[1].coeff(1) == mono({3, 0, 0}, Complex(0.0, 1.0)));  // i x^3
  for (int k = 1; k <= 4; ++k) {
    auto z = model_fields(k);
    CHECK(z[2].coeff(2) == Polynomial::constant(kXts, 1.0));  // Z3 = d_s for every k
    CHECK(z[2].coeff(0).is_zero());
  }
  CHECK_THROWS_AS(model_fields(0), std::invalid_argument);
}

TEST_CASE("bracket oracle values") {
  CHECK(bracket(field_lbar(kXts), field_l(kXts))
            .approx_equal(field(zero3(), Polynomial::constant(kXts, Complex(0.0, 2.0)), zero3()),
                          kTol));
  auto z = model_fields(1);
  const VectorField b12 = bracket(z[0], z[1]);
  CHECK(b12.approx_equal(
      field(Polynomial::constant(kXts, 1.0), mono({1, 0, 0}, Complex(0.0, 3.0)), zero3()), kTol));
  CHECK(bracket(z[0], b12).approx_equal(
      field(zero3(), Polynomial::constant(kXts, Complex(0.0, 4.0)), zero3()), kTol));
}

TEST_CASE("bracket properties on random fields") {
  std::mt19937 rng(20240811);
  for (int trial = 0; trial < 25; ++trial) {
    const VectorField x = random_field(rng), y = random_field(rng), z = random_field(rng);
    CHECK(bracket(x, x).approx_equal(VectorField(kXts), kTol));
    CHECK((bracket(x, y) + bracket(y, x)).approx_equal(VectorField(kXts), kTol));
    const VectorField jacobi =
        bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
    CHECK(jacobi.approx_equal(VectorField(kXts), kTol));
  }
  VectorField two{{"a", "b"}};
  CHECK_THROWS_AS(bracket(two, random_field(rng)), std::invalid_argument);
}

TEST_CASE("formal adjoint oracle values") {
  auto z = model_fields(1);
  const FirstOrderOp a1 = formal_adjoint(z[0]);
  CHECK(a1.field.approx_equal(
      field(Polynomial::constant(kXts, -1.0), mono({1, 0, 0}, Complex(0.0, -1.0)), zero3()), kTol));
  CHECK(a1.zeroth.is_zero());

  const FirstOrderOp a2 = formal_adjoint(z[1]);
  CHECK(a2.field.approx_equal(
      field(mono({1, 0, 0}, -1.0), mono({2, 0, 0}, Complex(0.0, 1.0)), zero3()), kTol));
  CHECK(a2.zeroth.approx_equal(Polynomial::constant(kXts, -1.0), kTol));
}

TEST_CASE("formal adjoint is an involution") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const FirstOrderOp z{random_field(rng), random_poly(rng)};
    CHECK(formal_adjoint(formal_adjoint(z)).approx_equal(z, kTol));
    // first-order adjoint agrees with the general operator adjoint
    CHECK(formal_adjoint(DiffOp::from_first_order(z))
              .approx_equal(DiffOp::from_first_order(formal_adjoint(z)), kTol));
  }
}

TEST_CASE("compose") {
  const DiffOp id = DiffOp::identity(kXts);
  const DiffOp q = DiffOp::from_vector_field(field_lbar(kXts));
  CHECK(compose(id, q).approx_equal(q, kTol));

  // d_x (x . ) = x d_x + 1
  DiffOp dx(kXts);
  dx.add_term({1, 0, 0}, Polynomial::constant(kXts, 1.0));
  const DiffOp xmul = DiffOp::multiplication(mono({1, 0, 0}, 1.0));
  DiffOp want(kXts);
  want.add_term({1, 0, 0}, mono({1, 0, 0}, 1.0));
  want.add_term({0, 0, 0}, Polynomial::constant(kXts, 1.0));
  CHECK(compose(dx, xmul).approx_equal(want, kTol));

  // Z1* Z1 = -d_x^2 - x^2 d_t^2 + i d_t
  auto z = model_fields(1);
  DiffOp z1sq = compose(DiffOp::from_first_order(formal_adjoint(z[0])),
                        DiffOp::from_vector_field(z[0]));
  DiffOp want2(kXts);
  want2.add_term({2, 0, 0}, Polynomial::constant(kXts, -1.0));
  want2.add_term({0, 2, 0}, mono({2, 0, 0}, -1.0));
  want2.add_term({0, 1, 0}, Polynomial::constant(kXts, Complex(0.0, 1.0)));
  CHECK(z1sq.approx_equal(want2, kTol));
}

TEST_CASE("sum of squares expansions") {
  auto z = model_fields(1);
  auto onlyZ3 = std::vector<VectorField>{z[2]};
  DiffOp ds2(kXts);
  ds2.add_term({0, 0, 2}, Polynomial::constant(kXts, -1.0));
  CHECK(sum_of_squares(std::span<const VectorField>(onlyZ3)).approx_equal(ds2, kTol));

  // full operator, k = 1:
  //   -(1+x^2) dxx - x^2(1+x^2) dtt - dss - 2x dx + i(1-3x^2) dt
  DiffOp want(kXts);
  want.add_term({2, 0, 0}, Polynomial::constant(kXts, -1.0) + mono({2, 0, 0}, -1.0));
  want.add_term({0, 2, 0}, mono({2, 0, 0}, -1.0) + mono({4, 0, 0}, -1.0));
  want.add_term({0, 0, 2}, Polynomial::constant(kXts, -1.0));
  want.add_term({1, 0, 0}, mono({1, 0, 0}, -2.0));
  want.add_term({0, 1, 0},
                Polynomial::constant(kXts, Complex(0.0, 1.0)) + mono({2, 0, 0}, Complex(0.0, -3.0)));
  CHECK(sum_of_squares(std::span<const VectorField>(z)).approx_equal(want, kTol));

  // k = 2: -(1+x^4) dxx - x^2(1+x^4) dtt - dss - 4x^3 dx + i(1-5x^4) dt
  auto z2 = model_fields(2);
  DiffOp want2(kXts);
  want2.add_term({2, 0, 0}, Polynomial::constant(kXts, -1.0) + mono({4, 0, 0}, -1.0));
  want2.add_term({0, 2, 0}, mono({2, 0, 0}, -1.0) + mono({6, 0, 0}, -1.0));
  want2.add_term({0, 0, 2}, Polynomial::constant(kXts, -1.0));
  want2.add_term({1, 0, 0}, mono({3, 0, 0}, -4.0));
  want2.add_term({0, 1, 0},
                 Polynomial::constant(kXts, Complex(0.0, 1.0)) + mono({4, 0, 0}, Complex(0.0, -5.0)));
  CHECK(sum_of_squares(std::span<const VectorField>(z2)).approx_equal(want2, kTol));

  // a single field: Z1 alone gives -dxx - x^2 dtt + i dt
  std::vector<VectorField> onlyZ1{z[0]};
  DiffOp wantZ1(kXts);
  wantZ1.add_term({2, 0, 0}, Polynomial::constant(kXts, -1.0));
  wantZ1.add_term({0, 2, 0}, mono({2, 0, 0}, -1.0));
  wantZ1.add_term({0, 1, 0}, Polynomial::constant(kXts, Complex(0.0, 1.0)));
  CHECK(sum_of_squares(std::span<const VectorField>(onlyZ1)).approx_equal(wantZ1, kTol));

  CHECK_THROWS_AS(sum_of_squares(std::span<const FirstOrderOp>{}), std::invalid_argument);
}

TEST_CASE("sum of squares is formally self-adjoint") {
  std::mt19937 rng(99);
  for (int k = 1; k <= 3; ++k) {
    const DiffOp op = sum_of_squares(std::span<const VectorField>(model_fields(k)));
    CHECK(formal_adjoint(op).approx_equal(op, kTol));
    CHECK(op.order() == 2);
  }
  // also for random field collections
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<VectorField> fs{random_field(rng), random_field(rng)};
    const DiffOp op = sum_of_squares(std::span<const VectorField>(fs));
    CHECK(formal_adjoint(op).approx_equal(op, 1e-11));
  }
}

TEST_CASE("evaluate") {
  auto z = model_fields(1);
  const double origin[3] = {0, 0, 0};
  const double p2[3] = {2, 0, 0};
  CHECK(z[1].evaluate(origin) == std::vector<Complex>{0.0, 0.0, 0.0});
  CHECK(z[0].evaluate(origin) == std::vector<Complex>{1.0, 0.0, 0.0});
  CHECK(z[1].evaluate(p2) == std::vector<Complex>{2.0, Complex(0.0, 4.0), 0.0});
  const double two[2] = {0, 0};
  CHECK_THROWS_AS(z[0].evaluate(two), std::invalid_argument);
}

TEST_CASE("hormander rank") {
  const double origin[3] = {0, 0, 0};
  for (int k = 1; k <= 3; ++k) {
    auto rep = hormander_rank(model_fields(k), origin, k + 2);
    CHECK(rep.rank == 3);
    CHECK(rep.real_rank == 3);
    CHECK(rep.rank_at_depth[static_cast<std::size_t>(k)] == 2);      // depth k+1
    CHECK(rep.rank_at_depth[static_cast<std::size_t>(k + 1)] == 3);  // depth k+2
    CHECK(rep.witness.size() == 3);  // minimal achieving sub-list
  }
  auto rep1 = hormander_rank(model_fields(1), origin, 2);
  CHECK(rep1.rank == 2);

  const double p2[3] = {2, 0, 0};
  CHECK(hormander_rank(model_fields(1), p2, 1).rank == 3);
  CHECK_THROWS_AS(hormander_rank(model_fields(1), origin, 0), std::invalid_argument);
}

TEST_CASE("fourier reduce") {
  // sum_of_squares([Z1]) on the plane reduces to -dxx + tau^2 x^2 - tau
  auto zp = model_fields_plane(1);
  std::vector<VectorField> onlyZ1{zp[0]};
  const DiffOp op = sum_of_squares(std::span<const VectorField>(onlyZ1));
  for (double tau : {1.0, 3.0}) {
    const OdeOp red = fourier_reduce(op, {{"t", Complex(0.0, tau)}});
    DiffOp want({"x"});
    want.add_term({2}, Polynomial::constant({"x"}, -1.0));
    Polynomial z0 = Polynomial::monomial({"x"}, {2}, tau * tau);
    z0.add_term({0}, -tau);
    want.add_term({0}, z0);
    CHECK(red.approx_equal(OdeOp(want), kTol));
  }

  // -dss over (x,t,s) reduces to -sigma^2 * identity in x
  DiffOp ds2(kXts);
  ds2.add_term({0, 0, 2}, Polynomial::constant(kXts, -1.0));
  const OdeOp red = fourier_reduce(ds2, {{"t", Complex(0.0)}, {"s", Complex(0.7)}});
  DiffOp want({"x"});
  want.add_term({0}, Polynomial::constant({"x"}, -0.49));
  CHECK(red.approx_equal(OdeOp(want), kTol));

  // coefficient depending on a reduced variable is unsupported
  DiffOp bad(kXts);
  bad.add_term({1, 0, 0}, Polynomial::variable(kXts, 1));
  CHECK_THROWS_AS(fourier_reduce(bad, {{"t", Complex(1.0)}, {"s", Complex(0.0)}}),
                  std::invalid_argument);
}

TEST_CASE("separation identity: fourier_reduce equals p_tau") {
  for (int k = 1; k <= 4; ++k) {
    auto zp = model_fields_plane(k);
    const DiffOp plane = sum_of_squares(std::span<const VectorField>(zp));
    for (double tau : {1.0, 2.0, 4.0}) {
      const OdeOp red = fourier_reduce(plane, {{"t", Complex(0.0, tau)}});
      CHECK(red.approx_equal(p_tau(k, tau), kTol));
    }
  }
}

TEST_CASE("p_tau and q_tau") {
  // first factored term of p_tau(1, tau) is -dxx + tau^2 x^2 - tau; the full
  // operator adds -x^2 dxx - 2x dx + 3 tau x^2 + tau^2 x^4
  const double tau = 5.0;
  const OdeOp p = p_tau(1, tau);
  CHECK(p.coeff(2).coeff({0}) == Complex(-1.0));
  CHECK(p.coeff(2).coeff({2}) == Complex(-1.0));
  CHECK(p.coeff(1).coeff({1}) == Complex(-2.0));
  CHECK(p.coeff(0).coeff({0}) == Complex(-tau));
  CHECK(p.coeff(0).coeff({2}) == Complex(tau * tau + 3 * tau));
  CHECK(p.coeff(0).coeff({4}) == Complex(tau * tau));

  // q_tau zeroth-order coefficient at y = 0 is -1
  const OdeOp q = q_tau(1, 4.0);
  const double y0[1] = {0.0};
  CHECK(q.coeff(0).evaluate(y0) == Complex(-1.0));

  // rescaling identity: (1/tau) p_tau(y = sqrt(tau) x) = q_tau
  for (int k : {1, 2}) {
    const double t4 = 4.0;
    const OdeOp resc = p_tau(k, t4).rescaled(std::sqrt(t4), "y") * Complex(1.0 / t4);
    CHECK(resc.approx_equal(q_tau(k, t4), kTol));
  }

  CHECK_THROWS_AS(p_tau(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(p_tau(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(q_tau(1, -2.0), std::domain_error);
}

TEST_CASE("ode op real coefficient extraction") {
  DiffOp op({"y"});
  op.add_term({1}, Polynomial::constant({"y"}, Complex(0.0, 1.0)));
  CHECK_THROWS_AS(OdeOp(op).dense_real_coeffs(1), std::runtime_error);
  DiffOp three_var(kXts);
  CHECK_THROWS_AS(OdeOp{three_var}, std::invalid_argument);
}
