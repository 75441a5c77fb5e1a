#include <gtest/gtest.h>

#include <random>

#include "fbrank/polynomial.hpp"
#include "fbrank/ratfun.hpp"
#include "fbrank/text.hpp"
#include "random_helpers.hpp"

using namespace fbrank;

namespace {

UniversePtr U1() { return VarUniverse::make(1, {}); }

Polynomial P(const char* s, const UniversePtr& u) { return parse_polynomial(s, u); }
RationalFunction F(const char* s, const UniversePtr& u) { return parse_ratfun(s, u); }

}  // namespace

TEST(Universe, StableLayoutAndPairing) {
  auto u = VarUniverse::make(1, {.slack = true, .homogenized = true});
  EXPECT_EQ(u->name(0), "x11");
  EXPECT_EQ(u->name(u->dx(1, 2)), "dx12");
  EXPECT_EQ(u->x(2, 1), u->x(1, 2));
  for (VarIndex v : u->differentials()) {
    EXPECT_TRUE(u->is_commutative(static_cast<VarIndex>(u->partner(v))));
    EXPECT_EQ(u->partner(static_cast<VarIndex>(u->partner(v))), v);
  }
  EXPECT_EQ(u->differentials().size(), 6u);
  EXPECT_EQ(u->of_kind(VarKind::Slack).size(), 8u);
  EXPECT_EQ(u->name(u->h()), "h");
  auto diag = VarUniverse::make(2, {.diagonal_only = true});
  EXPECT_FALSE(diag->has_x(1, 2));
  EXPECT_EQ(diag->differentials().size(), 7u);
}

TEST(Polynomial, DifferenceOfSquares) {
  auto u = U1();
  EXPECT_EQ(P("(x11+1)*(x11-1)", u), P("x11^2-1", u));
}

TEST(Polynomial, AdditiveIdentityAndScalarCancel) {
  auto u = U1();
  Polynomial p = P("3*x12*y1 - 1/2*r + 7", u);
  EXPECT_EQ(p + Polynomial(), p);
  EXPECT_EQ(P("2*(x22-x11)", u) * Rational(1, 2), P("x22-x11", u));
}

TEST(Polynomial, ExponentOverflowIsReported) {
  Monomial big = Monomial::var(0, Monomial::kMaxExponent - 1);
  EXPECT_THROW(big * big, ExponentOverflow);
}

TEST(Polynomial, GcdExamples) {
  auto u = U1();
  EXPECT_EQ(gcd(P("x11^2-1", u), P("x11-1", u)), P("x11-1", u));
  EXPECT_EQ(gcd(P("3*x11+6", u), Polynomial()), P("x11+2", u));
  EXPECT_EQ(gcd(P("y1*y2", u), P("y2*r", u)), P("y2", u));
}

TEST(Polynomial, PartialExamples) {
  auto u = U1();
  EXPECT_EQ(P("x12*y1", u).partial(u->x(1, 2)), P("y1", u));
  EXPECT_EQ(P("r^2", u).partial(u->r()), P("2*r", u));
  EXPECT_TRUE(P("x11", u).partial(u->y(1)).is_zero());
}

TEST(RationalFunction, Examples) {
  auto u = U1();
  RationalFunction a12 = F("2*(x11-x22)", u);
  EXPECT_EQ(a12.inverse() * a12, RationalFunction(1));
  EXPECT_TRUE((F("1/(x11-x22)", u) + F("1/(x22-x11)", u)).is_zero());
  EXPECT_EQ(F("y1/r", u) / F("y1/r^2", u), F("r", u));
  EXPECT_THROW(F("1", u) / RationalFunction(), DivisionByZero);
  EXPECT_THROW(RationalFunction(Polynomial(1), Polynomial()), DivisionByZero);
}

TEST(RationalFunction, CanonicalFormHasMonicDenominator) {
  auto u = U1();
  RationalFunction f(P("2*x11 - 2*x22", u), P("-4*x11^2 + 4*x22^2", u));
  EXPECT_EQ(f.den().leading_coeff(), 1);
  EXPECT_EQ(f, F("-1/(2*x11 + 2*x22)", u));
}

class AlgebraProperties : public ::testing::Test {
 protected:
  UniversePtr u = VarUniverse::make(1, {});
  std::vector<VarIndex> vars{u->x(1, 1), u->x(2, 2), u->y(1), u->r()};
  std::mt19937_64 rng{20240917};
};

TEST_F(AlgebraProperties, RingAxioms) {
  for (int i = 0; i < 1000; ++i) {
    Polynomial a = fbtest::random_polynomial(rng, vars), b = fbtest::random_polynomial(rng, vars),
               c = fbtest::random_polynomial(rng, vars);
    ASSERT_EQ((a + b) + c, a + (b + c));
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_TRUE((a - a).is_zero());
  }
}

TEST_F(AlgebraProperties, GcdDividesAndCofactorsCoprime) {
  for (int i = 0; i < 200; ++i) {
    Polynomial common = fbtest::random_polynomial(rng, vars, 2);
    Polynomial p = fbtest::random_polynomial(rng, vars, 3) * common;
    Polynomial q = fbtest::random_polynomial(rng, vars, 3) * common;
    if (p.is_zero() && q.is_zero()) continue;
    Polynomial g = gcd(p, q);
    auto pg = divide_exact(p, g), qg = divide_exact(q, g);
    ASSERT_TRUE(pg && qg);
    ASSERT_TRUE(gcd(*pg, *qg).is_constant());
    if (!common.is_zero()) ASSERT_TRUE(divide_exact(g, common.monic()).has_value());
  }
}

TEST_F(AlgebraProperties, PartialIsDerivation) {
  for (int i = 0; i < 500; ++i) {
    Polynomial a = fbtest::random_polynomial(rng, vars), b = fbtest::random_polynomial(rng, vars);
    for (VarIndex v : vars) ASSERT_EQ((a * b).partial(v), a.partial(v) * b + a * b.partial(v));
  }
}

TEST_F(AlgebraProperties, RationalFunctionCanonicalAndField) {
  for (int i = 0; i < 200; ++i) {
    Polynomial n1 = fbtest::random_polynomial(rng, vars, 3), d1 = fbtest::random_polynomial(rng, vars, 3);
    Polynomial n2 = fbtest::random_polynomial(rng, vars, 3), d2 = fbtest::random_polynomial(rng, vars, 3);
    if (d1.is_zero() || d2.is_zero()) continue;
    RationalFunction f(n1, d1), g(n2, d2);
    ASSERT_EQ(f.canonicalized(), f);
    ASSERT_TRUE(cross_equal(f + g, RationalFunction(n1 * d2 + n2 * d1, d1 * d2)));
    ASSERT_EQ(f + g, RationalFunction(n1 * d2 + n2 * d1, d1 * d2));
    ASSERT_EQ(f * g, RationalFunction(n1 * n2, d1 * d2));
    ASSERT_EQ((f * g).canonicalized(), f * g);
    if (!g.is_zero()) ASSERT_EQ((f / g) * g, f);
    VarIndex v = vars[i % vars.size()];
    ASSERT_EQ((f * g).partial(v), f.partial(v) * g + f * g.partial(v));
  }
}

TEST(Text, RoundTrip) {
  auto u = VarUniverse::make(2, {.slack = true});
  for (const char* s : {"x11^2 - 1", "-1/2*a12^3 + b1*c1*y2", "0", "3/7"}) {
    Polynomial p = parse_polynomial(s, u);
    EXPECT_EQ(parse_polynomial(to_text(p, *u), u), p) << s;
  }
  RationalFunction f = parse_ratfun("(y1 + r)/(x11 - x22)", u);
  EXPECT_EQ(parse_ratfun(to_text(f, *u), u), f);
  EXPECT_THROW(parse_polynomial("x11 +", u), ParseError);
  EXPECT_THROW(parse_polynomial("zz", u), ParseError);
  EXPECT_THROW(parse_polynomial("dx11", u), ParseError);
}
