#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fbrank/numeric.hpp"
#include "fbrank/systems.hpp"
#include "fbrank/text.hpp"

using namespace fbrank;

namespace {

constexpr double kPi = std::numbers::pi;

// Modified Bessel function I_0 by its power series.
double bessel_i0(double k) {
  double term = 1, sum = 1;
  for (int m = 1; m < 60; ++m) {
    term *= (k / 2) * (k / 2) / (double(m) * m);
    sum += term;
  }
  return sum;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

EvalPoint von_mises(double kappa) {
  EvalPoint p = EvalPoint::origin(1);
  p.y[0] = kappa;
  return p;
}

// Two diagonal points whose segment stays off x_ii = x_jj.
std::pair<EvalPoint, EvalPoint> segment(int n, std::mt19937_64& rng) {
  for (;;) {
    EvalPoint a = EvalPoint::random(n, rng, true), b = EvalPoint::random(n, rng, true);
    bool same_order = true;
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        same_order = same_order && (a.x[i][i] - a.x[j][j]) * (b.x[i][i] - b.x[j][j]) > 0;
    if (same_order) return {a, b};
  }
}

double max_rel(const std::vector<double>& got, const std::vector<double>& want) {
  double m = 0;
  for (std::size_t i = 0; i < got.size(); ++i) m = std::max(m, rel(got[i], want[i]));
  return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Quadrature, UnitCircleAndSphere) {
  EXPECT_NEAR(quadrature_Z(EvalPoint::origin(1)), 2 * kPi, 1e-10);
  EXPECT_NEAR(quadrature_Z(EvalPoint::origin(2)), 4 * kPi, 1e-8);
}

TEST(Quadrature, RadiusScalesTheMeasure) {
  EXPECT_NEAR(quadrature_Z(EvalPoint::origin(1, 1.5)), 2 * kPi * 1.5, 1e-10);
  EXPECT_NEAR(quadrature_Z(EvalPoint::origin(2, 0.5)), kPi, 1e-10);
}

TEST(Quadrature, VonMisesAgainstBesselSeries) {
  for (double kappa : {0.5, 1.0, 2.0}) EXPECT_LT(rel(quadrature_Z(von_mises(kappa)), 2 * kPi * bessel_i0(kappa)), 1e-8);
}

TEST(Quadrature, SphereWithLinearTiltHasClosedForm) {
  EvalPoint p = EvalPoint::origin(2);
  p.y[2] = 1.3;
  EXPECT_LT(rel(quadrature_Z(p), 4 * kPi * std::sinh(1.3) / 1.3), 1e-10);
}

TEST(Quadrature, MomentsMatchFiniteDifferences) {
  std::mt19937_64 rng(3);
  for (int n : {1, 2})
    for (int trial = 0; trial < 4; ++trial) {
      EvalPoint p = EvalPoint::random(n, rng);
      for (int i = 0; i <= n; ++i) {
        DerivativeSpec d;
        d.t_power.assign(n + 1, 0);
        d.t_power[i] = 1;
        const double h = 1e-5;
        EvalPoint plus = p, minus = p;
        plus.y[i] += h;
        minus.y[i] -= h;
        const double fd = (quadrature_Z(plus) - quadrature_Z(minus)) / (2 * h);
        const double moment = quadrature_Z(p, d);
        EXPECT_LT(std::abs(fd - moment) / std::max(1.0, std::abs(moment)), 1e-6) << "n=" << n << " i=" << i;
      }
    }
}

TEST(Quadrature, RejectsUnsupportedDimensionAndBadPoints) {
  EXPECT_THROW(quadrature_Z(EvalPoint::origin(3)), std::invalid_argument);
  EvalPoint p = EvalPoint::origin(1);
  p.r = -1;
  EXPECT_THROW(quadrature_Z(p), std::invalid_argument);
  p = EvalPoint::origin(1);
  p.x[0][1] = 0.3;
  EXPECT_THROW(quadrature_Z(p), std::invalid_argument);
}

TEST(EvalPoints, RandomPointsRespectTheSamplingBox) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    EvalPoint p = EvalPoint::random(2, rng, trial % 2 == 0);
    EXPECT_NO_THROW(p.validate());
    EXPECT_GE(p.r, 0.5);
    EXPECT_LE(p.r, 1.5);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) EXPECT_GE(std::abs(p.x[i][i] - p.x[j][j]), 0.1);
    if (trial % 2 == 0) EXPECT_TRUE(p.is_diagonal());
  }
}

TEST(EvalPoints, JsonRoundTripIsExact) {
  std::mt19937_64 rng(4);
  EvalPoint p = EvalPoint::random(2, rng);
  EvalPoint q = EvalPoint::from_json(p.to_json());
  EXPECT_EQ(q.x, p.x);
  EXPECT_EQ(q.y, p.y);
  EXPECT_EQ(q.r, p.r);
  EXPECT_TRUE(p.to_json()["r"].is_string());
}

TEST(Annihilation, GeneratorsOfTheFullSystemAtN1) {
  auto sys = make_I(1);
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    EvalPoint p = EvalPoint::random(1, rng);
    for (const auto& g : sys.generators) EXPECT_LT(annihilation_residual(g.op, p), 1e-6) << g.name << " trial " << trial;
  }
}

TEST(Annihilation, DiagonalGeneratorsAtDiagonalPoints) {
  for (int n : {1, 2}) {
    auto sys = make_I_tilde(n, false);
    std::mt19937_64 rng(21 + n);
    for (int trial = 0; trial < 20; ++trial) {
      EvalPoint p = EvalPoint::random(n, rng, true);
      for (const auto& g : sys.generators)
        EXPECT_LT(annihilation_residual(g.op, p), 1e-6) << g.name << " n=" << n << " trial " << trial;
    }
  }
}

TEST(Annihilation, RationalBasisElementsD) {
  std::mt19937_64 rng(30);
  for (int n : {1, 2})
    for (const auto& g : prop2_basis(n)) {
      if (g.name.rfind("D", 0) != 0) continue;
      for (int trial = 0; trial < 5; ++trial) {
        EvalPoint p = EvalPoint::random(n, rng, true);
        Applied a = apply_to_Z(g.op, p);
        EXPECT_LT(std::abs(a.value) / a.scale, 1e-6) << g.name;
      }
    }
}

TEST(Annihilation, PerturbedGeneratorIsDetected) {
  auto sys = make_I(1);
  auto u = sys.universe;
  PolyOperator bad = sys.at("B") + parse_operator("dy1", u);
  std::mt19937_64 rng(5);
  EXPECT_GT(annihilation_residual(bad, EvalPoint::random(1, rng)), 1e-3);
}

TEST(Annihilation, ZeroOperatorHasZeroResidual) {
  auto sys = make_I(1);
  EXPECT_EQ(annihilation_residual(PolyOperator(sys.universe, Mode::D), EvalPoint::origin(1)), 0.0);
}

TEST(Pfaffian, SizeAndRowsAtN1) {
  auto P = build_pfaffian(1);
  ASSERT_EQ(P.size(), 4u);
  ASSERT_EQ(P.variables.size(), 5u);
  std::vector<std::string> standard;
  for (const auto& s : P.standard) standard.push_back(to_text(s, *P.universe));
  EXPECT_EQ(standard, (std::vector<std::string>{"1", "dy1", "dy2", "dy2^2"}));
  for (const auto& Pv : P.P) {
    ASSERT_EQ(Pv.size(), 4u);
    for (const auto& row : Pv) ASSERT_EQ(row.size(), 4u);
  }
  ASSERT_EQ(P.variable_name(2), "y1");
  const auto& Py1 = P.P[2];
  // d_y1 applied to 1 is the standard monomial dy1 itself.
  EXPECT_EQ(to_text(Py1[0][1], *P.universe), "1");
  EXPECT_TRUE(Py1[0][0].is_zero() && Py1[0][2].is_zero() && Py1[0][3].is_zero());
  // dy1^2 = r^2 - dy2^2 modulo B
  EXPECT_EQ(to_text(Py1[1][0], *P.universe), "r^2");
  EXPECT_TRUE(Py1[1][1].is_zero() && Py1[1][2].is_zero());
  EXPECT_EQ(to_text(Py1[1][3], *P.universe), "-1");
}

TEST(Pfaffian, SizeIsTwoNPlusTwo) {
  for (int n : {2, 3}) EXPECT_EQ(build_pfaffian(n).size(), std::size_t(2 * n + 2));
}

TEST(Pfaffian, MatricesReproduceQuadratureDerivatives) {
  auto P = build_pfaffian(1);
  std::mt19937_64 rng(8);
  EvalPoint p = EvalPoint::random(1, rng, true);
  auto F = pfaffian_vector(P, p);
  auto M = P.evaluate(p);
  // y-directions are moments, so the comparison is tight.
  for (std::size_t v = 2; v <= 3; ++v)
    for (std::size_t k = 0; k < P.size(); ++k) {
      Monomial target = Monomial::var(P.universe->dy(int(v) - 1)) * P.standard[k];
      double want = quadrature_Z(p, derivative_of(target, *P.universe));
      double got = 0;
      for (std::size_t l = 0; l < P.size(); ++l) got += M[v][k][l] * F[l];
      EXPECT_LT(std::abs(got - want) / std::max(1.0, std::abs(want)), 1e-9) << P.variable_name(v) << " row " << k;
    }
}

TEST(Pfaffian, FlatnessHoldsExactly) {
  for (int n : {1, 2}) {
    auto rep = check_flatness(build_pfaffian(n));
    EXPECT_TRUE(rep.holds) << rep.witness.dump();
    EXPECT_EQ(rep.pairs, std::size_t((2 * n + 3) * (2 * n + 2) / 2));
  }
}

TEST(Pfaffian, FlatnessSignIsNotSymmetric) {
  // Some pair has a nonzero commutator, so only one sign convention of the
  // flatness identity can hold.
  auto P = build_pfaffian(1);
  std::mt19937_64 rng(2);
  auto M = P.evaluate(EvalPoint::random(1, rng, true));
  double largest = 0;
  for (std::size_t a = 0; a < M.size(); ++a)
    for (std::size_t b = a + 1; b < M.size(); ++b)
      for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t j = 0; j < P.size(); ++j) {
          double c = 0;
          for (std::size_t l = 0; l < P.size(); ++l) c += M[a][i][l] * M[b][l][j] - M[b][i][l] * M[a][l][j];
          largest = std::max(largest, std::abs(c));
        }
  EXPECT_GT(largest, 1e-3);
}

TEST(Pfaffian, EvaluationRefusesTheSingularLocus) {
  auto P = build_pfaffian(1);
  EvalPoint p = EvalPoint::origin(1);
  p.x[0][0] = p.x[1][1] = 0.4;
  EXPECT_THROW(P.evaluate(p), SingularPath);
}

TEST(Transport, MatchesEndpointQuadrature) {
  for (int n : {1, 2}) {
    auto P = build_pfaffian(n);
    std::mt19937_64 rng(40 + n);
    for (int trial = 0; trial < 3; ++trial) {
      auto [a, b] = segment(n, rng);
      auto F = integrate_pfaffian(P, a, b, 1000);
      EXPECT_LT(max_rel(F, pfaffian_vector(P, b)), 1e-6) << "n=" << n;
    }
  }
}

TEST(Transport, FourthOrderStepConvergence) {
  auto P = build_pfaffian(1);
  std::mt19937_64 rng(7);
  auto [a, b] = segment(1, rng);
  auto start = pfaffian_vector(P, a);
  auto ref = integrate_pfaffian(P, a, b, 2000, &start);
  const double e1 = max_abs_diff(integrate_pfaffian(P, a, b, 10, &start), ref);
  const double e2 = max_abs_diff(integrate_pfaffian(P, a, b, 20, &start), ref);
  const double e3 = max_abs_diff(integrate_pfaffian(P, a, b, 40, &start), ref);
  EXPECT_NEAR(e1 / e2, 16, 4);
  EXPECT_NEAR(e2 / e3, 16, 4);
}

TEST(Transport, RectangleLoopReturnsToStart) {
  // Loops in the (x11, y1) and (y2, r) planes; path independence is what
  // fixes the sign of the flatness identity.
  auto P = build_pfaffian(1);
  std::mt19937_64 rng(12);
  EvalPoint p0 = EvalPoint::random(1, rng, true);
  auto start = pfaffian_vector(P, p0);
  auto shift = [](EvalPoint p, int which, double d) {
    if (which == 0) p.x[0][0] += d;
    if (which == 1) p.y[0] += d;
    if (which == 2) p.y[1] += d;
    if (which == 3) p.r += d;
    return p;
  };
  for (auto [u, v] : {std::pair{0, 1}, std::pair{2, 3}}) {
    EvalPoint c1 = shift(p0, u, 0.03), c2 = shift(c1, v, 0.3), c3 = shift(c2, u, -0.03);
    auto F = integrate_pfaffian(P, p0, c1, 200, &start);
    F = integrate_pfaffian(P, c1, c2, 200, &F);
    F = integrate_pfaffian(P, c2, c3, 200, &F);
    F = integrate_pfaffian(P, c3, p0, 200, &F);
    EXPECT_LT(max_rel(F, start), 1e-6);
  }
}

TEST(Transport, ZeroLengthPathKeepsTheVector) {
  auto P = build_pfaffian(1);
  std::mt19937_64 rng(13);
  EvalPoint p = EvalPoint::random(1, rng, true);
  std::vector<double> v = {1.5, -2, 0.25, 3};
  EXPECT_EQ(integrate_pfaffian(P, p, p, 50, &v), v);
}

TEST(Transport, SegmentThroughTheSingularLocusIsRefused) {
  auto P = build_pfaffian(1);
  EvalPoint a = EvalPoint::origin(1), b = EvalPoint::origin(1);
  a.x[0][0] = 0.5;
  b.x[1][1] = 0.5;
  EXPECT_THROW(integrate_pfaffian(P, a, b, 10), SingularPath);
}
