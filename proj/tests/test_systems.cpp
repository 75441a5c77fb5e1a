#include <gtest/gtest.h>

#include "fbrank/groebner.hpp"
#include "fbrank/systems.hpp"
#include "fbrank/text.hpp"

using namespace fbrank;

namespace {

PolyOperator D(const std::string& s, const UniversePtr& u) { return parse_operator(s, u, Mode::D); }
PolyOperator Dh(const std::string& s, const UniversePtr& u) { return parse_operator(s, u, Mode::Dh); }

std::size_t expected_count(int n) {
  const std::size_t m = n + 1;
  return m * (m + 1) / 2 + 1 + m * (m - 1) / 2 + 1;
}

std::vector<std::string> names_of(const SystemDescriptor& s) {
  std::vector<std::string> out;
  for (const auto& g : s.generators) out.push_back(g.name);
  return out;
}

}  // namespace

TEST(Systems, GeneratorCounts) {
  for (int n = 1; n <= 4; ++n) {
    EXPECT_EQ(make_I(n).generators.size(), expected_count(n));
    EXPECT_EQ(make_I_tilde(n).generators.size(), expected_count(n));
    EXPECT_EQ(make_I_prime(n).generators.size(), expected_count(n));
    EXPECT_EQ(make_I_tilde_prime(n).generators.size(), expected_count(n));
    EXPECT_EQ(make_I_prime_h(n).generators.size(), expected_count(n));
    // Without the off-diagonal derivatives only the diagonal A-type remain.
    EXPECT_EQ(make_I_tilde(n, false).generators.size(), expected_count(n) - std::size_t(n) * (n + 1) / 2);
  }
}

TEST(Systems, StableNames) {
  EXPECT_EQ(names_of(make_I(1)), (std::vector<std::string>{"A_11", "A_12", "A_22", "B", "C_12", "E"}));
  EXPECT_EQ(names_of(make_I_tilde(1)), (std::vector<std::string>{"At_11", "At_12", "At_22", "B", "Ct_12", "Et"}));
  EXPECT_EQ(names_of(make_I_prime_h(1)),
            (std::vector<std::string>{"Aph_11", "Aph_12", "Aph_22", "B", "Cph_12", "Eph"}));
  auto big = make_I(9);
  EXPECT_NO_THROW(big.at("C_9_10"));
  EXPECT_THROW(big.at("C_99"), std::out_of_range);
}

TEST(Systems, ParseVocabulary) {
  for (const char* k : {"I", "It", "Ip", "Itp", "Iph"}) EXPECT_EQ(to_string(parse_system_kind(k)), k);
  EXPECT_THROW(parse_system_kind("J"), std::invalid_argument);
  EXPECT_EQ(SlackSpec::parse("sym").kind, SlackSpec::Kind::Symbolic);
  EXPECT_EQ(SlackSpec::parse("zero").kind, SlackSpec::Kind::Zero);
  SlackSpec r = SlackSpec::parse("random:42");
  EXPECT_EQ(r.kind, SlackSpec::Kind::Random);
  EXPECT_EQ(r.seed, 42u);
  EXPECT_EQ(r.to_string(), "random:42");
  EXPECT_THROW(SlackSpec::parse("random:x"), std::invalid_argument);
  EXPECT_THROW(make_I(0), std::invalid_argument);
}

TEST(Systems, FullSystemN1Listing) {
  auto s = make_I(1);
  auto u = s.universe;
  EXPECT_EQ(s.at("A_11"), D("dx11 - dy1^2", u));
  EXPECT_EQ(s.at("A_12"), D("dx12 - dy1*dy2", u));
  EXPECT_EQ(s.at("A_22"), D("dx22 - dy2^2", u));
  EXPECT_EQ(s.at("B"), D("dy1^2 + dy2^2 - r^2", u));
  EXPECT_EQ(s.at("C_12"), D("x12*dy1^2 + 2*(x22 - x11)*dy1*dy2 - x12*dy2^2 + y2*dy1 - y1*dy2", u));
  EXPECT_EQ(s.at("E"),
            D("r*dr - 2*(x11*dy1^2 + x12*dy1*dy2 + x22*dy2^2) - (y1*dy1 + y2*dy2) - 1", u));
}

TEST(Systems, EConstantTerm) {
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(make_I(n).at("E").coeff(Monomial{}), Rational(-n));
}

TEST(Systems, FullSystemN2CTerms) {
  auto s = make_I(2);
  auto u = s.universe;
  EXPECT_EQ(s.at("C_13"), D("x13*dy1^2 + 2*(x33 - x11)*dy1*dy3 - x13*dy3^2 + x23*dy1*dy2 - x12*dy3*dy2"
                            " + y3*dy1 - y1*dy3",
                            u));
}

TEST(Systems, DiagonalSystemN1Listing) {
  auto s = make_I_tilde(1);
  auto u = s.universe;
  EXPECT_EQ(s.at("At_11"), D("dx11 - dy1^2", u));
  EXPECT_EQ(s.at("At_12"), D("dx12", u));
  EXPECT_EQ(s.at("At_22"), D("dx22 - dy2^2", u));
  EXPECT_EQ(s.at("B"), D("dy1^2 + dy2^2 - r^2", u));
  EXPECT_EQ(s.at("Et"), D("r*dr - 2*(x11*dy1^2 + x22*dy2^2) - (y1*dy1 + y2*dy2) - 1", u));
  // The worked example prints C with the opposite overall sign.
  EXPECT_EQ(s.at("Ct_12"), -D("2*(x22 - x11)*dy1*dy2 + y2*dy1 - y1*dy2", u));
}

TEST(Systems, DiagonalCFormula) {
  for (int n = 1; n <= 3; ++n) {
    auto s = make_I_tilde(n);
    auto u = s.universe;
    for (int i = 1; i <= n + 1; ++i)
      for (int j = i + 1; j <= n + 1; ++j) {
        std::string I = std::to_string(i), J = std::to_string(j);
        EXPECT_EQ(s.at("Ct_" + pair_suffix(i, j)),
                  D("2*(x" + I + I + " - x" + J + J + ")*dy" + I + "*dy" + J + " + y" + I + "*dy" + J + " - y" + J +
                        "*dy" + I,
                    u));
        // Antisymmetric in the index pair.
        EXPECT_EQ(op_C_diag(u, Mode::D, j, i), -op_C_diag(u, Mode::D, i, j));
      }
  }
}

TEST(Systems, CSignConventionsDifferByNegationAndSlackShift) {
  for (int n = 1; n <= 3; ++n) {
    auto primed = make_I_tilde_prime(n);
    auto u = primed.universe;
    for (int i = 1; i <= n + 1; ++i)
      for (int j = i + 1; j <= n + 1; ++j) {
        std::string I = std::to_string(i), J = std::to_string(j);
        PolyOperator plain = op_C_diag(u, Mode::D, i, j);
        PolyOperator shift = D("b" + J + "*c" + J + "*dy" + I + " - b" + I + "*c" + I + "*dy" + J, u);
        EXPECT_EQ(primed.at("Ctp_" + pair_suffix(i, j)), -plain + shift);
      }
  }
}

TEST(Systems, CSignConventionsGenerateTheSameIdeal) {
  // Replacing each C by its negative leaves the ideal, hence the reduced
  // basis, unchanged.
  auto gens = ops_of(diagonal_generators(2));
  TermOrder o = make_prop2_order(gens.front().universe());
  auto flipped = gens;
  for (std::size_t k = 0; k < flipped.size(); ++k)
    if (diagonal_generators(2)[k].name.rfind("C_", 0) == 0) flipped[k] = -flipped[k];
  EXPECT_TRUE(all_reduce_to_zero(flipped, buchberger(gens, o).generators, o));
  EXPECT_TRUE(all_reduce_to_zero(gens, buchberger(flipped, o).generators, o));
}

TEST(Systems, DFirstIsDyTimesB) {
  for (int n = 1; n <= 3; ++n) {
    auto G = prop2_basis(n);
    auto u = G.front().op.universe();
    RatOperator d1 = RatOperator::variable(u, Mode::R, u->dy(1)) * to_rational(op_B(u, Mode::D));
    EXPECT_EQ(op_D(u, 1), d1);
  }
}

TEST(Systems, DSecondAtN1MatchesWorkedExample) {
  auto u = VarUniverse::make(1, {.diagonal_only = true});
  RatOperator listed = parse_rat_operator(
      "2*(x22 - x11)*dy2^3 - 2*(x22 - x11)*r^2*dy2 - (y2*dy1^2 - y1*dy1*dy2 - dy2)", u);
  RatOperator scaled = op_D(u, 2).scaled(RationalFunction(parse_polynomial("2*(x22 - x11)", u)));
  EXPECT_EQ(scaled, listed);
}

TEST(Systems, DInitialIsCube) {
  for (int n = 1; n <= 4; ++n) {
    auto u = VarUniverse::make(n, {.diagonal_only = true});
    TermOrder o = make_prop2_order(u);
    for (int k = 1; k <= n + 1; ++k) {
      RatOperator d = op_D(u, k);
      const auto& lt = d.leading_term(o);
      EXPECT_EQ(lt.monomial, Monomial::var(u->dy(k), 3)) << "n=" << n << " k=" << k;
      EXPECT_EQ(lt.coeff, RationalFunction(Polynomial(Rational(1))));
    }
  }
}

TEST(Systems, DMembershipByTrackedNormalForm) {
  for (int n = 1; n <= 4; ++n) {
    auto gens = ops_of(diagonal_generators(n));
    auto u = gens.front().universe();
    TermOrder o = make_prop2_order(u);
    auto gb = buchberger(gens, o);
    // The computed basis lies in the ideal of the generators.
    ASSERT_TRUE(all_reduce_to_zero(gens, gb.generators, o));
    for (int k = 1; k <= n + 1; ++k) {
      auto rep = normal_form(op_D(u, k), gb.generators, o, {.track = true});
      EXPECT_TRUE(rep.remainder.is_zero()) << "n=" << n << " k=" << k;
      EXPECT_EQ(verify_representation(rep, gb.generators, o), std::nullopt);
    }
  }
}

TEST(Systems, DIsAnExplicitCombinationOfGenerators) {
  const int n = 3;
  auto u = VarUniverse::make(n, {.diagonal_only = true});
  auto dy = [&](int k) { return RatOperator::variable(u, Mode::R, u->dy(k)); };
  for (int k = 1; k <= n + 1; ++k) {
    RatOperator combo = dy(k) * to_rational(op_B(u, Mode::D));
    for (int l = 1; l < k; ++l)
      combo -= dy(l) * to_rational(op_C_diag(u, Mode::D, l, k)).scaled(coeff_a(*u, l, k).inverse());
    EXPECT_EQ(op_D(u, k), combo);
  }
}

TEST(Systems, PrimedAForms) {
  auto s = make_I_prime(1);
  auto u = s.universe;
  EXPECT_EQ(s.at("Ap_11"), D("x11*dx11 - x11*dy1^2 - a11^3", u));
  EXPECT_EQ(s.at("Ap_12"), D("x12*dx12 - x12*dy1*dy2 - a12^3", u));
  EXPECT_EQ(s.at("Ap_22"), D("x22*dx22 - x22*dy2^2 - a22^3", u));
  EXPECT_EQ(s.at("Cp_12"), D("x12*dy1^2 + 2*(x22 - x11)*dy1*dy2 - x12*dy2^2 + (y2 + b2*c2)*dy1 - (y1 + b1*c1)*dy2", u));
  EXPECT_EQ(s.at("Ep"), D("r*dr - 2*(x11*dy1^2 + x12*dy1*dy2 + x22*dy2^2) - ((y1 + b1*c1)*dy1 + (y2 + b2*c2)*dy2)"
                          " - 1 - d^3",
                          u));
}

TEST(Systems, PrimedEConstantBlock) {
  for (int n = 1; n <= 3; ++n) {
    auto s = make_I_prime(n);
    const PolyOperator& e = s.at("Ep");
    EXPECT_EQ(e.coeff(Monomial{}), Rational(-n));
    EXPECT_EQ(e.coeff(Monomial::var(s.universe->d(), 3)), Rational(-1));
  }
}

TEST(Systems, DiagonalPrimedN1Listing) {
  auto s = make_I_tilde_prime(1);
  auto u = s.universe;
  EXPECT_EQ(s.at("Atp_11"), D("x11*dx11 - x11*dy1^2 - a11^3", u));
  EXPECT_EQ(s.at("Atp_12"), D("x12*dx12 - a12^3", u));
  EXPECT_EQ(s.at("Ctp_12"), D("2*(x22 - x11)*dy1*dy2 + (y2 + b2*c2)*dy1 - (y1 + b1*c1)*dy2", u));
  EXPECT_EQ(s.at("Etp"), D("r*dr - 2*(x11*dy1^2 + x22*dy2^2) - ((y1 + b1*c1)*dy1 + (y2 + b2*c2)*dy2) - 1 - d^3", u));
  // The alternative printed form of the diagonal A differs from it.
  EXPECT_NE(op_Atp_listed_variant(u, 1), s.at("Atp_11"));
  EXPECT_EQ(op_Atp_listed_variant(u, 1) + s.at("Atp_11"), D("-2*a11^3", u));
}

TEST(Systems, ZeroSlackSpecializesToTheOriginal) {
  for (int n = 1; n <= 3; ++n) {
    auto primed = make_I_prime(n, SlackSpec::parse("zero"));
    auto plain = make_I(n);
    auto u = primed.universe;
    for (const auto& g : plain.generators) {
      PolyOperator lifted = transfer(g.op, u, Mode::D);
      if (g.name[0] == 'A') {
        // A' = x_pq A_pq once the slack vanishes.
        std::string pq = g.name.substr(2);
        PolyOperator x = PolyOperator::variable(u, Mode::D, *u->find("x" + pq));
        EXPECT_EQ(primed.at("Ap_" + pq), x * lifted);
      } else {
        std::string primed_name = g.name == "B" ? "B" : g.name.substr(0, 1) + "p" + g.name.substr(1);
        EXPECT_EQ(primed.at(primed_name), lifted) << g.name;
      }
    }
  }
}

TEST(Systems, RandomSlackValuesAreExactRationals) {
  auto u = VarUniverse::make(2, {.slack = true});
  auto a = SlackSpec::parse("random:7").values(*u);
  auto b = SlackSpec::parse("random:7").values(*u);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), u->of_kind(VarKind::Slack).size());
  for (const auto& [name, q] : a) {
    EXPECT_GT(q, 0);
    EXPECT_GE(q, Rational(1000, 10000));
    EXPECT_LE(q, Rational(10000, 1000));
  }
  auto s = make_I_prime(1, SlackSpec::parse("random:7"));
  for (const auto& g : s.generators)
    for (const auto& t : g.op.terms())
      for (const auto& [v, e] : t.monomial.factors()) EXPECT_NE(s.universe->kind(v), VarKind::Slack);
}

TEST(Systems, HomogenizedCAndETerms) {
  auto s = make_I_prime_h(1);
  auto u = s.universe;
  EXPECT_EQ(s.at("Cph_12"),
            Dh("x12*dy1^2 + 2*(x22 - x11)*dy1*dy2 - x12*dy2^2 + (y2*h + b2*c2)*dy1 - (y1*h + b1*c1)*dy2", u));
  EXPECT_EQ(s.at("Eph"), Dh("h*r*dr - 2*(x11*dy1^2 + x12*dy1*dy2 + x22*dy2^2) - ((h*y1 + b1*c1)*dy1"
                            " + (h*y2 + b2*c2)*dy2) - h^3 - d^3",
                            u));
  for (int n = 1; n <= 3; ++n) {
    auto sn = make_I_prime_h(n);
    const PolyOperator& e = sn.at("Eph");
    EXPECT_EQ(e.coeff(Monomial::var(sn.universe->h(), 3)), Rational(-n));
    EXPECT_EQ(e.coeff(Monomial::var(sn.universe->d(), 3)), Rational(-1));
    for (const auto& g : sn.generators) EXPECT_TRUE(g.op.is_homogeneous()) << g.name;
  }
}

TEST(Systems, HomogenizedCSplit) {
  auto u = VarUniverse::make(2, {.slack = true, .homogenized = true});
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      EXPECT_EQ(op_Cph_hat(u, i, j) + op_Cph_check(u, i, j), op_Cph(u, i, j));
      EXPECT_EQ(op_Cph(u, j, i), -op_Cph(u, i, j));
    }
}

TEST(Systems, HomogenizationRoundTrip) {
  for (int n = 1; n <= 3; ++n) {
    auto primed = make_I_prime(n);
    auto homog = make_I_prime_h(n);
    ASSERT_EQ(primed.generators.size(), homog.generators.size());
    for (std::size_t k = 0; k < primed.generators.size(); ++k) {
      const PolyOperator& gh = homog.generators[k].op;
      const PolyOperator& g = primed.generators[k].op;
      EXPECT_EQ(transfer(dehomogenize(gh), primed.universe, Mode::D), g) << homog.generators[k].name;
      EXPECT_EQ(homogenize(transfer(g, homog.universe, Mode::D)), gh) << homog.generators[k].name;
    }
  }
}

TEST(Systems, WeightVector) {
  auto u = VarUniverse::make(1, {});
  WeightVector w = make_weight(u);
  std::vector<std::int64_t> got;
  for (const char* v : {"dx11", "dx12", "dx22", "dy1", "dy2", "dr"}) got.push_back(w.of_differential(*u->find(v)));
  EXPECT_EQ(got, (std::vector<std::int64_t>{0, 1, 0, 0, 0, 0}));
  EXPECT_EQ(w.paired(u->x(1, 2)), -1);
  EXPECT_EQ(weight_degree(Monomial::var(u->x(1, 2)) * Monomial::var(u->dx(1, 2)), w), 0);
  auto u3 = VarUniverse::make(3, {.slack = true, .homogenized = true});
  WeightVector w3 = make_weight(u3);
  for (int i = 1; i <= 4; ++i)
    for (int j = i; j <= 4; ++j) EXPECT_EQ(w3.of_differential(u3->dx(i, j)), i == j ? 0 : 1);
  EXPECT_EQ(w3.paired(u3->h()), 0);
  EXPECT_EQ(w3.paired(u3->a(1, 2)), 0);
}

TEST(Systems, WeightInitialIdealOfPrimedBasis) {
  for (int n = 1; n <= 2; ++n) {
    auto homog = make_I_prime_h(n);
    TermOrder oh = make_h_order(homog.universe);
    GroebnerBasis<PolyOperator> G;
    G.mode = Mode::D;
    G.certified = is_groebner(homog.ops(), oh).is_groebner;
    ASSERT_TRUE(G.certified);
    for (const auto& g : homog.generators) G.generators.push_back(dehomogenize(g.op));
    auto target = make_I_tilde_prime(n);
    auto in = initial_ideal_weight(G, make_weight(homog.universe));
    ASSERT_EQ(in.size(), target.generators.size());
    for (std::size_t k = 0; k < in.size(); ++k)
      EXPECT_EQ(transfer(in[k], target.universe, Mode::D), target.generators[k].op) << target.generators[k].name;
  }
}

TEST(Systems, ZeroWeightKeepsGenerators) {
  auto s = make_I(1);
  GroebnerBasis<PolyOperator> G;
  G.certified = true;
  G.generators = s.ops();
  EXPECT_EQ(initial_ideal_weight(G, WeightVector(s.universe)), s.ops());
  G.certified = false;
  EXPECT_THROW(initial_ideal_weight(G, WeightVector(s.universe)), std::invalid_argument);
}

TEST(Systems, DescriptorJson) {
  auto j = make_I_prime(1, SlackSpec::parse("random:3")).to_json();
  EXPECT_EQ(j["system"], "Ip");
  EXPECT_EQ(j["n"], 1);
  EXPECT_EQ(j["generators"].size(), 6u);
  EXPECT_EQ(j["generators"][3]["name"], "B");
}
