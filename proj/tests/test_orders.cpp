#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fbrank/order.hpp"
#include "fbrank/text.hpp"
#include "random_helpers.hpp"

using namespace fbrank;

namespace {

Monomial M(const char* s, const UniversePtr& u) {
  PolyOperator p = parse_operator(s, u, u->options().homogenized ? Mode::Dh : Mode::D);
  return p.terms().front().monomial;
}

std::vector<VarIndex> all_vars(const VarUniverse& u) {
  std::vector<VarIndex> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<VarIndex>(i);
  return v;
}

}  // namespace

TEST(BlockOrder, Examples) {
  auto u = VarUniverse::make(1, {.diagonal_only = true});
  TermOrder o = make_prop2_order(u);
  EXPECT_TRUE(o.compare(M("dr", u), M("dx11^10", u)) > 0);
  EXPECT_TRUE(o.compare(M("dy1^2", u), M("dy1*dy2", u)) > 0);
  EXPECT_TRUE(o.compare(M("dy1*dy2", u), M("dy1*dy2", u)) == 0);
  EXPECT_TRUE(o.compare(M("dx11", u), M("dx22", u)) > 0);
  EXPECT_TRUE(o.compare(M("dx22", u), M("dy1^5", u)) > 0);
}

TEST(HOrder, Examples) {
  auto u = VarUniverse::make(1, {.slack = true, .homogenized = true});
  TermOrder o = make_h_order(u);
  EXPECT_TRUE(o.compare(M("b1*c1*dy2", u), M("x12*dy1^2", u)) > 0);
  EXPECT_TRUE(o.compare(M("d^3", u), M("h*r*dr", u)) > 0);
  EXPECT_TRUE(o.compare(M("h", u), M("1", u)) > 0);
  auto lead = [&](const char* s) {
    PolyOperator p = parse_operator(s, u, Mode::Dh);
    const auto& t = p.leading_term(o);
    return PolyOperator::monomial(u, Mode::Dh, t.monomial, t.coeff);
  };
  EXPECT_EQ(lead("h*x12*dx12 - x12*dy1*dy2 - a12^3"), parse_operator("-a12^3", u, Mode::Dh));
  EXPECT_EQ(lead("dy1^2 + dy2^2 - r^2"), parse_operator("-r^2", u, Mode::Dh));
  EXPECT_EQ(lead("x12*dy1^2 + 2*(x22-x11)*dy1*dy2 - x12*dy2^2 + (h*y2+b2*c2)*dy1 - (h*y1+b1*c1)*dy2"),
            parse_operator("-b1*c1*dy2", u, Mode::Dh));
}

TEST(HOrder, PresetMatchesGeneralConstruction) {
  auto u = VarUniverse::make(1, {.slack = true, .homogenized = true});
  TermOrder a = make_h_order(u), b = make_h_order_n1_preset(u);
  std::mt19937_64 rng(3);
  auto vars = all_vars(*u);
  for (int i = 0; i < 5000; ++i) {
    Monomial m1 = fbtest::random_monomial(rng, vars, 3, 5), m2 = fbtest::random_monomial(rng, vars, 3, 5);
    ASSERT_TRUE(a.compare(m1, m2) == b.compare(m1, m2));
  }
}

TEST(WeightDegree, Examples) {
  auto u = VarUniverse::make(1, {});
  WeightVector w = make_weight(u);
  EXPECT_EQ(weight_degree(M("x12*dx12", u), w), 0);
  EXPECT_EQ(weight_degree(M("dx12", u), w), 1);
  EXPECT_EQ(weight_degree(M("x12*dy1*dy2", u), w), -1);
  EXPECT_EQ(w.of_differential(u->dx(1, 2)), 1);
  EXPECT_EQ(w.of_differential(u->dx(1, 1)), 0);
  EXPECT_EQ(w.of_differential(u->dr()), 0);
  std::vector<std::int64_t> listed;
  for (VarIndex v : {u->dx(1, 1), u->dx(1, 2), u->dx(2, 2), u->dy(1), u->dy(2), u->dr()})
    listed.push_back(w.of_differential(v));
  EXPECT_EQ(listed, (std::vector<std::int64_t>{0, 1, 0, 0, 0, 0}));
  for (VarIndex v : u->differentials()) EXPECT_EQ(w.paired(v) + w.paired(static_cast<VarIndex>(u->partner(v))), 0);
}

class OrderProperties : public ::testing::TestWithParam<int> {};

TEST_P(OrderProperties, TotalAndMultiplicative) {
  int n = GetParam();
  auto u = VarUniverse::make(n, {.slack = true, .homogenized = true});
  auto ud = VarUniverse::make(n, {.diagonal_only = true});
  std::vector<std::pair<TermOrder, std::vector<VarIndex>>> cases{
      {make_h_order(u), all_vars(*u)},
      {make_h_order(u, {.reverse_c = true, .reverse_y = true}), all_vars(*u)},
      {make_grlex_order(u), all_vars(*u)},
      {make_prop2_order(ud), ud->differentials()},
  };
  std::mt19937_64 rng(11 + n);
  WeightVector w = make_weight(u);
  for (auto& [o, vars] : cases) {
    for (int i = 0; i < 1000; ++i) {
      Monomial a = fbtest::random_monomial(rng, vars, 3, 4), b = fbtest::random_monomial(rng, vars, 3, 4),
               m = fbtest::random_monomial(rng, vars, 3, 4), c = fbtest::random_monomial(rng, vars, 3, 4);
      auto ab = o.compare(a, b);
      ASSERT_EQ(ab == 0, a == b);
      ASSERT_TRUE(o.compare(b, a) == (0 <=> ab));
      ASSERT_TRUE(o.compare(m * a, m * b) == ab);
      if (ab < 0 && o.compare(b, c) < 0) ASSERT_TRUE(o.compare(a, c) < 0);
      ASSERT_TRUE(o.compare(a * m, a) >= 0);
      ASSERT_EQ(weight_degree(a * b, w), weight_degree(a, w) + weight_degree(b, w));
    }
  }
}

TEST_P(OrderProperties, SortingIsStableWithinDegree) {
  int n = GetParam();
  auto u = VarUniverse::make(n, {.slack = true, .homogenized = true});
  TermOrder o = make_h_order(u);
  std::mt19937_64 rng(99);
  auto vars = all_vars(*u);
  std::vector<Monomial> ms;
  while (ms.size() < 400) {
    Monomial m = fbtest::random_monomial(rng, vars, 3, 4);
    if (m.degree() == 4) ms.push_back(m);
  }
  auto a = ms, b = ms;
  std::sort(a.begin(), a.end(), [&](auto& x, auto& y) { return o.less(x, y); });
  std::shuffle(b.begin(), b.end(), rng);
  std::sort(b.begin(), b.end(), [&](auto& x, auto& y) { return o.less(x, y); });
  EXPECT_EQ(a, b);
}

INSTANTIATE_TEST_SUITE_P(N, OrderProperties, ::testing::Values(1, 2));

TEST(OrderJson, DescribesLayers) {
  auto u = VarUniverse::make(1, {.slack = true, .homogenized = true});
  auto j = make_h_order(u).to_json();
  EXPECT_EQ(j["layers"].size(), 3u);
  EXPECT_EQ(j["layers"][2]["blocks"][0]["vars"][0], "d");
  EXPECT_EQ(j["tiebreak"], "lex-by-index");
}
