#include "fbrank/order.hpp"

#include <algorithm>
#include <stdexcept>

namespace fbrank {

WeightVector::WeightVector(UniversePtr universe)
    : universe_(std::move(universe)), w_(universe_->size(), 0) {}

void WeightVector::set(VarIndex differential, std::int64_t w) {
  if (!universe_->is_differential(differential))
    throw std::invalid_argument("WeightVector::set: not a differential variable");
  w_.at(differential) = w;
}

std::int64_t WeightVector::of_differential(VarIndex differential) const { return w_.at(differential); }

std::int64_t WeightVector::paired(VarIndex v) const {
  if (w_.empty()) return 0;
  switch (universe_->kind(v)) {
    case VarKind::Differential:
      return w_[v];
    case VarKind::Commutative:
      return -w_[static_cast<VarIndex>(universe_->partner(v))];
    default:
      return 0;
  }
}

std::vector<std::int64_t> WeightVector::paired_table() const {
  std::vector<std::int64_t> t(universe_ ? universe_->size() : 0, 0);
  for (std::size_t v = 0; v < t.size(); ++v) t[v] = paired(static_cast<VarIndex>(v));
  return t;
}

bool WeightVector::is_zero() const {
  for (auto x : w_)
    if (x != 0) return false;
  return true;
}

nlohmann::json WeightVector::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (VarIndex v : universe_->differentials()) j[universe_->name(v)] = w_[v];
  return j;
}

std::int64_t weight_degree(const Monomial& m, const WeightVector& w) {
  std::int64_t s = 0;
  for (const auto& [v, e] : m.factors()) s += static_cast<std::int64_t>(e) * w.paired(v);
  return s;
}

TermOrder::TermOrder(std::string name, UniversePtr universe, std::vector<OrderLayer> layers)
    : name_(std::move(name)), universe_(std::move(universe)), layers_(std::move(layers)) {}

namespace {

std::strong_ordering compare_block(const Block& blk, const Monomial& a, const Monomial& b) {
  if (blk.inner != InnerOrder::Lex) {
    std::uint64_t da = 0, db = 0;
    for (VarIndex v : blk.vars) {
      da += a.exponent(v);
      db += b.exponent(v);
    }
    if (da != db) return da <=> db;
  }
  if (blk.inner == InnerOrder::GradedRevLex) {
    for (auto it = blk.vars.rbegin(); it != blk.vars.rend(); ++it) {
      Exponent ea = a.exponent(*it), eb = b.exponent(*it);
      if (ea != eb) return eb <=> ea;
    }
    return std::strong_ordering::equal;
  }
  for (VarIndex v : blk.vars) {
    Exponent ea = a.exponent(v), eb = b.exponent(v);
    if (ea != eb) return ea <=> eb;
  }
  return std::strong_ordering::equal;
}

}  // namespace

std::strong_ordering TermOrder::compare(const Monomial& a, const Monomial& b) const {
  if (a == b) return std::strong_ordering::equal;
  for (const auto& layer : layers_) {
    std::strong_ordering c = std::strong_ordering::equal;
    if (std::holds_alternative<TotalDegreeLayer>(layer)) {
      c = a.degree() <=> b.degree();
    } else if (const auto* wl = std::get_if<WeightLayer>(&layer)) {
      std::int64_t wa = 0, wb = 0;
      for (const auto& [v, e] : a.factors())
        if (v < wl->weights.size()) wa += static_cast<std::int64_t>(e) * wl->weights[v];
      for (const auto& [v, e] : b.factors())
        if (v < wl->weights.size()) wb += static_cast<std::int64_t>(e) * wl->weights[v];
      c = wa <=> wb;
    } else {
      for (const auto& blk : std::get<BlockLayer>(layer).blocks) {
        c = compare_block(blk, a, b);
        if (c != 0) break;
      }
    }
    if (c != 0) return c;
  }
  return lex_compare(a, b);
}

std::string to_string(InnerOrder inner) {
  switch (inner) {
    case InnerOrder::Lex:
      return "lex";
    case InnerOrder::GradedLex:
      return "grlex";
    case InnerOrder::GradedRevLex:
      return "grevlex";
  }
  return "?";
}

nlohmann::json TermOrder::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : layers_) {
    if (std::holds_alternative<TotalDegreeLayer>(layer)) {
      layers.push_back({{"type", "total-degree"}});
    } else if (const auto* wl = std::get_if<WeightLayer>(&layer)) {
      nlohmann::json w = nlohmann::json::object();
      for (std::size_t v = 0; v < wl->weights.size(); ++v)
        if (wl->weights[v] != 0) w[universe_->name(static_cast<VarIndex>(v))] = wl->weights[v];
      layers.push_back({{"type", "weight"}, {"label", wl->label}, {"weights", w}});
    } else {
      nlohmann::json blocks = nlohmann::json::array();
      for (const auto& blk : std::get<BlockLayer>(layer).blocks) {
        nlohmann::json vars = nlohmann::json::array();
        for (VarIndex v : blk.vars) vars.push_back(universe_->name(v));
        blocks.push_back({{"label", blk.label}, {"inner", to_string(blk.inner)}, {"vars", vars}});
      }
      layers.push_back({{"type", "block"}, {"blocks", blocks}});
    }
  }
  return {{"name", name_}, {"layers", layers}, {"tiebreak", "lex-by-index"}};
}

WeightVector make_weight(UniversePtr universe) {
  WeightVector w(universe);
  const int m = universe->dim();
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      if (universe->has_x(i, j)) w.set(universe->dx(i, j), 1);
  return w;
}

TermOrder make_prop2_order(UniversePtr universe) {
  const int m = universe->dim();
  std::vector<Block> blocks;
  blocks.push_back({"dr", {universe->dr()}, InnerOrder::GradedLex});
  Block off{"dx_ij(i<j)", {}, InnerOrder::GradedLex};
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      if (universe->has_x(i, j)) off.vars.push_back(universe->dx(i, j));
  if (!off.vars.empty()) blocks.push_back(off);
  Block diag{"dx_ii", {}, InnerOrder::GradedLex};
  for (int i = 1; i <= m; ++i) diag.vars.push_back(universe->dx(i, i));
  blocks.push_back(diag);
  Block dys{"dy_k", {}, InnerOrder::GradedLex};
  for (int k = 1; k <= m; ++k) dys.vars.push_back(universe->dy(k));
  blocks.push_back(dys);
  return TermOrder("prop2-block", universe, {BlockLayer{std::move(blocks)}});
}

TermOrder make_h_order(UniversePtr universe, HOrderOptions options) {
  const auto& u = *universe;
  if (!u.options().slack || !u.options().homogenized)
    throw std::invalid_argument("make_h_order: needs a slack-enabled homogenized universe");
  const int m = u.dim();
  auto reversed = [](std::vector<VarIndex> v, bool rev) {
    if (rev) std::reverse(v.begin(), v.end());
    return v;
  };
  std::vector<Block> chain;
  chain.push_back({"d", {u.d()}, InnerOrder::Lex});
  chain.push_back({"r", {u.r()}, InnerOrder::Lex});
  Block as{"a_pq", {}, InnerOrder::Lex};
  for (int p = 1; p <= m; ++p)
    for (int q = p; q <= m; ++q)
      if (u.has_x(p, q)) as.vars.push_back(u.a(p, q));
  chain.push_back(as);
  std::vector<VarIndex> bs, cs, ys, dks;
  for (int k = 1; k <= m; ++k) {
    bs.push_back(u.b(k));
    cs.push_back(u.c(k));
    ys.push_back(u.y(k));
    dks.push_back(u.dy(k));
  }
  chain.push_back({"b_k", bs, InnerOrder::Lex});
  chain.push_back({"c_k", reversed(cs, options.reverse_c), InnerOrder::Lex});
  chain.push_back({"y_k", reversed(ys, options.reverse_y), InnerOrder::Lex});
  chain.push_back({"dr", {u.dr()}, InnerOrder::Lex});
  Block doff{"dx_ij(i<j)", {}, InnerOrder::Lex}, ddiag{"dx_ii", {}, InnerOrder::Lex};
  Block xoff{"x_ij(i<j)", {}, InnerOrder::Lex}, xdiag{"x_ii", {}, InnerOrder::Lex};
  for (int i = 1; i <= m; ++i) {
    ddiag.vars.push_back(u.dx(i, i));
    xdiag.vars.push_back(u.x(i, i));
    for (int j = i + 1; j <= m; ++j)
      if (u.has_x(i, j)) {
        doff.vars.push_back(u.dx(i, j));
        xoff.vars.push_back(u.x(i, j));
      }
  }
  if (!doff.vars.empty()) chain.push_back(doff);
  chain.push_back(ddiag);
  chain.push_back({"dy_k", dks, InnerOrder::Lex});
  if (!xoff.vars.empty()) chain.push_back(xoff);
  chain.push_back(xdiag);
  chain.push_back({"h", {u.h()}, InnerOrder::Lex});

  WeightVector w = make_weight(universe);
  std::string name = "h-order(-w,w,0)";
  if (options.reverse_c) name += "[c reversed]";
  if (options.reverse_y) name += "[y reversed]";
  return TermOrder(name, universe,
                   {TotalDegreeLayer{}, WeightLayer{"(-w,w,0)", w.paired_table()}, BlockLayer{chain}});
}

TermOrder make_h_order_n1_preset(UniversePtr universe) {
  const auto& u = *universe;
  if (u.n() != 1) throw std::invalid_argument("make_h_order_n1_preset: n must be 1");
  auto v = [&](const char* name) {
    auto idx = u.find(name);
    if (!idx) throw std::invalid_argument(std::string("missing variable ") + name);
    return *idx;
  };
  std::vector<Block> chain{
      {"d", {v("d")}, InnerOrder::Lex},
      {"r", {v("r")}, InnerOrder::Lex},
      {"a", {v("a11"), v("a12"), v("a22")}, InnerOrder::Lex},
      {"b", {v("b1"), v("b2")}, InnerOrder::Lex},
      {"c", {v("c1"), v("c2")}, InnerOrder::Lex},
      {"y", {v("y1"), v("y2")}, InnerOrder::Lex},
      {"dr", {v("dr")}, InnerOrder::Lex},
      {"dx12", {v("dx12")}, InnerOrder::Lex},
      {"dx11,dx22", {v("dx11"), v("dx22")}, InnerOrder::Lex},
      {"dy1,dy2", {v("dy1"), v("dy2")}, InnerOrder::Lex},
      {"x12", {v("x12")}, InnerOrder::Lex},
      {"x11,x22", {v("x11"), v("x22")}, InnerOrder::Lex},
      {"h", {v("h")}, InnerOrder::Lex},
  };
  std::vector<std::int64_t> w(u.size(), 0);
  w[v("dx12")] = 1;
  w[v("x12")] = -1;
  return TermOrder("h-order-n1-preset", universe,
                   {TotalDegreeLayer{}, WeightLayer{"(-w,w,0)", w}, BlockLayer{chain}});
}

TermOrder make_grlex_order(UniversePtr universe) {
  return TermOrder("grlex", universe, {TotalDegreeLayer{}});
}

}  // namespace fbrank
