#include "fbrank/systems.hpp"

#include <random>
#include <stdexcept>

#include "fbrank/text.hpp"

namespace fbrank {

std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::I:
      return "I";
    case SystemKind::It:
      return "It";
    case SystemKind::Ip:
      return "Ip";
    case SystemKind::Itp:
      return "Itp";
    case SystemKind::Iph:
      return "Iph";
  }
  return "?";
}

SystemKind parse_system_kind(const std::string& s) {
  for (SystemKind k : {SystemKind::I, SystemKind::It, SystemKind::Ip, SystemKind::Itp, SystemKind::Iph})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown system '" + s + "' (expected I, It, Ip, Itp or Iph)");
}

SlackSpec SlackSpec::parse(const std::string& s) {
  SlackSpec spec;
  if (s == "sym" || s == "symbolic") return spec;
  if (s == "zero") {
    spec.kind = Kind::Zero;
    return spec;
  }
  const std::string prefix = "random:";
  if (s.rfind(prefix, 0) == 0) {
    spec.kind = Kind::Random;
    try {
      spec.seed = std::stoull(s.substr(prefix.size()));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad slack seed in '" + s + "'");
    }
    return spec;
  }
  throw std::invalid_argument("unknown slack mode '" + s + "' (expected sym, zero or random:SEED)");
}

std::string SlackSpec::to_string() const {
  switch (kind) {
    case Kind::Symbolic:
      return "sym";
    case Kind::Zero:
      return "zero";
    case Kind::Random:
      return "random:" + std::to_string(seed);
  }
  return "?";
}

std::map<std::string, Rational> SlackSpec::values(const VarUniverse& u) const {
  std::map<std::string, Rational> out;
  if (kind == Kind::Symbolic) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(1000, 10000);
  for (VarIndex v : u.of_kind(VarKind::Slack)) {
    if (kind == Kind::Zero) {
      out[u.name(v)] = 0;
    } else {
      long num = pick(rng), den = pick(rng);
      Rational q(num, den);
      q.canonicalize();
      out[u.name(v)] = q;
    }
  }
  return out;
}

std::vector<PolyOperator> SystemDescriptor::ops() const {
  std::vector<PolyOperator> out;
  for (const auto& g : generators) out.push_back(g.op);
  return out;
}

const PolyOperator& SystemDescriptor::at(const std::string& name) const {
  for (const auto& g : generators)
    if (g.name == name) return g.op;
  throw std::out_of_range("no generator named '" + name + "' in system " + fbrank::to_string(kind));
}

nlohmann::json SystemDescriptor::to_json() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : generators) gens.push_back({{"name", g.name}, {"operator", to_text(g.op)}});
  return {{"system", fbrank::to_string(kind)},
          {"n", n},
          {"slack", slack.to_string()},
          {"mode", fbrank::to_string(mode)},
          {"universe", universe->describe()},
          {"generators", gens}};
}

namespace {

// Small builder over one universe and mode.
struct Build {
  UniversePtr u;
  Mode mode;

  PolyOperator var(VarIndex v) const { return PolyOperator::variable(u, mode, v); }
  PolyOperator c(long k) const { return PolyOperator::constant(u, mode, Rational(k)); }
  PolyOperator x(int i, int j) const { return var(u->x(i, j)); }
  PolyOperator y(int k) const { return var(u->y(k)); }
  PolyOperator r() const { return var(u->r()); }
  PolyOperator dx(int i, int j) const { return var(u->dx(i, j)); }
  PolyOperator dy(int k) const { return var(u->dy(k)); }
  PolyOperator dr() const { return var(u->dr()); }
  PolyOperator a(int p, int q) const { return var(u->a(p, q)); }
  PolyOperator bc(int k) const { return var(u->b(k)) * var(u->c(k)); }
  PolyOperator d() const { return var(u->d()); }
  PolyOperator h() const { return var(u->h()); }
  PolyOperator cube(const PolyOperator& p) const { return p * p * p; }
  PolyOperator zero() const { return PolyOperator(u, mode); }
};

std::string idx(int i, int j) { return pair_suffix(i, j); }

// Off-diagonal and quadratic part shared by the C-type generators of I.
PolyOperator c_core(const Build& B, int i, int j) {
  const int m = B.u->dim();
  PolyOperator p = B.x(i, j) * B.dy(i) * B.dy(i) + B.c(2) * (B.x(j, j) - B.x(i, i)) * B.dy(i) * B.dy(j) -
                   B.x(i, j) * B.dy(j) * B.dy(j);
  for (int s = 1; s <= m; ++s) {
    if (s == i || s == j) continue;
    p += B.x(s, j) * B.dy(i) * B.dy(s) - B.x(i, s) * B.dy(j) * B.dy(s);
  }
  return p;
}

PolyOperator e_core(const Build& B) {
  const int m = B.u->dim();
  PolyOperator p = B.r() * B.dr();
  for (int i = 1; i <= m; ++i)
    for (int j = i; j <= m; ++j)
      if (B.u->has_x(i, j)) p -= B.c(2) * B.x(i, j) * B.dy(i) * B.dy(j);
  return p;
}

PolyOperator substitute_slack(PolyOperator p, const SlackSpec& slack) {
  for (const auto& [name, value] : slack.values(*p.universe())) p = substitute(p, *p.universe()->find(name), value);
  return p;
}

void require_n(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
}

}  // namespace

PolyOperator op_C(const UniversePtr& u, Mode mode, int i, int j) {
  Build B{u, mode};
  return c_core(B, i, j) + B.y(j) * B.dy(i) - B.y(i) * B.dy(j);
}

PolyOperator op_F(const UniversePtr& u, Mode mode, int i, int j) {
  Build B{u, mode};
  return B.y(i) * B.dy(j) - B.y(j) * B.dy(i);
}

PolyOperator op_C_diag(const UniversePtr& u, Mode mode, int i, int j) {
  Build B{u, mode};
  return B.c(2) * (B.x(i, i) - B.x(j, j)) * B.dy(i) * B.dy(j) + op_F(u, mode, i, j);
}

PolyOperator op_B(const UniversePtr& u, Mode mode) {
  Build B{u, mode};
  PolyOperator p = -(B.r() * B.r());
  for (int i = 1; i <= u->dim(); ++i) p += B.dy(i) * B.dy(i);
  return p;
}

PolyOperator op_E(const UniversePtr& u, Mode mode) {
  Build B{u, mode};
  PolyOperator p = e_core(B) - B.c(u->n());
  for (int i = 1; i <= u->dim(); ++i) p -= B.y(i) * B.dy(i);
  return p;
}

PolyOperator op_E_diag(const UniversePtr& u, Mode mode) {
  Build B{u, mode};
  PolyOperator p = B.r() * B.dr() - B.c(u->n());
  for (int i = 1; i <= u->dim(); ++i) p -= B.c(2) * B.x(i, i) * B.dy(i) * B.dy(i) + B.y(i) * B.dy(i);
  return p;
}

PolyOperator op_A_diag(const UniversePtr& u, Mode mode, int i) {
  Build B{u, mode};
  return B.dx(i, i) - B.dy(i) * B.dy(i);
}

PolyOperator op_Cph(const UniversePtr& u, int i, int j) {
  Build B{u, Mode::Dh};
  return c_core(B, i, j) + (B.h() * B.y(j) + B.bc(j)) * B.dy(i) - (B.h() * B.y(i) + B.bc(i)) * B.dy(j);
}

PolyOperator op_Cph_hat(const UniversePtr& u, int i, int j) {
  Build B{u, Mode::Dh};
  return B.bc(j) * B.dy(i) - B.bc(i) * B.dy(j);
}

PolyOperator op_Cph_check(const UniversePtr& u, int i, int j) { return op_Cph(u, i, j) - op_Cph_hat(u, i, j); }

PolyOperator op_Atp_listed_variant(const UniversePtr& u, int i) {
  Build B{u, Mode::D};
  return B.x(i, i) * B.dy(i) * B.dy(i) - B.x(i, i) * B.dx(i, i) - B.cube(B.a(i, i));
}

SystemDescriptor make_I(int n) {
  require_n(n);
  SystemDescriptor s;
  s.kind = SystemKind::I;
  s.n = n;
  s.universe = VarUniverse::make(n, {});
  s.mode = Mode::D;
  Build B{s.universe, s.mode};
  const int m = n + 1;
  for (int p = 1; p <= m; ++p)
    for (int q = p; q <= m; ++q) s.generators.push_back({"A_" + idx(p, q), B.dx(p, q) - B.dy(p) * B.dy(q)});
  s.generators.push_back({"B", op_B(s.universe, s.mode)});
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) s.generators.push_back({"C_" + idx(i, j), op_C(s.universe, s.mode, i, j)});
  s.generators.push_back({"E", op_E(s.universe, s.mode)});
  return s;
}

SystemDescriptor make_I_tilde(int n, bool with_offdiagonal) {
  require_n(n);
  SystemDescriptor s;
  s.kind = SystemKind::It;
  s.n = n;
  s.universe = VarUniverse::make(n, {.diagonal_only = !with_offdiagonal});
  s.mode = Mode::D;
  Build B{s.universe, s.mode};
  const int m = n + 1;
  for (int p = 1; p <= m; ++p)
    for (int q = p; q <= m; ++q) {
      if (p == q)
        s.generators.push_back({"At_" + idx(p, p), op_A_diag(s.universe, s.mode, p)});
      else if (with_offdiagonal)
        s.generators.push_back({"At_" + idx(p, q), B.dx(p, q)});
    }
  s.generators.push_back({"B", op_B(s.universe, s.mode)});
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      s.generators.push_back({"Ct_" + idx(i, j), op_C_diag(s.universe, s.mode, i, j)});
  s.generators.push_back({"Et", op_E_diag(s.universe, s.mode)});
  return s;
}

SystemDescriptor make_I_prime(int n, const SlackSpec& slack) {
  require_n(n);
  SystemDescriptor s;
  s.kind = SystemKind::Ip;
  s.n = n;
  s.slack = slack;
  s.universe = VarUniverse::make(n, {.slack = true});
  s.mode = Mode::D;
  Build B{s.universe, s.mode};
  const int m = n + 1;
  for (int p = 1; p <= m; ++p)
    for (int q = p; q <= m; ++q)
      s.generators.push_back(
          {"Ap_" + idx(p, q), B.x(p, q) * B.dx(p, q) - B.x(p, q) * B.dy(p) * B.dy(q) - B.cube(B.a(p, q))});
  s.generators.push_back({"B", op_B(s.universe, s.mode)});
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      s.generators.push_back({"Cp_" + idx(i, j), c_core(B, i, j) + (B.y(j) + B.bc(j)) * B.dy(i) -
                                                    (B.y(i) + B.bc(i)) * B.dy(j)});
  PolyOperator e = e_core(B) - B.c(n) - B.cube(B.d());
  for (int i = 1; i <= m; ++i) e -= (B.y(i) + B.bc(i)) * B.dy(i);
  s.generators.push_back({"Ep", e});
  for (auto& g : s.generators) g.op = substitute_slack(g.op, slack);
  return s;
}

SystemDescriptor make_I_tilde_prime(int n, const SlackSpec& slack) {
  require_n(n);
  SystemDescriptor s;
  s.kind = SystemKind::Itp;
  s.n = n;
  s.slack = slack;
  s.universe = VarUniverse::make(n, {.slack = true});
  s.mode = Mode::D;
  Build B{s.universe, s.mode};
  const int m = n + 1;
  for (int p = 1; p <= m; ++p)
    for (int q = p; q <= m; ++q) {
      if (p == q)
        s.generators.push_back(
            {"Atp_" + idx(p, p), B.x(p, p) * B.dx(p, p) - B.x(p, p) * B.dy(p) * B.dy(p) - B.cube(B.a(p, p))});
      else
        s.generators.push_back({"Atp_" + idx(p, q), B.x(p, q) * B.dx(p, q) - B.cube(B.a(p, q))});
    }
  s.generators.push_back({"B", op_B(s.universe, s.mode)});
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      s.generators.push_back({"Ctp_" + idx(i, j), B.c(2) * (B.x(j, j) - B.x(i, i)) * B.dy(i) * B.dy(j) +
                                                     (B.y(j) + B.bc(j)) * B.dy(i) - (B.y(i) + B.bc(i)) * B.dy(j)});
  PolyOperator e = B.r() * B.dr() - B.c(n) - B.cube(B.d());
  for (int i = 1; i <= m; ++i) e -= B.c(2) * B.x(i, i) * B.dy(i) * B.dy(i) + (B.y(i) + B.bc(i)) * B.dy(i);
  s.generators.push_back({"Etp", e});
  for (auto& g : s.generators) g.op = substitute_slack(g.op, slack);
  return s;
}

SystemDescriptor make_I_prime_h(int n) {
  require_n(n);
  SystemDescriptor s;
  s.kind = SystemKind::Iph;
  s.n = n;
  s.universe = VarUniverse::make(n, {.slack = true, .homogenized = true});
  s.mode = Mode::Dh;
  Build B{s.universe, s.mode};
  const int m = n + 1;
  for (int p = 1; p <= m; ++p)
    for (int q = p; q <= m; ++q)
      s.generators.push_back({"Aph_" + idx(p, q), B.h() * B.x(p, q) * B.dx(p, q) -
                                                      B.x(p, q) * B.dy(p) * B.dy(q) - B.cube(B.a(p, q))});
  s.generators.push_back({"B", op_B(s.universe, s.mode)});
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) s.generators.push_back({"Cph_" + idx(i, j), op_Cph(s.universe, i, j)});
  PolyOperator e = B.h() * B.r() * B.dr() - B.c(n) * B.cube(B.h()) - B.cube(B.d());
  for (int i = 1; i <= m; ++i)
    for (int j = i; j <= m; ++j) e -= B.c(2) * B.x(i, j) * B.dy(i) * B.dy(j);
  for (int i = 1; i <= m; ++i) e -= (B.h() * B.y(i) + B.bc(i)) * B.dy(i);
  s.generators.push_back({"Eph", e});
  for (const auto& g : s.generators)
    if (!g.op.is_homogeneous()) throw std::logic_error("generator " + g.name + " is not homogeneous");
  return s;
}

SystemDescriptor make_system(SystemKind kind, int n, const SlackSpec& slack) {
  switch (kind) {
    case SystemKind::I:
      return make_I(n);
    case SystemKind::It:
      return make_I_tilde(n);
    case SystemKind::Ip:
      return make_I_prime(n, slack);
    case SystemKind::Itp:
      return make_I_tilde_prime(n, slack);
    case SystemKind::Iph:
      return make_I_prime_h(n);
  }
  throw std::invalid_argument("unknown system kind");
}

RationalFunction coeff_a(const VarUniverse& u, int i, int j) {
  return RationalFunction(Polynomial::variable(u.x(i, i)) * Rational(2) - Polynomial::variable(u.x(j, j)) * Rational(2));
}

RatOperator op_D(const UniversePtr& u, int k) {
  RatOperator d = RatOperator::variable(u, Mode::R, u->dy(k)) * to_rational(op_B(u, Mode::D));
  for (int l = 1; l < k; ++l) {
    RatOperator corr = RatOperator::variable(u, Mode::R, u->dy(l)) *
                       to_rational(op_C_diag(u, Mode::D, l, k)).scaled(coeff_a(*u, l, k).inverse());
    d -= corr;
  }
  return d;
}

std::vector<Named<RatOperator>> diagonal_generators(int n) {
  require_n(n);
  auto u = VarUniverse::make(n, {.diagonal_only = true});
  std::vector<Named<RatOperator>> out;
  const int m = n + 1;
  for (int i = 1; i <= m; ++i) out.push_back({"A_" + std::to_string(i), to_rational(op_A_diag(u, Mode::D, i))});
  out.push_back({"B", to_rational(op_B(u, Mode::D))});
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) out.push_back({"C_" + idx(i, j), to_rational(op_C_diag(u, Mode::D, i, j))});
  out.push_back({"E", to_rational(op_E_diag(u, Mode::D))});
  return out;
}

std::vector<Named<RatOperator>> prop2_basis(int n) {
  auto gens = diagonal_generators(n);
  auto u = gens.front().op.universe();
  std::vector<Named<RatOperator>> out(gens.begin(), gens.end() - 1);
  for (int k = 1; k <= n + 1; ++k) out.push_back({"D_" + std::to_string(k), op_D(u, k)});
  out.push_back(gens.back());
  return out;
}

std::vector<Named<RatOperator>> to_rational(const SystemDescriptor& s) {
  if (s.mode != Mode::D) throw ModeMismatch("only D-mode systems convert to mode R");
  std::vector<Named<RatOperator>> out;
  for (const auto& g : s.generators) out.push_back({g.name, to_rational(g.op)});
  return out;
}

}  // namespace fbrank
