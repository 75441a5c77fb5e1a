#include "fbrank/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>

#include "fbrank/systems.hpp"
#include "fbrank/text.hpp"

namespace fbrank {

using json = nlohmann::json;

namespace {
constexpr double kSingularMargin = 0.05;
}

// ---------------------------------------------------------------------------
// EvalPoint

EvalPoint EvalPoint::origin(int n, double r) {
  EvalPoint p;
  p.n = n;
  p.x.assign(n + 1, std::vector<double>(n + 1, 0.0));
  p.y.assign(n + 1, 0.0);
  p.r = r;
  return p;
}

EvalPoint EvalPoint::random(int n, std::mt19937_64& rng, bool diagonal) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0), radius(0.5, 1.5);
  EvalPoint p = origin(n);
  const int m = n + 1;
  for (;;) {
    for (int i = 0; i < m; ++i) p.x[i][i] = unit(rng);
    bool apart = true;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) apart = apart && std::abs(p.x[i][i] - p.x[j][j]) >= 0.1;
    if (apart) break;
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) p.x[i][j] = p.x[j][i] = diagonal ? 0.0 : unit(rng);
  for (int i = 0; i < m; ++i) p.y[i] = unit(rng);
  p.r = radius(rng);
  return p;
}

bool EvalPoint::is_diagonal() const {
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j && x[i][j] != 0) return false;
  return true;
}

void EvalPoint::validate() const {
  const std::size_t m = n + 1;
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(r > 0)) throw std::invalid_argument("r must be positive");
  if (x.size() != m || y.size() != m) throw std::invalid_argument("point shape does not match n");
  for (std::size_t i = 0; i < m; ++i) {
    if (x[i].size() != m) throw std::invalid_argument("x must be square");
    for (std::size_t j = 0; j < i; ++j)
      if (x[i][j] != x[j][i]) throw std::invalid_argument("x must be symmetric");
  }
}

namespace {

std::string decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("not a decimal number: " + s);
    return v;
  }
  throw std::invalid_argument("expected a number or decimal string");
}

}  // namespace

json EvalPoint::to_json() const {
  json jx = json::array(), jy = json::array();
  for (const auto& row : x) {
    json jr = json::array();
    for (double v : row) jr.push_back(decimal(v));
    jx.push_back(jr);
  }
  for (double v : y) jy.push_back(decimal(v));
  return {{"n", n}, {"x", jx}, {"y", jy}, {"r", decimal(r)}};
}

EvalPoint EvalPoint::from_json(const json& j) {
  EvalPoint p;
  p.n = j.at("n").get<int>();
  for (const auto& row : j.at("x")) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(number(v));
    p.x.push_back(r);
  }
  for (const auto& v : j.at("y")) p.y.push_back(number(v));
  p.r = number(j.at("r"));
  p.validate();
  return p;
}

EvalPoint EvalPoint::lerp(const EvalPoint& a, const EvalPoint& b, double s) {
  EvalPoint p = a;
  for (std::size_t i = 0; i < p.x.size(); ++i)
    for (std::size_t j = 0; j < p.x.size(); ++j) p.x[i][j] = (1 - s) * a.x[i][j] + s * b.x[i][j];
  for (std::size_t i = 0; i < p.y.size(); ++i) p.y[i] = (1 - s) * a.y[i] + s * b.y[i];
  p.r = (1 - s) * a.r + s * b.r;
  return p;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

// What a universe variable stands for at an evaluation point.
struct Role {
  enum Kind { X, Y, R, DX, DY, DR } kind;
  int i = 0, j = 0;
};

std::vector<std::optional<Role>> roles(const VarUniverse& u) {
  std::vector<std::optional<Role>> out(u.size());
  const int m = u.dim();
  for (int i = 1; i <= m; ++i) {
    for (int j = i; j <= m; ++j)
      if (u.has_x(i, j)) {
        out[u.x(i, j)] = Role{Role::X, i, j};
        out[u.dx(i, j)] = Role{Role::DX, i, j};
      }
    out[u.y(i)] = Role{Role::Y, i};
    out[u.dy(i)] = Role{Role::DY, i};
  }
  out[u.r()] = Role{Role::R};
  out[u.dr()] = Role{Role::DR};
  return out;
}

double exponent(const EvalPoint& p, const double* t) {
  double s = 0;
  for (int i = 0; i <= p.n; ++i) {
    s += p.y[i] * t[i];
    for (int j = i; j <= p.n; ++j) s += p.x[i][j] * t[i] * t[j];
  }
  return s;
}

double integrand(const EvalPoint& p, const DerivativeSpec& d, const double* t) {
  double m = 1;
  for (std::size_t i = 0; i < d.t_power.size(); ++i)
    for (int e = 0; e < d.t_power[i]; ++e) m *= t[i];
  return m * std::exp(exponent(p, t));
}

void require_converged(double error, double l1, double tol, const char* where) {
  if (!(error <= 10 * tol * l1 + 1e-300) || !std::isfinite(error))
    throw QuadratureError(std::string(where) + ": no convergence (error " + decimal(error) + ", L1 " + decimal(l1) + ")");
}

// Moment integral over the sphere of the given radius.
double sphere_integral(const EvalPoint& p, const DerivativeSpec& d, double radius, double tol) {
  using boost::math::quadrature::trapezoidal;
  constexpr double two_pi = 2 * std::numbers::pi;
  if (p.n == 1) {
    auto f = [&](double th) {
      double t[2] = {radius * std::cos(th), radius * std::sin(th)};
      return radius * integrand(p, d, t);
    };
    double error = 0, l1 = 0;
    double v = trapezoidal(f, 0.0, two_pi, tol, 20, &error, &l1);
    require_converged(error, l1, tol, "circle quadrature");
    return v;
  }
  if (p.n == 2) {
    // z = cos(latitude angle) absorbs the sin Jacobian; the average over
    // the longitude is smooth in z.
    const double inner_tol = tol * 1e-2;
    auto ring = [&](double z) {
      const double s = std::sqrt(std::max(0.0, 1 - z * z));
      auto f = [&](double th) {
        double t[3] = {radius * s * std::cos(th), radius * s * std::sin(th), radius * z};
        return integrand(p, d, t);
      };
      double error = 0, l1 = 0;
      double v = trapezoidal(f, 0.0, two_pi, inner_tol, 20, &error, &l1);
      require_converged(error, l1, inner_tol, "longitude quadrature");
      return radius * radius * v;
    };
    double error = 0, l1 = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(ring, -1.0, 1.0, 15, tol, &error, &l1);
    require_converged(error, l1, tol, "latitude quadrature");
    return v;
  }
  throw std::invalid_argument("quadrature is implemented for n = 1 and n = 2");
}

}  // namespace

DerivativeSpec derivative_of(const Monomial& m, const VarUniverse& u) {
  DerivativeSpec d;
  d.t_power.assign(u.dim(), 0);
  auto rs = roles(u);
  for (const auto& [v, e] : m.factors()) {
    const auto& role = rs.at(v);
    if (!role) throw std::invalid_argument("variable " + u.name(v) + " has no meaning for Z");
    switch (role->kind) {
      case Role::DX:
        d.t_power[role->i - 1] += e;
        d.t_power[role->j - 1] += e;
        break;
      case Role::DY:
        d.t_power[role->i - 1] += e;
        break;
      case Role::DR:
        d.r_order += e;
        break;
      default:
        throw std::invalid_argument("derivative monomial contains " + u.name(v));
    }
  }
  return d;
}

double quadrature_Z(const EvalPoint& p, const DerivativeSpec& d, const QuadratureOptions& o) {
  p.validate();
  auto F = [&](double radius) { return sphere_integral(p, d, radius, o.rel_tol); };
  switch (d.r_order) {
    case 0:
      return F(p.r);
    case 1: {
      const double h = o.fd_step * p.r;
      return (F(p.r + h) - F(p.r - h)) / (2 * h);
    }
    case 2: {
      const double h = o.fd_step2 * p.r;
      return (-F(p.r + 2 * h) + 16 * F(p.r + h) - 30 * F(p.r) + 16 * F(p.r - h) - F(p.r - 2 * h)) / (12 * h * h);
    }
    default:
      throw std::invalid_argument("r-derivatives above order 2 are not supported");
  }
}

namespace {

double commutative_value(const std::optional<Role>& role, const EvalPoint& p, const std::string& name) {
  if (!role) throw std::invalid_argument("variable " + name + " has no value at an evaluation point");
  switch (role->kind) {
    case Role::X:
      return p.x[role->i - 1][role->j - 1];
    case Role::Y:
      return p.y[role->i - 1];
    case Role::R:
      return p.r;
    default:
      throw std::logic_error("differential variable in a coefficient");
  }
}

std::vector<double> point_values(const VarUniverse& u, const EvalPoint& p) {
  auto rs = roles(u);
  std::vector<double> values(u.size(), 0.0);
  for (VarIndex v = 0; v < u.size(); ++v)
    if (rs[v] && (rs[v]->kind == Role::X || rs[v]->kind == Role::Y || rs[v]->kind == Role::R))
      values[v] = commutative_value(rs[v], p, u.name(v));
  return values;
}

void require_dimension(const VarUniverse& u, const EvalPoint& p) {
  if (u.n() != p.n) throw std::invalid_argument("operator and point have different n");
  if (u.options().diagonal_only && !p.is_diagonal())
    throw std::invalid_argument("diagonal operators need a diagonal point");
}

}  // namespace

Applied apply_to_Z(const PolyOperator& op, const EvalPoint& p, const QuadratureOptions& o) {
  Applied out;
  if (op.is_zero()) return out;
  const VarUniverse& u = *op.universe();
  require_dimension(u, p);
  auto rs = roles(u);
  std::map<Monomial, double, CanonicalGreater> cache;
  for (const auto& t : op.terms()) {
    double coeff = t.coeff.get_d();
    std::vector<std::pair<VarIndex, Exponent>> diff;
    for (const auto& [v, e] : t.monomial.factors()) {
      if (u.is_differential(v)) {
        diff.push_back({v, e});
      } else {
        coeff *= std::pow(commutative_value(rs[v], p, u.name(v)), double(e));
      }
    }
    Monomial dm = Monomial::from_factors(diff);
    auto it = cache.find(dm);
    if (it == cache.end()) it = cache.emplace(dm, quadrature_Z(p, derivative_of(dm, u), o)).first;
    out.value += coeff * it->second;
    out.scale += std::abs(coeff * it->second);
  }
  return out;
}

Applied apply_to_Z(const RatOperator& op, const EvalPoint& p, const QuadratureOptions& o) {
  Applied out;
  if (op.is_zero()) return out;
  const VarUniverse& u = *op.universe();
  require_dimension(u, p);
  const auto values = point_values(u, p);
  for (const auto& t : op.terms()) {
    const double c = t.coeff.evaluate(values);
    const double z = quadrature_Z(p, derivative_of(t.monomial, u), o);
    out.value += c * z;
    out.scale += std::abs(c * z);
  }
  return out;
}

double annihilation_residual(const PolyOperator& op, const EvalPoint& p, const QuadratureOptions& o) {
  if (op.is_zero()) return 0;
  Applied a = apply_to_Z(op, p, o);
  return a.scale == 0 ? std::abs(a.value) : std::abs(a.value) / a.scale;
}

// ---------------------------------------------------------------------------
// Pfaffian system

std::string PfaffianSystem::variable_name(std::size_t v) const { return universe->name(variables.at(v)); }

json PfaffianSystem::to_json() const {
  json st = json::array(), vars = json::array(), mats = json::object();
  for (const auto& s : standard) st.push_back(to_text(s, *universe));
  for (std::size_t v = 0; v < variables.size(); ++v) {
    vars.push_back(variable_name(v));
    json rows = json::array();
    for (const auto& row : P[v]) {
      json r = json::array();
      for (const auto& e : row) r.push_back(to_text(e, *universe));
      rows.push_back(r);
    }
    mats[variable_name(v)] = rows;
  }
  return {{"n", n}, {"size", size()}, {"standard", st}, {"variables", vars}, {"matrices", mats}};
}

std::vector<std::vector<std::vector<double>>> PfaffianSystem::evaluate(const EvalPoint& p) const {
  require_dimension(*universe, p);
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (std::abs(p.x[i][i] - p.x[j][j]) < 1e-9) throw SingularPath("equal diagonal entries x_ii = x_jj");
  const auto values = point_values(*universe, p);
  std::vector<std::vector<std::vector<double>>> out(P.size());
  for (std::size_t v = 0; v < P.size(); ++v) {
    out[v].assign(size(), std::vector<double>(size(), 0.0));
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b) {
        const auto& e = P[v][a][b];
        if (e.is_zero()) continue;
        const double den = e.den().evaluate(values);
        if (!std::isfinite(den) || std::abs(den) < 1e-12) throw SingularPath("vanishing denominator in the Pfaffian");
        out[v][a][b] = e.num().evaluate(values) / den;
      }
  }
  return out;
}

PfaffianSystem build_pfaffian(int n, StepBudget* budget) {
  PfaffianSystem sys;
  sys.n = n;
  auto basis = ops_of(prop2_basis(n));
  sys.universe = basis.front().universe();
  const auto& u = *sys.universe;
  const int m = n + 1;
  const TermOrder order = make_prop2_order(sys.universe);

  sys.standard.push_back(Monomial{});
  sys.standard.push_back(Monomial::var(u.dy(1)));
  for (int k = 2; k <= m; ++k) {
    sys.standard.push_back(Monomial::var(u.dy(k)));
    sys.standard.push_back(Monomial::var(u.dy(k), 2));
  }
  std::vector<VarIndex> diffs;
  for (int i = 1; i <= m; ++i) {
    sys.variables.push_back(u.x(i, i));
    diffs.push_back(u.dx(i, i));
  }
  for (int k = 1; k <= m; ++k) {
    sys.variables.push_back(u.y(k));
    diffs.push_back(u.dy(k));
  }
  sys.variables.push_back(u.r());
  diffs.push_back(u.dr());

  ReduceOptions ro;
  ro.budget = budget;
  const RationalFunction one(1);
  for (VarIndex dv : diffs) {
    std::vector<std::vector<RationalFunction>> rows;
    for (const auto& s : sys.standard) {
      RatOperator target = RatOperator::monomial(sys.universe, Mode::R, Monomial::var(dv) * s, one);
      RatOperator nf = normal_form(target, basis, order, ro).remainder;
      std::vector<RationalFunction> row;
      std::size_t used = 0;
      for (const auto& col : sys.standard) {
        row.push_back(nf.coeff(col));
        used += !row.back().is_zero();
      }
      if (used != nf.size()) throw std::logic_error("normal form left the span of the standard monomials");
      rows.push_back(std::move(row));
    }
    sys.P.push_back(std::move(rows));
  }
  return sys;
}

namespace {

using RatMatrix = std::vector<std::vector<RationalFunction>>;

RatMatrix product(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t k = a.size();
  RatMatrix c(k, std::vector<RationalFunction>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      RationalFunction s;
      for (std::size_t l = 0; l < k; ++l)
        if (!a[i][l].is_zero() && !b[l][j].is_zero()) s += a[i][l] * b[l][j];
      c[i][j] = s;
    }
  return c;
}

}  // namespace

FlatnessReport check_flatness(const PfaffianSystem& sys) {
  FlatnessReport rep;
  const std::size_t k = sys.size();
  for (std::size_t a = 0; a < sys.variables.size(); ++a)
    for (std::size_t b = a + 1; b < sys.variables.size(); ++b) {
      ++rep.pairs;
      const auto& Pa = sys.P[a];
      const auto& Pb = sys.P[b];
      RatMatrix ab = product(Pa, Pb), ba = product(Pb, Pa);
      for (std::size_t i = 0; i < k && rep.holds; ++i)
        for (std::size_t j = 0; j < k && rep.holds; ++j) {
          RationalFunction lhs = Pb[i][j].partial(sys.variables[a]) - Pa[i][j].partial(sys.variables[b]);
          RationalFunction rhs = ab[i][j] - ba[i][j];
          if (!(lhs == rhs)) {
            rep.holds = false;
            rep.witness = {{"u", sys.variable_name(a)},
                           {"v", sys.variable_name(b)},
                           {"row", i},
                           {"col", j},
                           {"difference", to_text(lhs - rhs, *sys.universe)}};
          }
        }
      if (!rep.holds) return rep;
    }
  return rep;
}

std::vector<double> pfaffian_vector(const PfaffianSystem& sys, const EvalPoint& p, const QuadratureOptions& o) {
  std::vector<double> out;
  for (const auto& s : sys.standard) out.push_back(quadrature_Z(p, derivative_of(s, *sys.universe), o));
  return out;
}

std::vector<double> integrate_pfaffian(const PfaffianSystem& sys, const EvalPoint& from, const EvalPoint& to,
                                       int steps, const std::vector<double>* initial) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (!from.is_diagonal() || !to.is_diagonal()) throw std::invalid_argument("transport runs on diagonal points");
  // Denominators are powers of x_ii - x_jj and r, both linear along the
  // segment, so the closest approach is exact.
  auto closest = [](double a, double b) { return a * b <= 0 ? 0.0 : std::min(std::abs(a), std::abs(b)); };
  for (int i = 0; i <= from.n; ++i)
    for (int j = i + 1; j <= from.n; ++j)
      if (closest(from.x[i][i] - from.x[j][j], to.x[i][i] - to.x[j][j]) < kSingularMargin)
        throw SingularPath("segment meets the locus x" + std::to_string(i + 1) + std::to_string(i + 1) + " = x" +
                           std::to_string(j + 1) + std::to_string(j + 1));
  if (closest(from.r, to.r) < kSingularMargin) throw SingularPath("segment meets r = 0");
  std::vector<double> F = initial ? *initial : pfaffian_vector(sys, from);
  const std::size_t k = sys.size();
  if (F.size() != k) throw std::invalid_argument("initial vector has the wrong size");

  // Rate of change of each Pfaffian variable along the segment.
  const auto v0 = point_values(*sys.universe, from), v1 = point_values(*sys.universe, to);
  std::vector<double> delta;
  for (VarIndex v : sys.variables) delta.push_back(v1[v] - v0[v]);

  auto rhs = [&](double s, const std::vector<double>& f) {
    const auto mats = sys.evaluate(EvalPoint::lerp(from, to, s));
    std::vector<double> out(k, 0.0);
    for (std::size_t v = 0; v < mats.size(); ++v) {
      if (delta[v] == 0) continue;
      for (std::size_t i = 0; i < k; ++i) {
        double acc = 0;
        for (std::size_t j = 0; j < k; ++j) acc += mats[v][i][j] * f[j];
        out[i] += delta[v] * acc;
      }
    }
    return out;
  };
  auto axpy = [](const std::vector<double>& a, double c, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + c * b[i];
    return out;
  };

  const double h = 1.0 / steps;
  for (int step = 0; step < steps; ++step) {
    const double s = step * h;
    auto k1 = rhs(s, F);
    auto k2 = rhs(s + h / 2, axpy(F, h / 2, k1));
    auto k3 = rhs(s + h / 2, axpy(F, h / 2, k2));
    auto k4 = rhs(s + h, axpy(F, h, k3));
    for (std::size_t i = 0; i < k; ++i) F[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return F;
}

}  // namespace fbrank
