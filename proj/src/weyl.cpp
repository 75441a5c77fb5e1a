#include "fbrank/weyl.hpp"

#include <algorithm>
#include <map>

namespace fbrank {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::D:
      return "D";
    case Mode::R:
      return "R";
    case Mode::Dh:
      return "Dh";
  }
  return "?";
}

Monomial differential_part(const Monomial& m, const VarUniverse& u) {
  return m.restrict([&u](VarIndex v) { return u.is_differential(v); });
}

Monomial coefficient_part(const Monomial& m, const VarUniverse& u) {
  return m.restrict([&u](VarIndex v) { return !u.is_differential(v); });
}

namespace {

Rational binomial(unsigned n, unsigned k) {
  mpz_class z;
  mpz_bin_uiui(z.get_mpz_t(), n, k);
  return Rational(z);
}

Rational factorial(unsigned n) {
  mpz_class z;
  mpz_fac_ui(z.get_mpz_t(), n);
  return Rational(z);
}

}  // namespace

template <class Scalar>
WeylOperator<Scalar>::WeylOperator(UniversePtr universe, Mode mode)
    : universe_(std::move(universe)), mode_(mode) {
  if constexpr (std::is_same_v<Scalar, RationalFunction>) {
    if (mode_ != Mode::R) throw ModeMismatch("rational-function coefficients require mode R");
  } else {
    if (mode_ == Mode::R) throw ModeMismatch("mode R requires rational-function coefficients");
  }
}

template <class Scalar>
WeylOperator<Scalar> WeylOperator<Scalar>::constant(UniversePtr universe, Mode mode, const Scalar& c) {
  return monomial(std::move(universe), mode, Monomial{}, c);
}

template <class Scalar>
WeylOperator<Scalar> WeylOperator<Scalar>::monomial(UniversePtr universe, Mode mode, const Monomial& m,
                                                    const Scalar& c) {
  WeylOperator op(std::move(universe), mode);
  if (!scalar_is_zero(c)) op.terms_.push_back(Term{m, c});
  return op;
}

template <class Scalar>
WeylOperator<Scalar> WeylOperator<Scalar>::variable(UniversePtr universe, Mode mode, VarIndex v) {
  if constexpr (std::is_same_v<Scalar, RationalFunction>) {
    if (!universe->is_differential(v))
      return constant(universe, mode, RationalFunction(Polynomial::variable(v)));
  }
  return monomial(universe, mode, Monomial::var(v), Scalar(1));
}

template <class Scalar>
WeylOperator<Scalar> WeylOperator<Scalar>::from_terms(UniversePtr universe, Mode mode,
                                                      std::vector<Term> terms) {
  WeylOperator op(std::move(universe), mode);
  op.terms_ = std::move(terms);
  op.normalize();
  return op;
}

template <class Scalar>
void WeylOperator<Scalar>::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return grlex_compare(a.monomial, b.monomial) > 0; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    std::size_t j = i + 1;
    Scalar sum = terms_[i].coeff;
    while (j < terms_.size() && terms_[j].monomial == terms_[i].monomial) sum += terms_[j++].coeff;
    if (!scalar_is_zero(sum)) {
      if (out != i) terms_[out].monomial = std::move(terms_[i].monomial);
      terms_[out].coeff = std::move(sum);
      ++out;
    }
    i = j;
  }
  terms_.resize(out);
}

template <class Scalar>
Scalar WeylOperator<Scalar>::coeff(const Monomial& m) const {
  for (const auto& t : terms_)
    if (t.monomial == m) return t.coeff;
  return Scalar(0);
}

template <class Scalar>
void WeylOperator<Scalar>::require_compatible(const WeylOperator& o) const {
  if (mode_ != o.mode_)
    throw ModeMismatch("operator modes differ: " + to_string(mode_) + " vs " + to_string(o.mode_));
  if (universe_ && o.universe_ && universe_ != o.universe_ && !(*universe_ == *o.universe_))
    throw ModeMismatch("operators live in different universes");
}

template <class Scalar>
bool WeylOperator<Scalar>::same_terms(const WeylOperator& o) const {
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].monomial == o.terms_[i].monomial) || !(terms_[i].coeff == o.terms_[i].coeff))
      return false;
  return true;
}

template <class Scalar>
const typename WeylOperator<Scalar>::Term& WeylOperator<Scalar>::leading_term(const TermOrder& order) const {
  if (terms_.empty()) throw std::domain_error("leading term of the zero operator");
  const Term* best = &terms_.front();
  for (const auto& t : terms_)
    if (order.compare(t.monomial, best->monomial) > 0) best = &t;
  return *best;
}

template <class Scalar>
std::vector<typename WeylOperator<Scalar>::Term> WeylOperator<Scalar>::sorted(const TermOrder& order) const {
  std::vector<Term> out = terms_;
  std::sort(out.begin(), out.end(),
            [&order](const Term& a, const Term& b) { return order.compare(a.monomial, b.monomial) > 0; });
  return out;
}

template <class Scalar>
WeylOperator<Scalar> WeylOperator<Scalar>::operator-() const {
  WeylOperator out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

namespace {

template <class Scalar, bool Subtract>
std::vector<OperatorTerm<Scalar>> merge_terms(const std::vector<OperatorTerm<Scalar>>& a,
                                              const std::vector<OperatorTerm<Scalar>>& b) {
  std::vector<OperatorTerm<Scalar>> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    std::strong_ordering cmp = std::strong_ordering::equal;
    if (i == a.size())
      cmp = std::strong_ordering::less;
    else if (j == b.size())
      cmp = std::strong_ordering::greater;
    else
      cmp = grlex_compare(a[i].monomial, b[j].monomial);
    if (cmp > 0) {
      out.push_back(a[i++]);
    } else if (cmp < 0) {
      if constexpr (Subtract)
        out.push_back({b[j].monomial, -b[j].coeff});
      else
        out.push_back(b[j]);
      ++j;
    } else {
      Scalar c = Subtract ? Scalar(a[i].coeff - b[j].coeff) : Scalar(a[i].coeff + b[j].coeff);
      if (!scalar_is_zero(c)) out.push_back({a[i].monomial, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

template <class Scalar>
WeylOperator<Scalar>& WeylOperator<Scalar>::operator+=(const WeylOperator& o) {
  if (!universe_) *this = WeylOperator(o.universe_, o.mode_);
  require_compatible(o);
  if (!o.terms_.empty()) terms_ = merge_terms<Scalar, false>(terms_, o.terms_);
  return *this;
}

template <class Scalar>
WeylOperator<Scalar>& WeylOperator<Scalar>::operator-=(const WeylOperator& o) {
  if (!universe_) *this = WeylOperator(o.universe_, o.mode_);
  require_compatible(o);
  if (!o.terms_.empty()) terms_ = merge_terms<Scalar, true>(terms_, o.terms_);
  return *this;
}

template <class Scalar>
WeylOperator<Scalar> WeylOperator<Scalar>::scaled(const Scalar& c) const {
  WeylOperator out(universe_, mode_);
  if (scalar_is_zero(c)) return out;
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back(Term{t.monomial, c * t.coeff});
  if constexpr (std::is_same_v<Scalar, RationalFunction>) {
    // Products of nonzero field elements are nonzero; order is unchanged.
  }
  return out;
}

template <class Scalar>
void WeylOperator<Scalar>::contract_into(const Term& left, const Term& right, std::vector<Term>& out) const {
  const VarUniverse& u = *universe_;
  struct Pair {
    VarIndex dvar, cvar;
    Exponent a, b;
  };
  std::vector<Pair> pairs;
  for (const auto& [v, e] : left.monomial.factors()) {
    if (!u.is_differential(v)) continue;
    auto cv = static_cast<VarIndex>(u.partner(v));
    if constexpr (std::is_same_v<Scalar, RationalFunction>) {
      if (right.coeff.num().depends_on(cv) || right.coeff.den().depends_on(cv))
        pairs.push_back({v, cv, e, 0});
    } else {
      Exponent b = right.monomial.exponent(cv);
      if (b > 0) pairs.push_back({v, cv, e, b});
    }
  }

  if constexpr (std::is_same_v<Scalar, RationalFunction>) {
    // (f dx^a)(g dx^b) = sum_beta prod binom(a, beta) f (d^beta g) dx^(a - beta + b)
    Monomial base = left.monomial * right.monomial;
    std::vector<Exponent> beta(pairs.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, const RationalFunction& g, const Rational& weight) -> void {
      if (i == pairs.size()) {
        std::vector<Monomial::Factor> drop;
        for (std::size_t k = 0; k < pairs.size(); ++k)
          if (beta[k]) drop.emplace_back(pairs[k].dvar, beta[k]);
        Monomial m = drop.empty() ? base : base.quotient(Monomial::from_factors(drop));
        out.push_back(Term{std::move(m), left.coeff * g * RationalFunction(weight)});
        return;
      }
      RationalFunction cur = g;
      for (Exponent k = 0; k <= pairs[i].a; ++k) {
        if (k > 0) {
          cur = cur.partial(pairs[i].cvar);
          if (cur.is_zero()) break;
        }
        beta[i] = k;
        self(self, i + 1, cur, weight * binomial(pairs[i].a, k));
      }
      beta[i] = 0;
    };
    rec(rec, 0, right.coeff, Rational(1));
  } else {
    // dx^a x^b = sum_beta binom(a,beta) binom(b,beta) beta! x^(b-beta) dx^(a-beta) [h^(2|beta|)]
    Monomial base = left.monomial * right.monomial;
    Rational c0 = left.coeff * right.coeff;
    if (pairs.empty()) {
      out.push_back(Term{std::move(base), std::move(c0)});
      return;
    }
    const bool homog = mode_ == Mode::Dh;
    const VarIndex hv = homog ? u.h() : VarIndex{0};
    std::vector<Exponent> beta(pairs.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, const Rational& weight) -> void {
      if (i == pairs.size()) {
        std::vector<Monomial::Factor> drop;
        Exponent total = 0;
        for (std::size_t k = 0; k < pairs.size(); ++k)
          if (beta[k]) {
            drop.emplace_back(pairs[k].dvar, beta[k]);
            drop.emplace_back(pairs[k].cvar, beta[k]);
            total += beta[k];
          }
        Monomial m = drop.empty() ? base : base.quotient(Monomial::from_factors(drop));
        if (homog && total) m = m * Monomial::var(hv, 2 * total);
        out.push_back(Term{std::move(m), c0 * weight});
        return;
      }
      Exponent top = std::min(pairs[i].a, pairs[i].b);
      for (Exponent k = 0; k <= top; ++k) {
        beta[i] = k;
        self(self, i + 1, weight * binomial(pairs[i].a, k) * binomial(pairs[i].b, k) * factorial(k));
      }
      beta[i] = 0;
    };
    rec(rec, 0, Rational(1));
  }
}

template <class Scalar>
WeylOperator<Scalar> WeylOperator<Scalar>::left_multiply(const Monomial& m, const Scalar& c) const {
  WeylOperator out(universe_, mode_);
  if (scalar_is_zero(c) || terms_.empty()) return out;
  Term left{m, c};
  std::vector<Term> acc;
  acc.reserve(terms_.size());
  for (const auto& t : terms_) contract_into(left, t, acc);
  out.terms_ = std::move(acc);
  out.normalize();
  return out;
}

template <class Scalar>
WeylOperator<Scalar> WeylOperator<Scalar>::multiply(const WeylOperator& other) const {
  require_compatible(other);
  WeylOperator out(universe_, mode_);
  std::vector<Term> acc;
  for (const auto& l : terms_)
    for (const auto& r : other.terms_) contract_into(l, r, acc);
  out.terms_ = std::move(acc);
  out.normalize();
  return out;
}

template <class Scalar>
std::uint64_t WeylOperator<Scalar>::max_degree() const {
  std::uint64_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
  return d;
}

template <class Scalar>
bool WeylOperator<Scalar>::is_homogeneous() const {
  for (const auto& t : terms_)
    if (t.monomial.degree() != terms_.front().monomial.degree()) return false;
  return true;
}

template <class Scalar>
std::int64_t WeylOperator<Scalar>::weight_degree(const WeightVector& w) const {
  if constexpr (std::is_same_v<Scalar, RationalFunction>) {
    if (!w.is_zero()) throw ModeMismatch("(-w,w)-degrees need polynomial coefficients");
  }
  if (terms_.empty()) throw std::domain_error("weight degree of the zero operator");
  std::int64_t best = fbrank::weight_degree(terms_.front().monomial, w);
  for (const auto& t : terms_) best = std::max(best, fbrank::weight_degree(t.monomial, w));
  return best;
}

template <class Scalar>
WeylOperator<Scalar> WeylOperator<Scalar>::initial_form(const WeightVector& w) const {
  if (terms_.empty()) return *this;
  std::int64_t top = weight_degree(w);
  WeylOperator out(universe_, mode_);
  for (const auto& t : terms_)
    if (fbrank::weight_degree(t.monomial, w) == top) out.terms_.push_back(t);
  return out;
}

template class WeylOperator<Rational>;
template class WeylOperator<RationalFunction>;

PolyOperator homogenize(const PolyOperator& p) {
  if (p.mode() != Mode::D) throw ModeMismatch("homogenize expects a D-mode operator");
  const VarUniverse& u = *p.universe();
  if (!u.options().homogenized) throw ModeMismatch("homogenize needs a universe with h");
  std::uint64_t top = p.max_degree();
  std::vector<PolyOperator::Term> terms;
  for (const auto& t : p.terms())
    terms.push_back({t.monomial * Monomial::var(u.h(), static_cast<Exponent>(top - t.monomial.degree())),
                     t.coeff});
  return PolyOperator::from_terms(p.universe(), Mode::Dh, std::move(terms));
}

PolyOperator dehomogenize(const PolyOperator& p) {
  if (p.mode() != Mode::Dh) throw ModeMismatch("dehomogenize expects a Dh-mode operator");
  VarIndex h = p.universe()->h();
  std::vector<PolyOperator::Term> terms;
  for (const auto& t : p.terms()) terms.push_back({t.monomial.without(h), t.coeff});
  return PolyOperator::from_terms(p.universe(), Mode::D, std::move(terms));
}

RatOperator to_rational(const PolyOperator& p) {
  if (p.mode() != Mode::D) throw ModeMismatch("to_rational expects a D-mode operator");
  std::vector<RatOperator::Term> terms;
  for (const auto& [dm, coeff] : by_differential_part(p)) terms.push_back({dm, RationalFunction(coeff)});
  return RatOperator::from_terms(p.universe(), Mode::R, std::move(terms));
}

std::pair<PolyOperator, Polynomial> to_polynomial(const RatOperator& p) {
  Polynomial den(1);
  for (const auto& t : p.terms()) {
    const Polynomial& d = t.coeff.den();
    if (d.is_constant()) continue;
    Polynomial g = gcd(den, d);
    den = den * *divide_exact(d, g);
  }
  std::vector<PolyOperator::Term> terms;
  for (const auto& t : p.terms()) {
    Polynomial scaled = t.coeff.num() * *divide_exact(den, t.coeff.den());
    for (const auto& pt : scaled.terms()) terms.push_back({pt.monomial * t.monomial, pt.coeff});
  }
  return {PolyOperator::from_terms(p.universe(), Mode::D, std::move(terms)), den};
}

PolyOperator substitute(const PolyOperator& p, VarIndex v, const Rational& value) {
  if (p.universe()->is_differential(v)) throw std::invalid_argument("cannot substitute a differential variable");
  std::vector<PolyOperator::Term> terms;
  for (const auto& t : p.terms()) {
    Exponent e = t.monomial.exponent(v);
    Rational c = t.coeff;
    for (Exponent k = 0; k < e; ++k) c *= value;
    if (c != 0) terms.push_back({t.monomial.without(v), c});
  }
  return PolyOperator::from_terms(p.universe(), p.mode(), std::move(terms));
}

RatOperator substitute(const RatOperator& p, VarIndex v, const Rational& value) {
  if (p.universe()->is_differential(v)) throw std::invalid_argument("cannot substitute a differential variable");
  std::vector<RatOperator::Term> terms;
  for (const auto& t : p.terms()) terms.push_back({t.monomial, t.coeff.substitute(v, value)});
  return RatOperator::from_terms(p.universe(), p.mode(), std::move(terms));
}

namespace {

Monomial reindex(const Monomial& m, const VarUniverse& from, const VarUniverse& to) {
  std::vector<Monomial::Factor> f;
  for (const auto& [v, e] : m.factors()) {
    auto t = to.find(from.name(v));
    if (!t) throw std::invalid_argument("variable " + from.name(v) + " missing in target universe");
    f.emplace_back(*t, e);
  }
  return Monomial::from_factors(std::move(f));
}

Polynomial reindex(const Polynomial& p, const VarUniverse& from, const VarUniverse& to) {
  std::vector<Term> terms;
  for (const auto& t : p.terms()) terms.push_back({reindex(t.monomial, from, to), t.coeff});
  return Polynomial::from_terms(std::move(terms));
}

}  // namespace

PolyOperator transfer(const PolyOperator& p, UniversePtr target, Mode mode) {
  std::vector<PolyOperator::Term> terms;
  for (const auto& t : p.terms()) terms.push_back({reindex(t.monomial, *p.universe(), *target), t.coeff});
  return PolyOperator::from_terms(std::move(target), mode, std::move(terms));
}

RatOperator transfer(const RatOperator& p, UniversePtr target) {
  std::vector<RatOperator::Term> terms;
  for (const auto& t : p.terms())
    terms.push_back({reindex(t.monomial, *p.universe(), *target),
                     RationalFunction(reindex(t.coeff.num(), *p.universe(), *target),
                                      reindex(t.coeff.den(), *p.universe(), *target))});
  return RatOperator::from_terms(std::move(target), Mode::R, std::move(terms));
}

std::vector<std::pair<Monomial, Polynomial>> by_differential_part(const PolyOperator& p) {
  const VarUniverse& u = *p.universe();
  std::map<Monomial, std::vector<Term>, CanonicalGreater> groups;
  for (const auto& t : p.terms())
    groups[differential_part(t.monomial, u)].push_back(Term{coefficient_part(t.monomial, u), t.coeff});
  std::vector<std::pair<Monomial, Polynomial>> out;
  for (auto& [dm, ts] : groups) out.emplace_back(dm, Polynomial::from_terms(std::move(ts)));
  return out;
}

}  // namespace fbrank
