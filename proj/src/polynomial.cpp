#include "fbrank/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>

namespace fbrank {

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.push_back(Term{Monomial{}, c});
}

Polynomial::Polynomial(const Monomial& m, const Rational& c) {
  if (c != 0) terms_.push_back(Term{m, c});
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  Polynomial p;
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return grlex_compare(a.monomial, b.monomial) > 0;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    std::size_t j = i + 1;
    Rational sum = terms_[i].coeff;
    while (j < terms_.size() && terms_[j].monomial == terms_[i].monomial) sum += terms_[j++].coeff;
    if (sum != 0) {
      if (out != i) terms_[out].monomial = std::move(terms_[i].monomial);
      terms_[out].coeff = sum;
      ++out;
    }
    i = j;
  }
  terms_.resize(out);
}

Rational Polynomial::constant_value() const {
  if (!is_constant()) throw std::domain_error("Polynomial::constant_value: not constant");
  return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

Rational Polynomial::coeff(const Monomial& m) const {
  for (const auto& t : terms_)
    if (t.monomial == m) return t.coeff;
  return 0;
}

std::uint64_t Polynomial::total_degree() const {
  return terms_.empty() ? 0 : terms_.front().monomial.degree();
}

Exponent Polynomial::degree_in(VarIndex v) const {
  Exponent d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.exponent(v));
  return d;
}

std::vector<VarIndex> Polynomial::variables() const {
  std::vector<VarIndex> vs;
  for (const auto& t : terms_)
    for (const auto& f : t.monomial.factors()) vs.push_back(f.first);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

bool Polynomial::depends_on(VarIndex v) const {
  for (const auto& t : terms_)
    if (t.monomial.exponent(v) > 0) return true;
  return false;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

namespace {

template <bool Subtract>
std::vector<Term> merge(const std::vector<Term>& a, std::span<const Term> b) {
  std::vector<Term> out;
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
      out.push_back(Term{b[j].monomial, Subtract ? Rational(-b[j].coeff) : b[j].coeff});
      ++j;
    } else {
      Rational c = Subtract ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
      if (c != 0) out.push_back(Term{a[i].monomial, c});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge<false>(terms_, o.terms_);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge<true>(terms_, o.terms_);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else if (c != 1) {
    for (auto& t : terms_) t.coeff *= c;
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (b.is_constant()) return a * b.terms_[0].coeff;
  if (a.is_constant()) return b * a.terms_[0].coeff;
  if (b.is_monomial()) return a.mul_monomial(b.terms_[0].monomial, b.terms_[0].coeff);
  if (a.is_monomial()) return b.mul_monomial(a.terms_[0].monomial, a.terms_[0].coeff);
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prod.push_back(Term{s.monomial * t.monomial, s.coeff * t.coeff});
  return Polynomial::from_terms(std::move(prod));
}

Polynomial Polynomial::mul_monomial(const Monomial& m, const Rational& c) const {
  // Multiplying by a monomial preserves the relative order of terms.
  Polynomial p;
  if (c == 0) return p;
  p.terms_.reserve(terms_.size());
  for (const auto& t : terms_) p.terms_.push_back(Term{t.monomial * m, t.coeff * c});
  return p;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(1), base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Polynomial Polynomial::partial(VarIndex v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    Exponent e = t.monomial.exponent(v);
    if (e == 0) continue;
    out.push_back(Term{t.monomial.with_exponent(v, e - 1), t.coeff * e});
  }
  return from_terms(std::move(out));
}

Polynomial Polynomial::substitute(VarIndex v, const Rational& value) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    Exponent e = t.monomial.exponent(v);
    if (e == 0) {
      out.push_back(t);
      continue;
    }
    Rational c = t.coeff;
    for (Exponent k = 0; k < e; ++k) c *= value;
    if (c != 0) out.push_back(Term{t.monomial.without(v), c});
  }
  return from_terms(std::move(out));
}

Polynomial Polynomial::substitute(VarIndex v, const Polynomial& value) const {
  Polynomial out;
  auto cs = coefficients_in(*this, v);
  Polynomial power(1);
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (!cs[k].is_zero()) out += cs[k] * power;
    if (k + 1 < cs.size()) power *= value;
  }
  return out;
}

double Polynomial::evaluate(std::span<const double> values) const {
  double sum = 0;
  for (const auto& t : terms_) {
    double term = t.coeff.get_d();
    for (const auto& [v, e] : t.monomial.factors()) term *= std::pow(values[v], static_cast<double>(e));
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::monic() const {
  if (terms_.empty()) return *this;
  Rational inv = 1 / terms_.front().coeff;
  return *this * inv;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].coeff != b.terms_[i].coeff || !(a.terms_[i].monomial == b.terms_[i].monomial))
      return false;
  return true;
}

std::optional<Polynomial> divide_exact(const Polynomial& p, const Polynomial& q) {
  if (q.is_zero()) throw std::domain_error("divide_exact: division by zero polynomial");
  if (p.is_zero()) return Polynomial{};
  if (q.is_constant()) return p * Rational(1 / q.constant_value());
  const Term& lt = q.leading_term();
  if (q.is_monomial()) {
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
      if (!lt.monomial.divides(t.monomial)) return std::nullopt;
      out.push_back(Term{t.monomial.quotient(lt.monomial), t.coeff / lt.coeff});
    }
    return Polynomial::from_terms(std::move(out));
  }
  // The smallest terms of q and p must divide as well.
  if (!q.terms().back().monomial.divides(p.terms().back().monomial)) return std::nullopt;
  for (const auto& [v, e] : lt.monomial.factors())
    if (p.degree_in(v) < e) return std::nullopt;
  auto desc = [](const Monomial& a, const Monomial& b) { return grlex_compare(a, b) > 0; };
  std::map<Monomial, Rational, decltype(desc)> rem(desc);
  for (const auto& t : p.terms()) rem.emplace_hint(rem.end(), t.monomial, t.coeff);
  std::vector<Term> quot;
  while (!rem.empty()) {
    auto head = rem.begin();
    if (!lt.monomial.divides(head->first)) return std::nullopt;
    Monomial m = head->first.quotient(lt.monomial);
    Rational c = head->second / lt.coeff;
    rem.erase(head);
    for (std::size_t k = 1; k < q.terms().size(); ++k) {
      const Term& t = q.terms()[k];
      Monomial tm = t.monomial * m;
      auto [it, fresh] = rem.try_emplace(std::move(tm), 0);
      it->second -= t.coeff * c;
      if (it->second == 0) rem.erase(it);
    }
    quot.push_back(Term{std::move(m), std::move(c)});
  }
  return Polynomial::from_terms(std::move(quot));
}

std::vector<Polynomial> coefficients_in(const Polynomial& p, VarIndex v) {
  std::vector<std::vector<Term>> buckets(p.degree_in(v) + 1);
  for (const auto& t : p.terms()) {
    Exponent e = t.monomial.exponent(v);
    buckets[e].push_back(Term{t.monomial.without(v), t.coeff});
  }
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(Polynomial::from_terms(std::move(b)));
  return out;
}

namespace {

Polynomial from_coefficients(const std::vector<Polynomial>& cs, VarIndex v) {
  Polynomial out;
  for (std::size_t k = 0; k < cs.size(); ++k)
    if (!cs[k].is_zero()) out += cs[k].mul_monomial(Monomial::var(v, static_cast<Exponent>(k)));
  return out;
}

// Componentwise minimum exponent over all terms.
Monomial monomial_content(const Polynomial& p) {
  Monomial g = p.leading_term().monomial;
  for (const auto& t : p.terms()) {
    g = g.gcd(t.monomial);
    if (g.is_one()) break;
  }
  return g;
}

Polynomial exact(const Polynomial& p, const Polynomial& q) {
  auto r = divide_exact(p, q);
  if (!r) throw std::logic_error("gcd: inexact division");
  return *r;
}

// Arithmetic modulo the Mersenne prime 2^61 - 1.
constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(z & kPrime), hi = static_cast<std::uint64_t>(z >> 61);
  std::uint64_t s = lo + hi;
  return s >= kPrime ? s - kPrime : s;
}
std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kPrime ? s - kPrime : s;
}
std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mod_mul(r, a);
    a = mod_mul(a, a);
    e >>= 1;
  }
  return r;
}
std::uint64_t mod_inv(std::uint64_t a) { return mod_pow(a, kPrime - 2); }

std::optional<std::uint64_t> mod_of(const mpz_class& z) {
  mpz_class r = z % mpz_class(static_cast<unsigned long>(kPrime));
  if (r < 0) r += static_cast<unsigned long>(kPrime);
  return static_cast<std::uint64_t>(r.get_ui());
}

std::optional<std::uint64_t> mod_of(const Rational& q) {
  auto n = mod_of(q.get_num()), d = mod_of(q.get_den());
  if (!n || !d || *d == 0) return std::nullopt;
  return mod_mul(*n, mod_inv(*d));
}

// Deterministic evaluation point for variable w.
std::uint64_t eval_point(VarIndex w) {
  std::uint64_t z = 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(w) + 17);
  z ^= z >> 29;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 32;
  return z % kPrime;
}

// Image of p in Z_P[v] after evaluating every other variable.
std::optional<std::vector<std::uint64_t>> univariate_image(const Polynomial& p, VarIndex v) {
  std::vector<std::uint64_t> out(p.degree_in(v) + 1, 0);
  for (const auto& t : p.terms()) {
    auto c = mod_of(t.coeff);
    if (!c) return std::nullopt;
    std::uint64_t val = *c;
    Exponent ev = 0;
    for (const auto& [w, e] : t.monomial.factors()) {
      if (w == v)
        ev = e;
      else
        val = mod_mul(val, mod_pow(eval_point(w), e));
    }
    out[ev] = mod_add(out[ev], val);
  }
  return out;
}

std::size_t univariate_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  auto trim = [](std::vector<std::uint64_t>& x) {
    while (!x.empty() && x.back() == 0) x.pop_back();
  };
  trim(a);
  trim(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    std::uint64_t inv = mod_inv(b.back());
    while (a.size() >= b.size() && !a.empty()) {
      std::uint64_t f = mod_mul(a.back(), inv);
      std::size_t shift = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] = mod_sub(a[k + shift], mod_mul(f, b[k]));
      trim(a);
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Certificate that gcd(p, q) is constant: for each shared variable v, a
// specialization of the other variables keeps deg_v(p) and yields coprime
// univariate images, so every common factor has degree 0 in v.
bool provably_coprime(const Polynomial& p, const Polynomial& q) {
  for (VarIndex v : p.variables()) {
    if (!q.depends_on(v)) continue;
    auto a = univariate_image(p, v), b = univariate_image(q, v);
    if (!a || !b || a->back() == 0) return false;
    if (univariate_gcd_degree(*a, *b) != 0) return false;
  }
  return true;
}

// Coefficients of p viewed as a polynomial in the variables vs, smallest first.
std::vector<Polynomial> coefficients_over(const Polynomial& p, const std::vector<VarIndex>& vs) {
  auto cmp = [](const Monomial& a, const Monomial& b) { return grlex_compare(a, b) < 0; };
  std::map<Monomial, Polynomial, decltype(cmp)> groups(cmp);
  for (const auto& t : p.terms()) {
    Monomial outer, inner;
    for (const auto& [v, e] : t.monomial.factors()) {
      Monomial f = Monomial::var(v, e);
      if (std::find(vs.begin(), vs.end(), v) != vs.end())
        outer = outer * f;
      else
        inner = inner * f;
    }
    groups[outer] += Polynomial(inner, t.coeff);
  }
  std::vector<Polynomial> out;
  out.reserve(groups.size());
  for (auto& [m, c] : groups) out.push_back(std::move(c));
  std::sort(out.begin(), out.end(), [](const Polynomial& a, const Polynomial& b) { return a.size() < b.size(); });
  return out;
}

Polynomial content_in(const Polynomial& p, VarIndex v);

Polynomial gcd_impl(const Polynomial& p, const Polynomial& q);

Polynomial gcd_of(const std::vector<Polynomial>& cs) {
  Polynomial g;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = gcd_impl(g, c);
    if (g.is_constant() && !g.is_zero()) return Polynomial(1);
  }
  return g;
}

Polynomial content_in(const Polynomial& p, VarIndex v) { return gcd_of(coefficients_in(p, v)); }

// Primitive polynomial remainder sequence in v; p and q primitive in v.
Polynomial prs_gcd(Polynomial p, Polynomial q, VarIndex v) {
  auto a = coefficients_in(p, v);
  auto b = coefficients_in(q, v);
  if (a.size() < b.size()) std::swap(a, b);
  while (true) {
    if (b.size() == 1) return Polynomial(1);
    // Pseudo-remainder of a by b.
    while (a.size() >= b.size()) {
      const Polynomial lb = b.back();
      const Polynomial la = a.back();
      std::size_t shift = a.size() - b.size();
      for (auto& c : a) c *= lb;
      for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= la * b[k];
      while (!a.empty() && a.back().is_zero()) a.pop_back();
      if (a.empty()) break;
    }
    if (a.empty()) return from_coefficients(b, v);
    Polynomial content = gcd_of(a);
    for (auto& c : a) c = exact(c, content);
    // Keep numeric coefficients small.
    Rational s = 1 / a.back().leading_coeff();
    for (auto& c : a) c *= s;
    std::swap(a, b);
  }
}

Polynomial gcd_impl(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero()) return q.monic();
  if (q.is_zero()) return p.monic();
  if (p.is_constant() || q.is_constant()) return Polynomial(1);
  if (p == q) return p.monic();
  // Cheap and common: the smaller argument divides the larger.
  {
    const Polynomial& small = p.size() <= q.size() ? p : q;
    const Polynomial& large = p.size() <= q.size() ? q : p;
    if (divide_exact(large, small)) return small.monic();
  }

  Monomial mp = monomial_content(p), mq = monomial_content(q);
  Monomial gm = mp.gcd(mq);
  if (p.is_monomial() || q.is_monomial()) return Polynomial(gm);

  Polynomial pr = mp.is_one() ? p : exact(p, Polynomial(mp));
  Polynomial qr = mq.is_one() ? q : exact(q, Polynomial(mq));
  if (pr.is_constant() || qr.is_constant()) return Polynomial(gm);
  if (provably_coprime(pr, qr)) return Polynomial(gm);

  auto vp = pr.variables();
  auto vq = qr.variables();
  // Variables present on one side only cannot occur in the gcd, so fold
  // that side down to its content over all of them at once.
  std::vector<VarIndex> only_p, only_q;
  for (VarIndex v : vp)
    if (!qr.depends_on(v)) only_p.push_back(v);
  for (VarIndex v : vq)
    if (!pr.depends_on(v)) only_q.push_back(v);
  if (!only_p.empty() || !only_q.empty()) {
    if (only_p.empty()) return gcd_impl(qr, pr).mul_monomial(gm);
    Polynomial g = qr;
    for (const auto& c : coefficients_over(pr, only_p)) {
      g = gcd_impl(g, c);
      if (g.is_constant()) return Polynomial(gm);
    }
    return g.mul_monomial(gm).monic();
  }

  // Main variable: smallest combined degree.
  VarIndex v = vp.front();
  Exponent best = ~Exponent{0};
  for (VarIndex u : vp) {
    Exponent d = pr.degree_in(u) + qr.degree_in(u);
    if (d < best) {
      best = d;
      v = u;
    }
  }
  Polynomial cp = content_in(pr, v), cq = content_in(qr, v);
  Polynomial c = gcd_impl(cp, cq);
  Polynomial pp = exact(pr, cp), qq = exact(qr, cq);
  Polynomial g = prs_gcd(pp, qq, v);
  if (!g.is_constant()) g = exact(g, content_in(g, v));
  return (c * g).mul_monomial(gm).monic();
}

}  // namespace

Polynomial gcd(const Polynomial& p, const Polynomial& q) { return gcd_impl(p, q).monic(); }

}  // namespace fbrank
