#include "fbrank/monomial.hpp"

#include <algorithm>

namespace fbrank {

namespace {

Exponent checked_add(Exponent a, Exponent b) {
  if (a > Monomial::kMaxExponent - b) throw ExponentOverflow("monomial exponent overflow");
  return a + b;
}

}  // namespace

Monomial::Monomial(std::initializer_list<Factor> factors)
    : Monomial(from_factors(std::vector<Factor>(factors))) {}

Monomial Monomial::var(VarIndex v, Exponent e) {
  Monomial m;
  if (e > kMaxExponent) throw ExponentOverflow("monomial exponent overflow");
  if (e > 0) {
    m.factors_.emplace_back(v, e);
    m.degree_ = e;
  }
  return m;
}

Monomial Monomial::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end());
  Monomial m;
  for (const auto& [v, e] : factors) {
    if (e == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == v)
      m.factors_.back().second = checked_add(m.factors_.back().second, e);
    else
      m.factors_.emplace_back(v, e);
    m.degree_ += e;
  }
  return m;
}

Exponent Monomial::exponent(VarIndex v) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                             [](const Factor& f, VarIndex x) { return f.first < x; });
  return (it != factors_.end() && it->first == v) ? it->second : 0;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  auto it = other.factors_.begin();
  for (const auto& [v, e] : factors_) {
    while (it != other.factors_.end() && it->first < v) ++it;
    if (it == other.factors_.end() || it->first != v || it->second < e) return false;
  }
  return true;
}

bool Monomial::coprime(const Monomial& other) const {
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() && b != other.factors_.end()) {
    if (a->first == b->first) return false;
    if (a->first < b->first)
      ++a;
    else
      ++b;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial& other) const {
  Monomial out;
  auto it = other.factors_.begin();
  for (const auto& [v, e] : factors_) {
    while (it != other.factors_.end() && it->first < v) {
      throw std::domain_error("Monomial::quotient: divisor does not divide");
    }
    Exponent sub = 0;
    if (it != other.factors_.end() && it->first == v) {
      sub = it->second;
      ++it;
    }
    if (sub > e) throw std::domain_error("Monomial::quotient: divisor does not divide");
    if (e > sub) {
      out.factors_.emplace_back(v, e - sub);
      out.degree_ += e - sub;
    }
  }
  if (it != other.factors_.end())
    throw std::domain_error("Monomial::quotient: divisor does not divide");
  return out;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() || j != b.factors_.end()) {
    if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
      out.factors_.push_back(*i++);
    } else if (i == a.factors_.end() || j->first < i->first) {
      out.factors_.push_back(*j++);
    } else {
      out.factors_.emplace_back(i->first, checked_add(i->second, j->second));
      ++i;
      ++j;
    }
  }
  out.degree_ = a.degree_ + b.degree_;
  return out;
}

Monomial Monomial::lcm(const Monomial& other) const {
  std::vector<Factor> f;
  auto i = factors_.begin();
  auto j = other.factors_.begin();
  while (i != factors_.end() || j != other.factors_.end()) {
    if (j == other.factors_.end() || (i != factors_.end() && i->first < j->first)) {
      f.push_back(*i++);
    } else if (i == factors_.end() || j->first < i->first) {
      f.push_back(*j++);
    } else {
      f.emplace_back(i->first, std::max(i->second, j->second));
      ++i;
      ++j;
    }
  }
  return from_factors(std::move(f));
}

Monomial Monomial::gcd(const Monomial& other) const {
  std::vector<Factor> f;
  auto j = other.factors_.begin();
  for (const auto& [v, e] : factors_) {
    while (j != other.factors_.end() && j->first < v) ++j;
    if (j != other.factors_.end() && j->first == v) f.emplace_back(v, std::min(e, j->second));
  }
  return from_factors(std::move(f));
}

Monomial Monomial::restrict(const std::function<bool(VarIndex)>& pred) const {
  Monomial out;
  for (const auto& fac : factors_)
    if (pred(fac.first)) {
      out.factors_.push_back(fac);
      out.degree_ += fac.second;
    }
  return out;
}

Monomial Monomial::without(VarIndex v) const {
  return restrict([v](VarIndex u) { return u != v; });
}

Monomial Monomial::with_exponent(VarIndex v, Exponent e) const {
  Monomial out = without(v);
  return out * Monomial::var(v, e);
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (const auto& [v, e] : factors_) {
    h ^= (static_cast<std::size_t>(v) << 32) ^ e;
    h *= 1099511628211ull;
  }
  return h;
}

std::strong_ordering lex_compare(const Monomial& a, const Monomial& b) {
  auto fa = a.factors();
  auto fb = b.factors();
  std::size_t i = 0, j = 0;
  while (i < fa.size() && j < fb.size()) {
    if (fa[i].first != fb[j].first)
      // The monomial carrying the lower-indexed variable is larger.
      return fa[i].first < fb[j].first ? std::strong_ordering::greater
                                       : std::strong_ordering::less;
    if (fa[i].second != fb[j].second) return fa[i].second <=> fb[j].second;
    ++i;
    ++j;
  }
  if (i < fa.size()) return std::strong_ordering::greater;
  if (j < fb.size()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  return lex_compare(a, b);
}

}  // namespace fbrank
