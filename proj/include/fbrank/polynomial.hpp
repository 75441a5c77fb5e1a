#pragma once

#include <gmpxx.h>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbrank/monomial.hpp"

namespace fbrank {

using Rational = mpq_class;

struct Term {
  Monomial monomial;
  Rational coeff;
};

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are kept in canonical (graded lex) descending order with no zero
// coefficients, so equal polynomials have identical term lists.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT: implicit constant embedding
  Polynomial(long c) : Polynomial(Rational(c)) {}
  Polynomial(int c) : Polynomial(Rational(c)) {}
  Polynomial(const Monomial& m, const Rational& c = 1);

  static Polynomial variable(VarIndex v, Exponent e = 1) {
    return Polynomial(Monomial::var(v, e));
  }
  // Sorts and combines arbitrary terms.
  static Polynomial from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant_value() const;  // requires is_constant()
  std::size_t size() const { return terms_.size(); }
  std::span<const Term> terms() const { return terms_; }
  const Term& leading_term() const { return terms_.front(); }
  const Rational& leading_coeff() const { return terms_.front().coeff; }
  Rational coeff(const Monomial& m) const;

  std::uint64_t total_degree() const;
  Exponent degree_in(VarIndex v) const;
  std::vector<VarIndex> variables() const;
  bool depends_on(VarIndex v) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial mul_monomial(const Monomial& m, const Rational& c = 1) const;
  Polynomial pow(unsigned e) const;

  Polynomial partial(VarIndex v) const;

  // Substitutes v := value exactly.
  Polynomial substitute(VarIndex v, const Rational& value) const;
  Polynomial substitute(VarIndex v, const Polynomial& value) const;
  // Floating-point evaluation; values indexed by variable.
  double evaluate(std::span<const double> values) const;

  // Scales so that the leading coefficient is 1 (zero stays zero).
  Polynomial monic() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  void normalize();
  std::vector<Term> terms_;
};

// Exact quotient p / q if q divides p, otherwise nullopt. q != 0.
std::optional<Polynomial> divide_exact(const Polynomial& p, const Polynomial& q);

// Monic greatest common divisor. gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& p, const Polynomial& q);

// Coefficients of p viewed as a univariate polynomial in v (index = degree).
std::vector<Polynomial> coefficients_in(const Polynomial& p, VarIndex v);

}  // namespace fbrank
