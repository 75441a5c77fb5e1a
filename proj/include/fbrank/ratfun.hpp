#pragma once

#include <stdexcept>

#include "fbrank/polynomial.hpp"

namespace fbrank {

struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};

// Element of the rational function field over the polynomial ring.
// Canonical form: gcd(num, den) = 1 and den is monic in the canonical
// graded lex order, so structural equality is mathematical equality.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(const Polynomial& num) : num_(num), den_(1) {}  // NOLINT
  RationalFunction(const Rational& c) : num_(c), den_(1) {}        // NOLINT
  RationalFunction(long c) : num_(c), den_(1) {}                   // NOLINT
  RationalFunction(int c) : num_(c), den_(1) {}                    // NOLINT
  RationalFunction(const Polynomial& num, const Polynomial& den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& f, const RationalFunction& g);
  friend RationalFunction operator-(const RationalFunction& f, const RationalFunction& g);
  friend RationalFunction operator*(const RationalFunction& f, const RationalFunction& g);
  friend RationalFunction operator/(const RationalFunction& f, const RationalFunction& g);
  RationalFunction& operator+=(const RationalFunction& g) { return *this = *this + g; }
  RationalFunction& operator-=(const RationalFunction& g) { return *this = *this - g; }
  RationalFunction& operator*=(const RationalFunction& g) { return *this = *this * g; }
  RationalFunction& operator/=(const RationalFunction& g) { return *this = *this / g; }
  RationalFunction inverse() const;

  RationalFunction partial(VarIndex v) const;
  RationalFunction substitute(VarIndex v, const Rational& value) const;
  double evaluate(std::span<const double> values) const;

  // Re-runs canonicalization; must be the identity on stored values.
  RationalFunction canonicalized() const { return RationalFunction(num_, den_); }

  friend bool operator==(const RationalFunction& f, const RationalFunction& g) {
    return f.num_ == g.num_ && f.den_ == g.den_;
  }
  // Equality through cross multiplication, independent of canonical form.
  friend bool cross_equal(const RationalFunction& f, const RationalFunction& g) {
    return f.num_ * g.den_ == g.num_ * f.den_;
  }

 private:
  struct Raw {};
  RationalFunction(Raw, Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {}
  static RationalFunction make_monic(Polynomial num, Polynomial den);

  Polynomial num_;
  Polynomial den_;
};

}  // namespace fbrank
