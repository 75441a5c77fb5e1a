#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fbrank/order.hpp"
#include "fbrank/polynomial.hpp"
#include "fbrank/ratfun.hpp"
#include "fbrank/universe.hpp"

namespace fbrank {

// D: polynomial coefficients, [dv, v] = 1.
// R: rational-function coefficients in the non-differential variables.
// Dh: homogenized, [dv, v] = h^2.
enum class Mode { D, R, Dh };

std::string to_string(Mode mode);

struct ModeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class Scalar>
struct OperatorTerm {
  Monomial monomial;
  Scalar coeff;
};

inline bool scalar_is_zero(const Rational& c) { return c == 0; }
inline bool scalar_is_zero(const RationalFunction& c) { return c.is_zero(); }

// Normally ordered Weyl algebra element: every term is coeff * monomial
// with commutative variables written left of differential ones.
//
// Storage: terms sorted descending in the canonical graded lex order with
// nonzero coefficients. With Scalar = Rational (modes D and Dh) the
// monomial carries every variable, so a term x^a dx^b with rational
// coefficient is one entry. With Scalar = RationalFunction (mode R) the
// monomial carries differential variables only.
template <class Scalar>
class WeylOperator {
 public:
  using Term = OperatorTerm<Scalar>;
  using ScalarType = Scalar;

  WeylOperator() = default;
  WeylOperator(UniversePtr universe, Mode mode);

  static WeylOperator constant(UniversePtr universe, Mode mode, const Scalar& c);
  static WeylOperator monomial(UniversePtr universe, Mode mode, const Monomial& m, const Scalar& c);
  // A single variable (commutative, differential, slack or h) as an operator.
  static WeylOperator variable(UniversePtr universe, Mode mode, VarIndex v);
  static WeylOperator from_terms(UniversePtr universe, Mode mode, std::vector<Term> terms);

  Mode mode() const { return mode_; }
  const UniversePtr& universe() const { return universe_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Scalar coeff(const Monomial& m) const;

  // Greatest term under the order. Precondition: nonzero.
  const Term& leading_term(const TermOrder& order) const;
  // All terms sorted descending under the order.
  std::vector<Term> sorted(const TermOrder& order) const;

  WeylOperator operator-() const;
  WeylOperator& operator+=(const WeylOperator& o);
  WeylOperator& operator-=(const WeylOperator& o);
  friend WeylOperator operator+(WeylOperator a, const WeylOperator& b) { return a += b; }
  friend WeylOperator operator-(WeylOperator a, const WeylOperator& b) { return a -= b; }
  // Left scalar multiplication c * P.
  WeylOperator scaled(const Scalar& c) const;
  // (c * m) * P for a normally ordered monomial m.
  WeylOperator left_multiply(const Monomial& m, const Scalar& c) const;
  friend WeylOperator operator*(const WeylOperator& a, const WeylOperator& b) { return a.multiply(b); }
  WeylOperator multiply(const WeylOperator& other) const;

  // Total degree counting every variable with degree 1.
  std::uint64_t max_degree() const;
  bool is_homogeneous() const;

  // Maximal (-w,w)-degree and the sum of terms attaining it.
  std::int64_t weight_degree(const WeightVector& w) const;
  WeylOperator initial_form(const WeightVector& w) const;

  friend bool operator==(const WeylOperator& a, const WeylOperator& b) {
    return a.mode_ == b.mode_ && a.terms_.size() == b.terms_.size() && a.same_terms(b);
  }

  void require_compatible(const WeylOperator& o) const;

 private:
  bool same_terms(const WeylOperator& o) const;
  void normalize();
  void contract_into(const Term& left, const Term& right, std::vector<Term>& out) const;

  UniversePtr universe_;
  Mode mode_ = Mode::D;
  std::vector<Term> terms_;
};

using PolyOperator = WeylOperator<Rational>;
using RatOperator = WeylOperator<RationalFunction>;

extern template class WeylOperator<Rational>;
extern template class WeylOperator<RationalFunction>;

template <class Scalar>
WeylOperator<Scalar> commutator(const WeylOperator<Scalar>& p, const WeylOperator<Scalar>& q) {
  return p * q - q * p;
}

// D-mode operator multiplied termwise by h^(maxdeg - termdeg); result in Dh.
PolyOperator homogenize(const PolyOperator& p);
// h := 1; result in D.
PolyOperator dehomogenize(const PolyOperator& p);

// D-mode operator with polynomial coefficients viewed in R.
RatOperator to_rational(const PolyOperator& p);
// Clears denominators: returns (Q, den) with Q = den * P in D-mode.
std::pair<PolyOperator, Polynomial> to_polynomial(const RatOperator& p);

// Exact substitution of a non-differential variable by a rational value.
PolyOperator substitute(const PolyOperator& p, VarIndex v, const Rational& value);
RatOperator substitute(const RatOperator& p, VarIndex v, const Rational& value);

// Moves the operator into another universe by variable name. Throws if a
// variable in use has no counterpart.
PolyOperator transfer(const PolyOperator& p, UniversePtr target, Mode mode);
RatOperator transfer(const RatOperator& p, UniversePtr target);

// D-mode terms grouped by their differential part.
std::vector<std::pair<Monomial, Polynomial>> by_differential_part(const PolyOperator& p);

// Differential part and coefficient part of a full monomial.
Monomial differential_part(const Monomial& m, const VarUniverse& u);
Monomial coefficient_part(const Monomial& m, const VarUniverse& u);

}  // namespace fbrank
