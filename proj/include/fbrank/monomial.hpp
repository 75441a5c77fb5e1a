#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "fbrank/universe.hpp"

namespace fbrank {

using Exponent = std::uint32_t;

struct ExponentOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Sparse exponent vector: (variable, exponent) pairs sorted by variable,
// every stored exponent positive. The empty monomial is 1.
class Monomial {
 public:
  using Factor = std::pair<VarIndex, Exponent>;
  static constexpr Exponent kMaxExponent = Exponent{1} << 30;

  Monomial() = default;
  Monomial(std::initializer_list<Factor> factors);
  static Monomial var(VarIndex v, Exponent e = 1);
  static Monomial from_factors(std::vector<Factor> factors);

  bool is_one() const { return factors_.empty(); }
  std::uint64_t degree() const { return degree_; }
  Exponent exponent(VarIndex v) const;
  std::span<const Factor> factors() const { return {factors_.data(), factors_.size()}; }

  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;
  // this / other; precondition: other divides this.
  Monomial quotient(const Monomial& other) const;
  Monomial lcm(const Monomial& other) const;
  Monomial gcd(const Monomial& other) const;

  // Factors whose variable satisfies pred.
  Monomial restrict(const std::function<bool(VarIndex)>& pred) const;
  Monomial without(VarIndex v) const;
  Monomial with_exponent(VarIndex v, Exponent e) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree_ == b.degree_ && std::equal(a.factors_.begin(), a.factors_.end(), b.factors_.begin(), b.factors_.end());
  }

  std::size_t hash() const;

 private:
  // Monomials here rarely have more than a handful of factors; keeping
  // them inline avoids a heap allocation per term.
  boost::container::small_vector<Factor, 6> factors_;
  std::uint64_t degree_ = 0;
};

// Lexicographic comparison with variable 0 most significant.
std::strong_ordering lex_compare(const Monomial& a, const Monomial& b);

// The fixed canonical order used for storage and canonical forms:
// graded lexicographic over the full variable index.
std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b);

struct CanonicalGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return grlex_compare(a, b) > 0;
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace fbrank
