#pragma once

// Fraction-free reduction for R-mode operators. An R-mode operator is held
// as a D-mode operator with polynomial coefficients (a unit multiple in R),
// keyed by its differential part. Reductions then cost polynomial products
// and one small gcd per step instead of rational-function arithmetic on
// every term.

#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "fbrank/groebner.hpp"

namespace fbrank::detail {

struct OrderGreater {
  const TermOrder* order;
  bool operator()(const Monomial& a, const Monomial& b) const { return order->compare(a, b) > 0; }
};

// Differential monomial -> polynomial coefficient, descending in the order.
using Work = std::map<Monomial, Polynomial, OrderGreater>;

// Divisor choice shared by every reduction loop.
class DivisorPicker {
 public:
  DivisorPicker(const ReduceOptions& options, std::size_t count);

  template <class Lead>
  std::optional<std::size_t> pick(const Monomial& m, const std::vector<Lead>& leads) {
    if (policy_ == DivisorPolicy::First) {
      for (std::size_t k : candidates_)
        if (leads[k].monomial.divides(m)) return k;
      return std::nullopt;
    }
    dividers_.clear();
    for (std::size_t k : candidates_)
      if (leads[k].monomial.divides(m)) dividers_.push_back(k);
    if (dividers_.empty()) return std::nullopt;
    return dividers_[std::uniform_int_distribution<std::size_t>(0, dividers_.size() - 1)(rng_)];
  }

 private:
  DivisorPolicy policy_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> candidates_;
  std::vector<std::size_t> dividers_;
};

struct Cleared {
  PolyOperator op;    // D-mode, polynomial coefficients
  Monomial monomial;  // leading differential monomial
  Polynomial coeff;   // its coefficient
};

Work to_work(const PolyOperator& p, const TermOrder& order);
PolyOperator from_work(const Work& w, const UniversePtr& universe);

// Precondition: p nonzero, D-mode.
Cleared clear(PolyOperator p, const TermOrder& order);
Cleared clear(const RatOperator& p, const TermOrder& order);

// Divides out the gcd of all coefficients and scales the leading
// coefficient's leading rational to 1.
void make_primitive(Work& w);

struct ReduceTrace {
  std::vector<std::size_t> chain;
  std::uint64_t steps = 0;
};

// Reduces work / scale by G. Irreducible terms go to `carried`, which is
// rescaled alongside work so that carried / scale stays exact, or, when
// carried is null, to `emitted` as c / scale at the moment they leave.
ReduceTrace reduce(Work& work, Polynomial& scale, const std::vector<Cleared>& G,
                   const ReduceOptions& options, Work* carried, std::vector<RatOperator::Term>* emitted);

// lc(g)/d * dd^u f - lc(f)/d * dd^v g with d = gcd of the two coefficients:
// a unit multiple in R of the monic S-pair.
Work s_pair_work(const Cleared& f, const Cleared& g, const TermOrder& order);

}  // namespace fbrank::detail
