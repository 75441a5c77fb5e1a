#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbrank/order.hpp"
#include "fbrank/weyl.hpp"

namespace fbrank {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfiniteStaircase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Counts reduction steps across calls; throws BudgetExceeded past the limit.
class StepBudget {
 public:
  static constexpr std::uint64_t kDefault = 1'000'000;
  explicit StepBudget(std::uint64_t limit = default_limit()) : limit_(limit) {}
  void charge(std::uint64_t steps = 1);
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }
  // FBRANK_BUDGET overrides the default when set.
  static std::uint64_t default_limit();

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

enum class DivisorPolicy { First, Random };

struct ReduceOptions {
  bool track = false;
  DivisorPolicy policy = DivisorPolicy::First;
  std::uint64_t seed = 0;
  StepBudget* budget = nullptr;
  // Indices of G tried before the rest, in the given order.
  std::vector<std::size_t> priority;
  // Untracked R-mode reductions clear denominators and run on polynomial
  // coefficients. The remainder is the same either way.
  bool fraction_free = true;
};

template <class Op>
struct Cofactor {
  Op multiplier;
  std::size_t index;
};

// target = sum multiplier_i * G[index_i] + remainder
template <class Op>
struct StandardRepresentation {
  Op target;
  std::vector<Cofactor<Op>> cofactors;
  Op remainder;
  std::vector<std::size_t> chain;  // reducer index used at each step
  std::uint64_t steps = 0;
};

template <class Op>
StandardRepresentation<Op> normal_form(const Op& f, const std::vector<Op>& G, const TermOrder& order,
                                       const ReduceOptions& options = {});

// Checks the three defining properties; returns a description of the first
// violation, or nullopt.
template <class Op>
std::optional<std::string> verify_representation(const StandardRepresentation<Op>& rep, const std::vector<Op>& G,
                                                 const TermOrder& order);

// Monic left-multiplier combination cancelling the initial terms.
template <class Op>
Op s_pair(const Op& f, const Op& g, const TermOrder& order);

// Initial monomials coprime in the commutative image.
template <class Op>
bool initials_coprime(const Op& f, const Op& g, const TermOrder& order);

template <class Op>
Op make_monic(const Op& f, const TermOrder& order);

template <class Op>
struct PairRecord {
  std::size_t i = 0, j = 0;
  bool coprime = false;
  std::vector<std::size_t> chain;
  Op remainder;
};

template <class Op>
struct GroebnerReport {
  bool is_groebner = true;
  std::vector<PairRecord<Op>> pairs;
  std::uint64_t steps = 0;
};

// Reduces every S-pair of G by G; no criteria are applied.
template <class Op>
GroebnerReport<Op> is_groebner(const std::vector<Op>& G, const TermOrder& order, const ReduceOptions& options = {});

template <class Op>
struct GroebnerBasis {
  std::vector<Op> generators;
  TermOrder order;
  Mode mode = Mode::D;
  bool certified = false;
  std::size_t pairs_reduced = 0;
  std::size_t pairs_skipped = 0;
  std::size_t elements_added = 0;
  std::uint64_t steps = 0;
};

struct BuchbergerOptions {
  StepBudget* budget = nullptr;
  bool interreduce = true;
  unsigned jobs = 1;
  std::size_t max_elements = 20000;
  // R-mode only: work on primitive polynomial-coefficient representatives,
  // certify coprime pairs through their commutator, and skip pairs by the
  // chain criterion. Off, the plain rational-function loop runs.
  bool fraction_free = true;
  bool chain_criterion = true;
};

template <class Op>
GroebnerBasis<Op> buchberger(const std::vector<Op>& G, const TermOrder& order, const BuchbergerOptions& options = {});

// Every element of `members` reduces to zero by `basis`.
template <class Op>
bool all_reduce_to_zero(const std::vector<Op>& members, const std::vector<Op>& basis, const TermOrder& order,
                        StepBudget* budget = nullptr);

// Generators in_(-w,w)(g). Requires a certified basis.
std::vector<PolyOperator> initial_ideal_weight(const GroebnerBasis<PolyOperator>& G, const WeightVector& w);

// Standard monomials of a basis of an R-mode ideal, sorted descending by
// the order. Throws InfiniteStaircase when some differential variable has
// no pure power among the initial monomials.
std::vector<Monomial> standard_monomials(const std::vector<RatOperator>& G, const TermOrder& order);

struct RankResult {
  std::size_t rank = 0;
  std::vector<Monomial> standard;
  GroebnerBasis<RatOperator> basis;
};

// Runs Buchberger under the block order for holonomic rank and counts
// standard monomials.
RankResult holonomic_rank(const std::vector<RatOperator>& generators, const BuchbergerOptions& options = {});

extern template struct StandardRepresentation<PolyOperator>;
extern template struct StandardRepresentation<RatOperator>;

}  // namespace fbrank
