#include "fbrank/groebner.hpp"

#include "fraction_free.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <type_traits>

namespace fbrank {

void StepBudget::charge(std::uint64_t steps) {
  used_ += steps;
  if (used_ > limit_)
    throw BudgetExceeded("reduction step budget of " + std::to_string(limit_) + " exceeded");
}

std::uint64_t StepBudget::default_limit() {
  if (const char* env = std::getenv("FBRANK_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefault;
}

namespace {

using detail::OrderGreater;

template <class S>
S divide_scalar(const S& a, const S& b) {
  return S(a / b);
}

template <class Op>
std::vector<typename Op::Term> leading_terms(const std::vector<Op>& G, const TermOrder& order) {
  std::vector<typename Op::Term> leads;
  leads.reserve(G.size());
  for (const auto& g : G) {
    if (g.is_zero()) throw std::invalid_argument("zero operator in a reducer set");
    leads.push_back(g.leading_term(order));
  }
  return leads;
}

}  // namespace

namespace {

// Untracked R-mode reduction without rational-function arithmetic. Each
// remainder term carries the scale in force when it left, so the result
// matches the rational-function loop exactly.
StandardRepresentation<RatOperator> fraction_free_normal_form(const RatOperator& f, const std::vector<RatOperator>& G,
                                                              const TermOrder& order, const ReduceOptions& options) {
  std::vector<detail::Cleared> cleared;
  cleared.reserve(G.size());
  for (const auto& g : G) cleared.push_back(detail::clear(g, order));
  auto [fp, scale] = to_polynomial(f);
  detail::Work work = detail::to_work(fp, order);
  std::vector<RatOperator::Term> rem;
  auto trace = detail::reduce(work, scale, cleared, options, nullptr, &rem);
  StandardRepresentation<RatOperator> rep;
  rep.target = f;
  rep.chain = std::move(trace.chain);
  rep.steps = trace.steps;
  rep.remainder = RatOperator::from_terms(f.universe(), Mode::R, std::move(rem));
  return rep;
}

}  // namespace

template <class Op>
StandardRepresentation<Op> normal_form(const Op& f, const std::vector<Op>& G, const TermOrder& order,
                                       const ReduceOptions& options) {
  if constexpr (std::is_same_v<Op, RatOperator>) {
    if (options.fraction_free && !options.track && !f.is_zero()) {
      for (const auto& g : G) f.require_compatible(g);
      return fraction_free_normal_form(f, G, order, options);
    }
  }
  using S = typename Op::ScalarType;
  using T = typename Op::Term;
  for (const auto& g : G) f.require_compatible(g);
  const auto leads = leading_terms(G, order);

  detail::DivisorPicker picker(options, G.size());

  std::map<Monomial, S, OrderGreater> work(OrderGreater{&order});
  for (const auto& t : f.terms()) work.emplace(t.monomial, t.coeff);

  StandardRepresentation<Op> rep;
  rep.target = f;
  std::vector<T> rem;
  std::vector<std::vector<T>> cof(options.track ? G.size() : 0);
  while (!work.empty()) {
    auto it = work.begin();
    const Monomial& m = it->first;
    auto pick = picker.pick(m, leads);
    if (!pick) {
      rem.push_back(T{it->first, it->second});
      work.erase(it);
      continue;
    }
    if (options.budget) options.budget->charge();
    ++rep.steps;
    const std::size_t k = *pick;
    Monomial q = m.quotient(leads[k].monomial);
    S c = divide_scalar<S>(it->second, leads[k].coeff);
    Monomial lead = m;
    Op prod = G[k].left_multiply(q, c);
    for (const auto& t : prod.terms()) {
      auto [pos, inserted] = work.try_emplace(t.monomial, -t.coeff);
      if (!inserted) {
        pos->second -= t.coeff;
        if (scalar_is_zero(pos->second)) work.erase(pos);
      }
    }
    if (work.count(lead)) throw std::logic_error("term order is not compatible with the Weyl product");
    if (options.track) cof[k].push_back(T{std::move(q), std::move(c)});
    rep.chain.push_back(k);
  }

  const auto& u = f.universe();
  rep.remainder = Op::from_terms(u, f.mode(), std::move(rem));
  if (options.track)
    for (std::size_t k = 0; k < G.size(); ++k)
      if (!cof[k].empty()) rep.cofactors.push_back({Op::from_terms(u, f.mode(), std::move(cof[k])), k});
  return rep;
}

template <class Op>
std::optional<std::string> verify_representation(const StandardRepresentation<Op>& rep, const std::vector<Op>& G,
                                                 const TermOrder& order) {
  Op sum = rep.remainder;
  const bool has_target = !rep.target.is_zero();
  for (const auto& c : rep.cofactors) {
    Op prod = c.multiplier * G.at(c.index);
    if (has_target && !prod.is_zero() &&
        order.compare(prod.leading_term(order).monomial, rep.target.leading_term(order).monomial) > 0)
      return "cofactor product for generator " + std::to_string(c.index) + " exceeds the target's initial monomial";
    sum += prod;
  }
  if (!(sum == rep.target)) return std::string("cofactors and remainder do not reproduce the target");
  const auto leads = leading_terms(G, order);
  for (const auto& t : rep.remainder.terms())
    for (std::size_t k = 0; k < leads.size(); ++k)
      if (leads[k].monomial.divides(t.monomial))
        return "remainder term divisible by the initial monomial of generator " + std::to_string(k);
  return std::nullopt;
}

template <class Op>
Op s_pair(const Op& f, const Op& g, const TermOrder& order) {
  using S = typename Op::ScalarType;
  f.require_compatible(g);
  const auto& lf = f.leading_term(order);
  const auto& lg = g.leading_term(order);
  Monomial l = lf.monomial.lcm(lg.monomial);
  Op a = f.left_multiply(l.quotient(lf.monomial), divide_scalar<S>(S(1), lf.coeff));
  Op b = g.left_multiply(l.quotient(lg.monomial), divide_scalar<S>(S(1), lg.coeff));
  return a - b;
}

template <class Op>
bool initials_coprime(const Op& f, const Op& g, const TermOrder& order) {
  return f.leading_term(order).monomial.coprime(g.leading_term(order).monomial);
}

template <class Op>
Op make_monic(const Op& f, const TermOrder& order) {
  using S = typename Op::ScalarType;
  if (f.is_zero()) return f;
  return f.scaled(divide_scalar<S>(S(1), f.leading_term(order).coeff));
}

template <class Op>
GroebnerReport<Op> is_groebner(const std::vector<Op>& G, const TermOrder& order, const ReduceOptions& options) {
  GroebnerReport<Op> report;
  ReduceOptions opts = options;
  opts.track = false;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i + 1; j < G.size(); ++j) {
      PairRecord<Op> rec;
      rec.i = i;
      rec.j = j;
      rec.coprime = initials_coprime(G[i], G[j], order);
      auto rep = normal_form(s_pair(G[i], G[j], order), G, order, opts);
      rec.chain = std::move(rep.chain);
      rec.remainder = std::move(rep.remainder);
      report.steps += rep.steps;
      if (!rec.remainder.is_zero()) report.is_groebner = false;
      report.pairs.push_back(std::move(rec));
    }
  return report;
}

namespace {

template <class Op>
void interreduce(std::vector<Op>& G, const TermOrder& order, StepBudget* budget, bool fraction_free) {
  std::vector<Op> kept;
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Monomial& mi = G[i].leading_term(order).monomial;
    bool redundant = false;
    for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
      if (i == j) continue;
      const Monomial& mj = G[j].leading_term(order).monomial;
      if (mj.divides(mi) && (!(mj == mi) || j < i)) redundant = true;
    }
    if (!redundant) kept.push_back(G[i]);
  }
  std::vector<Op> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    std::vector<Op> others;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != i) others.push_back(kept[j]);
    ReduceOptions ro;
    ro.budget = budget;
    ro.fraction_free = fraction_free;
    Op r = others.empty() ? kept[i] : normal_form(kept[i], others, order, ro).remainder;
    out.push_back(make_monic(r, order));
  }
  G = std::move(out);
}

}  // namespace

namespace {

// Buchberger over R on primitive polynomial-coefficient representatives.
// Replacing an element by a unit multiple in R changes neither its initial
// monomial nor the ideal, so S-pairs, reductions and the commutator test
// all run in D-mode arithmetic. The reduced basis is made monic at the end
// and is therefore the unique reduced basis.
GroebnerBasis<RatOperator> buchberger_rational(const std::vector<RatOperator>& input, const TermOrder& order,
                                               const BuchbergerOptions& options) {
  GroebnerBasis<RatOperator> result;
  result.order = order;
  result.mode = Mode::R;
  StepBudget local;
  StepBudget* budget = options.budget ? options.budget : &local;
  UniversePtr universe;
  auto primitive = [&](detail::Work w) {
    detail::make_primitive(w);
    return detail::clear(detail::from_work(w, universe), order);
  };
  std::vector<detail::Cleared> G;
  for (const auto& g : input) {
    if (g.is_zero()) continue;
    if (!universe) universe = g.universe();
    G.push_back(primitive(detail::to_work(to_polynomial(g).first, order)));
  }
  if (G.empty()) throw std::invalid_argument("buchberger needs a nonzero generator");

  struct Pair {
    std::size_t i, j;
  };
  std::deque<Pair> pending;
  auto add_pairs = [&](std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) pending.push_back({i, k});
  };
  for (std::size_t k = 0; k < G.size(); ++k) add_pairs(k);

  // Remainder of w by `by`, on the common scale.
  auto reduce_fully = [&](detail::Work w, const std::vector<detail::Cleared>& by) {
    Polynomial scale(1);
    detail::Work rem(detail::OrderGreater{&order});
    ReduceOptions ro;
    ro.budget = budget;
    detail::reduce(w, scale, by, ro, &rem, nullptr);
    return rem;
  };

  // Pairs already settled, for the chain criterion.
  std::set<std::pair<std::size_t, std::size_t>> treated;
  auto is_treated = [&](std::size_t a, std::size_t b) { return treated.count({std::min(a, b), std::max(a, b)}) > 0; };

  while (!pending.empty()) {
    std::vector<Pair> batch(pending.begin(), pending.end());
    pending.clear();
    const std::vector<detail::Cleared> snapshot = G;
    auto lcm_degree = [&](const Pair& p) { return snapshot[p.i].monomial.lcm(snapshot[p.j].monomial).degree(); };
    std::stable_sort(batch.begin(), batch.end(),
                     [&](const Pair& a, const Pair& b) { return lcm_degree(a) < lcm_degree(b); });
    // Chain decisions depend only on pair order, so they are settled first
    // and the remaining reductions are independent of each other.
    std::vector<bool> chained(batch.size(), false);
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const Pair& p = batch[b];
      treated.insert({p.i, p.j});
      // Chain criterion: some initial divides the lcm and both pairs through
      // it are settled; left multiples of their representations stay below
      // the lcm, so this pair needs no reduction.
      Monomial l = snapshot[p.i].monomial.lcm(snapshot[p.j].monomial);
      for (std::size_t k = 0; options.chain_criterion && k < snapshot.size() && !chained[b]; ++k)
        chained[b] = k != p.i && k != p.j && snapshot[k].monomial.divides(l) && is_treated(k, p.i) &&
                     is_treated(k, p.j);
    }
    const std::uint64_t headroom = budget->limit() - std::min(budget->limit(), budget->used());
    struct Reduced {
      std::optional<detail::Work> remainder;
      std::uint64_t steps = 0;
    };
    auto reduce_pair = [&](std::size_t b) -> Reduced {
      if (chained[b]) return {};
      const auto& f = snapshot[batch[b].i];
      const auto& g = snapshot[batch[b].j];
      StepBudget pair_budget(headroom);
      detail::Work w(detail::OrderGreater{&order});
      if (f.monomial.coprime(g.monomial)) {
        // With coprime initials the S-pair equals a scalar times [f, g]
        // plus left multiples of f and g below the lcm, so certifying the
        // commutator certifies the pair.
        PolyOperator c = commutator(f.op, g.op);
        if (c.is_zero()) return {};
        w = detail::to_work(c, order);
      } else {
        w = detail::s_pair_work(f, g, order);
      }
      Polynomial scale(1);
      detail::Work rem(detail::OrderGreater{&order});
      ReduceOptions ro;
      ro.budget = &pair_budget;
      auto trace = detail::reduce(w, scale, snapshot, ro, &rem, nullptr);
      return {std::move(rem), trace.steps};
    };
    std::vector<Reduced> remainders(batch.size());
    if (options.jobs > 1 && batch.size() > 1) {
      std::vector<std::future<Reduced>> futs;
      for (std::size_t b = 0; b < batch.size(); ++b) {
        futs.push_back(std::async(std::launch::async, reduce_pair, b));
        if (futs.size() == options.jobs || b + 1 == batch.size()) {
          std::size_t base = b + 1 - futs.size();
          for (std::size_t f = 0; f < futs.size(); ++f) remainders[base + f] = futs[f].get();
          futs.clear();
        }
      }
    } else {
      for (std::size_t b = 0; b < batch.size(); ++b) remainders[b] = reduce_pair(b);
    }

    // Merge in pair order.
    for (std::size_t b = 0; b < batch.size(); ++b) {
      if (!remainders[b].remainder) {
        ++result.pairs_skipped;
        continue;
      }
      ++result.pairs_reduced;
      budget->charge(remainders[b].steps);
      detail::Work r = std::move(*remainders[b].remainder);
      if (r.empty()) continue;
      if (G.size() > snapshot.size()) {
        r = reduce_fully(std::move(r), G);
        if (r.empty()) continue;
      }
      G.push_back(primitive(std::move(r)));
      ++result.elements_added;
      if (G.size() > options.max_elements)
        throw BudgetExceeded("basis grew beyond " + std::to_string(options.max_elements) + " elements");
      add_pairs(G.size() - 1);
    }
  }

  if (options.interreduce) {
    std::vector<detail::Cleared> kept;
    for (std::size_t i = 0; i < G.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < G.size() && !redundant; ++j)
        if (i != j && G[j].monomial.divides(G[i].monomial) && (!(G[j].monomial == G[i].monomial) || j < i))
          redundant = true;
      if (!redundant) kept.push_back(G[i]);
    }
    std::vector<detail::Cleared> reduced;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      std::vector<detail::Cleared> others;
      for (std::size_t j = 0; j < kept.size(); ++j)
        if (j != i) others.push_back(kept[j]);
      // The leading term is irreducible by the others; reduce the tail.
      detail::Work w = detail::to_work(kept[i].op, order);
      detail::Work r = others.empty() ? w : reduce_fully(std::move(w), others);
      reduced.push_back(primitive(std::move(r)));
    }
    G = std::move(reduced);
  }
  for (const auto& g : G) result.generators.push_back(make_monic(to_rational(g.op), order));
  result.certified = true;
  result.steps = budget->used();
  return result;
}

}  // namespace

template <class Op>
GroebnerBasis<Op> buchberger(const std::vector<Op>& input, const TermOrder& order, const BuchbergerOptions& options) {
  if constexpr (std::is_same_v<Op, RatOperator>)
    if (options.fraction_free) return buchberger_rational(input, order, options);
  GroebnerBasis<Op> result;
  result.order = order;
  StepBudget local;
  StepBudget* budget = options.budget ? options.budget : &local;
  std::vector<Op> G;
  for (const auto& g : input)
    if (!g.is_zero()) G.push_back(make_monic(g, order));
  if (G.empty()) throw std::invalid_argument("buchberger needs a nonzero generator");
  result.mode = G.front().mode();
  const bool graded = result.mode == Mode::Dh;

  struct Pair {
    std::size_t i, j;
    std::uint64_t degree;
  };
  std::deque<Pair> pending;
  auto add_pairs = [&](std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
      Monomial l = G[i].leading_term(order).monomial.lcm(G[k].leading_term(order).monomial);
      pending.push_back({i, k, l.degree()});
    }
  };
  for (std::size_t k = 0; k < G.size(); ++k) add_pairs(k);

  while (!pending.empty()) {
    std::vector<Pair> batch;
    if (graded) {
      std::uint64_t dmin = pending.front().degree;
      for (const auto& p : pending) dmin = std::min(dmin, p.degree);
      std::deque<Pair> rest;
      for (const auto& p : pending) (p.degree == dmin ? batch.push_back(p) : rest.push_back(p));
      pending = std::move(rest);
    } else {
      batch.assign(pending.begin(), pending.end());
      pending.clear();
    }

    // Reduce the batch against a frozen snapshot.
    const std::vector<Op> snapshot = G;
    struct Reduced {
      std::optional<Op> remainder;
      std::uint64_t steps = 0;
    };
    const std::uint64_t headroom = budget->limit() - std::min(budget->limit(), budget->used());
    auto reduce_pair = [&](const Pair& p) -> Reduced {
      if (initials_coprime(snapshot[p.i], snapshot[p.j], order) &&
          commutator(snapshot[p.i], snapshot[p.j]).is_zero())
        return {};
      StepBudget pair_budget(headroom);
      ReduceOptions ro;
      ro.budget = &pair_budget;
      ro.fraction_free = options.fraction_free;
      auto rep = normal_form(s_pair(snapshot[p.i], snapshot[p.j], order), snapshot, order, ro);
      return {std::move(rep.remainder), rep.steps};
    };
    std::vector<Reduced> remainders(batch.size());
    if (options.jobs > 1 && batch.size() > 1) {
      std::vector<std::future<Reduced>> futs;
      for (std::size_t b = 0; b < batch.size(); ++b) {
        futs.push_back(std::async(std::launch::async, reduce_pair, batch[b]));
        if (futs.size() == options.jobs || b + 1 == batch.size()) {
          std::size_t base = b + 1 - futs.size();
          for (std::size_t f = 0; f < futs.size(); ++f) remainders[base + f] = futs[f].get();
          futs.clear();
        }
      }
    } else {
      for (std::size_t b = 0; b < batch.size(); ++b) remainders[b] = reduce_pair(batch[b]);
    }

    // Merge in pair order so the result is independent of scheduling.
    for (std::size_t b = 0; b < batch.size(); ++b) {
      if (!remainders[b].remainder) {
        ++result.pairs_skipped;
        continue;
      }
      ++result.pairs_reduced;
      budget->charge(remainders[b].steps);
      Op r = std::move(*remainders[b].remainder);
      if (r.is_zero()) continue;
      if (G.size() > snapshot.size()) {
        ReduceOptions ro;
        ro.budget = budget;
        ro.fraction_free = options.fraction_free;
        r = normal_form(r, G, order, ro).remainder;
        if (r.is_zero()) continue;
      }
      G.push_back(make_monic(r, order));
      ++result.elements_added;
      if (G.size() > options.max_elements)
        throw BudgetExceeded("basis grew beyond " + std::to_string(options.max_elements) + " elements");
      add_pairs(G.size() - 1);
    }
  }
  if (options.interreduce) interreduce(G, order, budget, options.fraction_free);
  result.generators = std::move(G);
  result.certified = true;
  result.steps = budget->used();
  return result;
}

template <class Op>
bool all_reduce_to_zero(const std::vector<Op>& members, const std::vector<Op>& basis, const TermOrder& order,
                        StepBudget* budget) {
  ReduceOptions ro;
  ro.budget = budget;
  for (const auto& m : members)
    if (!normal_form(m, basis, order, ro).remainder.is_zero()) return false;
  return true;
}

std::vector<PolyOperator> initial_ideal_weight(const GroebnerBasis<PolyOperator>& G, const WeightVector& w) {
  if (!G.certified) throw std::invalid_argument("initial ideal needs a certified basis");
  std::vector<PolyOperator> out;
  for (const auto& g : G.generators) out.push_back(g.initial_form(w));
  return out;
}

std::vector<Monomial> standard_monomials(const std::vector<RatOperator>& G, const TermOrder& order) {
  if (G.empty()) throw InfiniteStaircase("empty basis");
  const VarUniverse& u = *G.front().universe();
  std::vector<Monomial> leads;
  for (const auto& g : G) leads.push_back(g.leading_term(order).monomial);
  for (VarIndex v : u.differentials()) {
    bool pure = std::any_of(leads.begin(), leads.end(), [v](const Monomial& m) {
      return m.factors().size() == 1 && m.factors().front().first == v;
    });
    if (!pure) throw InfiniteStaircase("no pure power of " + u.name(v) + " among the initial monomials");
  }
  auto standard = [&](const Monomial& m) {
    return std::none_of(leads.begin(), leads.end(), [&m](const Monomial& l) { return l.divides(m); });
  };
  std::vector<Monomial> out;
  std::set<Monomial, CanonicalGreater> seen;
  std::deque<Monomial> queue;
  if (standard(Monomial{})) {
    queue.push_back(Monomial{});
    seen.insert(Monomial{});
  }
  while (!queue.empty()) {
    Monomial m = queue.front();
    queue.pop_front();
    out.push_back(m);
    for (VarIndex v : u.differentials()) {
      Monomial next = m * Monomial::var(v);
      if (!seen.count(next) && standard(next)) {
        seen.insert(next);
        queue.push_back(next);
      }
    }
  }
  std::sort(out.begin(), out.end(), [&order](const Monomial& a, const Monomial& b) { return order.greater(a, b); });
  return out;
}

RankResult holonomic_rank(const std::vector<RatOperator>& generators, const BuchbergerOptions& options) {
  if (generators.empty()) throw std::invalid_argument("holonomic_rank needs generators");
  TermOrder order = make_prop2_order(generators.front().universe());
  RankResult r;
  r.basis = buchberger(generators, order, options);
  r.standard = standard_monomials(r.basis.generators, order);
  r.rank = r.standard.size();
  return r;
}

#define FBRANK_INSTANTIATE(Op)                                                                                      \
  template StandardRepresentation<Op> normal_form(const Op&, const std::vector<Op>&, const TermOrder&,              \
                                                  const ReduceOptions&);                                            \
  template std::optional<std::string> verify_representation(const StandardRepresentation<Op>&,                      \
                                                            const std::vector<Op>&, const TermOrder&);              \
  template Op s_pair(const Op&, const Op&, const TermOrder&);                                                       \
  template bool initials_coprime(const Op&, const Op&, const TermOrder&);                                           \
  template Op make_monic(const Op&, const TermOrder&);                                                              \
  template GroebnerReport<Op> is_groebner(const std::vector<Op>&, const TermOrder&, const ReduceOptions&);          \
  template GroebnerBasis<Op> buchberger(const std::vector<Op>&, const TermOrder&, const BuchbergerOptions&);        \
  template bool all_reduce_to_zero(const std::vector<Op>&, const std::vector<Op>&, const TermOrder&, StepBudget*); \
  template struct StandardRepresentation<Op>;

FBRANK_INSTANTIATE(PolyOperator)
FBRANK_INSTANTIATE(RatOperator)

}  // namespace fbrank
