#include "fraction_free.hpp"

#include <algorithm>
#include <stdexcept>

namespace fbrank::detail {

DivisorPicker::DivisorPicker(const ReduceOptions& options, std::size_t count)
    : policy_(options.policy), rng_(options.seed), candidates_(options.priority) {
  std::vector<bool> seen(count, false);
  for (std::size_t k : candidates_) seen.at(k) = true;
  for (std::size_t k = 0; k < count; ++k)
    if (!seen[k]) candidates_.push_back(k);
}

Work to_work(const PolyOperator& p, const TermOrder& order) {
  Work w(OrderGreater{&order});
  for (auto& [m, c] : by_differential_part(p)) w.emplace(m, std::move(c));
  return w;
}

PolyOperator from_work(const Work& w, const UniversePtr& universe) {
  std::vector<PolyOperator::Term> terms;
  for (const auto& [m, c] : w)
    for (const auto& t : c.terms()) terms.push_back({t.monomial * m, t.coeff});
  return PolyOperator::from_terms(universe, Mode::D, std::move(terms));
}

Cleared clear(PolyOperator p, const TermOrder& order) {
  if (p.is_zero()) throw std::invalid_argument("zero operator in a reducer set");
  Work w = to_work(p, order);
  auto lead = w.begin();
  return Cleared{std::move(p), lead->first, lead->second};
}

Cleared clear(const RatOperator& p, const TermOrder& order) { return clear(to_polynomial(p).first, order); }

void make_primitive(Work& w) {
  if (w.empty()) return;
  std::vector<const Polynomial*> cs;
  for (const auto& [m, c] : w) cs.push_back(&c);
  std::sort(cs.begin(), cs.end(), [](const Polynomial* a, const Polynomial* b) { return a->size() < b->size(); });
  Polynomial g = *cs.front();
  for (std::size_t k = 1; k < cs.size() && !g.is_constant(); ++k) g = gcd(g, *cs[k]);
  if (!g.is_constant())
    for (auto& [m, c] : w) c = *divide_exact(c, g);
  Rational s = 1 / w.begin()->second.leading_coeff();
  for (auto& [m, c] : w) c *= s;
}

namespace {

using Grouped = std::vector<std::pair<Monomial, Polynomial>>;

void subtract_scaled(Work& work, const Grouped& multiple, const Polynomial& b) {
  for (const auto& [m, c] : multiple) {
    Polynomial t = b * c;
    auto [pos, inserted] = work.try_emplace(m, -t);
    if (!inserted) {
      pos->second -= t;
      if (pos->second.is_zero()) work.erase(pos);
    }
  }
}

bool is_one(const Polynomial& p) { return p.is_constant() && p.constant_value() == 1; }

}  // namespace

ReduceTrace reduce(Work& work, Polynomial& scale, const std::vector<Cleared>& G,
                   const ReduceOptions& options, Work* carried, std::vector<RatOperator::Term>* emitted) {
  DivisorPicker picker(options, G.size());
  auto key_less = [](const std::pair<std::size_t, Monomial>& a, const std::pair<std::size_t, Monomial>& b) {
    if (a.first != b.first) return a.first < b.first;
    return grlex_compare(a.second, b.second) < 0;
  };
  std::map<std::pair<std::size_t, Monomial>, Grouped, decltype(key_less)> multiples(key_less);
  auto multiple = [&](std::size_t k, const Monomial& q) -> const Grouped& {
    auto key = std::make_pair(k, q);
    auto it = multiples.find(key);
    if (it == multiples.end()) it = multiples.emplace(key, by_differential_part(G[k].op.left_multiply(q, 1))).first;
    return it->second;
  };

  ReduceTrace trace;
  while (!work.empty()) {
    auto it = work.begin();
    auto pick = picker.pick(it->first, G);
    if (!pick) {
      if (carried)
        carried->emplace(it->first, std::move(it->second));
      else
        emitted->push_back({it->first, RationalFunction(it->second, scale)});
      work.erase(it);
      continue;
    }
    if (options.budget) options.budget->charge();
    ++trace.steps;
    const std::size_t k = *pick;
    const Monomial lead = it->first;
    Polynomial g = gcd(it->second, G[k].coeff);
    Polynomial a = *divide_exact(G[k].coeff, g);
    Polynomial b = *divide_exact(it->second, g);
    if (!is_one(a)) {
      for (auto& [m, c] : work) c *= a;
      if (carried)
        for (auto& [m, c] : *carried) c *= a;
      scale *= a;
    }
    subtract_scaled(work, multiple(k, lead.quotient(G[k].monomial)), b);
    if (work.count(lead)) throw std::logic_error("term order is not compatible with the Weyl product");
    trace.chain.push_back(k);
  }
  return trace;
}

Work s_pair_work(const Cleared& f, const Cleared& g, const TermOrder& order) {
  Monomial l = f.monomial.lcm(g.monomial);
  Polynomial d = gcd(f.coeff, g.coeff);
  Polynomial bf = *divide_exact(g.coeff, d), bg = *divide_exact(f.coeff, d);
  Work w(OrderGreater{&order});
  subtract_scaled(w, by_differential_part(f.op.left_multiply(l.quotient(f.monomial), 1)), -bf);
  subtract_scaled(w, by_differential_part(g.op.left_multiply(l.quotient(g.monomial), 1)), bg);
  if (w.count(l)) throw std::logic_error("S-pair leading terms did not cancel");
  return w;
}

}  // namespace fbrank::detail
