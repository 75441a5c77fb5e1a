#pragma once

#include <random>
#include <vector>

#include "fbrank/polynomial.hpp"
#include "fbrank/weyl.hpp"

namespace fbtest {

using namespace fbrank;

inline Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Monomial random_monomial(std::mt19937_64& rng, const std::vector<VarIndex>& vars, int max_exp = 2,
                                int max_vars = 3) {
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  std::uniform_int_distribution<int> ex(1, max_exp), cnt(0, max_vars);
  std::vector<Monomial::Factor> f;
  int k = cnt(rng);
  for (int i = 0; i < k; ++i) f.emplace_back(vars[pick(rng)], static_cast<Exponent>(ex(rng)));
  Monomial m;
  for (auto& [v, e] : f) m = m * Monomial::var(v, e);
  return m;
}

inline Polynomial random_polynomial(std::mt19937_64& rng, const std::vector<VarIndex>& vars, int terms = 4,
                                    int max_exp = 2) {
  std::vector<Term> ts;
  std::uniform_int_distribution<int> nt(0, terms);
  int k = nt(rng);
  for (int i = 0; i < k; ++i) ts.push_back({random_monomial(rng, vars, max_exp), small_rational(rng)});
  return Polynomial::from_terms(std::move(ts));
}

inline PolyOperator random_operator(std::mt19937_64& rng, const UniversePtr& u, Mode mode,
                                    const std::vector<VarIndex>& vars, int terms = 3) {
  std::vector<PolyOperator::Term> ts;
  std::uniform_int_distribution<int> nt(1, terms);
  int k = nt(rng);
  for (int i = 0; i < k; ++i) ts.push_back({random_monomial(rng, vars, 2, 3), small_rational(rng)});
  return PolyOperator::from_terms(u, mode, std::move(ts));
}

}  // namespace fbtest
