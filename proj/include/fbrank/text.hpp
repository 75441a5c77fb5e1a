#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "fbrank/order.hpp"
#include "fbrank/polynomial.hpp"
#include "fbrank/ratfun.hpp"
#include "fbrank/universe.hpp"
#include "fbrank/weyl.hpp"

namespace fbrank {

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string to_text(const Rational& c);
std::string to_text(const Monomial& m, const VarUniverse& u);
std::string to_text(const Polynomial& p, const VarUniverse& u);
std::string to_text(const RationalFunction& f, const VarUniverse& u);
// Terms sorted by the given order when one is supplied, canonically otherwise.
std::string to_text(const PolyOperator& p, const TermOrder* order = nullptr);
std::string to_text(const RatOperator& p, const TermOrder* order = nullptr);

// Grammar: sums, products, integer powers, parentheses, rationals p/q and
// variable names of the universe. Products are Weyl products, so
// "dy1*y1" parses to y1*dy1 + 1. Division only by scalars.
Polynomial parse_polynomial(std::string_view text, const UniversePtr& u);
RationalFunction parse_ratfun(std::string_view text, const UniversePtr& u);
PolyOperator parse_operator(std::string_view text, const UniversePtr& u, Mode mode = Mode::D);
RatOperator parse_rat_operator(std::string_view text, const UniversePtr& u);

}  // namespace fbrank
