#include "fbrank/text.hpp"

#include <cctype>
#include <sstream>

namespace fbrank {

std::string to_text(const Rational& c) { return c.get_str(); }

std::string to_text(const Monomial& m, const VarUniverse& u) {
  if (m.is_one()) return "1";
  // Normal ordering: coefficient-side variables first, differentials last.
  std::string front, back;
  for (const auto& [v, e] : m.factors()) {
    std::string f = u.name(v);
    if (e > 1) f += "^" + std::to_string(e);
    std::string& dst = u.is_differential(v) ? back : front;
    if (!dst.empty()) dst += "*";
    dst += f;
  }
  if (front.empty()) return back;
  if (back.empty()) return front;
  return front + "*" + back;
}

namespace {

void append_term(std::string& out, const Rational& c, const std::string& mono) {
  Rational a = abs(c);
  bool neg = sgn(c) < 0;
  if (out.empty())
    out += neg ? "-" : "";
  else
    out += neg ? " - " : " + ";
  if (mono == "1")
    out += to_text(a);
  else if (a == 1)
    out += mono;
  else
    out += to_text(a) + "*" + mono;
}

}  // namespace

std::string to_text(const Polynomial& p, const VarUniverse& u) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& t : p.terms()) append_term(out, t.coeff, to_text(t.monomial, u));
  return out;
}

std::string to_text(const RationalFunction& f, const VarUniverse& u) {
  if (f.is_polynomial()) return to_text(f.num() * Rational(1 / f.den().constant_value()), u);
  return "(" + to_text(f.num(), u) + ")/(" + to_text(f.den(), u) + ")";
}

std::string to_text(const PolyOperator& p, const TermOrder* order) {
  if (p.is_zero()) return "0";
  std::string out;
  auto terms = order ? p.sorted(*order) : p.terms();
  for (const auto& t : terms) append_term(out, t.coeff, to_text(t.monomial, *p.universe()));
  return out;
}

std::string to_text(const RatOperator& p, const TermOrder* order) {
  if (p.is_zero()) return "0";
  const VarUniverse& u = *p.universe();
  std::string out;
  auto terms = order ? p.sorted(*order) : p.terms();
  for (const auto& t : terms) {
    const RationalFunction& c = t.coeff;
    if (c.is_constant()) {
      append_term(out, c.constant_value(), to_text(t.monomial, u));
      continue;
    }
    if (!out.empty()) out += " + ";
    std::string cs = to_text(c, u);
    if (c.is_polynomial()) cs = "(" + cs + ")";
    out += t.monomial.is_one() ? cs : cs + "*" + to_text(t.monomial, u);
  }
  return out;
}

namespace {

template <class Op>
class Parser {
 public:
  Parser(std::string_view text, UniversePtr u, Mode mode) : s_(text), u_(std::move(u)), mode_(mode) {}

  Op parse() {
    Op r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Op constant(const Rational& c) const {
    if constexpr (std::is_same_v<Op, RatOperator>)
      return Op::constant(u_, mode_, RationalFunction(c));
    else
      return Op::constant(u_, mode_, c);
  }

  Op expr() {
    Op acc = eat('-') ? -term() : term();
    for (;;) {
      if (eat('+'))
        acc += term();
      else if (eat('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Op term() {
    Op acc = power();
    for (;;) {
      if (eat('*')) {
        acc = acc * power();
      } else if (eat('/')) {
        Op d = power();
        acc = divide(acc, d);
      } else {
        return acc;
      }
    }
  }

  Op divide(const Op& num, const Op& den) {
    if constexpr (std::is_same_v<Op, RatOperator>) {
      if (den.size() != 1 || !den.terms().front().monomial.is_one()) fail("division by a non-scalar");
      return num.scaled(den.terms().front().coeff.inverse());
    } else {
      if (den.size() != 1 || !den.terms().front().monomial.is_one()) fail("division by a non-constant");
      return num.scaled(1 / den.terms().front().coeff);
    }
  }

  Op power() {
    Op base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      unsigned e = static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start))));
      Op r = constant(1);
      for (unsigned k = 0; k < e; ++k) r = r * base;
      return r;
    }
    return base;
  }

  Op atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      Op r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (ch == '-') {
      ++pos_;
      return -atom();
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return constant(Rational(std::string(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      auto v = u_->find(name);
      if (!v) fail("unknown variable '" + name + "'");
      if (mode_ == Mode::D && u_->kind(*v) == VarKind::Homogenizer) fail("h is not allowed in mode D");
      return Op::variable(u_, mode_, *v);
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  UniversePtr u_;
  Mode mode_;
};

}  // namespace

PolyOperator parse_operator(std::string_view text, const UniversePtr& u, Mode mode) {
  if (mode == Mode::R) throw ModeMismatch("use parse_rat_operator for mode R");
  return Parser<PolyOperator>(text, u, mode).parse();
}

RatOperator parse_rat_operator(std::string_view text, const UniversePtr& u) {
  return Parser<RatOperator>(text, u, Mode::R).parse();
}

Polynomial parse_polynomial(std::string_view text, const UniversePtr& u) {
  PolyOperator op = parse_operator(text, u, u->options().homogenized ? Mode::Dh : Mode::D);
  std::vector<Term> terms;
  for (const auto& t : op.terms()) {
    if (!differential_part(t.monomial, *u).is_one()) throw ParseError("differential variable in polynomial");
    terms.push_back({t.monomial, t.coeff});
  }
  return Polynomial::from_terms(std::move(terms));
}

RationalFunction parse_ratfun(std::string_view text, const UniversePtr& u) {
  RatOperator op = parse_rat_operator(text, u);
  if (op.is_zero()) return {};
  if (op.size() != 1 || !op.terms().front().monomial.is_one())
    throw ParseError("differential variable in rational function");
  return op.terms().front().coeff;
}

}  // namespace fbrank
