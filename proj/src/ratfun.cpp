#include "fbrank/ratfun.hpp"

namespace fbrank {

namespace {

Polynomial quo(const Polynomial& p, const Polynomial& q) {
  if (q.is_constant()) return p * Rational(1 / q.constant_value());
  auto r = divide_exact(p, q);
  if (!r) throw std::logic_error("RationalFunction: inexact division by gcd");
  return *r;
}

}  // namespace

RationalFunction RationalFunction::make_monic(Polynomial num, Polynomial den) {
  if (num.is_zero()) return RationalFunction();
  Rational lc = den.leading_coeff();
  if (lc != 1) {
    Rational inv = 1 / lc;
    num *= inv;
    den *= inv;
  }
  return RationalFunction(Raw{}, std::move(num), std::move(den));
}

RationalFunction::RationalFunction(const Polynomial& num, const Polynomial& den) : den_(1) {
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  if (num.is_zero()) return;
  if (den.is_constant()) {
    num_ = num * Rational(1 / den.constant_value());
    return;
  }
  Polynomial g = gcd(num, den);
  *this = make_monic(quo(num, g), quo(den, g));
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(Raw{}, -num_, den_); }

RationalFunction operator+(const RationalFunction& f, const RationalFunction& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  if (f.den_.is_constant() && g.den_.is_constant()) return RationalFunction(f.num_ + g.num_);
  if (f.den_ == g.den_) {
    Polynomial num = f.num_ + g.num_;
    if (num.is_zero()) return {};
    Polynomial c = gcd(num, f.den_);
    return RationalFunction::make_monic(quo(num, c), quo(f.den_, c));
  }
  if (g.den_.is_constant()) {
    // den(f) is coprime to num(f); adding a polynomial keeps it coprime.
    return RationalFunction(RationalFunction::Raw{}, f.num_ + g.num_ * f.den_, f.den_);
  }
  if (f.den_.is_constant()) return g + f;
  Polynomial d = gcd(f.den_, g.den_);
  Polynomial fd = quo(f.den_, d), gd = quo(g.den_, d);
  Polynomial num = f.num_ * gd + g.num_ * fd;
  if (num.is_zero()) return {};
  Polynomial den = f.den_ * gd;
  if (d.is_constant()) return RationalFunction::make_monic(std::move(num), std::move(den));
  Polynomial c = gcd(num, d);
  return RationalFunction::make_monic(quo(num, c), quo(den, c));
}

RationalFunction operator-(const RationalFunction& f, const RationalFunction& g) { return f + (-g); }

RationalFunction operator*(const RationalFunction& f, const RationalFunction& g) {
  if (f.is_zero() || g.is_zero()) return {};
  if (f.den_.is_constant() && g.den_.is_constant()) return RationalFunction(f.num_ * g.num_);
  if (f.is_constant()) return RationalFunction(RationalFunction::Raw{}, g.num_ * f.constant_value(), g.den_);
  if (g.is_constant()) return RationalFunction(RationalFunction::Raw{}, f.num_ * g.constant_value(), f.den_);
  Polynomial g1 = g.den_.is_constant() ? Polynomial(1) : gcd(f.num_, g.den_);
  Polynomial g2 = f.den_.is_constant() ? Polynomial(1) : gcd(g.num_, f.den_);
  Polynomial num = quo(f.num_, g1) * quo(g.num_, g2);
  Polynomial den = quo(f.den_, g2) * quo(g.den_, g1);
  return RationalFunction::make_monic(std::move(num), std::move(den));
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero rational function");
  return make_monic(den_, num_);
}

RationalFunction operator/(const RationalFunction& f, const RationalFunction& g) {
  return f * g.inverse();
}

RationalFunction RationalFunction::partial(VarIndex v) const {
  if (den_.is_constant()) return RationalFunction(num_.partial(v) * Rational(1 / den_.constant_value()));
  Polynomial dn = num_.partial(v), dd = den_.partial(v);
  if (dd.is_zero()) return RationalFunction(dn, den_);
  return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
}

RationalFunction RationalFunction::substitute(VarIndex v, const Rational& value) const {
  return RationalFunction(num_.substitute(v, value), den_.substitute(v, value));
}

double RationalFunction::evaluate(std::span<const double> values) const {
  return num_.evaluate(values) / den_.evaluate(values);
}

}  // namespace fbrank
