#include "geograph/ratfunc.hpp"

#include <algorithm>
#include <stdexcept>

namespace geograph::exact {

RatFunc::RatFunc(MPoly num) : num_(std::move(num)) {
  den_ = MPoly::constant(num_.ctx(), Rat(1));
  normalize();
}

RatFunc::RatFunc(MPoly num, MPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero())
    throw std::domain_error("RatFunc: zero denominator");
  normalize();
}

RatFunc RatFunc::constant(VarContextPtr ctx, const Rat& value) {
  return RatFunc(MPoly::constant(std::move(ctx), value));
}

RatFunc RatFunc::variable(VarContextPtr ctx, int index) {
  return RatFunc(MPoly::variable(std::move(ctx), index));
}

void RatFunc::normalize() {
  if (den_.is_zero()) den_ = MPoly::constant(num_.ctx(), Rat(1));
  if (num_.is_zero()) {
    den_ = MPoly::constant(num_.ctx() ? num_.ctx() : den_.ctx(), Rat(1));
    num_ = MPoly(den_.ctx());
    return;
  }
  if (!num_.ctx() && den_.ctx()) num_ = num_.lifted(den_.ctx());
  if (num_.ctx() && !den_.ctx()) den_ = den_.lifted(num_.ctx());

  // Cancel any monomial common to every term of numerator and denominator.
  const int n = num_.nvars();
  if (n > 0) {
    Expo common(n, 0);
    bool first = true;
    auto scan = [&](const MPoly& p) {
      for (const auto& [e, c] : p.terms()) {
        (void)c;
        if (first) {
          common = e;
          first = false;
        } else {
          for (int i = 0; i < n; ++i) common[i] = std::min(common[i], e[i]);
        }
      }
    };
    scan(num_);
    scan(den_);
    bool nontrivial = false;
    for (int i = 0; i < n; ++i)
      if (common[i] > 0) { nontrivial = true; break; }
    if (nontrivial) {
      MPoly mono(num_.ctx());
      mono.add_term(common, Rat(1));
      num_ = num_.divide_exact(mono);
      den_ = den_.divide_exact(mono);
    }
  }

  // Clear the denominator whenever it divides the numerator exactly; this is
  // what collapses quotients like (2a+2b)/(a+b) to constants after compose.
  if (!(den_.is_constant() && den_.constant_value() == Rat(1))) {
    try {
      MPoly q = num_.divide_exact(den_);
      num_ = std::move(q);
      den_ = MPoly::constant(num_.ctx(), Rat(1));
    } catch (const std::logic_error&) {
      // Inexact: keep the quotient form.
    }
  }

  // Joint content out, denominator leading coefficient positive.
  Rat cn = num_.content();
  Rat cd = den_.content();
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), cn.get_num().get_mpz_t(), cd.get_num().get_mpz_t());
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), cn.get_den().get_mpz_t(), cd.get_den().get_mpz_t());
  Rat joint(g, l);
  joint.canonicalize();
  if (sgn(den_.leading().second) < 0) joint = -joint;
  num_ = num_.scaled(Rat(1) / joint);
  den_ = den_.scaled(Rat(1) / joint);
}

bool RatFunc::is_constant() const {
  return num_.is_constant() && den_.is_constant();
}

Rat RatFunc::constant_value() const {
  if (!is_constant())
    throw std::logic_error("RatFunc::constant_value: not constant");
  if (num_.is_zero()) return Rat(0);
  return num_.constant_value() / den_.constant_value();
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return -o;
  return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (is_zero() || o.is_zero())
    return constant(num_.ctx() ? num_.ctx() : o.num_.ctx(), Rat(0));
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw std::domain_error("RatFunc: division by zero");
  if (is_zero()) return constant(num_.ctx() ? num_.ctx() : o.num_.ctx(), Rat(0));
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::operator-() const {
  if (is_zero()) return *this;
  RatFunc r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

bool RatFunc::operator==(const RatFunc& o) const {
  if (is_zero()) return o.is_zero();
  if (o.is_zero()) return false;
  return num_ * o.den_ == o.num_ * den_;
}

Rat RatFunc::eval_rat(const std::vector<Rat>& assignment) const {
  if (is_zero()) return Rat(0);
  Rat d = den_.eval_rat(assignment);
  if (rat_is_zero(d))
    throw std::domain_error("RatFunc::eval_rat: denominator vanishes");
  return num_.eval_rat(assignment) / d;
}

double RatFunc::eval_double(const std::vector<double>& assignment) const {
  if (is_zero()) return 0.0;
  return num_.eval_double(assignment) / den_.eval_double(assignment);
}

RatFunc RatFunc::compose(const std::vector<MPoly>& images) const {
  if (is_zero())
    return constant(images.empty() ? num_.ctx() : images.front().ctx(), Rat(0));
  MPoly n = num_.compose(images);
  MPoly d = den_.compose(images);
  if (d.is_zero())
    throw std::domain_error("RatFunc::compose: denominator vanishes identically");
  return RatFunc(std::move(n), std::move(d));
}

std::string RatFunc::str() const {
  if (is_zero()) return "0";
  if (den_.is_constant() && den_.constant_value() == Rat(1)) return num_.str();
  const bool nsimple = num_.terms().size() == 1;
  const bool dsimple = den_.terms().size() == 1;
  std::string s = nsimple ? num_.str() : "(" + num_.str() + ")";
  s += " / ";
  s += dsimple ? den_.str() : "(" + den_.str() + ")";
  return s;
}

}  // namespace geograph::exact
