#include "geograph/mpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace geograph::exact {

bool GrlexLess::operator()(const Expo& a, const Expo& b) const {
  int da = 0, db = 0;
  for (int e : a) da += e;
  for (int e : b) db += e;
  if (da != db) return da < db;
  // Same total degree: earlier variable with higher exponent is larger.
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int ea = i < a.size() ? a[i] : 0;
    const int eb = i < b.size() ? b[i] : 0;
    if (ea != eb) return ea < eb;
  }
  return false;
}

MPoly MPoly::constant(VarContextPtr ctx, const Rat& value) {
  MPoly p(std::move(ctx));
  if (!rat_is_zero(value)) p.terms_.emplace(Expo(p.nvars(), 0), value);
  return p;
}

MPoly MPoly::variable(VarContextPtr ctx, int index, int power) {
  if (!ctx || index < 0 || index >= static_cast<int>(ctx->names.size()))
    throw std::invalid_argument("MPoly::variable: index out of range");
  if (power < 0) throw std::invalid_argument("MPoly::variable: negative power");
  MPoly p(std::move(ctx));
  if (power == 0) return constant(p.ctx_, Rat(1));
  Expo e(p.nvars(), 0);
  e[index] = power;
  p.terms_.emplace(std::move(e), Rat(1));
  return p;
}

bool MPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  for (int e : terms_.begin()->first)
    if (e != 0) return false;
  return true;
}

Rat MPoly::constant_value() const {
  if (terms_.empty()) return Rat(0);
  if (!is_constant())
    throw std::logic_error("MPoly::constant_value: polynomial is not constant");
  return terms_.begin()->second;
}

int MPoly::total_degree() const {
  if (terms_.empty()) return -1;
  int deg = 0;
  for (int e : terms_.rbegin()->first) deg += e;
  return deg;
}

void MPoly::add_term(const Expo& e, const Rat& coeff) {
  if (static_cast<int>(e.size()) != nvars())
    throw std::invalid_argument("MPoly::add_term: exponent length mismatch");
  if (rat_is_zero(coeff)) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, coeff);
  } else {
    it->second += coeff;
    if (rat_is_zero(it->second)) terms_.erase(it);
  }
}

void MPoly::check_ctx(const MPoly& o) const {
  if (!ctx_ || !o.ctx_) return;  // context-free constant is compatible with anything
  if (ctx_ == o.ctx_) return;
  if (ctx_->names != o.ctx_->names)
    throw std::invalid_argument("MPoly: variable-context mismatch");
}

MPoly MPoly::lifted(const VarContextPtr& target) const {
  if (ctx_ || !target) return *this;
  MPoly r(target);
  for (const auto& [e, c] : terms_)
    r.terms_.emplace(Expo(target->names.size(), 0), c);
  return r;
}

MPoly MPoly::operator+(const MPoly& o) const {
  check_ctx(o);
  if (!ctx_ && o.ctx_) return lifted(o.ctx_) + o;
  if (ctx_ && !o.ctx_) return *this + o.lifted(ctx_);
  MPoly r(ctx_ ? ctx_ : o.ctx_);
  r.terms_ = terms_;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  check_ctx(o);
  if (!ctx_ && o.ctx_) return lifted(o.ctx_) - o;
  if (ctx_ && !o.ctx_) return *this - o.lifted(ctx_);
  MPoly r(ctx_ ? ctx_ : o.ctx_);
  r.terms_ = terms_;
  for (const auto& [e, c] : o.terms_) r.add_term(e, Rat(-c));
  return r;
}

MPoly MPoly::operator-() const {
  MPoly r(ctx_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, Rat(-c));
  return r;
}

MPoly MPoly::scaled(const Rat& s) const {
  MPoly r(ctx_);
  if (rat_is_zero(s)) return r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, Rat(c * s));
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  check_ctx(o);
  if (!ctx_ && o.ctx_) return lifted(o.ctx_) * o;
  if (ctx_ && !o.ctx_) return *this * o.lifted(ctx_);
  MPoly r(ctx_ ? ctx_ : o.ctx_);
  if (terms_.empty() || o.terms_.empty()) return r;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Expo e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      r.add_term(e, Rat(ca * cb));
    }
  }
  return r;
}

bool MPoly::operator==(const MPoly& o) const {
  check_ctx(o);
  if (!ctx_ && o.ctx_) return lifted(o.ctx_) == o;
  if (ctx_ && !o.ctx_) return *this == o.lifted(ctx_);
  return terms_ == o.terms_;
}

Rat MPoly::coeff(const Expo& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

MPoly MPoly::coeff_extract(const std::map<int, int>& pattern) const {
  MPoly r(ctx_);
  for (const auto& [e, c] : terms_) {
    bool match = true;
    for (const auto& [v, want] : pattern) {
      if (v < 0 || v >= static_cast<int>(e.size()) || e[v] != want) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    Expo stripped(e);
    for (const auto& [v, want] : pattern) stripped[v] = 0;
    r.add_term(stripped, c);
  }
  return r;
}

MPoly MPoly::divide_exact(const MPoly& d) const {
  check_ctx(d);
  if (d.is_zero()) throw std::logic_error("MPoly::divide_exact: division by zero");
  MPoly q(ctx_ ? ctx_ : d.ctx_);
  MPoly rem = *this;
  const auto& [de, dc] = *d.terms_.rbegin();
  while (!rem.is_zero()) {
    const auto& [re, rc] = *rem.terms_.rbegin();
    Expo e(re);
    bool ok = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
      e[i] -= de[i];
      if (e[i] < 0) { ok = false; break; }
    }
    if (!ok)
      throw std::logic_error("MPoly::divide_exact: inexact polynomial division");
    MPoly t(q.ctx_);
    t.terms_.emplace(std::move(e), Rat(rc / dc));
    q = q + t;
    rem = rem - t * d;
  }
  return q;
}

Rat MPoly::eval_rat(const std::vector<Rat>& assignment) const {
  if (static_cast<int>(assignment.size()) != nvars())
    throw std::invalid_argument("MPoly::eval_rat: assignment length mismatch");
  Rat acc(0);
  for (const auto& [e, c] : terms_) {
    Rat t(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= assignment[i];
    acc += t;
  }
  return acc;
}

double MPoly::eval_double(const std::vector<double>& assignment) const {
  if (static_cast<int>(assignment.size()) != nvars())
    throw std::invalid_argument("MPoly::eval_double: assignment length mismatch");
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = rat_double(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= assignment[i];
    acc += t;
  }
  return acc;
}

MPoly MPoly::compose(const std::vector<MPoly>& images) const {
  if (static_cast<int>(images.size()) != nvars())
    throw std::invalid_argument("MPoly::compose: image count mismatch");
  VarContextPtr tgt;
  for (const auto& im : images)
    if (im.ctx()) { tgt = im.ctx(); break; }
  if (!tgt && !images.empty())
    throw std::invalid_argument("MPoly::compose: images lack a context");
  MPoly acc(tgt);
  for (const auto& [e, c] : terms_) {
    MPoly t = MPoly::constant(tgt, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t = t * images[i];
    acc = acc + t;
  }
  return acc;
}

Rat MPoly::content() const {
  if (terms_.empty()) return Rat(0);
  mpz_class num_gcd(0), den_lcm(1);
  for (const auto& [e, c] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rat g(num_gcd, den_lcm);
  g.canonicalize();
  return g;
}

std::pair<Expo, Rat> MPoly::leading() const {
  if (terms_.empty()) throw std::logic_error("MPoly::leading: zero polynomial");
  return *terms_.rbegin();
}

std::string MPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Descending grlex.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rat ac(c);
    const bool neg = sgn(c) < 0;
    if (neg) ac = -ac;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool has_var = false;
    for (int x : e)
      if (x != 0) { has_var = true; break; }
    const bool unit = ac == Rat(1);
    if (!has_var || !unit) os << rat_str(ac);
    bool lead_var = has_var && unit;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!lead_var) os << "*";
      lead_var = false;
      os << ctx_->names[i];
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

}  // namespace geograph::exact
