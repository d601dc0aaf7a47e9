#pragma once

#include <string>
#include <vector>

#include "geograph/mpoly.hpp"

namespace geograph::exact {

/// Rational function num/den over a shared variable context.  Kept normalized:
/// den is nonzero with positive leading coefficient, num and den have integer
/// coefficients with joint content 1, and any common monomial factor is
/// cancelled.  Common polynomial factors of higher degree are not removed;
/// equality compares by cross-multiplication, so representations stay exact.
class RatFunc {
 public:
  RatFunc() = default;  // zero
  RatFunc(MPoly num);   // NOLINT: implicit lift from polynomial
  RatFunc(MPoly num, MPoly den);

  static RatFunc constant(VarContextPtr ctx, const Rat& value);
  static RatFunc variable(VarContextPtr ctx, int index);

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  VarContextPtr ctx() const { return num_.ctx() ? num_.ctx() : den_.ctx(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const;
  Rat constant_value() const;  // requires is_constant()
  bool is_polynomial() const { return den_.is_constant(); }

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;  // throws on zero divisor
  RatFunc operator-() const;

  bool operator==(const RatFunc& o) const;
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  Rat eval_rat(const std::vector<Rat>& assignment) const;  // throws on den = 0
  double eval_double(const std::vector<double>& assignment) const;

  /// Substitute images[i] for variable i in both numerator and denominator.
  /// Throws std::domain_error if the denominator collapses to zero.
  RatFunc compose(const std::vector<MPoly>& images) const;

  std::string str() const;

 private:
  void normalize();
  MPoly num_;
  MPoly den_;  // default-constructed as zero; normalize() gives it value 1
};

}  // namespace geograph::exact
