#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "geograph/rat.hpp"

namespace geograph::exact {

/// Fixed list of variable names shared by all polynomials of one computation.
struct VarContext {
  std::vector<std::string> names;
};
using VarContextPtr = std::shared_ptr<const VarContext>;

inline VarContextPtr make_context(std::vector<std::string> names) {
  return std::make_shared<VarContext>(VarContext{std::move(names)});
}

/// Exponent vector; length equals the context's variable count.
using Expo = std::vector<int>;

/// Graded lexicographic order: total degree first, then earlier variables win.
struct GrlexLess {
  bool operator()(const Expo& a, const Expo& b) const;
};

/// Multivariate polynomial with exact rational coefficients in canonical form:
/// no zero coefficients are stored.
class MPoly {
 public:
  MPoly() = default;  // zero polynomial without a context; adopts one on use
  explicit MPoly(VarContextPtr ctx) : ctx_(std::move(ctx)) {}

  static MPoly constant(VarContextPtr ctx, const Rat& value);
  static MPoly variable(VarContextPtr ctx, int index, int power = 1);

  const VarContextPtr& ctx() const { return ctx_; }
  int nvars() const { return ctx_ ? static_cast<int>(ctx_->names.size()) : 0; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rat constant_value() const;  // requires is_constant()
  int total_degree() const;    // -1 for the zero polynomial

  void add_term(const Expo& e, const Rat& coeff);

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly operator-() const;
  MPoly scaled(const Rat& s) const;

  bool operator==(const MPoly& o) const;
  bool operator!=(const MPoly& o) const { return !(*this == o); }

  /// Coefficient of one monomial (zero if absent).
  Rat coeff(const Expo& e) const;

  /// Collect the terms whose exponents at the constrained variables match
  /// `pattern` exactly; the matched positions are zeroed out in the result.
  /// `pattern` maps variable index to required exponent; variables not
  /// mentioned are unconstrained and survive.
  MPoly coeff_extract(const std::map<int, int>& pattern) const;

  /// Exact division; throws std::logic_error if the division has a remainder.
  MPoly divide_exact(const MPoly& d) const;

  Rat eval_rat(const std::vector<Rat>& assignment) const;
  double eval_double(const std::vector<double>& assignment) const;

  /// Substitute images[i] for variable i; all images share one target context.
  MPoly compose(const std::vector<MPoly>& images) const;

  /// Content: positive rational g with all coefficients integer multiples of g
  /// after division by it (gcd of numerators over lcm of denominators).
  Rat content() const;

  /// Largest monomial and its coefficient; requires nonzero.
  std::pair<Expo, Rat> leading() const;

  /// A context-free polynomial (necessarily constant) rebuilt in `target`.
  /// No-op when this already has a context or `target` is null.
  MPoly lifted(const VarContextPtr& target) const;

  const std::map<Expo, Rat, GrlexLess>& terms() const { return terms_; }

  std::string str() const;

 private:
  void check_ctx(const MPoly& o) const;
  VarContextPtr ctx_;
  std::map<Expo, Rat, GrlexLess> terms_;
};

}  // namespace geograph::exact
