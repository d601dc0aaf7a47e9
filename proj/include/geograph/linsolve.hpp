#pragma once

#include <cstddef>
#include <vector>

#include "geograph/ratfunc.hpp"

namespace geograph::exact {

/// Outcome of an exact linear solve over the rational-function field.
struct LinSolveResult {
  enum class Kind { Unique, Parametrized, Inconsistent };
  Kind kind = Kind::Unique;

  /// One solution (free unknowns set to zero); empty when Inconsistent.
  std::vector<RatFunc> particular;

  /// Basis of the homogeneous solution space; empty for Unique/Inconsistent.
  std::vector<std::vector<RatFunc>> nullspace;

  /// Indices (into the input rows) of rows witnessing inconsistency.
  std::vector<std::size_t> inconsistent_rows;
};

/// Solve A x = b exactly over the field of rational functions.  Elimination is
/// fraction-free (Bareiss) on a polynomialized copy of the system; every
/// non-inconsistent result is re-substituted into the original system and the
/// routine throws std::logic_error if the residual is not identically zero.
LinSolveResult linear_solve_ratfunc(const std::vector<std::vector<RatFunc>>& A,
                                    const std::vector<RatFunc>& b);

}  // namespace geograph::exact
