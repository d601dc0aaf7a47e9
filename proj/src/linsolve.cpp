#include "geograph/linsolve.hpp"

#include <stdexcept>

namespace geograph::exact {

namespace {

// Pick among candidate pivot rows the entry with the smallest leading monomial
// (then fewest terms) to keep intermediate growth down and results stable.
bool pivot_better(const MPoly& cand, const MPoly& best) {
  if (best.is_zero()) return true;
  GrlexLess less;
  const auto cl = cand.leading().first;
  const auto bl = best.leading().first;
  if (less(cl, bl)) return true;
  if (less(bl, cl)) return false;
  return cand.terms().size() < best.terms().size();
}

}  // namespace

LinSolveResult linear_solve_ratfunc(const std::vector<std::vector<RatFunc>>& A,
                                    const std::vector<RatFunc>& b) {
  const std::size_t m = A.size();
  if (b.size() != m)
    throw std::invalid_argument("linear_solve_ratfunc: rhs length mismatch");
  const std::size_t n = m == 0 ? 0 : A[0].size();
  for (const auto& row : A)
    if (row.size() != n)
      throw std::invalid_argument("linear_solve_ratfunc: ragged matrix");

  VarContextPtr ctx;
  for (const auto& row : A)
    for (const auto& e : row)
      if (e.ctx()) { ctx = e.ctx(); break; }
  if (!ctx)
    for (const auto& e : b)
      if (e.ctx()) { ctx = e.ctx(); break; }

  // Polynomialize each row: multiply through by the denominators it carries.
  std::vector<std::vector<MPoly>> M(m, std::vector<MPoly>(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    MPoly scale = MPoly::constant(ctx, Rat(1));
    for (std::size_t j = 0; j < n; ++j)
      if (!A[i][j].is_zero() && !A[i][j].den().is_constant())
        scale = scale * A[i][j].den();
    if (!b[i].is_zero() && !b[i].den().is_constant()) scale = scale * b[i].den();
    for (std::size_t j = 0; j < n; ++j) {
      const RatFunc& e = A[i][j];
      M[i][j] = e.is_zero() ? MPoly(ctx)
                            : e.num() * scale.divide_exact(e.den().lifted(ctx));
    }
    M[i][n] = b[i].is_zero() ? MPoly(ctx)
                             : b[i].num() * scale.divide_exact(b[i].den().lifted(ctx));
  }

  // Fraction-free elimination with column pivoting.
  std::vector<std::size_t> orig(m);
  for (std::size_t i = 0; i < m; ++i) orig[i] = i;
  std::vector<std::size_t> pivot_col;
  MPoly prev = MPoly::constant(ctx, Rat(1));
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t piv = m;
    for (std::size_t r = rank; r < m; ++r) {
      if (M[r][col].is_zero()) continue;
      if (piv == m || pivot_better(M[r][col], M[piv][col])) piv = r;
    }
    if (piv == m) continue;
    std::swap(M[rank], M[piv]);
    std::swap(orig[rank], orig[piv]);
    // Rows with a zero leading entry are still rescaled by pivot/prev so the
    // exact-divisibility pattern of the minors keeps holding downstream.
    for (std::size_t r = rank + 1; r < m; ++r) {
      for (std::size_t c = 0; c <= n; ++c) {
        if (c == col) continue;
        MPoly t = M[r][c] * M[rank][col] - M[r][col] * M[rank][c];
        M[r][c] = t.is_zero() ? MPoly(ctx) : t.divide_exact(prev);
      }
      M[r][col] = MPoly(ctx);
    }
    prev = M[rank][col];
    pivot_col.push_back(col);
    ++rank;
  }

  LinSolveResult res;

  // Rows below the rank are zero in every coefficient column; a nonzero
  // right-hand side there witnesses inconsistency.
  for (std::size_t r = rank; r < m; ++r)
    if (!M[r][n].is_zero()) res.inconsistent_rows.push_back(orig[r]);
  if (!res.inconsistent_rows.empty()) {
    res.kind = LinSolveResult::Kind::Inconsistent;
    return res;
  }

  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;

  auto back_substitute = [&](const std::vector<RatFunc>& rhs_free,
                             bool homogeneous) {
    // rhs_free holds values of the free unknowns; pivot unknowns are solved
    // bottom-up from the echelon form.
    std::vector<RatFunc> x(n);
    std::size_t fi = 0;
    for (std::size_t c = 0; c < n; ++c)
      if (!is_pivot[c]) x[c] = rhs_free[fi++];
    for (std::size_t r = rank; r-- > 0;) {
      const std::size_t pc = pivot_col[r];
      RatFunc acc = homogeneous ? RatFunc() : RatFunc(M[r][n]);
      for (std::size_t c = pc + 1; c < n; ++c)
        if (!M[r][c].is_zero() && !x[c].is_zero())
          acc = acc - RatFunc(M[r][c]) * x[c];
      x[pc] = acc / RatFunc(M[r][pc]);
    }
    return x;
  };

  const std::size_t nfree = n - rank;
  std::vector<RatFunc> zeros(nfree);
  res.particular = back_substitute(zeros, false);
  if (nfree == 0) {
    res.kind = LinSolveResult::Kind::Unique;
  } else {
    res.kind = LinSolveResult::Kind::Parametrized;
    for (std::size_t k = 0; k < nfree; ++k) {
      std::vector<RatFunc> e(nfree);
      e[k] = RatFunc::constant(ctx, Rat(1));
      res.nullspace.push_back(back_substitute(e, true));
    }
  }

  // Mandatory self-check: substitute back into the original system.
  auto check = [&](const std::vector<RatFunc>& x, bool homogeneous) {
    for (std::size_t i = 0; i < m; ++i) {
      RatFunc acc;
      for (std::size_t j = 0; j < n; ++j)
        if (!A[i][j].is_zero() && !x[j].is_zero()) acc = acc + A[i][j] * x[j];
      const RatFunc want = homogeneous ? RatFunc() : b[i];
      if (acc != want)
        throw std::logic_error(
            "linear_solve_ratfunc: self-check failed, solution does not satisfy "
            "the system");
    }
  };
  check(res.particular, false);
  for (const auto& v : res.nullspace) check(v, true);

  return res;
}

}  // namespace geograph::exact
