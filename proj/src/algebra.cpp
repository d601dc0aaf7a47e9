#include "geograph/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geograph::algebra {

Vec LieAlgebraSpec::bracket(const Vec& x, const Vec& y) const {
  if (static_cast<int>(x.size()) != dim || static_cast<int>(y.size()) != dim)
    throw std::invalid_argument("bracket: dimension mismatch");
  Vec r(dim, Rat(0));
  for (const auto& [key, terms] : structure) {
    const auto [a, b] = key;
    Rat coef = x[a] * y[b] - x[b] * y[a];
    if (rat_is_zero(coef)) continue;
    for (const auto& [idx, c] : terms) r[idx] += coef * c;
  }
  return r;
}

std::string ValidationReport::str() const {
  if (issues.empty()) return "ok";
  std::ostringstream os;
  for (const auto& i : issues) os << i.invariant << ": " << i.witness << "\n";
  return os.str();
}

namespace {

std::string combo_label(const std::vector<std::string>& labels, const Vec& col) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < col.size(); ++k) {
    if (rat_is_zero(col[k])) continue;
    Rat c = col[k];
    const bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? "-" : "+");
    }
    first = false;
    if (c != Rat(1)) os << rat_str(c) << "*";
    os << labels[k];
  }
  return first ? "0" : os.str();
}

}  // namespace

Space::Space(LieAlgebraSpec alg, ReductiveSplit split, ModuleSplit msplit)
    : alg_(std::move(alg)), split_(std::move(split)), msplit_(std::move(msplit)) {
  const int n = alg_.dim;
  if (n <= 0 || static_cast<int>(alg_.basis_labels.size()) != n)
    throw std::invalid_argument("Space: bad dimension or label count");
  for (const auto& [key, terms] : alg_.structure) {
    const auto [a, b] = key;
    if (a < 0 || b < 0 || a >= n || b >= n || a >= b)
      throw std::invalid_argument("Space: structure key out of order or range");
    for (const auto& [idx, c] : terms) {
      (void)c;
      if (idx < 0 || idx >= n)
        throw std::invalid_argument("Space: structure coefficient index out of range");
    }
  }
  std::vector<int> seen(n, 0);
  for (int i : split_.h_indices) {
    if (i < 0 || i >= n) throw std::invalid_argument("Space: h index out of range");
    ++seen[i];
  }
  for (int i : split_.m_indices) {
    if (i < 0 || i >= n) throw std::invalid_argument("Space: m index out of range");
    ++seen[i];
  }
  for (int i = 0; i < n; ++i)
    if (seen[i] != 1)
      throw std::invalid_argument("Space: h/m index sets must partition the basis");

  if (split_.basis_change) {
    B_ = *split_.basis_change;
    if (B_.rows() != n || B_.cols() != n)
      throw std::invalid_argument("Space: basis_change has wrong shape");
  } else {
    B_ = exact::RatMat::identity(n);
  }
  try {
    Binv_ = B_.inverse();
  } catch (const std::domain_error&) {
    throw std::invalid_argument("Space: basis_change is singular");
  }

  const int dm = dim_m();
  block_of_.assign(dm, -1);
  for (std::size_t bi = 0; bi < msplit_.blocks.size(); ++bi) {
    if (msplit_.blocks[bi].empty())
      throw std::invalid_argument("Space: empty module block");
    for (int r : msplit_.blocks[bi]) {
      if (r < 0 || r >= dm || block_of_[r] != -1)
        throw std::invalid_argument("Space: module blocks must partition the m basis");
      block_of_[r] = static_cast<int>(bi);
    }
  }
  for (int r = 0; r < dm; ++r)
    if (block_of_[r] < 0)
      throw std::invalid_argument("Space: module blocks must partition the m basis");

  // Cache [b_a, b_b] in split coordinates for all split-basis pairs.
  std::vector<Vec> cols(n, Vec(n, Rat(0)));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) cols[j][i] = B_.at(i, j);
  bracket_table_.assign(n, std::vector<Vec>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      bracket_table_[a][b] = to_split(alg_.bracket(cols[a], cols[b]));

  const int dh = dim_h();
  auto slice = [&](const Vec& g, const std::vector<int>& idx) {
    Vec r(idx.size(), Rat(0));
    for (std::size_t i = 0; i < idx.size(); ++i) r[i] = g[idx[i]];
    return r;
  };
  mm_m_.assign(dm, std::vector<Vec>(dm));
  mm_h_.assign(dm, std::vector<Vec>(dm));
  for (int a = 0; a < dm; ++a)
    for (int b = 0; b < dm; ++b) {
      const Vec& g = bracket_table_[split_.m_indices[a]][split_.m_indices[b]];
      mm_m_[a][b] = slice(g, split_.m_indices);
      mm_h_[a][b] = slice(g, split_.h_indices);
    }
  hm_m_.assign(dh, std::vector<Vec>(dm));
  hm_h_.assign(dh, std::vector<Vec>(dm));
  for (int w = 0; w < dh; ++w)
    for (int a = 0; a < dm; ++a) {
      const Vec& g = bracket_table_[split_.h_indices[w]][split_.m_indices[a]];
      hm_m_[w][a] = slice(g, split_.m_indices);
      hm_h_[w][a] = slice(g, split_.h_indices);
    }
  hh_h_.assign(dh, std::vector<Vec>(dh));
  for (int w = 0; w < dh; ++w)
    for (int u = 0; u < dh; ++u)
      hh_h_[w][u] = slice(bracket_table_[split_.h_indices[w]][split_.h_indices[u]],
                          split_.h_indices);

  m_bracket_double_.assign(n, Eigen::MatrixXd::Zero(dm, dm));
  for (int a = 0; a < n; ++a)
    for (int r = 0; r < dm; ++r) {
      const Vec mpart = slice(bracket_table_[a][split_.m_indices[r]], split_.m_indices);
      for (int i = 0; i < dm; ++i)
        m_bracket_double_[a](i, r) = rat_double(mpart[i]);
    }
}

std::string Space::m_label(int r) const {
  Vec col(dim(), Rat(0));
  for (int i = 0; i < dim(); ++i) col[i] = B_.at(i, split_.m_indices[r]);
  return combo_label(alg_.basis_labels, col);
}

std::string Space::h_label(int j) const {
  Vec col(dim(), Rat(0));
  for (int i = 0; i < dim(); ++i) col[i] = B_.at(i, split_.h_indices[j]);
  return combo_label(alg_.basis_labels, col);
}

Vec Space::to_split(const Vec& z_original) const { return Binv_.apply(z_original); }
Vec Space::to_original(const Vec& z_split) const { return B_.apply(z_split); }

Vec Space::g_to_m(const Vec& z_split) const {
  Vec r(dim_m(), Rat(0));
  for (int i = 0; i < dim_m(); ++i) r[i] = z_split[split_.m_indices[i]];
  return r;
}

Vec Space::g_to_h(const Vec& z_split) const {
  Vec r(dim_h(), Rat(0));
  for (int i = 0; i < dim_h(); ++i) r[i] = z_split[split_.h_indices[i]];
  return r;
}

Vec Space::m_to_g(const Vec& y_m) const {
  if (static_cast<int>(y_m.size()) != dim_m())
    throw std::invalid_argument("m_to_g: length mismatch");
  Vec r(dim(), Rat(0));
  for (int i = 0; i < dim_m(); ++i) r[split_.m_indices[i]] = y_m[i];
  return r;
}

Vec Space::h_to_g(const Vec& w_h) const {
  if (static_cast<int>(w_h.size()) != dim_h())
    throw std::invalid_argument("h_to_g: length mismatch");
  Vec r(dim(), Rat(0));
  for (int i = 0; i < dim_h(); ++i) r[split_.h_indices[i]] = w_h[i];
  return r;
}

Vec Space::bracket_split(const Vec& x, const Vec& y) const {
  const int n = dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw std::invalid_argument("bracket_split: dimension mismatch");
  Vec r(n, Rat(0));
  for (int a = 0; a < n; ++a) {
    if (rat_is_zero(x[a])) continue;
    for (int b = 0; b < n; ++b) {
      if (rat_is_zero(y[b])) continue;
      const Rat f = x[a] * y[b];
      const Vec& t = bracket_table_[a][b];
      for (int i = 0; i < n; ++i)
        if (!rat_is_zero(t[i])) r[i] += f * t[i];
    }
  }
  return r;
}

const Vec& Space::bracket_mm_m(int a, int b) const { return mm_m_[a][b]; }
const Vec& Space::bracket_mm_h(int a, int b) const { return mm_h_[a][b]; }
const Vec& Space::bracket_hm_m(int w, int a) const { return hm_m_[w][a]; }
const Vec& Space::bracket_hm_h(int w, int a) const { return hm_h_[w][a]; }
const Vec& Space::bracket_hh_h(int w, int u) const { return hh_h_[w][u]; }

Vec Space::bracket_m(const Vec& x, const Vec& y) const {
  return g_to_m(bracket_split(x, y));
}

exact::RatMat Space::ad_matrix(const Vec& z_split) const {
  const int n = dim();
  exact::RatMat M(n, n);
  for (int b = 0; b < n; ++b) {
    Vec e(n, Rat(0));
    e[b] = Rat(1);
    Vec col = bracket_split(z_split, e);
    for (int i = 0; i < n; ++i) M.at(i, b) = col[i];
  }
  return M;
}

exact::RatMat Space::ad_restricted(const Vec& w_h, bool on_m) const {
  if (static_cast<int>(w_h.size()) != dim_h())
    throw std::invalid_argument("ad_restricted: h-coordinate length mismatch");
  const int d = on_m ? dim_m() : dim_h();
  exact::RatMat M(d, d);
  for (int a = 0; a < d; ++a) {
    for (int j = 0; j < dim_h(); ++j) {
      if (rat_is_zero(w_h[j])) continue;
      const Vec& col = on_m ? hm_m_[j][a] : hh_h_[j][a];
      for (int i = 0; i < d; ++i)
        if (!rat_is_zero(col[i])) M.at(i, a) += w_h[j] * col[i];
    }
  }
  return M;
}

ValidationReport Space::validate() const {
  ValidationReport rep;
  const int n = dim();
  const auto& L = alg_.basis_labels;

  // Jacobi on all original-basis triples.
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        Vec ea(n, Rat(0)), eb(n, Rat(0)), ec(n, Rat(0));
        ea[a] = eb[b] = ec[c] = Rat(1);
        Vec sum = alg_.bracket(alg_.bracket(ea, eb), ec);
        Vec t2 = alg_.bracket(alg_.bracket(eb, ec), ea);
        Vec t3 = alg_.bracket(alg_.bracket(ec, ea), eb);
        bool zero = true;
        for (int i = 0; i < n; ++i) {
          sum[i] += t2[i] + t3[i];
          if (!rat_is_zero(sum[i])) zero = false;
        }
        if (!zero)
          rep.issues.push_back({"jacobi",
                                "(" + L[a] + "," + L[b] + "," + L[c] + ")"});
      }

  auto nonzero = [](const Vec& v) {
    for (const Rat& x : v)
      if (!rat_is_zero(x)) return true;
    return false;
  };

  // Reductivity of the split basis.
  for (int w = 0; w < dim_h(); ++w)
    for (int u = 0; u < dim_h(); ++u)
      if (u > w && nonzero(g_to_m(bracket_table_[split_.h_indices[w]]
                                                [split_.h_indices[u]])))
        rep.issues.push_back({"[h,h] in h",
                              "[" + h_label(w) + "," + h_label(u) + "]"});
  for (int w = 0; w < dim_h(); ++w)
    for (int a = 0; a < dim_m(); ++a)
      if (nonzero(hm_h_[w][a]))
        rep.issues.push_back({"[h,m] in m",
                              "[" + h_label(w) + "," + m_label(a) + "]"});

  // Module blocks are h-invariant.
  for (int w = 0; w < dim_h(); ++w)
    for (int a = 0; a < dim_m(); ++a) {
      const Vec& img = hm_m_[w][a];
      for (int r = 0; r < dim_m(); ++r)
        if (!rat_is_zero(img[r]) && block_of_[r] != block_of_[a]) {
          rep.issues.push_back({"[h,m_i] in m_i",
                                "[" + h_label(w) + "," + m_label(a) + "]"});
          break;
        }
    }
  return rep;
}

Vec project(const Space& s, const Vec& z_original, bool part_m) {
  Vec z = s.to_split(z_original);
  const auto& keep = part_m ? s.split().m_indices : s.split().h_indices;
  Vec masked(s.dim(), Rat(0));
  for (int i : keep) masked[i] = z[i];
  return s.to_original(masked);
}

Vec block_project(const Space& s, const Vec& y_m, int block) {
  if (block < 0 || block >= s.nblocks())
    throw std::out_of_range("block_project: block index out of range");
  if (static_cast<int>(y_m.size()) != s.dim_m())
    throw std::invalid_argument("block_project: length mismatch");
  Vec r(s.dim_m(), Rat(0));
  for (int i : s.msplit().blocks[block]) r[i] = y_m[i];
  return r;
}

Eigen::MatrixXd exp_ad(const Space& s, const Vec& w_h, double t, bool on_m) {
  Eigen::MatrixXd A = s.ad_restricted(w_h, on_m).to_double() * t;
  const int d = static_cast<int>(A.rows());
  double norm1 = 0.0;
  for (int j = 0; j < d; ++j) {
    double c = A.col(j).cwiseAbs().sum();
    norm1 = std::max(norm1, c);
  }
  int levels = 0;
  while (norm1 > 0.5 && levels < 60) {
    norm1 /= 2.0;
    ++levels;
  }
  A /= std::pow(2.0, levels);
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(d, d);
  double fact = 1.0;
  for (int k = 1; k <= 13; ++k) {
    P = P * A;
    fact *= k;
    T += P / fact;
  }
  for (int k = 0; k < levels; ++k) T = T * T;
  return T;
}

Space shift_split(const Space& s, const std::vector<Vec>& xi_images) {
  if (static_cast<int>(xi_images.size()) != s.dim_m())
    throw std::invalid_argument("shift_split: one image per m basis vector required");
  const int n = s.dim();
  exact::RatMat S = exact::RatMat::identity(n);
  for (int r = 0; r < s.dim_m(); ++r) {
    if (static_cast<int>(xi_images[r].size()) != s.dim_h())
      throw std::invalid_argument("shift_split: image has wrong h-dimension");
    for (int j = 0; j < s.dim_h(); ++j)
      S.at(s.split().h_indices[j], s.split().m_indices[r]) = xi_images[r][j];
  }
  ReductiveSplit ns = s.split();
  exact::RatMat base =
      s.split().basis_change ? *s.split().basis_change : exact::RatMat::identity(n);
  ns.basis_change = base * S;
  Space shifted(s.alg(), ns, s.msplit());
  ValidationReport rep = shifted.validate();
  for (const auto& issue : rep.issues)
    if (issue.invariant != "jacobi")
      throw std::logic_error("shift_split: shifted split violates " +
                             issue.invariant + " at " + issue.witness);
  return shifted;
}

std::optional<Vec> central_shift(const Space& s, const Vec& v_m) {
  const int n = s.dim();
  const int dh = s.dim_h();
  // ad(v - w) = 0 on g, unknown w in h-coordinates.
  exact::RatMat A(n * n, dh);
  for (int j = 0; j < dh; ++j) {
    Vec hj(dh, Rat(0));
    hj[j] = Rat(1);
    exact::RatMat adw = s.ad_matrix(s.h_to_g(hj));
    for (int u = 0; u < n; ++u)
      for (int i = 0; i < n; ++i) A.at(u * n + i, j) = adw.at(i, u);
  }
  exact::RatMat adv = s.ad_matrix(s.m_to_g(v_m));
  std::vector<Rat> b(static_cast<std::size_t>(n) * n, Rat(0));
  for (int u = 0; u < n; ++u)
    for (int i = 0; i < n; ++i) b[u * n + i] = adv.at(i, u);
  return exact::RatMat::solve(A, b);
}

Eigen::VectorXd bracket_m_double(const Space& s, const Eigen::VectorXd& z_split,
                                 int t) {
  const auto& tables = s.m_bracket_double();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(s.dim_m());
  for (int a = 0; a < s.dim(); ++a)
    if (z_split[a] != 0.0) r += z_split[a] * tables[a].col(t);
  return r;
}

Eigen::VectorXd split_embed_double(const Space& s, const Eigen::VectorXd& y_m,
                                   const Eigen::VectorXd& w_h) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(s.dim());
  for (int r = 0; r < s.dim_m(); ++r) z[s.split().m_indices[r]] = y_m[r];
  for (int j = 0; j < s.dim_h(); ++j) z[s.split().h_indices[j]] = w_h[j];
  return z;
}

}  // namespace geograph::algebra
