#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geograph/ratmat.hpp"

namespace geograph::algebra {

using Vec = std::vector<Rat>;

/// Lie algebra by structure constants in a fixed basis.  Only pairs a < b are
/// stored; antisymmetry is built into expansion.
struct LieAlgebraSpec {
  int dim = 0;
  std::vector<std::string> basis_labels;
  std::map<std::pair<int, int>, std::vector<std::pair<int, Rat>>> structure;

  /// Bilinear antisymmetric expansion of [x, y] through the table.
  Vec bracket(const Vec& x, const Vec& y) const;
};

/// Reductive decomposition g = h + m.  Index sets refer to positions in the
/// split basis; basis_change columns express the split basis in the original
/// one (identity when absent).
struct ReductiveSplit {
  std::vector<int> h_indices;
  std::vector<int> m_indices;
  std::optional<exact::RatMat> basis_change;
};

/// Partition of m into Ad(H)-invariant blocks, by positions 0..dim_m-1 in the
/// ordered m basis.
struct ModuleSplit {
  std::vector<std::vector<int>> blocks;
};

struct ValidationIssue {
  std::string invariant;
  std::string witness;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string str() const;
};

/// Assembled working space: algebra + splits with cached split-basis bracket
/// tables.  Immutable after construction.  Throws std::invalid_argument on
/// structurally unusable input (sizes wrong, basis_change singular); deeper
/// invariant violations are reported by validate(), not the constructor.
class Space {
 public:
  Space(LieAlgebraSpec alg, ReductiveSplit split, ModuleSplit msplit);

  const LieAlgebraSpec& alg() const { return alg_; }
  const ReductiveSplit& split() const { return split_; }
  const ModuleSplit& msplit() const { return msplit_; }

  int dim() const { return alg_.dim; }
  int dim_m() const { return static_cast<int>(split_.m_indices.size()); }
  int dim_h() const { return static_cast<int>(split_.h_indices.size()); }
  int nblocks() const { return static_cast<int>(msplit_.blocks.size()); }

  /// Label of the r-th m-basis (resp. h-basis) vector, from the original
  /// labels when the split basis is axis-aligned, else synthesized.
  std::string m_label(int r) const;
  std::string h_label(int j) const;

  // Coordinate changes between the original basis and the split basis.
  Vec to_split(const Vec& z_original) const;
  Vec to_original(const Vec& z_split) const;

  // Split-coordinate slicing and embedding.
  Vec g_to_m(const Vec& z_split) const;
  Vec g_to_h(const Vec& z_split) const;
  Vec m_to_g(const Vec& y_m) const;
  Vec h_to_g(const Vec& w_h) const;

  /// Bracket of split-coordinate vectors, result in split coordinates.
  Vec bracket_split(const Vec& x, const Vec& y) const;

  // Cached split-basis bracket slices (m-coordinates / h-coordinates).
  const Vec& bracket_mm_m(int a, int b) const;  // m-part of [f_a, f_b]
  const Vec& bracket_mm_h(int a, int b) const;  // h-part of [f_a, f_b]
  const Vec& bracket_hm_m(int w, int a) const;  // m-part of [w_w, f_a]
  const Vec& bracket_hm_h(int w, int a) const;  // h-part (zero when reductive)
  const Vec& bracket_hh_h(int w, int u) const;  // h-part of [w_w, w_u]

  /// m-part of [x, y] for split-coordinate x, y, as an m-vector.
  Vec bracket_m(const Vec& x, const Vec& y) const;

  /// Exact matrix of ad(z) on split coordinates, z in split coordinates.
  exact::RatMat ad_matrix(const Vec& z_split) const;

  /// Exact matrix of ad(w)|_m (or |_h) in m- (h-) coordinates, w in h-coords.
  /// Requires the reductive invariants to hold for the restriction to close.
  exact::RatMat ad_restricted(const Vec& w_h, bool on_m) const;

  /// Block index of m-position r.
  int block_of(int r) const { return block_of_[r]; }

  /// For float consumers: entry a is the matrix sending u (m-coordinates) to
  /// the m-part of [b_a, u], where b_a is the a-th split-basis vector.
  const std::vector<Eigen::MatrixXd>& m_bracket_double() const {
    return m_bracket_double_;
  }

  ValidationReport validate() const;

 private:
  LieAlgebraSpec alg_;
  ReductiveSplit split_;
  ModuleSplit msplit_;
  exact::RatMat B_, Binv_;  // split basis in original coords and its inverse
  // bracket_table_[a][b]: [b_a, b_b] in split coordinates (a, b split positions)
  std::vector<std::vector<Vec>> bracket_table_;
  std::vector<std::vector<Vec>> mm_m_, mm_h_, hm_m_, hm_h_, hh_h_;
  std::vector<int> block_of_;
  std::vector<Eigen::MatrixXd> m_bracket_double_;
};

/// Projection of an original-coordinates vector to the m (or h) part of the
/// split, returned in original coordinates.
Vec project(const Space& s, const Vec& z_original, bool part_m);

/// m-vector with only the components of module block i kept.
Vec block_project(const Space& s, const Vec& y_m, int block);

/// exp(t·ad(w)) restricted to m (or h), scaling-and-squaring with a degree-13
/// series after halving until the 1-norm is at most 1/2.
Eigen::MatrixXd exp_ad(const Space& s, const Vec& w_h, double t, bool on_m);

/// New space with m replaced by m' = span{f_r + xi_images[r]}, xi_images in
/// h-coordinates.  The metric identification is unchanged: m-coordinates keep
/// meaning the coefficients of the shifted basis vectors.  Throws
/// std::logic_error when m' fails the reductive invariants.
Space shift_split(const Space& s, const std::vector<Vec>& xi_images);

/// w in h with ad(v - w) = 0 on all of g (v given in m-coordinates), when the
/// exact linear system admits one.
std::optional<Vec> central_shift(const Space& s, const Vec& v_m);

/// Float path: m-part of [z, f_t] for z in full split coordinates and the
/// t-th m-basis vector.
Eigen::VectorXd bracket_m_double(const Space& s, const Eigen::VectorXd& z_split,
                                 int t);

/// Full split-coordinate float vector with m-part y and h-part w.
Eigen::VectorXd split_embed_double(const Space& s, const Eigen::VectorXd& y_m,
                                   const Eigen::VectorXd& w_h);

}  // namespace geograph::algebra
