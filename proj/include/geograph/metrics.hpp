#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geograph/algebra.hpp"
#include "geograph/ratmat.hpp"

namespace geograph::metrics {

using algebra::Vec;

/// Scalar product alpha_i on one module block, in the block's local basis.
struct BlockForm {
  exact::RatMat matrix;
};

/// Parameter tuple realizing g = sum_i c^i alpha_i.
struct MetricParams {
  std::vector<Rat> c;
};

/// Invariant one-form on m, as an exact covector in m-coordinates.
struct OneFormSpec {
  std::string name;
  Vec covector;
};

enum class Family { QPower, WeightedSquares, RandersLike };

/// The norm-defining function L together with its arguments: component norms
/// F_j = sqrt(g_j) for the listed metric tuples and one-form values beta_m.
///   QPower:          L = (sum_j F_j^q)^(2/q), q > 2 (q kept general for
///                    admissibility experiments)
///   WeightedSquares: L = sum_j w_j F_j^2 + sum_m v_m beta_m^2
///   RandersLike:     L = (F_1 + beta_1)^2
struct NormSpec {
  Family family = Family::WeightedSquares;
  double q = 3.0;
  std::vector<MetricParams> metrics;
  std::vector<Rat> metric_weights;
  std::vector<OneFormSpec> forms;
  std::vector<Rat> form_weights;
};

/// Block forms bound to the blocks of one space, in block order.
struct BlockForms {
  std::vector<BlockForm> forms;
  /// Throws std::invalid_argument on shape mismatch, asymmetry, or a
  /// non-positive-definite block (exact leading-minor test).
  void check(const algebra::Space& s) const;
};

// Exact bilinear layer ------------------------------------------------------

/// alpha_i(u_i, v_i) for m-vectors u, v (components outside block i ignored).
Rat alpha_pair(const algebra::Space& s, const BlockForms& bf, int i,
               const Vec& u, const Vec& v);

/// g_c(u, v) = sum_i c^i alpha_i(u_i, v_i), exact.
Rat eval_metric(const algebra::Space& s, const BlockForms& bf,
                const MetricParams& p, const Vec& u, const Vec& v);

/// Gram matrix of g_c on m, exact.
exact::RatMat gram(const algebra::Space& s, const BlockForms& bf,
                   const MetricParams& p);

/// Ad(H)-invariance of a one-form: beta([w, u]_m) = 0 for all h-basis w and
/// m-basis u.  Returns a witness description on failure.
std::optional<std::string> oneform_invariance_issue(const algebra::Space& s,
                                                    const OneFormSpec& f);

/// Metric dual of a one-form: the v with g(v, .) = beta, exact.
Vec oneform_dual_vector(const algebra::Space& s, const BlockForms& bf,
                        const MetricParams& p, const OneFormSpec& f);

/// Reverse bridge: the covector of g(v, .).
OneFormSpec vector_dual_oneform(const algebra::Space& s, const BlockForms& bf,
                                const MetricParams& p, const Vec& v,
                                const std::string& name = "");

/// Structural and admissibility-independent validation of a NormSpec against
/// its space/blocks: arity checks, positivity of parameters and weights,
/// one-form invariance, and the RandersLike domain condition g(v,v) < 1.
std::vector<std::string> validate_norm(const algebra::Space& s,
                                       const BlockForms& bf, const NormSpec& n);

// Numeric evaluation layer --------------------------------------------------

struct LEval {
  double L = 0.0;
  double F = 0.0;                  // sqrt(L)
  std::vector<double> Fj;          // component norm values
  std::vector<double> beta;        // one-form values
  std::vector<double> dL_norm;     // partials in the norm slots
  std::vector<double> dL_form;     // partials in the one-form slots
};

struct BCValues {
  std::vector<double> B;  // B_j = L,_j / F_j
  std::vector<double> C;  // C_i = sum_j B_j c_j^i
};

/// Caches float Gram matrices and covectors for fast repeated evaluation.
class NormEvaluator {
 public:
  NormEvaluator(const algebra::Space& s, const BlockForms& bf, const NormSpec& n);

  int dim() const { return dim_m_; }
  int nmetrics() const { return static_cast<int>(gj_.size()); }
  int nforms() const { return static_cast<int>(betas_.size()); }
  int nblocks() const { return static_cast<int>(alpha_.size()); }
  const NormSpec& norm() const { return norm_; }

  const Eigen::MatrixXd& alpha_mat(int i) const { return alpha_[i]; }
  const Eigen::MatrixXd& gj_mat(int j) const { return gj_[j]; }
  const Eigen::VectorXd& beta_vec(int m) const { return betas_[m]; }

  /// L, F, component values and closed-form partials at y != 0.
  LEval eval(const Eigen::VectorXd& y) const;

  double F(const Eigen::VectorXd& y) const { return eval(y).F; }
  double F2(const Eigen::VectorXd& y) const { return eval(y).L; }

  BCValues bc(const Eigen::VectorXd& y) const;

  /// g_y(y, v) through the fundamental-tensor identity
  ///   2 g_y(y,v) = sum_j B_j(y) g_j(y,v) + sum_m L,_m beta_m(v).
  double gy_pair(const Eigen::VectorXd& y, const Eigen::VectorXd& v) const;

  /// Half the Hessian of F^2 at y, central differences, step 1e-5 * |y|.
  Eigen::MatrixXd fundamental_tensor_fd(const Eigen::VectorXd& y) const;

  /// Cartan tensor C_y(u,v,w) = (1/4) d^3 F^2(y+su+tv+rw)/ds dt dr at 0,
  /// eight-point stencil, step 3.16e-3 * |y|.
  double cartan_tensor_fd(const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& v,
                          const Eigen::VectorXd& w) const;

  /// Hessian of L in its (norm, form) arguments at y, closed form.
  Eigen::MatrixXd arg_hessian(const Eigen::VectorXd& y) const;

 private:
  void require_nonzero(const Eigen::VectorXd& y) const;
  int dim_m_;
  NormSpec norm_;
  std::vector<Eigen::MatrixXd> alpha_, gj_;
  std::vector<Eigen::VectorXd> betas_;
};

struct AdmissibilityReport {
  int samples = 0;
  unsigned seed = 0;
  bool pass = false;
  std::vector<std::string> violations;  // with witness directions
  double min_partial = 0.0;       // smallest L,_j seen (condition i margin)
  double min_hessian_eig = 0.0;   // smallest Hess(L) eigenvalue (condition ii)
  double min_partial_sum = 0.0;   // smallest sum_j L,_j (condition iii margin)
};

/// Conditions (i) L,_j >= 0, (ii) Hess(L) positive semi-definite (eigenvalue
/// floor -1e-8), (iii) sum_j L,_j > 0, at `samples` random unit directions.
AdmissibilityReport admissibility_sample(const NormEvaluator& ev, int samples,
                                         unsigned seed);

}  // namespace geograph::metrics
