#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geograph/algebra.hpp"
#include "geograph/linsolve.hpp"
#include "geograph/metrics.hpp"
#include "geograph/ratfunc.hpp"

namespace geograph::graphs {

using algebra::Vec;

/// Linear geodesic graph with coefficients in the parameter field:
/// xi^j(y) = sum_r k[j][r] * y_r, each k[j][r] a rational function of the
/// metric parameters.
struct LinearGraphSym {
  std::vector<std::string> param_names;
  exact::VarContextPtr ctx;  // context holding exactly the parameter variables
  std::vector<std::vector<exact::RatFunc>> k;  // [dim_h][dim_m]
  /// Basis of the solution-space freedom (same shape as k); empty when unique.
  std::vector<std::vector<std::vector<exact::RatFunc>>> nullspace;
  bool unique() const { return nullspace.empty(); }
};

/// Either a symbolic linear graph or the witnesses of inconsistency.
struct SolveOutcome {
  std::optional<LinearGraphSym> graph;
  std::vector<std::string> inconsistent_equations;
};

/// Expand the geodesic-lemma identity for the generic metric sum_i c^i alpha_i
/// with the linear ansatz, extract y-monomial coefficients, and solve over the
/// field of rational functions in the parameters.
SolveOutcome solve_linear_graph_symbolic(const algebra::Space& s,
                                         const metrics::BlockForms& bf,
                                         const std::vector<std::string>& param_names);

/// Same elimination for one fixed exact metric Gram matrix on m.
SolveOutcome solve_linear_graph_fixed(const algebra::Space& s,
                                      const exact::RatMat& gram_m);

/// Substitute fixed rational values for a subset of the parameters.
LinearGraphSym specialize(const LinearGraphSym& g,
                          const std::map<std::string, Rat>& fixed);

/// Human-readable lines "xi[<h-label>] = <coeff> * y1 + ...", one per
/// h-basis vector.
std::string render_linear_graph(const algebra::Space& s,
                                const LinearGraphSym& g);

/// Exact coefficient matrix K (dim_h x dim_m) at a full parameter assignment.
exact::RatMat instantiate(const LinearGraphSym& g, const std::vector<Rat>& cvals);

/// Exact check that xi = K y satisfies the geodesic lemma of `gram_m`
/// identically in y (polynomial identity).
bool linear_graph_satisfies_exact(const algebra::Space& s,
                                  const exact::RatMat& gram_m,
                                  const exact::RatMat& K);

/// Runtime-evaluable geodesic graph.
struct GeodesicGraph {
  enum class Provenance { LinearFixed, Theorem1, Prop13, Pointwise };
  Provenance provenance = Provenance::LinearFixed;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  std::string describe;
  /// Exact coefficient matrix when the graph is linear by construction.
  std::optional<exact::RatMat> linear_matrix;
};

GeodesicGraph linear_fixed_graph(const algebra::Space& s, const exact::RatMat& K);

/// Theorem-1 closure: substitute c^i -> C_i(y) into the symbolic coefficients.
/// Checks denominators against C-values sampled at 1000 directions (plus the
/// instance parameter tuples) and throws std::domain_error with a witness if
/// one vanishes.
GeodesicGraph finsler_graph_thm1(const algebra::Space& s, const LinearGraphSym& g,
                                 const metrics::NormEvaluator& ev);

struct PointwiseResult {
  bool ok = false;
  Eigen::VectorXd xi;
  double residual = 0.0;
};

/// Assemble the per-point Finsler geodesic system over the basis of m and
/// solve by minimum-norm least squares; ok when the residual is at most
/// 1e-9 * (1 + |y|^2).
PointwiseResult pointwise_graph(const algebra::Space& s,
                                const metrics::NormEvaluator& ev,
                                const Eigen::VectorXd& y);

/// Evaluator wrapper around pointwise_graph (throws std::domain_error on an
/// unsolvable point).
GeodesicGraph pointwise_graph_fn(const algebra::Space& s,
                                 const metrics::NormEvaluator& ev);

struct F1Result {
  bool pass = true;
  std::string witness;  // triple (z,x,y) in basis labels when failing
  Rat value;
};

/// Exact natural-reductivity identity <[z,x]_m, y> + <x, [z,y]_m> = 0 on all
/// m-basis triples of the given split.
F1Result natred_f1(const algebra::Space& s, const exact::RatMat& gram_m);

struct LatifiReport {
  int samples = 0;
  unsigned seed = 0;
  double max_residual = 0.0;
  std::string worst;
};

/// Finite-difference check of the trilinear natural-reductivity identity
///   g_y([x,u]_m, v) + g_y(u, [x,v]_m) + 2 C_y([x,y]_m, u, v) = 0
/// over random unit tuples, residuals normalized by operand magnitudes.
LatifiReport latifi_residual(const algebra::Space& s,
                             const metrics::NormEvaluator& ev, int samples,
                             unsigned seed);

struct BetaVanishing {
  bool pass = true;
  std::string witness;
};

/// beta([z, u]_m) = 0 for every split-basis z of g and m-basis u; pass means
/// the one-form terms drop from the geodesic equation.
BetaVanishing beta_vanishing_check(const algebra::Space& s,
                                   const metrics::OneFormSpec& beta);

struct Prop13Graph {
  GeodesicGraph graph;
  Vec w;  // h-coordinates of the shift vector
};

/// Closed-form graph xi(y) = F_1(y) * (L,form / L,norm)(y) * w for a
/// one-metric one-form spec on a split where the underlying Riemannian metric
/// is naturally reductive.  Throws std::invalid_argument when the f1 identity
/// fails in this split and std::domain_error when no central shift exists.
Prop13Graph prop13_graph(const algebra::Space& s, const metrics::BlockForms& bf,
                         const metrics::NormSpec& n);

struct SampleConfig {
  int samples = 200;
  unsigned seed = 0;
};

struct VerdictEvidence {
  std::string name;
  std::string detail;
};

struct ReductivityVerdict {
  enum class V {
    naturally_reductive,
    go_not_naturally_reductive,
    not_go_detected,
    inconclusive
  };
  V verdict = V::inconclusive;
  std::vector<VerdictEvidence> evidence;
  std::optional<GeodesicGraph> graph;
  std::string split_used;  // description of the decomposition tested
};

std::string verdict_name(ReductivityVerdict::V v);

/// Decision pipeline: symbolic/fixed solve, exact linearity certificate,
/// shifted-split f1, and sampled pointwise solvability with a linearity-probe
/// witness for the negative cases.
ReductivityVerdict reductivity_verdict(const algebra::Space& s,
                                       const metrics::BlockForms& bf,
                                       const metrics::NormSpec& n,
                                       const std::vector<std::string>& param_names,
                                       const SampleConfig& cfg);

}  // namespace geograph::graphs
