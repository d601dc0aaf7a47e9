#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geograph/algebra.hpp"
#include "geograph/graphs.hpp"
#include "geograph/metrics.hpp"

namespace geograph::verify {

/// Deterministic sample of directions in R^dim: all basis directions, all
/// normalized two-basis diagonals (when include_basis), then seeded uniform
/// points on the unit sphere until `n` directions are collected.
std::vector<Eigen::VectorXd> sample_directions(int dim, int n, unsigned seed,
                                               bool include_basis = true);

struct ResidualReport {
  std::string check;
  int samples = 0;
  unsigned seed = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  Eigen::VectorXd worst;  // sampled y achieving the max
  std::string aux;        // auxiliary witness slots (basis vector, w, lambda...)
  bool pass() const { return max_residual <= threshold; }
};

/// Max over sampled y and basis u of |g_y(y, [y+xi(y), u]_m)| / (1+|y|^2).
ResidualReport geodesic_residual(const algebra::Space& s,
                                 const metrics::NormEvaluator& ev,
                                 const graphs::GeodesicGraph& graph, int n,
                                 unsigned seed, double threshold = 1e-9);

struct LinearityProbe {
  Eigen::MatrixXd fit;       // best linear map m -> h (dim_h x dim_m)
  double max_deviation = 0;  // max |xi(y) - fit*y| / (1+|y|)
  Eigen::VectorXd worst;
  bool linear() const { return max_deviation <= 1e-8; }
};

/// Least-squares linear fit to sampled (y, xi(y)); throws std::invalid_argument
/// when the sample set does not span m.
LinearityProbe linearity_probe(const algebra::Space& s,
                               const graphs::GeodesicGraph& graph, int n,
                               unsigned seed);

/// Max over samples of |xi(exp_ad(w,t) y) - exp_ad(w,t)|_h xi(y)| / (1+|y|),
/// with random unit w in h and t in [-2, 2].
ResidualReport equivariance_residual(const algebra::Space& s,
                                     const graphs::GeodesicGraph& graph, int n,
                                     unsigned seed, double threshold = 1e-8);

/// Max over samples and given lambdas of |xi(lambda y) - lambda xi(y)| /
/// (lambda (1+|y|)).
ResidualReport homogeneity_residual(const algebra::Space& s,
                                    const graphs::GeodesicGraph& graph,
                                    const std::vector<double>& lambdas, int n,
                                    unsigned seed, double threshold = 1e-10);

/// Max over samples of |xi_a(y) - xi_b(y)| / (1+|y|).  Comparisons against
/// minimum-norm pointwise graphs should pass include_basis = false: at
/// degenerate basis directions the geodesic system can be underdetermined and
/// the value of a graph there is a convention, not an identity.
ResidualReport compare_graphs(const graphs::GeodesicGraph& a,
                              const graphs::GeodesicGraph& b, int dim_m, int n,
                              unsigned seed, double threshold = 1e-12,
                              bool include_basis = true);

}  // namespace geograph::verify
