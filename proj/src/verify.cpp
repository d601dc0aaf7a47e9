#include "geograph/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace geograph::verify {

std::vector<Eigen::VectorXd> sample_directions(int dim, int n, unsigned seed,
                                               bool include_basis) {
  std::vector<Eigen::VectorXd> out;
  if (include_basis) {
    for (int i = 0; i < dim; ++i) out.push_back(Eigen::VectorXd::Unit(dim, i));
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        Eigen::VectorXd v =
            Eigen::VectorXd::Unit(dim, i) + Eigen::VectorXd::Unit(dim, j);
        out.push_back(v / v.norm());
      }
  }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> cube(-1.0, 1.0);
  const std::size_t want =
      std::max(out.size(), static_cast<std::size_t>(std::max(n, 0)));
  while (out.size() < want) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = cube(rng);
    const double nr = v.norm();
    // Rejection from the cube keeps the induced sphere measure uniform.
    if (nr < 0.2 || nr > 1.0) continue;
    out.push_back(v / nr);
  }
  return out;
}

namespace {

std::string vec_str(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

ResidualReport geodesic_residual(const algebra::Space& s,
                                 const metrics::NormEvaluator& ev,
                                 const graphs::GeodesicGraph& graph, int n,
                                 unsigned seed, double threshold) {
  ResidualReport rep;
  rep.check = "geodesic_residual";
  rep.seed = seed;
  rep.threshold = threshold;
  rep.worst = Eigen::VectorXd::Zero(s.dim_m());
  const auto ys = sample_directions(s.dim_m(), n, seed);
  rep.samples = static_cast<int>(ys.size());
  for (const auto& y : ys) {
    const Eigen::VectorXd xi = graph.eval(y);
    const Eigen::VectorXd z = algebra::split_embed_double(s, y, xi);
    const double denom = 1.0 + y.squaredNorm();
    for (int t = 0; t < s.dim_m(); ++t) {
      const Eigen::VectorXd zu = algebra::bracket_m_double(s, z, t);
      const double r = std::abs(ev.gy_pair(y, zu)) / denom;
      if (r > rep.max_residual) {
        rep.max_residual = r;
        rep.worst = y;
        rep.aux = "u = " + s.m_label(t);
      }
    }
  }
  return rep;
}

LinearityProbe linearity_probe(const algebra::Space& s,
                               const graphs::GeodesicGraph& graph, int n,
                               unsigned seed) {
  const int dm = s.dim_m();
  const int dh = s.dim_h();
  const auto ys = sample_directions(dm, n, seed);
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(ys.size()), dm);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(ys.size()), dh);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    Y.row(static_cast<Eigen::Index>(i)) = ys[i];
    X.row(static_cast<Eigen::Index>(i)) = graph.eval(ys[i]);
  }
  if (Eigen::FullPivLU<Eigen::MatrixXd>(Y).rank() < dm)
    throw std::invalid_argument("linearity_probe: sample set does not span m");
  LinearityProbe p;
  p.fit = Y.colPivHouseholderQr().solve(X).transpose();
  p.worst = ys.front();
  for (const auto& y : ys) {
    const double dev =
        (graph.eval(y) - p.fit * y).norm() / (1.0 + y.norm());
    if (dev > p.max_deviation) {
      p.max_deviation = dev;
      p.worst = y;
    }
  }
  return p;
}

ResidualReport equivariance_residual(const algebra::Space& s,
                                     const graphs::GeodesicGraph& graph, int n,
                                     unsigned seed, double threshold) {
  ResidualReport rep;
  rep.check = "equivariance_residual";
  rep.seed = seed;
  rep.threshold = threshold;
  rep.worst = Eigen::VectorXd::Zero(s.dim_m());
  const auto ys = sample_directions(s.dim_m(), n, seed);
  rep.samples = static_cast<int>(ys.size());
  std::mt19937 rng(seed ^ 0x9e3779b9u);
  std::uniform_int_distribution<int> wcomp(-2, 2);
  std::uniform_real_distribution<double> tdist(-2.0, 2.0);
  for (const auto& y : ys) {
    algebra::Vec w(s.dim_h(), Rat(0));
    bool nonzero = false;
    while (!nonzero)
      for (auto& c : w) {
        c = Rat(wcomp(rng));
        nonzero = nonzero || !rat_is_zero(c);
      }
    const double t = tdist(rng);
    const Eigen::MatrixXd Am = algebra::exp_ad(s, w, t, true);
    const Eigen::MatrixXd Ah = algebra::exp_ad(s, w, t, false);
    const double r =
        (graph.eval(Am * y) - Ah * graph.eval(y)).norm() / (1.0 + y.norm());
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.worst = y;
      std::ostringstream os;
      os << "w = (";
      for (std::size_t j = 0; j < w.size(); ++j)
        os << (j ? ", " : "") << rat_str(w[j]);
      os << "), t = " << t;
      rep.aux = os.str();
    }
  }
  return rep;
}

ResidualReport homogeneity_residual(const algebra::Space& s,
                                    const graphs::GeodesicGraph& graph,
                                    const std::vector<double>& lambdas, int n,
                                    unsigned seed, double threshold) {
  ResidualReport rep;
  rep.check = "homogeneity_residual";
  rep.seed = seed;
  rep.threshold = threshold;
  rep.worst = Eigen::VectorXd::Zero(s.dim_m());
  const auto ys = sample_directions(s.dim_m(), n, seed);
  rep.samples = static_cast<int>(ys.size());
  for (const auto& y : ys) {
    const Eigen::VectorXd xi = graph.eval(y);
    for (double lam : lambdas) {
      const double r =
          (graph.eval(lam * y) - lam * xi).norm() / (lam * (1.0 + y.norm()));
      if (r > rep.max_residual) {
        rep.max_residual = r;
        rep.worst = y;
        std::ostringstream os;
        os << "lambda = " << lam;
        rep.aux = os.str();
      }
    }
  }
  return rep;
}

ResidualReport compare_graphs(const graphs::GeodesicGraph& a,
                              const graphs::GeodesicGraph& b, int dim_m, int n,
                              unsigned seed, double threshold,
                              bool include_basis) {
  ResidualReport rep;
  rep.check = "compare_graphs";
  rep.seed = seed;
  rep.threshold = threshold;
  rep.worst = Eigen::VectorXd::Zero(dim_m);
  const auto ys = sample_directions(dim_m, n, seed, include_basis);
  rep.samples = static_cast<int>(ys.size());
  for (const auto& y : ys) {
    const double r = (a.eval(y) - b.eval(y)).norm() / (1.0 + y.norm());
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.worst = y;
      rep.aux = "y = " + vec_str(y);
    }
  }
  return rep;
}

}  // namespace geograph::verify
