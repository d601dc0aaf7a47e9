#include "geograph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace geograph::metrics {

void BlockForms::check(const algebra::Space& s) const {
  if (static_cast<int>(forms.size()) != s.nblocks())
    throw std::invalid_argument("BlockForms: one form per module block required");
  for (int i = 0; i < s.nblocks(); ++i) {
    const auto& M = forms[i].matrix;
    const int bs = static_cast<int>(s.msplit().blocks[i].size());
    if (M.rows() != bs || M.cols() != bs)
      throw std::invalid_argument("BlockForms: block " + std::to_string(i) +
                                  " matrix has wrong shape");
    if (!M.is_symmetric())
      throw std::invalid_argument("BlockForms: block " + std::to_string(i) +
                                  " matrix is not symmetric");
    if (!M.leading_minors_positive())
      throw std::invalid_argument("BlockForms: block " + std::to_string(i) +
                                  " matrix is not positive-definite");
  }
}

Rat alpha_pair(const algebra::Space& s, const BlockForms& bf, int i,
               const Vec& u, const Vec& v) {
  if (i < 0 || i >= s.nblocks())
    throw std::out_of_range("alpha_pair: block index out of range");
  const auto& members = s.msplit().blocks[i];
  const auto& M = bf.forms[i].matrix;
  Rat acc(0);
  for (std::size_t p = 0; p < members.size(); ++p)
    for (std::size_t q = 0; q < members.size(); ++q) {
      const Rat& m = M.at(static_cast<int>(p), static_cast<int>(q));
      if (!rat_is_zero(m)) acc += m * u[members[p]] * v[members[q]];
    }
  return acc;
}

Rat eval_metric(const algebra::Space& s, const BlockForms& bf,
                const MetricParams& p, const Vec& u, const Vec& v) {
  if (static_cast<int>(p.c.size()) != s.nblocks())
    throw std::invalid_argument("eval_metric: parameter tuple length mismatch");
  Rat acc(0);
  for (int i = 0; i < s.nblocks(); ++i)
    if (!rat_is_zero(p.c[i])) acc += p.c[i] * alpha_pair(s, bf, i, u, v);
  return acc;
}

exact::RatMat gram(const algebra::Space& s, const BlockForms& bf,
                   const MetricParams& p) {
  const int dm = s.dim_m();
  exact::RatMat G(dm, dm);
  for (int i = 0; i < s.nblocks(); ++i) {
    const auto& members = s.msplit().blocks[i];
    const auto& M = bf.forms[i].matrix;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = 0; b < members.size(); ++b)
        G.at(members[a], members[b]) +=
            p.c[i] * M.at(static_cast<int>(a), static_cast<int>(b));
  }
  return G;
}

std::optional<std::string> oneform_invariance_issue(const algebra::Space& s,
                                                    const OneFormSpec& f) {
  if (static_cast<int>(f.covector.size()) != s.dim_m())
    return "one-form covector length mismatch";
  for (int w = 0; w < s.dim_h(); ++w)
    for (int a = 0; a < s.dim_m(); ++a) {
      const Vec& img = s.bracket_hm_m(w, a);
      Rat val(0);
      for (int i = 0; i < s.dim_m(); ++i) val += f.covector[i] * img[i];
      if (!rat_is_zero(val))
        return "beta([" + s.h_label(w) + "," + s.m_label(a) + "]) = " +
               rat_str(val);
    }
  return std::nullopt;
}

Vec oneform_dual_vector(const algebra::Space& s, const BlockForms& bf,
                        const MetricParams& p, const OneFormSpec& f) {
  exact::RatMat G = gram(s, bf, p);
  auto v = exact::RatMat::solve(G, f.covector);
  if (!v)
    throw std::logic_error("oneform_dual_vector: metric Gram matrix singular");
  return *v;
}

OneFormSpec vector_dual_oneform(const algebra::Space& s, const BlockForms& bf,
                                const MetricParams& p, const Vec& v,
                                const std::string& name) {
  exact::RatMat G = gram(s, bf, p);
  return OneFormSpec{name, G.apply(v)};
}

std::vector<std::string> validate_norm(const algebra::Space& s,
                                       const BlockForms& bf, const NormSpec& n) {
  std::vector<std::string> issues;
  auto bad = [&](const std::string& m) { issues.push_back(m); };

  if (n.metrics.empty()) bad("no component metrics");
  for (std::size_t j = 0; j < n.metrics.size(); ++j) {
    if (static_cast<int>(n.metrics[j].c.size()) != s.nblocks()) {
      bad("metric " + std::to_string(j) + ": parameter tuple length mismatch");
      continue;
    }
    for (int i = 0; i < s.nblocks(); ++i)
      if (sgn(n.metrics[j].c[i]) <= 0)
        bad("metric " + std::to_string(j) + ": parameter c^" +
            std::to_string(i + 1) + " not positive");
  }
  for (const auto& f : n.forms) {
    if (auto issue = oneform_invariance_issue(s, f))
      bad("one-form " + f.name + ": " + *issue);
  }

  switch (n.family) {
    case Family::QPower:
      if (!(n.q > 2.0)) bad("QPower exponent must satisfy q > 2");
      if (!n.forms.empty()) bad("QPower family takes no one-forms");
      break;
    case Family::WeightedSquares:
      if (n.metric_weights.size() != n.metrics.size())
        bad("WeightedSquares: one weight per metric required");
      else
        for (std::size_t j = 0; j < n.metric_weights.size(); ++j)
          if (sgn(n.metric_weights[j]) <= 0)
            bad("WeightedSquares: metric weight " + std::to_string(j) +
                " not positive");
      if (n.form_weights.size() != n.forms.size())
        bad("WeightedSquares: one weight per one-form required");
      else
        for (std::size_t m = 0; m < n.form_weights.size(); ++m)
          if (sgn(n.form_weights[m]) < 0)
            bad("WeightedSquares: form weight " + std::to_string(m) +
                " negative");
      break;
    case Family::RandersLike: {
      if (n.metrics.size() != 1) bad("RandersLike: exactly one metric required");
      if (n.forms.size() != 1) {
        bad("RandersLike: exactly one one-form required");
        break;
      }
      if (issues.empty()) {
        Vec v = oneform_dual_vector(s, bf, n.metrics[0], n.forms[0]);
        Rat nn(0);
        const Vec gv = gram(s, bf, n.metrics[0]).apply(v);
        for (int i = 0; i < s.dim_m(); ++i) nn += gv[i] * v[i];
        if (!(nn < Rat(1)))
          bad("RandersLike: one-form has metric norm^2 = " + rat_str(nn) +
              " >= 1");
      }
      break;
    }
  }
  return issues;
}

NormEvaluator::NormEvaluator(const algebra::Space& s, const BlockForms& bf,
                             const NormSpec& n)
    : dim_m_(s.dim_m()), norm_(n) {
  bf.check(s);
  const int dm = dim_m_;
  alpha_.assign(s.nblocks(), Eigen::MatrixXd::Zero(dm, dm));
  for (int i = 0; i < s.nblocks(); ++i) {
    const auto& members = s.msplit().blocks[i];
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = 0; b < members.size(); ++b)
        alpha_[i](members[a], members[b]) = rat_double(
            bf.forms[i].matrix.at(static_cast<int>(a), static_cast<int>(b)));
  }
  gj_.assign(n.metrics.size(), Eigen::MatrixXd::Zero(dm, dm));
  for (std::size_t j = 0; j < n.metrics.size(); ++j) {
    if (static_cast<int>(n.metrics[j].c.size()) != s.nblocks())
      throw std::invalid_argument("NormEvaluator: parameter tuple length mismatch");
    for (int i = 0; i < s.nblocks(); ++i)
      gj_[j] += rat_double(n.metrics[j].c[i]) * alpha_[i];
  }
  betas_.assign(n.forms.size(), Eigen::VectorXd::Zero(dm));
  for (std::size_t m = 0; m < n.forms.size(); ++m) {
    if (static_cast<int>(n.forms[m].covector.size()) != dm)
      throw std::invalid_argument("NormEvaluator: one-form length mismatch");
    for (int i = 0; i < dm; ++i)
      betas_[m](i) = rat_double(n.forms[m].covector[i]);
  }
}

void NormEvaluator::require_nonzero(const Eigen::VectorXd& y) const {
  if (static_cast<int>(y.size()) != dim_m_)
    throw std::invalid_argument("NormEvaluator: vector has wrong dimension");
  if (y.norm() == 0.0)
    throw std::domain_error("NormEvaluator: y = 0 is outside the norm domain");
}

LEval NormEvaluator::eval(const Eigen::VectorXd& y) const {
  require_nonzero(y);
  LEval e;
  const int k = nmetrics();
  const int l = nforms();
  e.Fj.resize(k);
  e.beta.resize(l);
  for (int j = 0; j < k; ++j) e.Fj[j] = std::sqrt(y.dot(gj_[j] * y));
  for (int m = 0; m < l; ++m) e.beta[m] = betas_[m].dot(y);
  e.dL_norm.assign(k, 0.0);
  e.dL_form.assign(l, 0.0);

  switch (norm_.family) {
    case Family::QPower: {
      const double q = norm_.q;
      double T = 0.0;
      for (int j = 0; j < k; ++j) T += std::pow(e.Fj[j], q);
      e.L = std::pow(T, 2.0 / q);
      for (int j = 0; j < k; ++j)
        e.dL_norm[j] = 2.0 * std::pow(e.Fj[j], q - 1.0) * std::pow(T, 2.0 / q - 1.0);
      break;
    }
    case Family::WeightedSquares: {
      e.L = 0.0;
      for (int j = 0; j < k; ++j) {
        const double w = rat_double(norm_.metric_weights[j]);
        e.L += w * e.Fj[j] * e.Fj[j];
        e.dL_norm[j] = 2.0 * w * e.Fj[j];
      }
      for (int m = 0; m < l; ++m) {
        const double v = rat_double(norm_.form_weights[m]);
        e.L += v * e.beta[m] * e.beta[m];
        e.dL_form[m] = 2.0 * v * e.beta[m];
      }
      break;
    }
    case Family::RandersLike: {
      const double a = e.Fj[0] + e.beta[0];
      e.L = a * a;
      e.dL_norm[0] = 2.0 * a;
      e.dL_form[0] = 2.0 * a;
      break;
    }
  }
  e.F = std::sqrt(std::max(e.L, 0.0));
  return e;
}

BCValues NormEvaluator::bc(const Eigen::VectorXd& y) const {
  LEval e = eval(y);
  BCValues r;
  const int k = nmetrics();
  r.B.resize(k);
  for (int j = 0; j < k; ++j) r.B[j] = e.dL_norm[j] / e.Fj[j];
  const int s = nblocks();
  r.C.assign(s, 0.0);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < k; ++j)
      r.C[i] += r.B[j] * rat_double(norm_.metrics[j].c[i]);
  return r;
}

double NormEvaluator::gy_pair(const Eigen::VectorXd& y,
                              const Eigen::VectorXd& v) const {
  LEval e = eval(y);
  double acc = 0.0;
  for (int j = 0; j < nmetrics(); ++j)
    acc += e.dL_norm[j] / e.Fj[j] * y.dot(gj_[j] * v);
  for (int m = 0; m < nforms(); ++m) acc += e.dL_form[m] * betas_[m].dot(v);
  return acc / 2.0;
}

Eigen::MatrixXd NormEvaluator::fundamental_tensor_fd(const Eigen::VectorXd& y) const {
  require_nonzero(y);
  const int d = dim_m_;
  const double h = 1e-5 * y.norm();
  auto F2 = [&](const Eigen::VectorXd& z) { return eval(z).L; };
  Eigen::MatrixXd G(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Eigen::VectorXd ea = Eigen::VectorXd::Zero(d);
      Eigen::VectorXd eb = Eigen::VectorXd::Zero(d);
      ea(a) = h;
      eb(b) = h;
      const double v = (F2(y + ea + eb) - F2(y + ea - eb) - F2(y - ea + eb) +
                        F2(y - ea - eb)) /
                       (4.0 * h * h);
      G(a, b) = G(b, a) = 0.5 * v;
    }
  return G;
}

double NormEvaluator::cartan_tensor_fd(const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v,
                                       const Eigen::VectorXd& w) const {
  require_nonzero(y);
  const double h = 3.16e-3 * y.norm();
  double acc = 0.0;
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1})
      for (int s3 : {-1, 1}) {
        const Eigen::VectorXd z = y + h * (s1 * u + s2 * v + s3 * w);
        acc += s1 * s2 * s3 * eval(z).L;
      }
  return 0.25 * acc / (8.0 * h * h * h);
}

Eigen::MatrixXd NormEvaluator::arg_hessian(const Eigen::VectorXd& y) const {
  LEval e = eval(y);
  const int k = nmetrics();
  const int l = nforms();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k + l, k + l);
  switch (norm_.family) {
    case Family::QPower: {
      const double q = norm_.q;
      double T = 0.0;
      for (int j = 0; j < k; ++j) T += std::pow(e.Fj[j], q);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          double v = 2.0 * (2.0 - q) * std::pow(e.Fj[i], q - 1.0) *
                     std::pow(e.Fj[j], q - 1.0) * std::pow(T, 2.0 / q - 2.0);
          if (i == j)
            v += 2.0 * (q - 1.0) * std::pow(e.Fj[i], q - 2.0) *
                 std::pow(T, 2.0 / q - 1.0);
          H(i, j) = v;
        }
      break;
    }
    case Family::WeightedSquares: {
      for (int j = 0; j < k; ++j) H(j, j) = 2.0 * rat_double(norm_.metric_weights[j]);
      for (int m = 0; m < l; ++m)
        H(k + m, k + m) = 2.0 * rat_double(norm_.form_weights[m]);
      break;
    }
    case Family::RandersLike: {
      H(0, 0) = H(0, 1) = H(1, 0) = H(1, 1) = 2.0;
      break;
    }
  }
  return H;
}

AdmissibilityReport admissibility_sample(const NormEvaluator& ev, int samples,
                                         unsigned seed) {
  AdmissibilityReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.min_partial = std::numeric_limits<double>::infinity();
  rep.min_hessian_eig = std::numeric_limits<double>::infinity();
  rep.min_partial_sum = std::numeric_limits<double>::infinity();
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = ev.dim();
  for (int it = 0; it < samples; ++it) {
    Eigen::VectorXd y(d);
    do {
      for (int i = 0; i < d; ++i) y(i) = gauss(rng);
    } while (y.norm() < 1e-8);
    y.normalize();
    LEval e = ev.eval(y);
    std::ostringstream wit;
    wit << "y = [" << y.transpose() << "]";

    double sum = 0.0;
    for (std::size_t j = 0; j < e.dL_norm.size(); ++j) {
      sum += e.dL_norm[j];
      rep.min_partial = std::min(rep.min_partial, e.dL_norm[j]);
      if (e.dL_norm[j] < -1e-12)
        rep.violations.push_back("condition (i): L," + std::to_string(j + 1) +
                                 " = " + std::to_string(e.dL_norm[j]) + " at " +
                                 wit.str());
    }
    rep.min_partial_sum = std::min(rep.min_partial_sum, sum);
    if (!(sum > 1e-12))
      rep.violations.push_back("condition (iii): sum of L,_j = " +
                               std::to_string(sum) + " at " + wit.str());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ev.arg_hessian(y));
    const double lmin = es.eigenvalues().minCoeff();
    rep.min_hessian_eig = std::min(rep.min_hessian_eig, lmin);
    if (lmin < -1e-8)
      rep.violations.push_back("condition (ii): Hess(L) eigenvalue " +
                               std::to_string(lmin) + " at " + wit.str());
  }
  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace geograph::metrics
