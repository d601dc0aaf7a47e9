#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "geograph/graphs.hpp"
#include "geograph/verify.hpp"
#include "test_support.hpp"

using namespace geograph;
using namespace geograph::algebra;
using namespace geograph::graphs;
using namespace geograph::metrics;
using geograph::exact::MPoly;
using geograph::exact::RatFunc;
using geograph::exact::RatMat;
using testsupport::alphabeta_randers;
using testsupport::h3_blocks;
using testsupport::h3_qpower;
using testsupport::h3_riemann;
using testsupport::h3xh3_blocks;
using testsupport::h3xh3_space;
using testsupport::h3xR_blocks;
using testsupport::h3xR_space;
using testsupport::heis_shifted4_space;
using testsupport::heis_space;
using testsupport::params2;

namespace {

Eigen::VectorXd v3(double a, double b, double c) {
  Eigen::VectorXd y(3);
  y << a, b, c;
  return y;
}

Eigen::VectorXd rand_dir(std::mt19937& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd y(d);
  do {
    for (int i = 0; i < d; ++i) y(i) = g(rng);
  } while (y.norm() < 1e-6);
  return y;
}

RatMat h3_gram(const Rat& c) {
  auto G = RatMat::identity(3);
  G.at(2, 2) = c;
  return G;
}

// [X,D] = -X: solvable non-unimodular line, beta has no central shift.
Space aff_space() {
  LieAlgebraSpec a;
  a.dim = 2;
  a.basis_labels = {"X", "D"};
  a.structure[{0, 1}] = {{0, Rat(-1)}};
  ReductiveSplit split;
  split.h_indices = {1};
  split.m_indices = {0};
  ModuleSplit ms;
  ms.blocks = {{0}};
  return Space(a, split, ms);
}

Space abelian_space() {
  LieAlgebraSpec a;
  a.dim = 3;
  a.basis_labels = {"A", "B", "Z"};
  ReductiveSplit split;
  split.h_indices = {2};
  split.m_indices = {0, 1};
  ModuleSplit ms;
  ms.blocks = {{0, 1}};
  return Space(a, split, ms);
}

Space so3_space() {
  LieAlgebraSpec a;
  a.dim = 3;
  a.basis_labels = {"X", "Y", "Z"};
  a.structure[{0, 1}] = {{2, Rat(1)}};
  a.structure[{1, 2}] = {{0, Rat(1)}};
  a.structure[{0, 2}] = {{1, Rat(-1)}};
  ReductiveSplit split;
  split.m_indices = {0, 1, 2};
  ModuleSplit ms;
  ms.blocks = {{0}, {1}, {2}};
  return Space(a, split, ms);
}

BlockForms lines3() {
  BlockForms bf;
  BlockForm l;
  l.matrix = RatMat::identity(1);
  bf.forms = {l, l, l};
  return bf;
}

}  // namespace

TEST_SUITE("graphs") {

TEST_CASE("symbolic solve on Heisenberg: xi = (c2/c1) y3") {
  auto s = heis_space();
  auto bf = h3_blocks();
  auto so = solve_linear_graph_symbolic(s, bf, {"c1", "c2"});
  REQUIRE(so.graph.has_value());
  const auto& g = *so.graph;
  CHECK(g.unique());
  REQUIRE(g.k.size() == 1);
  REQUIRE(g.k[0].size() == 3);
  auto c1 = RatFunc::variable(g.ctx, 0);
  auto c2 = RatFunc::variable(g.ctx, 1);
  CHECK(g.k[0][0].is_zero());
  CHECK(g.k[0][1].is_zero());
  CHECK(g.k[0][2] == c2 / c1);

  auto K = instantiate(g, {Rat(1), Rat(2)});
  CHECK(K.at(0, 2) == Rat(2));
  CHECK(linear_graph_satisfies_exact(s, h3_gram(Rat(2)), K));

  auto K2 = instantiate(g, {Rat(3), Rat(5)});
  CHECK(K2.at(0, 2) == Rat(5) / Rat(3));
  CHECK(linear_graph_satisfies_exact(s, h3_gram(Rat(5) / Rat(3)), K2));
  RatMat G2(3, 3);
  G2.at(0, 0) = G2.at(1, 1) = Rat(3);
  G2.at(2, 2) = Rat(5);
  CHECK(linear_graph_satisfies_exact(s, G2, K2));
}

TEST_CASE("rendered graph after fixing c1 = 1") {
  auto s = heis_space();
  auto bf = h3_blocks();
  auto so = solve_linear_graph_symbolic(s, bf, {"c1", "c"});
  REQUIRE(so.graph.has_value());
  auto g = specialize(*so.graph, {{"c1", Rat(1)}});
  CHECK(render_linear_graph(s, g) == "xi[D] = c * y3");
}

TEST_CASE("symbolic solve decouples over a product of Heisenberg copies") {
  auto s = h3xh3_space();
  auto bf = h3xh3_blocks();
  auto so = solve_linear_graph_symbolic(s, bf, {"c1", "c2", "c3", "c4"});
  REQUIRE(so.graph.has_value());
  const auto& g = *so.graph;
  CHECK(g.unique());
  auto v = [&](int i) { return RatFunc::variable(g.ctx, i); };
  for (int j = 0; j < 2; ++j)
    for (int r = 0; r < 6; ++r) {
      if ((j == 0 && r == 2) || (j == 1 && r == 5)) continue;
      CAPTURE(j);
      CAPTURE(r);
      CHECK(g.k[j][r].is_zero());
    }
  CHECK(g.k[0][2] == v(1) / v(0));
  CHECK(g.k[1][5] == v(3) / v(2));
}

TEST_CASE("abelian split yields the zero graph with full freedom") {
  auto s = abelian_space();
  auto so = solve_linear_graph_fixed(s, RatMat::identity(2));
  REQUIRE(so.graph.has_value());
  const auto& g = *so.graph;
  CHECK(g.k[0][0].is_zero());
  CHECK(g.k[0][1].is_zero());
  CHECK_FALSE(g.unique());
  CHECK(g.nullspace.size() == 2);
}

TEST_CASE("fixed solve and the flatness identity under a split shift") {
  auto s = heis_space();
  const std::vector<Rat> cases = {Rat(2), Rat(7) / Rat(3)};
  for (const Rat& c : cases) {
    CAPTURE(rat_str(c));
    auto G = h3_gram(c);
    auto so = solve_linear_graph_fixed(s, G);
    REQUIRE(so.graph.has_value());
    CHECK(so.graph->unique());
    auto K = instantiate(*so.graph, {});
    CHECK(K.at(0, 2) == c);

    auto f1 = natred_f1(s, G);
    CHECK_FALSE(f1.pass);
    CHECK(f1.witness == "(E1, E2, E3)");
    CHECK(f1.value == c);

    auto shifted = shift_split(s, {Vec{Rat(0)}, Vec{Rat(0)}, Vec{c}});
    auto f1s = natred_f1(shifted, G);
    CHECK(f1s.pass);
  }
}

TEST_CASE("closure graph matches the weighted-norm ratio") {
  auto s = heis_space();
  auto bf = h3_blocks();
  auto so = solve_linear_graph_symbolic(s, bf, {"c1", "c2"});
  REQUIRE(so.graph.has_value());
  NormEvaluator ev(s, bf, h3_qpower(Rat(1), Rat(4)));
  auto tg = finsler_graph_thm1(s, *so.graph, ev);
  CHECK(tg.provenance == GeodesicGraph::Provenance::Theorem1);

  auto xi0 = tg.eval(v3(0, 0, 1));
  REQUIRE(xi0.size() == 1);
  CHECK(xi0(0) == doctest::Approx(3.0).epsilon(1e-12));

  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto y = rand_dir(rng, 3);
    double f1n = std::sqrt(y(0) * y(0) + y(1) * y(1) + y(2) * y(2));
    double f2n = std::sqrt(y(0) * y(0) + y(1) * y(1) + 4 * y(2) * y(2));
    double want = (f1n + 4 * f2n) / (f1n + f2n) * y(2);
    auto xi = tg.eval(y);
    CHECK(std::abs(xi(0) - want) <= 1e-10 * (1 + std::abs(want)));
  }
}

TEST_CASE("coefficients collapse to constants on an equal-metric family") {
  auto s = heis_space();
  auto bf = h3_blocks();
  auto so = solve_linear_graph_symbolic(s, bf, {"c1", "c2"});
  REQUIRE(so.graph.has_value());
  // Both family members share (1, 2), so c -> (b1 + b2) chat with
  // chat = (1, 2): every coefficient must be constant in b.
  auto bctx = exact::make_context({"b1", "b2"});
  std::vector<MPoly> images;
  images.push_back(MPoly::variable(bctx, 0) + MPoly::variable(bctx, 1));
  images.push_back(MPoly::variable(bctx, 0).scaled(Rat(2)) +
                   MPoly::variable(bctx, 1).scaled(Rat(2)));
  auto comp = so.graph->k[0][2].compose(images);
  REQUIRE(comp.is_constant());
  CHECK(comp.constant_value() == Rat(2));

  auto fixed = solve_linear_graph_fixed(s, h3_gram(Rat(2)));
  REQUIRE(fixed.graph.has_value());
  CHECK(instantiate(*fixed.graph, {}).at(0, 2) == comp.constant_value());
}

TEST_CASE("pointwise solve agrees with the closed forms") {
  auto s = heis_space();
  auto bf = h3_blocks();

  NormEvaluator rev(s, bf, h3_riemann(Rat(2)));
  auto pr = pointwise_graph(s, rev, v3(0.3, -0.2, 0.7));
  REQUIRE(pr.ok);
  CHECK(pr.xi(0) == doctest::Approx(1.4).epsilon(1e-9));

  NormEvaluator ev(s, bf, h3_qpower(Rat(1), Rat(4)));
  // Degenerate direction: the system is 0 = 0 and minimum norm picks 0.
  auto pd = pointwise_graph(s, ev, v3(0, 0, 1));
  REQUIRE(pd.ok);
  CHECK(std::abs(pd.xi(0)) <= 1e-12);

  auto so = solve_linear_graph_symbolic(s, bf, {"c1", "c2"});
  auto tg = finsler_graph_thm1(s, *so.graph, ev);
  auto pg = pointwise_graph_fn(s, ev);
  auto cmp = verify::compare_graphs(tg, pg, 3, 50, 5, 1e-8, false);
  CHECK(cmp.pass());
}

TEST_CASE("trilinear reductivity residual separates the two splits") {
  auto bf = h3_blocks();
  auto shifted = heis_shifted4_space();
  NormEvaluator sev(shifted, bf, h3_riemann(Rat(4)));
  auto good = latifi_residual(shifted, sev, 50, 1);
  CHECK(good.max_residual <= 1e-5);

  auto s = heis_space();
  NormEvaluator ev(s, bf, h3_qpower(Rat(1), Rat(4)));
  auto bad = latifi_residual(s, ev, 50, 1);
  CHECK(bad.max_residual > 1e-2);
}

TEST_CASE("one-form bracket vanishing") {
  auto s4 = h3xR_space();
  OneFormSpec central{"beta", {Rat(0), Rat(0), Rat(0), Rat(1) / Rat(2)}};
  CHECK(beta_vanishing_check(s4, central).pass);

  auto s = heis_space();
  OneFormSpec dual_center{"beta", {Rat(0), Rat(0), Rat(1)}};
  auto bv = beta_vanishing_check(s, dual_center);
  CHECK_FALSE(bv.pass);
  CHECK(bv.witness == "(E1, E2)");

  OneFormSpec zero{"beta", {Rat(0), Rat(0), Rat(0)}};
  CHECK(beta_vanishing_check(s, zero).pass);
}

TEST_CASE("closed-form one-form graph on the reductive split") {
  auto bf = h3_blocks();
  auto shifted = heis_shifted4_space();

  auto p13 = prop13_graph(shifted, bf, alphabeta_randers(Rat(1)));
  REQUIRE(p13.w.size() == 1);
  CHECK(p13.w[0] == Rat(1));
  auto xi = p13.graph.eval(v3(0, 0, 1));
  CHECK(xi(0) == doctest::Approx(2.0).epsilon(1e-10));

  NormEvaluator ev(shifted, bf, alphabeta_randers(Rat(1)));
  auto pg = pointwise_graph_fn(shifted, ev);
  auto cmp = verify::compare_graphs(p13.graph, pg, 3, 50, 7, 1e-8, false);
  CHECK(cmp.pass());

  auto half = prop13_graph(shifted, bf, alphabeta_randers(Rat(1) / Rat(2)));
  CHECK(half.w[0] == Rat(1) / Rat(2));

  auto none = prop13_graph(shifted, bf, alphabeta_randers(Rat(0)));
  CHECK(none.w[0] == Rat(0));
  REQUIRE(none.graph.linear_matrix.has_value());
  CHECK(none.graph.linear_matrix->at(0, 0) == Rat(0));
  CHECK(none.graph.eval(v3(0.4, -1.1, 0.3)).norm() == 0.0);
}

TEST_CASE("closed-form one-form graph rejects bad hypotheses") {
  auto bf = h3_blocks();
  // Underlying metric not flat in the unshifted split.
  CHECK_THROWS_AS(prop13_graph(heis_space(), bf, alphabeta_randers(Rat(1))),
                  std::invalid_argument);

  // No central shift for the dual vector on the affine line.
  auto s = aff_space();
  BlockForms line;
  BlockForm l;
  l.matrix = RatMat::identity(1);
  line.forms = {l};
  NormSpec n;
  n.family = Family::RandersLike;
  n.metrics = {MetricParams{{Rat(1)}}};
  n.forms = {{"beta", {Rat(1)}}};
  CHECK_THROWS_AS(prop13_graph(s, line, n), std::domain_error);
}

TEST_CASE("verdict: quadratic Heisenberg metric is naturally reductive") {
  auto s = heis_space();
  auto bf = h3_blocks();
  SampleConfig cfg;
  cfg.samples = 60;
  auto v = reductivity_verdict(s, bf, h3_riemann(Rat(2)), {}, cfg);
  CHECK(v.verdict == ReductivityVerdict::V::naturally_reductive);
  REQUIRE(v.graph.has_value());
  REQUIRE(v.graph->linear_matrix.has_value());
  CHECK(v.graph->linear_matrix->at(0, 2) == Rat(2));
  CHECK(v.split_used.find("E3+2*D") != std::string::npos);
}

TEST_CASE("verdict: distinct-weight family is g.o. but not naturally reductive") {
  auto s = heis_space();
  auto bf = h3_blocks();
  SampleConfig cfg;
  cfg.samples = 60;
  auto v = reductivity_verdict(s, bf, h3_qpower(Rat(1), Rat(4)), {}, cfg);
  CHECK(v.verdict == ReductivityVerdict::V::go_not_naturally_reductive);
  REQUIRE(v.graph.has_value());
  CHECK(v.graph->provenance == GeodesicGraph::Provenance::Theorem1);
}

TEST_CASE("verdict: equal-weight family degenerates to naturally reductive") {
  auto s = heis_space();
  auto bf = h3_blocks();
  SampleConfig cfg;
  cfg.samples = 60;
  auto v = reductivity_verdict(s, bf, h3_qpower(Rat(3), Rat(3)), {}, cfg);
  CHECK(v.verdict == ReductivityVerdict::V::naturally_reductive);
  REQUIRE(v.graph.has_value());
  REQUIRE(v.graph->linear_matrix.has_value());
  CHECK(v.graph->linear_matrix->at(0, 2) == Rat(3));
}

TEST_CASE("verdict: product family with proportional block weights") {
  auto s = h3xh3_space();
  auto bf = h3xh3_blocks();
  NormSpec n;
  n.family = Family::QPower;
  n.q = 3.0;
  n.metrics = {MetricParams{{Rat(1), Rat(2), Rat(1), Rat(3)}},
               MetricParams{{Rat(2), Rat(4), Rat(5), Rat(15)}}};
  SampleConfig cfg;
  cfg.samples = 60;
  auto v = reductivity_verdict(s, bf, n, {}, cfg);
  CHECK(v.verdict == ReductivityVerdict::V::naturally_reductive);
  REQUIRE(v.graph.has_value());
  REQUIRE(v.graph->linear_matrix.has_value());
  CHECK(v.graph->linear_matrix->at(0, 2) == Rat(2));
  CHECK(v.graph->linear_matrix->at(1, 5) == Rat(3));
  CHECK(v.split_used.find("E3+2*D1") != std::string::npos);
  CHECK(v.split_used.find("F3+3*D2") != std::string::npos);
}

TEST_CASE("verdict: nonzero one-form shift blocks natural reductivity") {
  auto shifted = heis_shifted4_space();
  auto bf = h3_blocks();
  SampleConfig cfg;
  cfg.samples = 60;
  auto v = reductivity_verdict(shifted, bf, alphabeta_randers(Rat(1)), {}, cfg);
  CHECK(v.verdict == ReductivityVerdict::V::go_not_naturally_reductive);
  bool saw_w = false;
  for (const auto& e : v.evidence)
    if (e.name == "prop13_graph" && e.detail == "w = (1)") saw_w = true;
  CHECK(saw_w);
}

TEST_CASE("verdict: one-form on the flat direction changes nothing") {
  auto s = h3xR_space();
  auto bf = h3xR_blocks();
  NormSpec n;
  n.family = Family::RandersLike;
  n.metrics = {MetricParams{{Rat(1), Rat(2), Rat(1)}}};
  n.forms = {{"beta", {Rat(0), Rat(0), Rat(0), Rat(1) / Rat(2)}}};
  SampleConfig cfg;
  cfg.samples = 60;
  auto v = reductivity_verdict(s, bf, n, {}, cfg);
  CHECK(v.verdict == ReductivityVerdict::V::naturally_reductive);
  CHECK(v.split_used.find("E3+2*D") != std::string::npos);
}

TEST_CASE("verdict: distinct round weights on so(3) leave no geodesic vector") {
  auto s = so3_space();
  auto bf = lines3();
  NormSpec n;
  n.family = Family::WeightedSquares;
  n.metrics = {MetricParams{{Rat(1), Rat(2), Rat(3)}}};
  n.metric_weights = {Rat(1)};
  SampleConfig cfg;
  cfg.samples = 60;
  auto v = reductivity_verdict(s, bf, n, {}, cfg);
  CHECK(v.verdict == ReductivityVerdict::V::not_go_detected);
}

}  // TEST_SUITE
