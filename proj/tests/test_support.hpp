#pragma once

// Shared inline builders for the Heisenberg-based test spaces.

#include "geograph/algebra.hpp"
#include "geograph/metrics.hpp"

namespace testsupport {

using geograph::Rat;
using namespace geograph::algebra;
using namespace geograph::metrics;

// [E1,E2] = E3, [D,E1] = E2, [D,E2] = -E1.
inline LieAlgebraSpec heis_rot_alg() {
  LieAlgebraSpec a;
  a.dim = 4;
  a.basis_labels = {"E1", "E2", "E3", "D"};
  a.structure[{0, 1}] = {{2, Rat(1)}};
  a.structure[{0, 3}] = {{1, Rat(-1)}};
  a.structure[{1, 3}] = {{0, Rat(1)}};
  return a;
}

inline Space heis_space() {
  ReductiveSplit split;
  split.h_indices = {3};
  split.m_indices = {0, 1, 2};
  ModuleSplit ms;
  ms.blocks = {{0, 1}, {2}};
  return Space(heis_rot_alg(), split, ms);
}

// alpha_1 = identity on span{E1,E2}, alpha_2 = 1 on span{E3}.
inline BlockForms h3_blocks() {
  BlockForms bf;
  BlockForm b1, b2;
  b1.matrix = geograph::exact::RatMat::identity(2);
  b2.matrix = geograph::exact::RatMat::identity(1);
  bf.forms = {b1, b2};
  return bf;
}

inline MetricParams params2(const Rat& c1, const Rat& c2) {
  return MetricParams{{c1, c2}};
}

// L = (F_1^q + F_2^q)^(2/q) with g_j = alpha_1 + c_j alpha_2.
inline NormSpec h3_qpower(const Rat& c1, const Rat& c2, double q = 3.0) {
  NormSpec n;
  n.family = Family::QPower;
  n.q = q;
  n.metrics = {params2(Rat(1), c1), params2(Rat(1), c2)};
  return n;
}

// Riemannian degeneration: L = F_1^2.
inline NormSpec h3_riemann(const Rat& c) {
  NormSpec n;
  n.family = Family::WeightedSquares;
  n.metrics = {params2(Rat(1), c)};
  n.metric_weights = {Rat(1)};
  return n;
}

// Two commuting Heisenberg copies, each with its own rotation.
inline LieAlgebraSpec h3xh3_alg() {
  LieAlgebraSpec a;
  a.dim = 8;
  a.basis_labels = {"E1", "E2", "E3", "F1", "F2", "F3", "D1", "D2"};
  a.structure[{0, 1}] = {{2, Rat(1)}};
  a.structure[{0, 6}] = {{1, Rat(-1)}};
  a.structure[{1, 6}] = {{0, Rat(1)}};
  a.structure[{3, 4}] = {{5, Rat(1)}};
  a.structure[{3, 7}] = {{4, Rat(-1)}};
  a.structure[{4, 7}] = {{3, Rat(1)}};
  return a;
}

inline Space h3xh3_space() {
  ReductiveSplit split;
  split.h_indices = {6, 7};
  split.m_indices = {0, 1, 2, 3, 4, 5};
  ModuleSplit ms;
  ms.blocks = {{0, 1}, {2}, {3, 4}, {5}};
  return Space(h3xh3_alg(), split, ms);
}

inline BlockForms h3xh3_blocks() {
  BlockForms bf;
  BlockForm plane, line;
  plane.matrix = geograph::exact::RatMat::identity(2);
  line.matrix = geograph::exact::RatMat::identity(1);
  bf.forms = {plane, line, plane, line};
  return bf;
}

// Heisenberg times a flat line, rotation acting on the first plane only.
inline LieAlgebraSpec h3xR_alg() {
  LieAlgebraSpec a;
  a.dim = 5;
  a.basis_labels = {"E1", "E2", "E3", "E4", "D"};
  a.structure[{0, 1}] = {{2, Rat(1)}};
  a.structure[{0, 4}] = {{1, Rat(-1)}};
  a.structure[{1, 4}] = {{0, Rat(1)}};
  return a;
}

inline Space h3xR_space() {
  ReductiveSplit split;
  split.h_indices = {4};
  split.m_indices = {0, 1, 2, 3};
  ModuleSplit ms;
  ms.blocks = {{0, 1}, {2}, {3}};
  return Space(h3xR_alg(), split, ms);
}

inline BlockForms h3xR_blocks() {
  BlockForms bf;
  BlockForm plane, line;
  plane.matrix = geograph::exact::RatMat::identity(2);
  line.matrix = geograph::exact::RatMat::identity(1);
  bf.forms = {plane, line, line};
  return bf;
}

// Heisenberg with the naturally reductive split m' = {E1, E2, E3 + 4D} that
// matches the metric alpha_1 + 4 alpha_2.
inline Space heis_shifted4_space() {
  ReductiveSplit split;
  split.h_indices = {3};
  split.m_indices = {0, 1, 2};
  auto B = geograph::exact::RatMat::identity(4);
  B.at(3, 2) = Rat(4);
  split.basis_change = B;
  ModuleSplit ms;
  ms.blocks = {{0, 1}, {2}};
  return Space(heis_rot_alg(), split, ms);
}

// F = F_1 + beta on that split, with beta dual to the shifted center.
inline NormSpec alphabeta_randers(const Rat& b3) {
  NormSpec n;
  n.family = Family::RandersLike;
  n.metrics = {params2(Rat(1), Rat(4))};
  n.forms = {{"beta", {Rat(0), Rat(0), b3}}};
  return n;
}

}  // namespace testsupport
