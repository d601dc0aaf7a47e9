#include <doctest.h>

#include <cmath>
#include <random>

#include "geograph/algebra.hpp"

using namespace geograph;
using namespace geograph::algebra;

namespace {

// Heisenberg algebra extended by the rotation generator:
//   [E1,E2] = E3,  [D,E1] = E2,  [D,E2] = -E1,  everything else zero.
LieAlgebraSpec heis_rot() {
  LieAlgebraSpec a;
  a.dim = 4;
  a.basis_labels = {"E1", "E2", "E3", "D"};
  a.structure[{0, 1}] = {{2, Rat(1)}};
  a.structure[{0, 3}] = {{1, Rat(-1)}};  // [E1,D] = -E2
  a.structure[{1, 3}] = {{0, Rat(1)}};   // [E2,D] = E1
  return a;
}

Space heis_space() {
  ReductiveSplit split;
  split.h_indices = {3};
  split.m_indices = {0, 1, 2};
  ModuleSplit ms;
  ms.blocks = {{0, 1}, {2}};
  return Space(heis_rot(), split, ms);
}

Vec unit(int n, int i) {
  Vec v(n, Rat(0));
  v[i] = Rat(1);
  return v;
}

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("bracket expands the structure table bilinearly") {
  LieAlgebraSpec a = heis_rot();
  CHECK(a.bracket(unit(4, 0), unit(4, 1)) == unit(4, 2));   // [E1,E2] = E3
  CHECK(a.bracket(unit(4, 0), unit(4, 0)) == Vec(4, Rat(0)));
  CHECK(a.bracket(unit(4, 3), unit(4, 0)) == unit(4, 1));   // [D,E1] = E2
  CHECK(a.bracket(unit(4, 3), unit(4, 1)) ==
        Vec{Rat(-1), Rat(0), Rat(0), Rat(0)});              // [D,E2] = -E1
  CHECK_THROWS_AS(a.bracket(Vec(3, Rat(0)), unit(4, 0)), std::invalid_argument);
}

TEST_CASE("bracket antisymmetry on random rational vectors") {
  LieAlgebraSpec a = heis_rot();
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  for (int it = 0; it < 100; ++it) {
    Vec x(4), y(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = Rat(num(rng), den(rng));
      x[i].canonicalize();
      y[i] = Rat(num(rng), den(rng));
      y[i].canonicalize();
    }
    Vec xy = a.bracket(x, y);
    Vec yx = a.bracket(y, x);
    for (int i = 0; i < 4; ++i) CHECK(xy[i] + yx[i] == 0);
  }
}

TEST_CASE("projection splits a vector and is idempotent") {
  Space s = heis_space();
  Vec z{Rat(0), Rat(0), Rat(1), Rat(2)};  // E3 + 2D
  CHECK(project(s, z, true) == Vec{Rat(0), Rat(0), Rat(1), Rat(0)});
  CHECK(project(s, unit(4, 3), true) == Vec(4, Rat(0)));
  // m-part + h-part rebuilds the vector; projections idempotent
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> num(-5, 5);
  for (int it = 0; it < 20; ++it) {
    Vec v(4);
    for (int i = 0; i < 4; ++i) v[i] = Rat(num(rng));
    Vec pm = project(s, v, true);
    Vec ph = project(s, v, false);
    for (int i = 0; i < 4; ++i) CHECK(pm[i] + ph[i] == v[i]);
    CHECK(project(s, pm, true) == pm);
    CHECK(project(s, ph, false) == ph);
  }
}

TEST_CASE("projection in a shifted split resolves along the new complement") {
  // Graph xi1 = c*y3 at c = 2 shifts the third basis vector to E3 + 2D; the
  // m'-part of E3 is then E3 + 2D and the h-part is -2D.
  Space s = heis_space();
  Space shifted = shift_split(s, {{Rat(0)}, {Rat(0)}, {Rat(2)}});
  Vec e3 = unit(4, 2);
  CHECK(project(shifted, e3, true) == Vec{Rat(0), Rat(0), Rat(1), Rat(2)});
  CHECK(project(shifted, e3, false) == Vec{Rat(0), Rat(0), Rat(0), Rat(-2)});
  CHECK(shifted.m_label(2) == "E3+2*D");
}

TEST_CASE("block projection keeps one module block") {
  Space s = heis_space();
  Vec y{Rat(5), Rat(-1), Rat(7)};
  CHECK(block_project(s, y, 0) == Vec{Rat(5), Rat(-1), Rat(0)});
  CHECK(block_project(s, y, 1) == Vec{Rat(0), Rat(0), Rat(7)});
  CHECK(block_project(s, Vec(3, Rat(0)), 1) == Vec(3, Rat(0)));
  CHECK_THROWS_AS(block_project(s, y, 2), std::out_of_range);
  Vec sum(3, Rat(0));
  for (int b = 0; b < s.nblocks(); ++b) {
    Vec p = block_project(s, y, b);
    for (int i = 0; i < 3; ++i) sum[i] += p[i];
  }
  CHECK(sum == y);
}

TEST_CASE("validation passes the Heisenberg space and an abelian algebra") {
  CHECK(heis_space().validate().ok());

  LieAlgebraSpec ab;
  ab.dim = 3;
  ab.basis_labels = {"X", "Y", "Z"};
  ReductiveSplit split;
  split.h_indices = {};
  split.m_indices = {0, 1, 2};
  ModuleSplit ms;
  ms.blocks = {{0, 1, 2}};
  CHECK(Space(ab, split, ms).validate().ok());
}

TEST_CASE("validation reports a Jacobi violation with its witness triple") {
  // Injecting [E1,E3] = E1 into the Heisenberg table breaks Jacobi:
  // [[E1,E2],E3] + [[E2,E3],E1] + [[E3,E1],E2] = 0 + 0 - E3.
  LieAlgebraSpec a;
  a.dim = 3;
  a.basis_labels = {"E1", "E2", "E3"};
  a.structure[{0, 1}] = {{2, Rat(1)}};
  a.structure[{0, 2}] = {{0, Rat(1)}};
  ReductiveSplit split;
  split.h_indices = {};
  split.m_indices = {0, 1, 2};
  ModuleSplit ms;
  ms.blocks = {{0, 1, 2}};
  auto rep = Space(a, split, ms).validate();
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.issues[0].invariant == "jacobi");
  CHECK(rep.issues[0].witness == "(E1,E2,E3)");
}

TEST_CASE("validation flags broken reductivity and module invariance") {
  // Affine line algebra [D,X] = X with h = span{X}: [X,D] = -X lands in h.
  LieAlgebraSpec aff;
  aff.dim = 2;
  aff.basis_labels = {"D", "X"};
  aff.structure[{0, 1}] = {{1, Rat(1)}};
  ReductiveSplit split;
  split.h_indices = {1};
  split.m_indices = {0};
  ModuleSplit ms;
  ms.blocks = {{0}};
  auto rep = Space(aff, split, ms).validate();
  CHECK_FALSE(rep.ok());
  bool saw_hm = false;
  for (const auto& i : rep.issues) saw_hm |= i.invariant == "[h,m] in m";
  CHECK(saw_hm);

  // so(3) with h = span{X,Y}: [X,Y] = Z escapes h.
  LieAlgebraSpec so3;
  so3.dim = 3;
  so3.basis_labels = {"X", "Y", "Z"};
  so3.structure[{0, 1}] = {{2, Rat(1)}};
  so3.structure[{1, 2}] = {{0, Rat(1)}};
  so3.structure[{0, 2}] = {{1, Rat(-1)}};  // [X,Z] = -Y
  ReductiveSplit hs;
  hs.h_indices = {0, 1};
  hs.m_indices = {2};
  ModuleSplit one;
  one.blocks = {{0}};
  auto rep_hh = Space(so3, hs, one).validate();
  CHECK_FALSE(rep_hh.ok());
  bool saw_hh = false;
  for (const auto& i : rep_hh.issues) saw_hh |= i.invariant == "[h,h] in h";
  CHECK(saw_hh);

  // Splitting the plane block of the rotation action breaks [h, m_i] in m_i.
  ReductiveSplit good;
  good.h_indices = {3};
  good.m_indices = {0, 1, 2};
  ModuleSplit bad_blocks;
  bad_blocks.blocks = {{0}, {1}, {2}};
  auto rep2 = Space(heis_rot(), good, bad_blocks).validate();
  CHECK_FALSE(rep2.ok());
  bool saw_block = false;
  for (const auto& i : rep2.issues) saw_block |= i.invariant == "[h,m_i] in m_i";
  CHECK(saw_block);
}

TEST_CASE("exp_ad of the rotation generator is a plane rotation") {
  Space s = heis_space();
  const double t = M_PI / 2;
  Eigen::MatrixXd R = exp_ad(s, {Rat(1)}, t, true);
  Eigen::MatrixXd want(3, 3);
  want << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((R - want).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd I3 = exp_ad(s, {Rat(0)}, 1.7, true);
  CHECK((I3 - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::MatrixXd Ih = exp_ad(s, {Rat(1)}, 2.5, false);  // h is abelian
  CHECK((Ih - Eigen::MatrixXd::Identity(1, 1)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("exp_ad inverse property for random arguments") {
  Space s = heis_space();
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> td(-8.0, 8.0);
  std::uniform_int_distribution<int> wd(-3, 3);
  for (int it = 0; it < 20; ++it) {
    Vec w{Rat(wd(rng))};
    double t = td(rng);
    Eigen::MatrixXd F = exp_ad(s, w, t, true);
    Eigen::MatrixXd B = exp_ad(s, w, -t, true);
    CHECK((F * B - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("shift_split moves the third basis vector along the graph image") {
  Space s = heis_space();
  Space sh = shift_split(s, {{Rat(0)}, {Rat(0)}, {Rat(2)}});
  // new split basis column for m position 2 is E3 + 2D
  const auto& B = *sh.split().basis_change;
  CHECK(B.at(2, 2) == Rat(1));
  CHECK(B.at(3, 2) == Rat(2));
  // zero graph keeps the split
  Space same = shift_split(s, {{Rat(0)}, {Rat(0)}, {Rat(0)}});
  CHECK(*same.split().basis_change == exact::RatMat::identity(4));
  // brackets in the shifted basis stay consistent: [f1, f2] = E3 = f3 - 2D
  Vec f1 = unit(4, 0), f2 = unit(4, 1);
  Vec br = sh.bracket_split(f1, f2);
  CHECK(br == Vec{Rat(0), Rat(0), Rat(1), Rat(-2)});
}

TEST_CASE("shift_split rejects a non-equivariant graph") {
  // xi(E1) = D, xi(E2) = xi(E3) = 0 is not Ad(H)-equivariant, so the shifted
  // complement is not an invariant module.
  Space s = heis_space();
  CHECK_THROWS_AS(shift_split(s, {{Rat(1)}, {Rat(0)}, {Rat(0)}}),
                  std::logic_error);
}

TEST_CASE("central_shift finds the compensating h-vector") {
  Space s = heis_space();
  // E3 is central in g: v = E3 (m-coordinates) needs no shift.
  auto w0 = central_shift(s, {Rat(0), Rat(0), Rat(1)});
  REQUIRE(w0.has_value());
  CHECK((*w0)[0] == Rat(0));
  // E3/2 likewise.
  auto w1 = central_shift(s, {Rat(0), Rat(0), Rat(1, 2)});
  REQUIRE(w1.has_value());
  CHECK((*w1)[0] == Rat(0));

  // In the shifted split with c = 2, v = f3/2 = (E3 + 2D)/2 requires w = D.
  Space sh = shift_split(s, {{Rat(0)}, {Rat(0)}, {Rat(2)}});
  auto w = central_shift(sh, {Rat(0), Rat(0), Rat(1, 2)});
  REQUIRE(w.has_value());
  CHECK((*w)[0] == Rat(1));

  // E1 cannot be compensated: ad(E1 - w) never vanishes.
  auto none = central_shift(s, {Rat(1), Rat(0), Rat(0)});
  CHECK_FALSE(none.has_value());
}

TEST_CASE("restricted adjoint matrices are exact") {
  Space s = heis_space();
  exact::RatMat adD = s.ad_restricted({Rat(1)}, true);
  CHECK(adD.at(1, 0) == Rat(1));    // D sends E1 to E2
  CHECK(adD.at(0, 1) == Rat(-1));   // and E2 to -E1
  CHECK(adD.at(2, 2) == Rat(0));
  exact::RatMat adDh = s.ad_restricted({Rat(1)}, false);
  CHECK(adDh.at(0, 0) == Rat(0));
}

}  // TEST_SUITE
