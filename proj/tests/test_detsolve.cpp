#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieclass/detsolve.hpp"
#include "testutil.hpp"

using namespace lieclass;
using namespace lieclass::testing;

namespace {

MatQ block_a3() {
  // lower block-triangular rotation-block nilpotent, squares to zero
  MatQ a(4, 4);
  a(0, 3) = -1;
  a(1, 2) = 1;
  return a;
}

MatQ block_c0() {
  Rat c11 = 1, c12 = 2, c13 = 3, c14 = 5, c31 = 7, c32 = 11, c33 = 13, c34 = 17;
  return MatQ{{c11, c12, c13, c14},
              {-c12, c11, -c14, c13},
              {c31, c32, c33, c34},
              {-c32, c31, -c34, c33}};
}

bool span_contains_mod_trivial(const LieAlgebraQ& alg, const GeneratorQ& g) {
  std::vector<std::vector<Rat>> vecs;
  for (const auto& b : alg.basis) vecs.push_back(generator_to_vector(b));
  vecs.push_back(trivial_direction<Rat>(alg.m));
  return coordinates_in(vecs, generator_to_vector(g)).has_value();
}

}  // namespace

TEST_CASE("residual vanishes for the trivial direction") {
  auto cfn = MFunQ::polynomial({random_matq(3), random_matq(3), random_matq(3)});
  GeneratorQ triv{0, 0, 0, MatQ::identity(3)};
  for (Rat x : {Rat(0), Rat(1), Rat(-5, 2)}) CHECK(residual(cfn, triv, x).is_zero());
}

TEST_CASE("residual vanishes along the conjugated-exponential flow") {
  MatQ a3 = block_a3();
  MFunQ cfn = MFunQ::conjugated(a3, block_c0());
  GeneratorQ g{0, 0, 1, a3};
  for (Rat x : {Rat(0), Rat(2), Rat(-1, 3), Rat(7)}) CHECK(residual(cfn, g, x).is_zero());

  // perturbing one entry of A breaks the identity
  GeneratorQ bad = g;
  bad.A(0, 0) += 1;
  bool nonzero = false;
  for (Rat x : {Rat(0), Rat(2)}) nonzero = nonzero || !residual(cfn, bad, x).is_zero();
  CHECK(nonzero);
}

TEST_CASE("residual vanishes for a commuting block-form matrix part") {
  MatQ a3 = block_a3();
  auto poly = MFunQ::conjugated(a3, block_c0()).as_polynomial();
  REQUIRE(poly.has_value());
  MFunQ cfn = MFunQ::polynomial(*poly);
  GeneratorQ g{0, 0, 0, build_bd1<Rat>(2)};
  for (Rat x : {Rat(0), Rat(1), Rat(005, 3)}) CHECK(residual(cfn, g, x).is_zero());
}

TEST_CASE("solve_determining: constant coefficient matrix") {
  MatQ c{{1, 0}, {0, -1}};
  auto alg = solve_determining(MFunQ::constant(c));
  // expect span{ (0,0,1;0), (0,0,0;diag(1,-1)) }
  CHECK(alg.dim() == 2);
  CHECK(span_contains_mod_trivial(alg, GeneratorQ{0, 0, 1, MatQ::zero(2, 2)}));
  CHECK(span_contains_mod_trivial(alg, GeneratorQ{0, 0, 0, c}));
  for (const auto& g : alg.basis) {
    CHECK(g.A.trace() == 0);
    CHECK(sgn(g.k1) == 0);
    CHECK(sgn(g.k2) == 0);
  }
}

TEST_CASE("solve_determining: block fixture admits the flow and a rotation") {
  MatQ m = -block_a3();
  MFunQ cfn = MFunQ::conjugated(m, block_c0());
  auto alg = solve_determining(cfn);
  CHECK(alg.dim() >= 2);
  CHECK(span_contains_mod_trivial(alg, GeneratorQ{0, 0, 1, m}));
  CHECK(span_contains_mod_trivial(alg, GeneratorQ{0, 0, 0, build_bd1<Rat>(2)}));

  // every returned generator satisfies the determining equation at fresh points
  for (const auto& g : alg.basis)
    for (int j = 1; j <= 50; ++j) {
      Rat x(2 * j + 1, 14);
      CHECK(residual(cfn, g, x).is_zero());
    }
}

TEST_CASE("solve_determining: generic conjugated flow has a one-dimensional algebra") {
  // strictly lower-triangular exponent, generic base, trivial joint commutant
  MatQ a{{0, 0, 0}, {1, 0, 0}, {2, 3, 0}};
  MatQ c0{{1, 2, 0}, {0, 3, 5}, {1, 1, -4}};
  REQUIRE(!commutator(a, c0).is_zero());
  {
    auto jc = joint_commutant(std::vector<MatQ>{a, c0});
    REQUIRE(jc.size() == 1);  // with E only, the quotient has no pure matrix part
  }
  auto alg = solve_determining(MFunQ::conjugated(a, c0));
  REQUIRE(alg.dim() == 1);
  CHECK(span_contains_mod_trivial(alg, GeneratorQ{0, 0, 1, a}));
}

TEST_CASE("solve_determining is equivariant under constant conjugation") {
  MatQ a{{0, 0}, {1, 0}};
  MatQ c0{{2, 1}, {3, -2}};
  MatQ p{{1, 1}, {0, 1}};
  MatQ pinv{{1, -1}, {0, 1}};
  REQUIRE((p * pinv) == MatQ::identity(2));

  auto alg = solve_determining(MFunQ::conjugated(a, c0));
  auto alg_conj = solve_determining(MFunQ::conjugated(p * a * pinv, p * c0 * pinv));
  REQUIRE(alg.dim() == alg_conj.dim());
  // mapped generators (same k, A -> P A P^{-1}) must span the conjugated algebra
  std::vector<std::vector<Rat>> vecs;
  for (const auto& b : alg_conj.basis) vecs.push_back(generator_to_vector(b));
  vecs.push_back(trivial_direction<Rat>(2));
  for (const auto& g : alg.basis) {
    GeneratorQ mapped{g.k1, g.k2, g.k3, p * g.A * pinv};
    CHECK(coordinates_in(vecs, generator_to_vector(mapped)).has_value());
  }
}

TEST_CASE("solve_determining: adding the trivial direction does not change the span") {
  MatQ a{{0, 0}, {1, 0}};
  MatQ c0{{2, 1}, {3, -2}};
  auto alg = solve_determining(MFunQ::conjugated(a, c0));
  REQUIRE(alg.dim() >= 1);
  GeneratorQ shifted = alg.basis[0];
  shifted.A = shifted.A + MatQ::identity(2) * Rat(3);
  CHECK(span_contains_mod_trivial(alg, shifted));
}

TEST_CASE("solve_determining: float sampled path matches the exact path") {
  MatQ a{{0, 0}, {1, 0}};
  MatQ c0{{2, 1}, {3, -2}};
  auto exact = solve_determining(MFunQ::conjugated(a, c0));

  MatD ad = to_double(a), c0d = to_double(c0);
  auto fn = [ad, c0d](double x) { return conj_exp(ad, c0d, x); };
  auto sampled = MFunD::sampled(fn, chebyshev_grid({0.0, 4.0}, 33));
  auto alg = solve_determining(sampled);
  CHECK(alg.numerics.used);
  CHECK_FALSE(alg.numerics.ambiguous);
  CHECK(alg.dim() == exact.dim());

  // a grid shorter than the sample-point schedule is refused
  auto tiny = MFunD::sampled(fn, chebyshev_grid({0.0, 4.0}, 5));
  CHECK_THROWS_AS(solve_determining(tiny), std::invalid_argument);
}

TEST_CASE("verify_closure reproduces the base commutator table") {
  LieAlgebraQ alg;
  alg.m = 2;
  MatQ z = MatQ::zero(2, 2);
  alg.basis = {GeneratorQ{1, 0, 0, z}, GeneratorQ{0, 1, 0, z}, GeneratorQ{0, 0, 1, z}};
  alg = verify_closure(alg);
  REQUIRE(alg.closed);

  auto expect = [&](int i, int j, std::array<Rat, 3> c) {
    CHECK(alg.structure[i][j][0] == c[0]);
    CHECK(alg.structure[i][j][1] == c[1]);
    CHECK(alg.structure[i][j][2] == c[2]);
    CHECK(alg.structure[j][i][0] == -c[0]);
    CHECK(alg.structure[j][i][1] == -c[1]);
    CHECK(alg.structure[j][i][2] == -c[2]);
  };
  // the full table: [X1,X2] = -2X1, [X1,X3] = -X2, [X2,X3] = -2X3
  expect(0, 1, {-2, 0, 0});
  expect(0, 2, {0, -1, 0});
  expect(1, 2, {0, 0, -2});
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) CHECK(alg.structure[i][i][k] == 0);
}

TEST_CASE("verify_closure: single generator and shifted-pair relation") {
  LieAlgebraQ single;
  single.m = 2;
  single.basis = {GeneratorQ{0, 0, 1, random_matq(2)}};
  CHECK(verify_closure(single).closed);

  // A2 = diag(0,2), A3 = E21 satisfy A3(A2+2E) - A2A3 = 0
  MatQ a2{{0, 0}, {0, 2}};
  MatQ e21{{0, 0}, {1, 0}};
  REQUIRE((e21 * (a2 + MatQ::identity(2) * Rat(2)) - a2 * e21).is_zero());
  LieAlgebraQ pair;
  pair.m = 2;
  // trace-normalize the X2-part matrix by hand: A2 - E
  pair.basis = {GeneratorQ{0, 1, 0, a2 - MatQ::identity(2)}, GeneratorQ{0, 0, 1, e21}};
  pair = verify_closure(pair);
  REQUIRE(pair.closed);
  CHECK(pair.structure[0][1][0] == 0);
  CHECK(pair.structure[0][1][1] == -2);

  // non-closing pair is reported, not thrown
  LieAlgebraQ open;
  open.m = 2;
  open.basis = {GeneratorQ{0, 0, 0, MatQ{{0, 1}, {0, 0}}}, GeneratorQ{0, 0, 0, MatQ{{0, 0}, {1, 0}}}};
  CHECK_FALSE(verify_closure(open).closed);
}

TEST_CASE("odd dimension: no pure matrix-part generator on conjugated flows") {
  for (int trial = 0; trial < 10; ++trial) {
    int m = (trial % 2 == 0) ? 3 : 5;
    MatQ a = random_strictly_lower(m);
    MatQ c0 = random_matq(m);
    if (commutator(a, c0).is_zero()) continue;
    if (joint_commutant(std::vector<MatQ>{a, c0}).size() != 1) continue;
    auto alg = solve_determining(MFunQ::conjugated(a, c0));
    for (const auto& g : alg.basis) CHECK_FALSE(g.pure_matrix_part());
  }
}
