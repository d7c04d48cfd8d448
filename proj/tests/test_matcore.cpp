#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieclass/matcore.hpp"
#include "lieclass/mfun.hpp"
#include "lieclass/ode.hpp"
#include "testutil.hpp"

using namespace lieclass;
using namespace lieclass::testing;

namespace {

// 4x4 pair with a rotation-block structure and a two-step nilpotent part;
// the standing small fixture used across the suite.
MatQ fixture_a3() {
  MatQ a(4, 4);
  a(0, 3) = 1;
  a(1, 2) = -1;
  return a;
}

MatQ fixture_c0() {
  // independent entries instantiated at 1,2,3,5,7,11,13,17
  Rat c11 = 1, c12 = 2, c13 = 3, c14 = 5, c31 = 7, c32 = 11, c33 = 13, c34 = 17;
  return MatQ{{c11, c12, c13, c14},
              {-c12, c11, -c14, c13},
              {c31, c32, c33, c34},
              {-c32, c31, -c34, c33}};
}

MatQ fixture_c1() {
  Rat c11 = 1, c12 = 2, c31 = 7, c32 = 11, c33 = 13, c34 = 17;
  return MatQ{{c32, -c31, c34 - c12, c11 - c33},
              {c31, c32, c33 - c11, c34 - c12},
              {0, 0, -c32, c31},
              {0, 0, -c31, -c32}};
}

}  // namespace

TEST_CASE("commutator basics") {
  MatQ a = random_matq(3);
  CHECK(commutator(a, a).is_zero());

  // agreement with the direct product-difference expansion
  MatQ b = random_matq(3);
  MatQ expect(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Rat ab(0), ba(0);
      for (int k = 0; k < 3; ++k) {
        ab += a(i, k) * b(k, j);
        ba += b(i, k) * a(k, j);
      }
      expect(i, j) = ab - ba;
    }
  CHECK(commutator(a, b) == expect);

  CHECK_THROWS_AS(commutator(random_matq(2), random_matq(3)), std::invalid_argument);
}

TEST_CASE("commutator of the 4x4 fixture pair") {
  CHECK(commutator(fixture_c0(), fixture_a3()) == fixture_c1());
}

TEST_CASE("commutator is bilinear, antisymmetric, satisfies Jacobi") {
  for (int m = 2; m <= 5; ++m) {
    MatQ a = random_matq(m), b = random_matq(m), c = random_matq(m);
    CHECK(commutator(a, b) == -commutator(b, a));
    Rat s = random_rat();
    CHECK(commutator(a * s + b, c) == commutator(a, c) * s + commutator(b, c));
    MatQ jacobi = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) +
                  commutator(c, commutator(a, b));
    CHECK(jacobi.is_zero());
  }
}

TEST_CASE("build_bd1") {
  MatQ b1 = build_bd1<Rat>(1);
  CHECK(b1 == MatQ{{0, 1}, {-1, 0}});
  for (int n = 1; n <= 4; ++n) {
    MatQ bd = build_bd1<Rat>(n);
    CHECK(bd * bd == -MatQ::identity(2 * n));
  }

  // commutes with any matrix built from [[a,b],[-b,a]] blocks
  MatQ block(4, 4);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      Rat al = random_rat(), be = random_rat();
      block(2 * p, 2 * q) = al;
      block(2 * p, 2 * q + 1) = be;
      block(2 * p + 1, 2 * q) = -be;
      block(2 * p + 1, 2 * q + 1) = al;
    }
  CHECK(is_block_form(block));
  CHECK(commutator(build_bd1<Rat>(2), block).is_zero());
  CHECK_FALSE(is_block_form(random_matq(4) + MatQ{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}}));

  auto bf = block_form_of(block);
  REQUIRE(bf.has_value());
  CHECK(bf->n == 2);
  CHECK(bf->to_matrix() == block);
  CHECK(bf->block(0, 1).first == block(0, 2));
  CHECK_FALSE(block_form_of(MatQ::identity(3)).has_value());
}

TEST_CASE("mat_exp exact paths") {
  CHECK(mat_exp(MatQ::zero(3, 3), Rat(5)) == MatQ::identity(3));

  MatQ a3 = fixture_a3();
  REQUIRE(nilpotency_index(a3) == 2);
  Rat x(3, 2);
  CHECK(mat_exp(a3, x) == MatQ::identity(4) + a3 * x);
  CHECK(mat_exp(a3, x) * mat_exp(a3, -x) == MatQ::identity(4));

  MatQ rot = build_bd1<Rat>(1);
  CHECK_THROWS_AS(mat_exp(rot, Rat(1)), std::domain_error);
}

TEST_CASE("mat_exp float agrees with the series oracle") {
  MatD b1{{0, 1}, {-1, 0}};
  for (double x : {0.3, -0.7, 1.9}) {
    MatD e = mat_exp(b1, x);
    MatD expect{{std::cos(x), std::sin(x)}, {-std::sin(x), std::cos(x)}};
    CHECK(max_entry_distance(e, expect) < 1e-12);
    CHECK(max_entry_distance(e, series_exp(b1 * x)) < 1e-12);
    CHECK(max_entry_distance(mat_exp(b1, x) * mat_exp(b1, -x), MatD::identity(2)) < 1e-10);
  }
  for (int trial = 0; trial < 5; ++trial) {
    MatD a = random_matd(4);
    CHECK(max_entry_distance(mat_exp(a, 1.0), series_exp(a, 60)) < 1e-11);
  }
}

TEST_CASE("conj_exp") {
  MatQ a3 = fixture_a3();
  MatQ c0 = fixture_c0();
  CHECK(conj_exp(a3, c0, Rat(0)) == c0);

  // commuting exponent leaves the base fixed
  MatQ bd = build_bd1<Rat>(2);
  CHECK(conj_exp(a3, bd, Rat(7)) == bd);  // [a3, bd] = 0
  for (Rat x : {Rat(1), Rat(-2), Rat(5, 3)}) {
    CHECK(conj_exp(a3, c0, x).trace() == c0.trace());
  }

  // d/dx conj = A C - C A, finite differences in float mode
  MatD a = random_matd(3), c = random_matd(3);
  double x = 0.4, h = 1e-5;
  MatD lhs = (conj_exp(a, c, x + h) - conj_exp(a, c, x - h)) * (1.0 / (2 * h));
  MatD cx = conj_exp(a, c, x);
  CHECK(max_entry_distance(lhs, a * cx - cx * a) < 1e-6);
}

TEST_CASE("solve_sylvester: shifted-pair equation with scalar rhs") {
  // A G - G (A+2E) = alpha E has particular solution -(alpha/2) E
  MatQ a{{0, 0, 0}, {0, 2, 0}, {0, 0, 4}};
  Rat alpha(3);
  MatQ b = a + MatQ::identity(3) * Rat(2);
  MatQ q = MatQ::identity(3) * alpha;
  auto sol = solve_sylvester(a, b, q);
  REQUIRE(sol.feasible());
  CHECK((a * *sol.particular - *sol.particular * b) == q);
  // -(alpha/2)E differs from the returned particular by a homogeneous element
  MatQ ref = MatQ::identity(3) * (-alpha / 2);
  std::vector<std::vector<Rat>> hom;
  for (const auto& h : sol.homogeneous) {
    CHECK((a * h - h * b).is_zero());
    hom.push_back(vec_colstack(h));
  }
  MatQ diff = ref - *sol.particular;
  if (!diff.is_zero()) {
    auto coords = coordinates_in(hom, vec_colstack(diff));
    CHECK(coords.has_value());
  }
  // the homogeneous space is the lower-shift family {E21, E32}
  REQUIRE(sol.homogeneous.size() == 2);
  MatQ e21(3, 3), e32(3, 3);
  e21(1, 0) = 1;
  e32(2, 1) = 1;
  SpanBasis<Rat> span(9);
  span.add(vec_colstack(e21));
  span.add(vec_colstack(e32));
  for (const auto& h : sol.homogeneous) CHECK(span.contains(vec_colstack(h)));
}

TEST_CASE("solve_sylvester: disjoint spectra give the unique zero solution") {
  MatQ a{{1, 1}, {0, 1}};
  MatQ b{{5, 0}, {2, 6}};
  auto sol = solve_sylvester(a, b, MatQ::zero(2, 2));
  REQUIRE(sol.feasible());
  CHECK(sol.particular->is_zero());
  CHECK(sol.homogeneous.empty());
}

TEST_CASE("solve_sylvester: infeasible right-hand side reported, not thrown") {
  // A = B = 0 leaves AX - XB = 0 for all X, so any nonzero Q is infeasible
  auto sol = solve_sylvester(MatQ::zero(2, 2), MatQ::zero(2, 2), MatQ::identity(2));
  CHECK_FALSE(sol.feasible());
  CHECK(sol.homogeneous.size() == 4);
}

TEST_CASE("solve_sylvester residuals on random instances") {
  for (int trial = 0; trial < 10; ++trial) {
    int m = 2 + trial % 3;
    MatQ a = random_matq(m), b = random_matq(m), x0 = random_matq(m);
    MatQ q = a * x0 - x0 * b;
    auto sol = solve_sylvester(a, b, q);
    REQUIRE(sol.feasible());
    CHECK((a * *sol.particular - *sol.particular * b) == q);
    for (const auto& h : sol.homogeneous) CHECK((a * h - h * b).is_zero());
  }
}

TEST_CASE("commutant_basis") {
  auto idc = commutant_basis(MatQ::identity(3));
  CHECK(idc.size() == 9);

  auto rot = commutant_basis(build_bd1<Rat>(1));
  REQUIRE(rot.size() == 2);
  SpanBasis<Rat> span(4);
  span.add(vec_colstack(MatQ::identity(2)));
  span.add(vec_colstack(build_bd1<Rat>(1)));
  for (const auto& m : rot) CHECK(span.contains(vec_colstack(m)));

  MatQ d{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}};
  auto dc = commutant_basis(d);
  CHECK(dc.size() == 3);
  for (const auto& m : dc)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(sgn(m(i, j)) == 0);
}

TEST_CASE("commutant contains identity and is multiplicatively closed") {
  for (int m = 2; m <= 4; ++m) {
    MatQ a = random_matq(m);
    auto basis = commutant_basis(a);
    SpanBasis<Rat> span(m * m);
    for (const auto& b : basis) span.add(vec_colstack(b));
    CHECK(span.contains(vec_colstack(MatQ::identity(m))));
    for (const auto& p : basis)
      for (const auto& q : basis) CHECK(span.contains(vec_colstack(p * q)));
  }
}

TEST_CASE("spectrum exact cases") {
  MatQ d{{0, 0, 0}, {0, 2, 0}, {0, 0, 4}};
  Spectrum sd = spectrum(d);
  REQUIRE(sd.exact);
  REQUIRE(sd.values.size() == 3);
  CHECK(sd.total_multiplicity() == 3);
  for (const auto& [v, k] : sd.values) {
    CHECK(v.is_rational());
    CHECK(k == 1);
  }

  Spectrum sb = spectrum(build_bd1<Rat>(1));
  REQUIRE(sb.exact);
  REQUIRE(sb.values.size() == 2);
  for (const auto& [v, k] : sb.values) {
    CHECK(v.a == 0);
    CHECK(v.d == -1);
    CHECK(abs(v.b) == 1);
  }

  Spectrum sn = spectrum(fixture_a3());
  REQUIRE(sn.exact);
  REQUIRE(sn.values.size() == 1);
  CHECK(sn.values[0].first.is_rational());
  CHECK(sn.values[0].first.a == 0);
  CHECK(sn.values[0].second == 4);

  // repeated rotation blocks: characteristic polynomial (x^2+1)^2
  Spectrum s2 = spectrum(build_bd1<Rat>(2));
  REQUIRE(s2.exact);
  CHECK(s2.total_multiplicity() == 4);
  for (const auto& [v, k] : s2.values) {
    CHECK(v.d == -1);
    CHECK(k == 2);
  }
}

TEST_CASE("spectrum float fallback and conjugate pairing") {
  MatD a = random_matd(4);
  Spectrum s = spectrum(a);
  CHECK_FALSE(s.exact);
  CHECK(static_cast<int>(s.approx.size()) == 4);
  CHECK(s.backward_error > 0);
  // complex values pair up
  double imag_sum = 0;
  for (const auto& z : s.approx) imag_sum += z.imag();
  CHECK(std::fabs(imag_sum) < 1e-9);
}

TEST_CASE("eigenvalue_chain") {
  MatQ d{{0, 0, 0}, {0, 2, 0}, {0, 0, 4}};
  auto w = eigenvalue_chain(d, Rat(2), 3);
  REQUIRE(w.has_value());
  CHECK(w->exact);
  CHECK(w->value.a == 0);

  CHECK_FALSE(eigenvalue_chain(MatQ::identity(3), Rat(2), 2).has_value());

  MatQ d13{{1, 0}, {0, 3}};
  auto w2 = eigenvalue_chain(d13, Rat(2), 2);
  REQUIRE(w2.has_value());
  CHECK(w2->value.a == 1);

  // float path: same ladder up to tolerance
  auto wf = eigenvalue_chain(to_double(d), 2.0, 3);
  REQUIRE(wf.has_value());
  CHECK_FALSE(wf->exact);
  CHECK(std::abs(wf->approx) < 1e-9);
  CHECK_FALSE(eigenvalue_chain(MatD::identity(3), 2.0, 2).has_value());
}

TEST_CASE("solve_matrix_ode") {
  MatQ c0q = random_matq(3);
  MatD c0 = to_double(c0q);
  auto zero = [&](double) { return MatD::zero(3, 3); };
  CHECK(max_entry_distance(solve_matrix_ode(zero, zero, c0, 1.3), c0) == 0);

  // conjugation identity: A constant, B = -A reproduces e^{xA} C0 e^{-xA}
  MatD a3 = to_double(fixture_a3());
  MatD c0f = to_double(fixture_c0());
  auto afn = [&](double) { return a3; };
  auto bfn = [&](double) { return -a3; };
  double x = 1.7;
  CHECK(max_entry_distance(solve_matrix_ode(afn, bfn, c0f, x), conj_exp(a3, c0f, x)) < 1e-8);

  // constant coefficients against the closed form e^{xA} C0 e^{xB}
  MatD a = random_matd(3), b = random_matd(3), c = random_matd(3);
  auto fa = [&](double) { return a; };
  auto fb = [&](double) { return b; };
  MatD closed = mat_exp(a, x) * c * mat_exp(b, x);
  CHECK(max_entry_distance(solve_matrix_ode(fa, fb, c, x), closed) < 1e-8);
}

TEST_CASE("matrix function representations") {
  MatQ a3 = fixture_a3();
  MatQ c0 = fixture_c0();
  MFunQ f = MFunQ::conjugated(a3, c0);
  auto poly = f.as_polynomial();
  REQUIRE(poly.has_value());
  CHECK(poly->size() == 3);  // nilpotency index 2 -> degree 2
  MFunQ p = MFunQ::polynomial(*poly);
  for (Rat x : {Rat(0), Rat(1), Rat(-3, 2)}) {
    CHECK(f.value(x) == p.value(x));
    CHECK(f.derivative(x) == p.derivative(x));
  }
  // derivative matches the commutator form
  Rat x(2, 3);
  MatQ c = f.value(x);
  CHECK(f.derivative(x) == a3 * c - c * a3);
}

TEST_CASE("sampled matrix function interpolation") {
  Interval iv{-1, 1};
  auto grid = chebyshev_grid(iv, 21);
  std::vector<MatD> vals;
  auto truth = [](double x) {
    return MatD{{x * x, 1 + x}, {0, 2 * x}};
  };
  for (double x : grid) vals.push_back(truth(x));
  MFunD f = MFunD::sampled_data(grid, vals);
  for (double x : {-0.83, -0.2, 0.11, 0.77}) {
    CHECK(max_entry_distance(f.value(x), truth(x)) < 1e-9);
  }
  CHECK(max_entry_distance(f.derivative(0.3), MatD{{0.6, 1}, {0, 2}}) < 1e-6);
}
