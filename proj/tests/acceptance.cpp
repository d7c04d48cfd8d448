// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code is the failure count.

#include <chrono>
#include <iostream>
#include <random>

#include "lieclass/construct.hpp"
#include "lieclass/ode.hpp"
#include "lieclass/transform.hpp"

using namespace lieclass;

namespace {

int failures = 0;

void report(int number, const std::string& what, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::mt19937 rng(20240817);

Rat rnd_rat(int range = 4) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, 3);
  Rat v(num(rng), den(rng));
  v.canonicalize();
  return v;
}

MatQ rnd_matq(int m, int range = 4) {
  MatQ a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = rnd_rat(range);
  return a;
}

MatQ rnd_strictly_lower(int m) {
  MatQ a(m, m);
  for (int i = 1; i < m; ++i)
    for (int j = 0; j < i; ++j) a(i, j) = rnd_rat(3);
  return a;
}

MatD rnd_matd(int m) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  MatD a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = dist(rng);
  return a;
}

// ---------------------------------------------------------------------------
// Independent rational Gauss solver used as the brute-force oracle for the
// Sylvester comparison; deliberately separate from the library routines.
// ---------------------------------------------------------------------------

struct OracleSolve {
  bool feasible = false;
  std::vector<Rat> particular;
  std::vector<std::vector<Rat>> nullspace;
};

OracleSolve oracle_gauss(std::vector<std::vector<Rat>> rows, std::vector<Rat> rhs) {
  const int nrows = static_cast<int>(rows.size());
  const int ncols = nrows == 0 ? 0 : static_cast<int>(rows[0].size());
  std::vector<int> pivot_col_of_row;
  int r = 0;
  for (int c = 0; c < ncols && r < nrows; ++c) {
    int piv = -1;
    for (int i = r; i < nrows; ++i)
      if (sgn(rows[i][c]) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[r]);
    std::swap(rhs[piv], rhs[r]);
    Rat inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    rhs[r] *= inv;
    for (int i = 0; i < nrows; ++i) {
      if (i == r || sgn(rows[i][c]) == 0) continue;
      Rat f = rows[i][c];
      for (int j = 0; j < ncols; ++j) rows[i][j] -= f * rows[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivot_col_of_row.push_back(c);
    ++r;
  }
  OracleSolve out;
  for (int i = r; i < nrows; ++i)
    if (sgn(rhs[i]) != 0) return out;  // inconsistent
  out.feasible = true;
  out.particular.assign(ncols, Rat(0));
  for (int i = 0; i < r; ++i) out.particular[pivot_col_of_row[i]] = rhs[i];
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivot_col_of_row) is_pivot[c] = true;
  for (int c = 0; c < ncols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Rat> v(ncols, Rat(0));
    v[c] = 1;
    for (int i = 0; i < r; ++i) v[pivot_col_of_row[i]] = -rows[i][c];
    out.nullspace.push_back(v);
  }
  return out;
}

bool same_span(const std::vector<std::vector<Rat>>& a, const std::vector<std::vector<Rat>>& b,
               int dim) {
  SpanBasis<Rat> sa(dim), sb(dim);
  for (const auto& v : a) sa.add(v);
  for (const auto& v : b) sb.add(v);
  return sa.same_span(sb);
}

// ---------------------------------------------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  auto rep = reproduce_example_n2();
  bool ok = rep.ok && rep.entry_matches == 32 && rep.computed[1] == rep.c1_expected &&
            rep.computed[2] == rep.k_expected;
  double dt = seconds_since(t0);
  report(1, "degree-two block expansion matches the printed coefficients entry-for-entry",
         ok && dt < 1.0, "32/32 entries, " + std::to_string(dt) + " s");
}

void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  MatQ a2{{0, 0, 0}, {0, 2, 0}, {0, 0, 4}};
  auto r = search_case_b(3, a2);
  MatQ e31(3, 3), e21(3, 3), e32(3, 3);
  e31(2, 0) = 1;
  e21(1, 0) = 1;
  e32(2, 1) = 1;
  std::vector<std::vector<Rat>> c0_got, c0_want{vec_colstack(e31)};
  for (const auto& m : r.c0_basis) c0_got.push_back(vec_colstack(m));
  std::vector<std::vector<Rat>> a3_got, a3_want{vec_colstack(e21), vec_colstack(e32)};
  for (const auto& m : r.a3_basis) a3_got.push_back(vec_colstack(m));
  bool ok = r.empty() && same_span(c0_got, c0_want, 9) && same_span(a3_got, a3_want, 9);
  double dt = seconds_since(t0);
  report(2, "three-equation two-dimensional case is empty with the exact solution spaces",
         ok && dt < 1.0, std::to_string(dt) + " s");
}

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  auto run = [&](const std::string& name, const MatQ& cand) {
    auto r = search_case_b(4, cand);
    if (!r.empty()) {
      ok = false;
      detail += name + " survived; ";
    } else {
      detail += name + ":" + (r.outcome == SearchCaseBResult::Outcome::CommutatorVanishes
                                  ? "commutator"
                                  : r.outcome == SearchCaseBResult::Outcome::ReducibleAll
                                        ? "reducible"
                                        : "trivial-space") +
                " ";
    }
  };
  for (const auto& [name, cand] : m4_fixed_candidates()) run(name, cand);
  for (const Rat& a : m4_diag_parameter_split())
    run("diag(a=" + rat_str(a) + ")", m4_candidate_diag(a));
  double dt = seconds_since(t0);
  report(3, "all four-equation candidates are eliminated with logged reasons", ok && dt < 30.0,
         detail + std::to_string(dt) + " s");
}

void criterion_4() {
  LieAlgebraQ alg;
  alg.m = 2;
  MatQ z = MatQ::zero(2, 2);
  alg.basis = {GeneratorQ{1, 0, 0, z}, GeneratorQ{0, 1, 0, z}, GeneratorQ{0, 0, 1, z}};
  alg = verify_closure(alg);
  auto entry = [&](int i, int j, int k) { return alg.structure[i][j][k]; };
  bool ok = alg.closed;
  // full table: [X1,X2] = -2X1, [X1,X3] = -X2, [X2,X3] = -2X3, antisymmetric,
  // zero diagonal
  const Rat want[3][3][3] = {
      {{0, 0, 0}, {-2, 0, 0}, {0, -1, 0}},
      {{2, 0, 0}, {0, 0, 0}, {0, 0, -2}},
      {{0, 1, 0}, {0, 0, 2}, {0, 0, 0}},
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) ok = ok && entry(i, j, k) == want[i][j][k];
  report(4, "closure of the base generators reproduces all nine table entries", ok);
}

void criterion_5() {
  bool ok = true;
  double worst = 0;
  for (double a : {0.5, -0.5, 1.0 / 3, -1.0 / 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::uniform_real_distribution<double> dist(-2.0, 2.0);
      L3Coords<double> v{dist(rng), dist(rng), dist(rng)};
      // push-forward oracle: the transformed xi-doubling read off through
      // phi = x/(1-ax) on a numeric grid, fitted as a quadratic in the image
      std::vector<double> xs{0.05, 0.11, 0.23};
      MatD vander(3, 3);
      std::vector<double> rhs(3);
      for (int i = 0; i < 3; ++i) {
        double x = xs[i];
        double phi = x / (1 - a * x);
        double dphi = 1.0 / ((1 - a * x) * (1 - a * x));
        double xi2 = v[0] * x * x + 2 * v[1] * x + v[2];
        vander(i, 0) = phi * phi;
        vander(i, 1) = 2 * phi;
        vander(i, 2) = 1.0;
        rhs[i] = xi2 * dphi;
      }
      auto fitted = solve_linear(vander, rhs);
      if (!fitted) {
        ok = false;
        continue;
      }
      auto expect = transform_generator_coords<double>(L3Kind::Mobius, a, v);
      for (int i = 0; i < 3; ++i) worst = std::max(worst, std::fabs((*fitted)[i] - expect[i]));
    }
  }
  ok = ok && worst <= 1e-9;
  report(5, "coordinate action agrees with the vector-field push-forward", ok,
         "max deviation " + std::to_string(worst));
}

void criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  int done = 0;
  bool ok = true;
  while (done < 100) {
    int m = 2 + done % 4;  // 2..5
    MatQ a = rnd_strictly_lower(m);
    MatQ c0 = rnd_matq(m);
    if (commutator(a, c0).is_zero()) continue;
    auto alg = solve_determining(MFunQ::conjugated(a, c0));
    std::vector<std::vector<Rat>> vecs;
    for (const auto& g : alg.basis) vecs.push_back(generator_to_vector(g));
    vecs.push_back(trivial_direction<Rat>(m));
    GeneratorQ expected{0, 0, 1, a};
    if (!coordinates_in(vecs, generator_to_vector(expected))) ok = false;
    ++done;
  }
  double dt = seconds_since(t0);
  report(6, "100 randomized conjugated flows admit their defining generator exactly",
         ok && dt < 60.0, std::to_string(dt) + " s");
}

void criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    int m = 2 + trial % 4;  // 2..5
    MatQ a = rnd_matq(m, 3), b = rnd_matq(m, 3);
    MatQ q(m, m);
    if (trial % 3 == 0) {
      q = rnd_matq(m, 3);  // possibly infeasible
    } else {
      MatQ x0 = rnd_matq(m, 3);
      q = a * x0 - x0 * b;  // feasible by construction
    }
    auto lib = solve_sylvester(a, b, q);

    // oracle: assemble the m^2 x m^2 system entrywise and solve independently
    int n2 = m * m;
    std::vector<std::vector<Rat>> rows(n2, std::vector<Rat>(n2, Rat(0)));
    std::vector<Rat> rhs(n2);
    auto idx = [m](int i, int j) { return j * m + i; };  // column-stacked
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        int row = idx(i, j);
        for (int l = 0; l < m; ++l) {
          rows[row][idx(l, j)] += a(i, l);
          rows[row][idx(i, l)] -= b(l, j);
        }
        rhs[row] = q(i, j);
      }
    auto oracle = oracle_gauss(rows, rhs);

    if (lib.feasible() != oracle.feasible) {
      ok = false;
      continue;
    }
    std::vector<std::vector<Rat>> lib_null;
    for (const auto& h : lib.homogeneous) lib_null.push_back(vec_colstack(h));
    if (!same_span(lib_null, oracle.nullspace, n2)) ok = false;
    if (lib.feasible()) {
      // particular solutions may differ by a homogeneous element
      std::vector<Rat> diff = vec_colstack(*lib.particular);
      for (int i = 0; i < n2; ++i) diff[i] -= oracle.particular[i];
      SpanBasis<Rat> hom(n2);
      for (const auto& v : oracle.nullspace) hom.add(v);
      bool zero = true;
      for (const auto& v : diff) zero = zero && sgn(v) == 0;
      if (!zero && !hom.contains(diff)) ok = false;
    }
  }
  double dt = seconds_since(t0);
  report(7, "200 random matrix equations agree with the brute-force lift oracle", ok,
         std::to_string(dt) + " s");
}

void criterion_8() {
  bool ok = true;
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    int m = 2 + trial % 3;  // 2..4
    MatD a = rnd_matd(m);
    MatD c0 = rnd_matd(m);
    auto afn = [&](double) { return a; };
    auto bfn = [&](double) { return -a; };
    for (double x : {0.5, 1.0, 1.5, 2.0}) {
      double dev = max_entry_distance(solve_matrix_ode(afn, bfn, c0, x), conj_exp(a, c0, x));
      worst = std::max(worst, dev);
    }
  }
  ok = worst <= 1e-8;
  report(8, "matrix-equation integrator matches the conjugated flow on [0, 2]", ok,
         "max deviation " + std::to_string(worst));
}

void criterion_9() {
  bool ok = true;
  double worst_trace = 0, worst_involution = 0;
  for (int trial = 0; trial < 20; ++trial) {
    int m = 2 + trial % 3;
    MatD c0 = rnd_matd(m);
    MatD drift = rnd_matd(m);
    drift = drift - MatD::identity(m) * (drift.trace() / m);  // traceless x-part
    double shift = (trial % 2 == 0 ? 1.0 : -0.6) + 0.1 * (trial % 5);
    c0 = c0 + MatD::identity(m) * (shift - c0.trace() / m);  // constant nonzero trace
    CanonicalSystemD sys{m, MFunD::polynomial({c0, drift}), false, {-0.5, 0.5}};
    auto r = trace_normalize(sys);
    for (double x : chebyshev_grid(r.system.domain, 50))
      worst_trace = std::max(worst_trace, std::fabs(r.system.Cfn.value(x).trace()));
  }
  ok = worst_trace <= 1e-10;

  // the reciprocal change applied twice is the identity
  Interval iv{0.5, 2.0};
  MFunD cfn = MFunD::polynomial({rnd_matd(3), rnd_matd(3)});
  auto once = apply_point_change(cfn, PointChange::involution(iv));
  auto twice = apply_point_change(once, PointChange::involution(image_interval(PointChange::involution(iv))));
  for (double x : chebyshev_grid({0.55, 1.9}, 25))
    worst_involution = std::max(worst_involution, max_entry_distance(twice.value(x), cfn.value(x)));
  ok = ok && worst_involution <= 1e-9;
  report(9, "trace normalization and the reciprocal involution meet their tolerances", ok,
         "trace " + std::to_string(worst_trace) + ", involution " +
             std::to_string(worst_involution));
}

void criterion_10() {
  bool ok = true;
  int done = 0;
  while (done < 50) {
    int m = (done % 2 == 0) ? 3 : 5;
    MatQ a = rnd_strictly_lower(m);
    MatQ c0 = rnd_matq(m);
    c0 = c0 - MatQ::identity(m) * (c0.trace() / m);
    if (commutator(a, c0).is_zero()) continue;
    if (joint_commutant(std::vector<MatQ>{a, c0}).size() != 1) continue;
    CanonicalSystemQ sys{m, MFunQ::conjugated(a, c0), true, {-1, 1}};
    auto rep = classify_system(sys);
    for (const auto& g : rep.algebra.basis)
      if (g.pure_matrix_part()) ok = false;
    if (rep.optimal.pure_count != 0) ok = false;
    ++done;
  }
  report(10, "50 randomized odd-dimension classifications contain no pure matrix generator", ok);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) + " criterion(s) failed")
            << std::endl;
  return failures;
}
