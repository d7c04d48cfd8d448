#ifndef LIECLASS_CLASSIFY_HPP
#define LIECLASS_CLASSIFY_HPP

#include <map>
#include <string>

#include "lieclass/detsolve.hpp"

namespace lieclass {

struct OddDimensionContradiction : std::domain_error {
  using std::domain_error::domain_error;
};

template <class S>
bool matrix_is_zero(const Matrix<S>& m, Tolerance tol = {}, double scale = 1.0) {
  if constexpr (scalar_traits<S>::is_exact)
    return m.is_zero();
  else
    return m.max_abs() <= std::max(tol.abs, tol.rel * scale);
}

struct ConditionRecord {
  std::string name;
  bool passed = false;
  double residual = 0.0;  // 0 in exact mode
};

struct CheckResult {
  bool ok = true;
  std::string first_failure;
  std::vector<ConditionRecord> conditions;

  void record(const std::string& name, bool passed, double residual = 0.0) {
    conditions.push_back({name, passed, residual});
    if (!passed && ok) {
      ok = false;
      first_failure = name;
    }
  }
};

// ---------------------------------------------------------------------------
// Irreducibility
// ---------------------------------------------------------------------------

template <class S>
struct IrreducibilityVerdict {
  enum class Status { Irreducible, ReducibleSubspace, ConstantEquivalent, Undetermined };
  Status status = Status::Undetermined;
  std::vector<std::vector<S>> witness;  // invariant-subspace basis (column vectors)
  int algebra_dim = 0;                  // dimension of the generated matrix algebra
  std::string note;
};

namespace detail {

template <class S>
std::vector<S> matvec(const Matrix<S>& m, const std::vector<S>& v) {
  std::vector<S> r(m.rows(), scalar_traits<S>::zero());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j];
  return r;
}

/// Smallest subspace containing seed and invariant under every matrix, or an
/// empty vector when the closure is the full space.
template <class S>
std::vector<std::vector<S>> grow_invariant(const std::vector<Matrix<S>>& mats,
                                           const std::vector<std::vector<S>>& seed, int m,
                                           double tol) {
  SpanBasis<S> span(m, tol);
  std::vector<std::vector<S>> work;
  for (const auto& v : seed)
    if (span.add(v)) work.push_back(v);
  while (!work.empty()) {
    std::vector<S> v = work.back();
    work.pop_back();
    for (const auto& mat : mats) {
      auto w = matvec(mat, v);
      if (span.add(w)) {
        work.push_back(w);
        if (span.dim() == m) return {};
      }
    }
  }
  if (span.dim() == 0 || span.dim() == m) return {};
  std::vector<std::vector<S>> out;
  for (const auto& r : span.rows()) out.push_back(r);
  return out;
}

/// Candidate invariant-subspace seeds from the kernels of p(M) for each
/// eigenvalue factor p of each matrix (only the exact path finds these).
inline std::vector<std::vector<std::vector<Rat>>> eigen_seed_spaces(const std::vector<MatQ>& mats) {
  std::vector<std::vector<std::vector<Rat>>> seeds;
  for (const auto& m : mats) {
    Spectrum sp = spectrum(m);
    if (!sp.exact) continue;
    for (const auto& [v, mult] : sp.values) {
      MatQ ker;
      if (v.is_rational()) {
        ker = m - MatQ::identity(m.rows()) * v.a;
      } else {
        // (M - aE)^2 - b^2 d E annihilates the real 2-plane of the pair
        MatQ shifted = m - MatQ::identity(m.rows()) * v.a;
        ker = shifted * shifted - MatQ::identity(m.rows()) * (v.b * v.b * Rat(v.d));
      }
      auto ns = null_space(ker);
      if (ns.empty()) continue;
      seeds.push_back(ns);                       // the whole eigenspace
      for (auto& single : ns) seeds.push_back({single});  // and each line in it
    }
  }
  return seeds;
}

}  // namespace detail

/// Decides irreducibility of the matrix set: full matrix algebra (dimension
/// m^2) proves irreducibility over the complex field; otherwise a common
/// invariant subspace is searched among eigenspace closures. Failure to find
/// a real witness leaves the verdict undetermined rather than guessed.
template <class S>
IrreducibilityVerdict<S> irreducibility_test(const std::vector<Matrix<S>>& mats,
                                             Tolerance tol = {}) {
  if (mats.empty()) throw std::invalid_argument("irreducibility_test: empty matrix list");
  const int m = mats.front().rows();
  IrreducibilityVerdict<S> verdict;
  double vtol = 0.0;
  if constexpr (!scalar_traits<S>::is_exact) vtol = tol.abs;

  // dimension of the unital algebra generated by the set
  SpanBasis<S> span(m * m, vtol);
  std::vector<Matrix<S>> work;
  auto push = [&](const Matrix<S>& cand) {
    if (span.add(vec_colstack(cand))) work.push_back(cand);
  };
  push(Matrix<S>::identity(m));
  for (const auto& a : mats) push(a);
  while (!work.empty()) {
    Matrix<S> v = work.back();
    work.pop_back();
    for (const auto& a : mats) {
      push(v * a);
      push(a * v);
    }
  }
  verdict.algebra_dim = span.dim();
  if (span.dim() == m * m) {
    verdict.status = IrreducibilityVerdict<S>::Status::Irreducible;
    return verdict;
  }

  if constexpr (scalar_traits<S>::is_exact) {
    std::vector<std::vector<std::vector<Rat>>> seeds = detail::eigen_seed_spaces(mats);
    std::vector<std::vector<std::vector<Rat>>> found;
    for (const auto& seed : seeds) {
      auto w = detail::grow_invariant(mats, seed, m, 0.0);
      if (!w.empty()) found.push_back(w);
    }
    if (!found.empty()) {
      size_t best = 0;
      for (size_t i = 1; i < found.size(); ++i)
        if (found[i].size() < found[best].size()) best = i;
      verdict.status = IrreducibilityVerdict<S>::Status::ReducibleSubspace;
      verdict.witness = found[best];
      return verdict;
    }
    verdict.status = IrreducibilityVerdict<S>::Status::Undetermined;
    verdict.note = "matrix algebra is thin but no rational invariant subspace was found";
    return verdict;
  } else {
    verdict.status = IrreducibilityVerdict<S>::Status::Undetermined;
    verdict.note = "float mode reports only algebra dimension";
    return verdict;
  }
}

/// Sufficient test for equivalence to a constant-coefficient system: the
/// traceless part of C is constant and all sample values commute.
template <class S>
bool constant_equivalent(const MatrixFunction<S>& cfn, const Interval& domain,
                         Tolerance tol = {}) {
  const int m = cfn.dim();
  if (auto poly = cfn.as_polynomial()) {
    double scale = std::max(1.0, (*poly)[0].max_abs());
    S invm = scalar_traits<S>::one() / scalar_traits<S>::from_long(m);
    for (size_t p = 1; p < poly->size(); ++p) {
      Matrix<S> traceless = (*poly)[p] - Matrix<S>::identity(m) * ((*poly)[p].trace() * invm);
      if (!matrix_is_zero(traceless, tol, scale)) return false;
    }
    return true;
  }
  // sampled: commutators of samples plus derivative of the traceless part
  auto grid = chebyshev_grid(domain, 15);
  std::vector<Matrix<S>> samples;
  double scale = 1.0;
  for (double x : grid) {
    samples.push_back(cfn.value(x));
    scale = std::max(scale, samples.back().max_abs());
  }
  for (size_t i = 0; i < samples.size(); ++i)
    for (size_t j = i + 1; j < samples.size(); ++j)
      if (!matrix_is_zero(commutator(samples[i], samples[j]), tol, scale * scale)) return false;
  Tolerance loose{1e-6, 1e-6};  // finite-difference derivative noise
  S invm = scalar_traits<S>::one() / scalar_traits<S>::from_long(m);
  for (double x : chebyshev_grid({domain.a + 1e-3, domain.b - 1e-3}, 9)) {
    Matrix<S> d = cfn.derivative(x);
    Matrix<S> traceless = d - Matrix<S>::identity(m) * (d.trace() * invm);
    if (!matrix_is_zero(traceless, loose, scale)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Optimal-system matching
// ---------------------------------------------------------------------------

enum class OptimalTag {
  Case1_X2,
  Case2_X3,
  Case3_X1plusX3,
  Case4_X2X3,
  Case5_X1X2X3,
  PureXA,
  Undetermined
};

inline std::string optimal_tag_name(OptimalTag t, int pure_count) {
  std::string base;
  switch (t) {
    case OptimalTag::Case1_X2: base = "case1_x2"; break;
    case OptimalTag::Case2_X3: base = "case2_x3"; break;
    case OptimalTag::Case3_X1plusX3: base = "case3_x1_plus_x3"; break;
    case OptimalTag::Case4_X2X3: base = "case4_x2_x3"; break;
    case OptimalTag::Case5_X1X2X3: base = "case5_x1_x2_x3"; break;
    case OptimalTag::PureXA: return "pure_xa";
    case OptimalTag::Undetermined: return "undetermined";
  }
  if (pure_count > 0) return "xa_plus_" + base;
  return base;
}

/// One normalization step applied to generator coordinates.
template <class S>
struct L3Step {
  std::string kind;  // "mobius" | "shift" | "scale_factor" | "rescale_generator"
  S param;
};

template <class S>
struct OptimalCase {
  OptimalTag tag = OptimalTag::Undetermined;
  int pure_count = 0;
  std::vector<Generator<S>> xi_part;    // generators with nonzero coordinates
  std::vector<Generator<S>> pure_part;  // pure matrix-part generators
  bool coords_normalized = false;       // representative reached exactly
  S delta = scalar_traits<S>::zero();   // x2^2 - x1 x3 of the one-dimensional case
  std::vector<L3Step<S>> steps;
  std::string note;
};

namespace detail {

template <class S>
void apply_l3_generators(std::vector<Generator<S>>& gens, const std::string& kind, const S& a,
                         std::vector<L3Step<S>>& steps) {
  bool identity = kind == "scale_factor" || kind == "rescale_generator"
                      ? a == scalar_traits<S>::one()
                      : scalar_traits<S>::is_zero(a);
  if (identity) return;
  for (auto& g : gens) {
    L3Coords<S> v{g.k1, g.k2, g.k3};
    if (kind == "mobius")
      v = mobius_coords<S>(a, v);
    else if (kind == "shift")
      v = shift_coords<S>(a, v);
    else if (kind == "scale_factor")
      v = scale_coords_factor<S>(a, v);
    g.k1 = v[0];
    g.k2 = v[1];
    g.k3 = v[2];
  }
  steps.push_back({kind, a});
}

template <class S>
S coord_delta(const L3Coords<S>& v) {
  return v[1] * v[1] - v[0] * v[2];
}

/// Square root of a nonnegative scalar if it exists in the scalar field.
template <class S>
std::optional<S> field_sqrt(const S& v);

template <>
inline std::optional<Rat> field_sqrt<Rat>(const Rat& v) {
  return rat_sqrt_exact(v);
}
template <>
inline std::optional<double> field_sqrt<double>(const double& v) {
  if (v < 0) return std::nullopt;
  return std::sqrt(v);
}

}  // namespace detail

/// Matches the coordinate parts of a closed algebra against the optimal list
/// of subalgebra representatives, normalizing with the triangular coordinate
/// actions where the normalizer exists in the scalar field. The matrix parts
/// ride along unchanged (they only shift by the quotiented direction).
template <class S>
OptimalCase<S> match_optimal_case(const LieAlgebra<S>& alg, Tolerance tol = {}) {
  if (!alg.closure_computed)
    throw std::invalid_argument("match_optimal_case: run verify_closure first");
  OptimalCase<S> out;
  const int m = alg.m;
  const int ncols = m * m + 3;

  // re-echelonize with coordinates first so the pure part is split off
  double vtol = scalar_traits<S>::is_exact ? 0.0 : tol.abs;
  SpanBasis<S> span(ncols, vtol);
  for (const auto& g : alg.basis) span.add(generator_to_vector(g));
  std::vector<Generator<S>> xi, pure;
  for (const auto& row : span.rows()) {
    Generator<S> g = generator_from_vector(row, m);
    bool has_coords = !scalar_traits<S>::is_zero(g.k1) || !scalar_traits<S>::is_zero(g.k2) ||
                      !scalar_traits<S>::is_zero(g.k3);
    (has_coords ? xi : pure).push_back(g);
  }
  out.pure_count = static_cast<int>(pure.size());
  out.pure_part = pure;
  const int p = static_cast<int>(xi.size());

  if (p == 0) {
    out.tag = pure.empty() ? OptimalTag::Undetermined : OptimalTag::PureXA;
    out.coords_normalized = true;
    return out;
  }
  if (p > 3) {
    out.tag = OptimalTag::Undetermined;
    out.note = "coordinate projection exceeds three dimensions";
    return out;
  }

  if (p == 1) {
    Generator<S> g = xi[0];
    S delta = detail::coord_delta<S>({g.k1, g.k2, g.k3});
    out.delta = delta;
    std::vector<Generator<S>> gen{g};
    auto& steps = out.steps;
    bool zero_delta = scalar_traits<S>::is_zero(delta);
    if constexpr (!scalar_traits<S>::is_exact) zero_delta = tol.is_zero(delta, 1.0);

    // first reach (x1, 0, x3) or finish directly
    auto to_axis_form = [&]() {
      Generator<S>& h = gen[0];
      if (!scalar_traits<S>::is_zero(h.k3)) {
        S a = -h.k2 / h.k3;
        detail::apply_l3_generators(gen, "mobius", a, steps);
      } else if (!scalar_traits<S>::is_zero(h.k1)) {
        S a = -h.k2 / h.k1;
        detail::apply_l3_generators(gen, "shift", a, steps);
      }
    };

    if (zero_delta) {
      out.tag = OptimalTag::Case2_X3;
      Generator<S>& h = gen[0];
      if (scalar_traits<S>::is_zero(h.k3) && scalar_traits<S>::is_zero(h.k2) &&
          !scalar_traits<S>::is_zero(h.k1)) {
        detail::apply_l3_generators(gen, "shift", scalar_traits<S>::one(), steps);
      }
      to_axis_form();  // mobius kills k2 and, with delta = 0, k1 as well
      Generator<S>& h2 = gen[0];
      if (!scalar_traits<S>::is_zero(h2.k3)) {
        S inv = scalar_traits<S>::one() / h2.k3;
        gen[0] = gen[0] * inv;
        if (!(inv == scalar_traits<S>::one())) steps.push_back({"rescale_generator", inv});
        out.coords_normalized = true;
      }
    } else {
      bool positive;
      if constexpr (scalar_traits<S>::is_exact)
        positive = sgn(delta) > 0;
      else
        positive = scalar_traits<S>::to_double(delta) > 0;
      out.tag = positive ? OptimalTag::Case1_X2 : OptimalTag::Case3_X1plusX3;
      to_axis_form();
      Generator<S>& h = gen[0];
      if (scalar_traits<S>::is_zero(h.k1) && scalar_traits<S>::is_zero(h.k3)) {
        // already a multiple of the middle generator
        S inv = scalar_traits<S>::one() / h.k2;
        gen[0] = gen[0] * inv;
        if (!(inv == scalar_traits<S>::one())) steps.push_back({"rescale_generator", inv});
        out.coords_normalized = true;
      } else if (positive) {
        // (p,0,q) with pq = -delta < 0: reach (0,*,0) when sqrt(delta) exists
        S pp = h.k1;
        auto root = detail::field_sqrt<S>(delta / (pp * pp));
        if (root) {
          detail::apply_l3_generators(gen, "shift", *root, steps);
          S b = -scalar_traits<S>::one() / (S(2) * *root);
          detail::apply_l3_generators(gen, "mobius", b, steps);
          S inv = scalar_traits<S>::one() / gen[0].k2;
          gen[0] = gen[0] * inv;
          if (!(inv == scalar_traits<S>::one())) steps.push_back({"rescale_generator", inv});
          out.coords_normalized = true;
        } else {
          out.note = "normalizer needs sqrt of the coordinate invariant; left in axis form";
        }
      } else {
        // (p,0,q) with q/p > 0: scale to equal entries when sqrt exists
        S ratio = h.k3 / h.k1;
        auto root = detail::field_sqrt<S>(ratio);
        if (root) {
          detail::apply_l3_generators(gen, "scale_factor", *root, steps);
          S inv = scalar_traits<S>::one() / gen[0].k1;
          gen[0] = gen[0] * inv;
          if (!(inv == scalar_traits<S>::one())) steps.push_back({"rescale_generator", inv});
          out.coords_normalized = true;
        } else {
          out.note = "normalizer needs sqrt of the coordinate ratio; left in axis form";
        }
      }
    }
    out.xi_part = gen;
    return out;
  }

  if (p == 2) {
    out.tag = OptimalTag::Case4_X2X3;
    // the nilpotent coordinate line is the double root of the invariant form
    Generator<S> u = xi[0], v = xi[1];
    S du = detail::coord_delta<S>(u.coords());
    S polar = S(2) * u.k2 * v.k2 - u.k1 * v.k3 - u.k3 * v.k1;
    // delta(alpha u + beta v) = alpha^2 delta(u) + alpha beta polar + beta^2 delta(v),
    // degenerate with a double root along the nilpotent line
    Generator<S> w = u;
    bool found = false;
    if (!scalar_traits<S>::is_zero(du)) {
      S a = -polar / (S(2) * du);  // beta = 1
      w = u * a + v;
      found = matrix_is_zero(Matrix<S>{{detail::coord_delta<S>(w.coords())}}, tol, 1.0);
    } else {
      w = u;
      found = true;
    }
    if (!found) {
      out.tag = OptimalTag::Undetermined;
      out.note = "no exact nilpotent direction in the two-dimensional projection";
      return out;
    }
    std::vector<Generator<S>> gens{w, scalar_traits<S>::is_zero(du) ? v : u};
    // normalize w to the third-axis representative
    auto& steps = out.steps;
    {
      Generator<S>& h = gens[0];
      if (scalar_traits<S>::is_zero(h.k3) && scalar_traits<S>::is_zero(h.k2) &&
          !scalar_traits<S>::is_zero(h.k1))
        detail::apply_l3_generators(gens, "shift", scalar_traits<S>::one(), steps);
      if (!scalar_traits<S>::is_zero(gens[0].k3)) {
        S a = -gens[0].k2 / gens[0].k3;
        detail::apply_l3_generators(gens, "mobius", a, steps);
      }
      S inv = scalar_traits<S>::one() / gens[0].k3;
      gens[0] = gens[0] * inv;
      if (!(inv == scalar_traits<S>::one())) steps.push_back({"rescale_generator", inv});
    }
    // closure forces the partner into the (0, *, *) plane
    Generator<S>& partner = gens[1];
    if (!matrix_is_zero(Matrix<S>{{partner.k1}}, tol, 1.0)) {
      out.tag = OptimalTag::Undetermined;
      out.note = "partner generator keeps a first coordinate after normalization";
      return out;
    }
    partner.k1 = scalar_traits<S>::zero();
    S inv = scalar_traits<S>::one() / partner.k2;
    partner = partner * inv;
    // subtract the third-axis component inside the algebra
    partner = partner - gens[0] * partner.k3;
    out.coords_normalized = true;
    out.xi_part = {partner, gens[0]};  // order: x2-type then x3-type
    return out;
  }

  // p == 3: full coordinate span; echelonize to the identity coordinates
  out.tag = OptimalTag::Case5_X1X2X3;
  Matrix<S> coords(3, 3);
  for (int i = 0; i < 3; ++i) {
    coords(i, 0) = xi[i].k1;
    coords(i, 1) = xi[i].k2;
    coords(i, 2) = xi[i].k3;
  }
  Matrix<S> aug(3, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      aug(i, j) = coords(i, j);
      aug(i, 3 + i) = scalar_traits<S>::one();
    }
  auto info = rref_in_place(aug, scalar_traits<S>::is_exact ? 0.0 : tol.abs);
  if (info.rank < 3) {
    out.tag = OptimalTag::Undetermined;
    out.note = "rank loss while inverting the coordinate frame";
    return out;
  }
  std::vector<Generator<S>> norm(3, xi[0]);
  for (int i = 0; i < 3; ++i) {
    Generator<S> g{scalar_traits<S>::zero(), scalar_traits<S>::zero(), scalar_traits<S>::zero(),
                   Matrix<S>::zero(m, m)};
    for (int j = 0; j < 3; ++j) g = g + xi[j] * aug(i, 3 + j);
    norm[i] = g;
  }
  out.xi_part = norm;
  out.coords_normalized = true;
  return out;
}

// ---------------------------------------------------------------------------
// Case condition checkers
// ---------------------------------------------------------------------------

/// Two-dimensional case: shifted intertwining relations plus the strict
/// noncommutation of A3 with C0.
template <class S>
CheckResult check_case_b(const Matrix<S>& a2, const Matrix<S>& a3, const Matrix<S>& c0,
                         Tolerance tol = {}) {
  if (!a2.square() || a2.rows() != a3.rows() || a2.rows() != c0.rows())
    throw std::invalid_argument("check_case_b: dimension mismatch");
  const int m = a2.rows();
  double scale = std::max({a2.max_abs(), a3.max_abs(), c0.max_abs(), 1.0});
  CheckResult r;
  Matrix<S> e4 = Matrix<S>::identity(m) * scalar_traits<S>::from_long(4);
  Matrix<S> e2 = Matrix<S>::identity(m) * scalar_traits<S>::from_long(2);
  Matrix<S> t1 = a2 * c0 - c0 * (a2 + e4);
  r.record("A2_intertwines_C0_shift4", matrix_is_zero(t1, tol, scale * scale), t1.max_abs());
  Matrix<S> t2 = a2 * a3 - a3 * (a2 + e2);
  r.record("A2_intertwines_A3_shift2", matrix_is_zero(t2, tol, scale * scale), t2.max_abs());
  S tr = c0.trace();
  bool trz = scalar_traits<S>::is_exact ? scalar_traits<S>::is_zero(tr)
                                        : tol.is_zero(scalar_traits<S>::to_double(tr), scale);
  r.record("trace_C0_zero", trz, std::fabs(scalar_traits<S>::to_double(tr)));
  Matrix<S> t3 = a3 * c0 - c0 * a3;
  r.record("A3_C0_noncommuting", !matrix_is_zero(t3, tol, scale * scale), t3.max_abs());
  return r;
}

/// Three-dimensional case: the sl2-type bracket relations, commutation of C0
/// with A1, and the two-dimensional conditions; also cross-checks the form
/// with A2 eliminated through A2 = [A1, A3].
template <class S>
CheckResult check_case_c(const Matrix<S>& a1, const Matrix<S>& a2, const Matrix<S>& a3,
                         const Matrix<S>& c0, Tolerance tol = {}) {
  const int m = a1.rows();
  double scale = std::max({a1.max_abs(), a2.max_abs(), a3.max_abs(), c0.max_abs(), 1.0});
  CheckResult r;
  Matrix<S> two_a1 = a1 * scalar_traits<S>::from_long(2);
  Matrix<S> two_a3 = a3 * scalar_traits<S>::from_long(2);
  Matrix<S> b12 = commutator(a1, a2) - two_a1;
  r.record("A1_A2_bracket", matrix_is_zero(b12, tol, scale * scale), b12.max_abs());
  Matrix<S> b13 = commutator(a1, a3) - a2;
  r.record("A1_A3_bracket", matrix_is_zero(b13, tol, scale * scale), b13.max_abs());
  Matrix<S> b23 = commutator(a2, a3) - two_a3;
  r.record("A2_A3_bracket", matrix_is_zero(b23, tol, scale * scale), b23.max_abs());

  Matrix<S> e4 = Matrix<S>::identity(m) * scalar_traits<S>::from_long(4);
  Matrix<S> t1 = a2 * c0 - c0 * (a2 + e4);
  r.record("A2_intertwines_C0_shift4", matrix_is_zero(t1, tol, scale * scale), t1.max_abs());
  Matrix<S> t2 = c0 * a1 - a1 * c0;
  r.record("C0_commutes_A1", matrix_is_zero(t2, tol, scale * scale), t2.max_abs());
  S tr = c0.trace();
  bool trz = scalar_traits<S>::is_exact ? scalar_traits<S>::is_zero(tr)
                                        : tol.is_zero(scalar_traits<S>::to_double(tr), scale);
  r.record("trace_C0_zero", trz, std::fabs(scalar_traits<S>::to_double(tr)));
  Matrix<S> t3 = a3 * c0 - c0 * a3;
  r.record("A3_C0_noncommuting", !matrix_is_zero(t3, tol, scale * scale), t3.max_abs());

  // eliminated form: substitute A2 = [A1, A3] into the other relations
  Matrix<S> a2e = commutator(a1, a3);
  Matrix<S> q1 = a1 * a1 * a3 - a1 * a3 * a1 * scalar_traits<S>::from_long(2) + a3 * a1 * a1 - two_a1;
  Matrix<S> q2 = a1 * a3 * a3 - a3 * a1 * a3 * scalar_traits<S>::from_long(2) + a3 * a3 * a1 - two_a3;
  Matrix<S> q3 = a2e * c0 - c0 * a2e - c0 * e4;
  bool eliminated_ok = matrix_is_zero(q1, tol, scale * scale * scale) &&
                       matrix_is_zero(q2, tol, scale * scale * scale) &&
                       matrix_is_zero(q3, tol, scale * scale) && matrix_is_zero(t2, tol, scale * scale);
  bool primary_ok = r.conditions[0].passed && r.conditions[1].passed && r.conditions[2].passed &&
                    r.conditions[3].passed && r.conditions[4].passed;
  r.record("eliminated_form_agrees", eliminated_ok == primary_ok,
           std::max({q1.max_abs(), q2.max_abs(), q3.max_abs()}));
  return r;
}

// ---------------------------------------------------------------------------
// Pure matrix-part (X_A) cases
// ---------------------------------------------------------------------------

template <class S>
struct RotationNormalization {
  bool ok = false;
  bool exact_bd1 = false;     // rational conjugation to the canonical rotation exists
  Matrix<S> conjugator;       // P with P A P^{-1} = B_{d1} (when exact_bd1)
  Matrix<S> conjugator_inv;
  Matrix<S> square_scalar;    // A_n^2 = s E certificate matrix A_n
  std::string note;
};

/// Brings a traceless matrix commuting with C toward the canonical rotation
/// block form: verifies the +-i-pair structure and, when the pair is exactly
/// (0, +-1), builds a rational conjugator onto the block-diagonal rotation.
inline RotationNormalization<Rat> normalize_rotation(const MatQ& a) {
  RotationNormalization<Rat> out;
  const int m = a.rows();
  if (m % 2 != 0) {
    out.note = "odd dimension";
    return out;
  }
  Spectrum sp = spectrum(a);
  if (!sp.exact || sp.values.size() != 2 || sp.values[0].first.is_rational()) {
    out.note = "matrix part is not a single conjugate pair";
    return out;
  }
  const QuadraticValue& v = sp.values[0].first;
  if (sgn(v.d) >= 0 || sgn(v.a) != 0) {
    out.note = "pair is not purely imaginary";
    return out;
  }
  // scaled square must be the negative scalar b^2 d
  Rat s = v.b * v.b * Rat(v.d);
  if (!((a * a) == MatQ::identity(m) * s)) {
    out.note = "matrix part is not semisimple over its pair";
    return out;
  }
  out.ok = true;
  out.square_scalar = a;
  if (v.d != -1) {
    out.note = "rotation scale is irrational; conditions checked in scaled form";
    return out;
  }
  MatQ b = a * (1 / abs(v.b));
  // columns c1, c2 = -B c1, ... give P^{-1} with P B P^{-1} = B_{d1}
  MatQ pinv(m, m);
  SpanBasis<Rat> span(m);
  int col = 0;
  for (int seed = 0; seed < m && col < m; ++seed) {
    std::vector<Rat> c1(m, Rat(0));
    c1[seed] = 1;
    if (!span.contains(c1)) {
      std::vector<Rat> c2(m, Rat(0));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) c2[i] -= b(i, j) * c1[j];
      for (int i = 0; i < m; ++i) {
        pinv(i, col) = c1[i];
        pinv(i, col + 1) = c2[i];
      }
      span.add(c1);
      span.add(c2);
      col += 2;
    }
  }
  if (col < m) {
    out.note = "failed to assemble a rotation basis";
    return out;
  }
  // invert pinv
  MatQ aug(m, 2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) aug(i, j) = pinv(i, j);
    aug(i, m + i) = 1;
  }
  auto info = rref_in_place(aug);
  if (info.rank < m) {
    out.note = "rotation basis not invertible";
    return out;
  }
  MatQ p(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) p(i, j) = aug(i, m + j);
  out.exact_bd1 = true;
  out.conjugator = p;
  out.conjugator_inv = pinv;
  return out;
}

template <class S>
struct XaCheckResult {
  CheckResult checks;
  bool normalized_to_bd1 = false;
  Matrix<S> conjugator;  // valid when normalized_to_bd1
  std::string note;
};

/// Verifies the condition sets for algebras containing pure matrix-part
/// generators (one extra rotation direction, or two pure directions without
/// any xi-part). C is sampled for the block-structure checks.
XaCheckResult<Rat> check_xa_cases(const MFunQ& cfn, const LieAlgebraQ& alg, Tolerance tol = {});

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

template <class S>
struct ClassificationReport {
  int m = 0;
  LieAlgebra<S> algebra;
  OptimalCase<S> optimal;
  std::string theorem_case = "none";  // a | b | c | xa2 | xa3 | xa4 | none
  IrreducibilityVerdict<S> irreducibility;
  std::vector<ConditionRecord> conditions;
  std::vector<std::string> notes;
  bool constant_equivalent_flag = false;
};

namespace detail {

template <class S>
void require_traceless(const CanonicalSystem<S>& sys, Tolerance tol) {
  if (auto poly = sys.Cfn.as_polynomial()) {
    double scale = std::max(1.0, (*poly)[0].max_abs());
    for (const auto& c : *poly) {
      S tr = c.trace();
      bool ok = scalar_traits<S>::is_exact ? scalar_traits<S>::is_zero(tr)
                                           : tol.is_zero(scalar_traits<S>::to_double(tr), scale);
      if (!ok)
        throw std::invalid_argument(
            "classify_system: coefficient matrix has nonzero trace; run trace_normalize first");
    }
    return;
  }
  for (double x : chebyshev_grid(sys.domain, 13)) {
    Matrix<S> c = sys.Cfn.value(x);
    if (!tol.is_zero(scalar_traits<S>::to_double(c.trace()), std::max(1.0, c.max_abs())))
      throw std::invalid_argument(
          "classify_system: C(x) has nonzero trace on the grid; run trace_normalize first");
  }
}

template <class S>
std::vector<Matrix<S>> irreducibility_inputs(const MatrixFunction<S>& cfn,
                                             const Interval& domain) {
  using Kind = typename MatrixFunction<S>::Kind;
  if (cfn.kind() == Kind::ConjugatedExponential) return {cfn.exponent(), cfn.base()};
  if (auto poly = cfn.as_polynomial()) return *poly;
  std::vector<Matrix<S>> samples;
  for (double x : chebyshev_grid(domain, 9)) samples.push_back(cfn.value(x));
  return samples;
}

}  // namespace detail

/// Runs the full chain: determining solve, closure, optimal-case matching,
/// the applicable condition checkers, and the irreducibility diagnostics.
/// Sub-failures are recorded in the report instead of aborting.
template <class S>
ClassificationReport<S> classify_system(const CanonicalSystem<S>& sys, Tolerance tol = {}) {
  detail::require_traceless(sys, tol);
  ClassificationReport<S> rep;
  rep.m = sys.m;

  rep.algebra = verify_closure(solve_determining(sys.Cfn));
  if (!rep.algebra.closed) rep.notes.push_back("computed basis did not close; check rank diagnostics");
  if (rep.algebra.numerics.used && rep.algebra.numerics.ambiguous)
    rep.notes.push_back("float rank decision was ambiguous");

  // irreducibility and the constant-coefficient sufficient test
  rep.constant_equivalent_flag = constant_equivalent(sys.Cfn, sys.domain, tol);
  rep.irreducibility = irreducibility_test(detail::irreducibility_inputs(sys.Cfn, sys.domain), tol);
  if (rep.constant_equivalent_flag) {
    rep.irreducibility.status = IrreducibilityVerdict<S>::Status::ConstantEquivalent;
    rep.irreducibility.note = "traceless part of C is constant";
  }

  if (rep.algebra.dim() == 0) {
    rep.theorem_case = "none";
    rep.notes.push_back("no nontrivial symmetry");
    return rep;
  }

  rep.optimal = match_optimal_case(rep.algebra, tol);
  const int xi_dim = static_cast<int>(rep.optimal.xi_part.size());
  const int pure = rep.optimal.pure_count;

  if (pure == 0) {
    switch (rep.optimal.tag) {
      case OptimalTag::Case1_X2:
      case OptimalTag::Case2_X3:
      case OptimalTag::Case3_X1plusX3: {
        rep.theorem_case = "a";
        if (rep.optimal.tag == OptimalTag::Case2_X3 && rep.optimal.coords_normalized &&
            rep.optimal.steps.empty()) {
          // flow normal position: noncommutation of the generator matrix with C(0)
          const Matrix<S>& a = rep.optimal.xi_part[0].A;
          Matrix<S> c0 = sys.Cfn.value(scalar_traits<S>::zero());
          Matrix<S> k = commutator(a, c0);
          double scale = std::max(1.0, c0.max_abs());
          ConditionRecord r{"A_C0_noncommuting", !matrix_is_zero(k, tol, scale), k.max_abs()};
          rep.conditions.push_back(r);
          if (!r.passed)
            rep.notes.push_back("generator matrix commutes with C; constant-equivalent direction");
        } else {
          rep.notes.push_back(
              "one-dimensional algebra matched up to coordinate normalization; flow conditions "
              "apply in the transformed variables");
        }
        break;
      }
      case OptimalTag::Case4_X2X3: {
        rep.theorem_case = "b";
        if (rep.optimal.coords_normalized) {
          auto res = check_case_b(rep.optimal.xi_part[0].A, rep.optimal.xi_part[1].A,
                                  sys.Cfn.value(scalar_traits<S>::zero()), tol);
          rep.conditions.insert(rep.conditions.end(), res.conditions.begin(),
                                res.conditions.end());
          if (!res.ok) rep.notes.push_back("two-dimensional conditions failed at: " + res.first_failure);
        } else {
          rep.notes.push_back("coordinates not in representative position; conditions skipped");
        }
        break;
      }
      case OptimalTag::Case5_X1X2X3: {
        rep.theorem_case = "c";
        if (rep.optimal.coords_normalized) {
          auto res = check_case_c(rep.optimal.xi_part[0].A, rep.optimal.xi_part[1].A,
                                  rep.optimal.xi_part[2].A,
                                  sys.Cfn.value(scalar_traits<S>::zero()), tol);
          rep.conditions.insert(rep.conditions.end(), res.conditions.begin(),
                                res.conditions.end());
          if (!res.ok) rep.notes.push_back("three-dimensional conditions failed at: " + res.first_failure);
        } else {
          rep.notes.push_back("coordinates not in representative position; conditions skipped");
        }
        break;
      }
      default:
        rep.theorem_case = "none";
        rep.notes.push_back("optimal-case matching undetermined");
    }
    return rep;
  }

  // pure matrix-part generators present
  if (sys.m % 2 != 0)
    throw OddDimensionContradiction(
        "pure matrix-part generator admitted with an odd number of equations");
  if (pure == 1 && xi_dim >= 1 && xi_dim <= 3)
    rep.theorem_case = "xa" + std::to_string(xi_dim + 1);
  else
    rep.theorem_case = "none";

  if constexpr (scalar_traits<S>::is_exact) {
    auto xr = check_xa_cases(sys.Cfn, rep.algebra, tol);
    rep.conditions.insert(rep.conditions.end(), xr.checks.conditions.begin(),
                          xr.checks.conditions.end());
    if (!xr.note.empty()) rep.notes.push_back(xr.note);
    if (!xr.checks.ok)
      rep.notes.push_back("matrix-part conditions failed at: " + xr.checks.first_failure);
  } else {
    rep.notes.push_back("matrix-part condition set runs in the exact pipeline only");
  }
  return rep;
}

}  // namespace lieclass

#endif
