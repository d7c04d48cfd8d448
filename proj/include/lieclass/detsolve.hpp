#ifndef LIECLASS_DETSOLVE_HPP
#define LIECLASS_DETSOLVE_HPP

#include <array>

#include "lieclass/mfun.hpp"
#include "lieclass/transform.hpp"

namespace lieclass {

/// Candidate symmetry with xi = (k1 x^2 + k3)/2 + k2 x and linear part A y.
/// The direction (k = 0, A = E) is admitted by every linear system and is
/// quotiented out of all stored bases.
template <class S>
struct Generator {
  S k1 = scalar_traits<S>::zero();
  S k2 = scalar_traits<S>::zero();
  S k3 = scalar_traits<S>::zero();
  Matrix<S> A;

  L3Coords<S> coords() const { return {k1, k2, k3}; }
  bool is_zero() const {
    return scalar_traits<S>::is_zero(k1) && scalar_traits<S>::is_zero(k2) &&
           scalar_traits<S>::is_zero(k3) && A.is_zero();
  }
  bool pure_matrix_part() const {
    return scalar_traits<S>::is_zero(k1) && scalar_traits<S>::is_zero(k2) &&
           scalar_traits<S>::is_zero(k3) && !A.is_zero();
  }

  Generator operator+(const Generator& o) const { return {k1 + o.k1, k2 + o.k2, k3 + o.k3, A + o.A}; }
  Generator operator-(const Generator& o) const { return {k1 - o.k1, k2 - o.k2, k3 - o.k3, A - o.A}; }
  Generator operator*(const S& c) const { return {k1 * c, k2 * c, k3 * c, A * c}; }
};

template <class S>
std::vector<S> generator_to_vector(const Generator<S>& g) {
  std::vector<S> v{g.k1, g.k2, g.k3};
  v.insert(v.end(), g.A.data().begin(), g.A.data().end());
  return v;
}

template <class S>
Generator<S> generator_from_vector(const std::vector<S>& v, int m) {
  if (static_cast<int>(v.size()) != m * m + 3)
    throw std::invalid_argument("generator_from_vector: size mismatch");
  Generator<S> g{v[0], v[1], v[2], Matrix<S>(m, m)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g.A(i, j) = v[3 + i * m + j];
  return g;
}

/// The quotiented direction (k = 0, A = E) as an unknown-space vector.
template <class S>
std::vector<S> trivial_direction(int m) {
  return generator_to_vector(Generator<S>{scalar_traits<S>::zero(), scalar_traits<S>::zero(),
                                          scalar_traits<S>::zero(), Matrix<S>::identity(m)});
}

/// Left-hand side of the determining equation at x:
/// (k1 x^2 + 2 k2 x + k3) C' + C A - A C + 4 (k1 x + k2) C.
template <class S>
Matrix<S> residual(const MatrixFunction<S>& cfn, const Generator<S>& g,
                   const std::type_identity_t<S>& x) {
  Matrix<S> c = cfn.value(x);
  Matrix<S> dc = cfn.derivative(x);
  S xi2 = g.k1 * x * x + S(2) * g.k2 * x + g.k3;
  S xi2d = S(4) * (g.k1 * x + g.k2);
  return dc * xi2 + c * g.A - g.A * c + c * xi2d;
}

struct NumericDiagnostics {
  bool used = false;       // float path taken
  double min_pivot = 0;    // smallest accepted pivot
  double max_rejected = 0; // largest entry treated as zero
  bool ambiguous = false;  // pivot gap under three orders of magnitude
};

/// Admitted algebra of nontrivial generators: basis plus structure constants
/// once verify_closure has run.
template <class S>
struct LieAlgebra {
  int m = 0;
  std::vector<Generator<S>> basis;
  std::vector<std::vector<std::vector<S>>> structure;  // [i][j] -> coefficients
  bool closed = false;
  bool closure_computed = false;
  NumericDiagnostics numerics;

  int dim() const { return static_cast<int>(basis.size()); }
};

template <class S>
Generator<S> bracket(const Generator<S>& x, const Generator<S>& z) {
  Generator<S> r;
  r.k1 = S(-2) * (x.k1 * z.k2 - x.k2 * z.k1);
  r.k2 = -(x.k1 * z.k3 - x.k3 * z.k1);
  r.k3 = S(-2) * (x.k2 * z.k3 - x.k3 * z.k2);
  r.A = z.A * x.A - x.A * z.A;
  return r;
}

namespace detail {

/// Adds the m*m equations "residual block at one x-power / sample" to rows.
/// ccur, cprev, cnext are the matrices multiplying k2-, k1- and k3-terms.
template <class S>
void emit_equation_block(Matrix<S>& rows, int& row, int m, const Matrix<S>& k1_coef,
                         const Matrix<S>& k2_coef, const Matrix<S>& k3_coef,
                         const Matrix<S>& c_for_bracket) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j, ++row) {
      rows(row, 0) = k1_coef(i, j);
      rows(row, 1) = k2_coef(i, j);
      rows(row, 2) = k3_coef(i, j);
      // (C A)(i,j) contributes C(i,l) to column a(l,j); (A C)(i,j)
      // contributes C(l,j) to column a(i,l)
      for (int l = 0; l < m; ++l) {
        rows(row, 3 + l * m + j) += c_for_bracket(i, l);
        rows(row, 3 + i * m + l) -= c_for_bracket(l, j);
      }
    }
}

}  // namespace detail

/// Solves the determining equation as a homogeneous linear system in
/// (k1, k2, k3, entries of A): exact coefficient matching in powers of x when
/// C is polynomial (or expands to one), point sampling otherwise. The trivial
/// direction is removed and every basis matrix is normalized to trace zero.
template <class S>
LieAlgebra<S> solve_determining(const MatrixFunction<S>& cfn) {
  const int m = cfn.dim();
  const int ncols = m * m + 3;
  LieAlgebra<S> alg;
  alg.m = m;

  Matrix<S> rows;
  auto poly = cfn.as_polynomial();
  if (poly) {
    // coefficient of x^q:
    //   k1 (q+3) C_{q-1} + k2 (2q+4) C_q + k3 (q+1) C_{q+1} + [C_q, A]
    const int d = static_cast<int>(poly->size()) - 1;
    rows = Matrix<S>(m * m * (d + 2), ncols);
    auto coef = [&](int p) {
      return (p >= 0 && p <= d) ? (*poly)[p] : Matrix<S>::zero(m, m);
    };
    int row = 0;
    for (int q = 0; q <= d + 1; ++q) {
      detail::emit_equation_block(rows, row, m, coef(q - 1) * scalar_traits<S>::from_long(q + 3),
                                  coef(q) * scalar_traits<S>::from_long(2 * q + 4),
                                  coef(q + 1) * scalar_traits<S>::from_long(q + 1), coef(q));
    }
  } else {
    // sampled path: deterministic points 1 + j/7 mapped into the grid span
    if constexpr (scalar_traits<S>::is_exact) {
      throw std::domain_error("solve_determining: exact mode needs a polynomial expansion");
    } else {
      const int npts = m * m + 7;
      double lo = 1.0, hi = 1.0 + (npts - 1) / 7.0;
      if (cfn.kind() == MatrixFunction<S>::Kind::Sampled) {
        if (static_cast<int>(cfn.grid().size()) < npts)
          throw std::invalid_argument("solve_determining: too few sample points in grid");
        lo = cfn.grid().front();
        hi = cfn.grid().back();
      }
      rows = Matrix<S>(m * m * npts, ncols);
      int row = 0;
      for (int j = 0; j < npts; ++j) {
        double x = lo + (hi - lo) * (j + 0.5) / npts;
        Matrix<S> c = cfn.value(x);
        Matrix<S> dc = cfn.derivative(x);
        detail::emit_equation_block(rows, row, m, dc * (x * x) + c * (4.0 * x), dc * (2.0 * x) + c * 4.0,
                                    dc, c);
      }
    }
  }

  RrefInfo<S> info;
  double tol = 0.0;
  if constexpr (!scalar_traits<S>::is_exact) {
    alg.numerics.used = true;
    if (poly) {
      tol = rank_threshold(rows);
    } else {
      // Sampled coefficients carry finite-difference noise (step 1e-5, noise
      // floor ~1e-9 of the row scale); equilibrate rows and use a rank guard
      // well above that floor instead of the machine-epsilon threshold.
      for (int i = 0; i < rows.rows(); ++i) {
        double s = 0;
        for (int j = 0; j < rows.cols(); ++j) s = std::max(s, std::fabs(rows(i, j)));
        if (s > 0)
          for (int j = 0; j < rows.cols(); ++j) rows(i, j) /= s;
      }
      tol = 1e-7 * ncols;
    }
  }
  auto null_basis = null_space(rows, tol, &info);
  if constexpr (!scalar_traits<S>::is_exact) {
    alg.numerics.min_pivot = info.min_pivot;
    alg.numerics.max_rejected = info.max_rejected;
    alg.numerics.ambiguous = info.ambiguous();
  }

  // quotient by the trivial direction: project onto trace(A) = 0
  std::vector<S> t = trivial_direction<S>(m);
  SpanBasis<S> reduced(ncols, tol);
  S inv_m = scalar_traits<S>::one() / scalar_traits<S>::from_long(m);
  for (auto& v : null_basis) {
    S tr = scalar_traits<S>::zero();
    for (int i = 0; i < m; ++i) tr += v[3 + i * m + i];
    S f = tr * inv_m;
    for (int i = 0; i < ncols; ++i) v[i] -= f * t[i];
    reduced.add(std::move(v));
  }
  for (const auto& row : reduced.rows()) alg.basis.push_back(generator_from_vector(row, m));
  return alg;
}

/// Computes all pairwise commutators, expresses them in the basis span and
/// fills the structure constants; non-closure is recorded, not thrown.
template <class S>
LieAlgebra<S> verify_closure(LieAlgebra<S> alg) {
  const int n = alg.dim();
  alg.structure.assign(n, std::vector<std::vector<S>>(
                              n, std::vector<S>(n, scalar_traits<S>::zero())));
  alg.closed = true;
  alg.closure_computed = true;
  if (n == 0) return alg;

  std::vector<std::vector<S>> basis_vecs;
  for (const auto& g : alg.basis) basis_vecs.push_back(generator_to_vector(g));

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Generator<S> br = bracket(alg.basis[i], alg.basis[j]);
      auto coords = coordinates_in(basis_vecs, generator_to_vector(br));
      if (!coords) {
        // maybe representable only through the trivial direction
        auto extended = basis_vecs;
        extended.push_back(trivial_direction<S>(alg.m));
        auto c2 = coordinates_in(extended, generator_to_vector(br));
        if (!c2) {
          alg.closed = false;
          continue;
        }
        c2->pop_back();
        coords = std::move(c2);
      }
      for (int k = 0; k < n; ++k) {
        alg.structure[i][j][k] = (*coords)[k];
        alg.structure[j][i][k] = -(*coords)[k];
      }
    }
  return alg;
}

using GeneratorQ = Generator<Rat>;
using LieAlgebraQ = LieAlgebra<Rat>;
using LieAlgebraD = LieAlgebra<double>;

}  // namespace lieclass

#endif
