#ifndef LIECLASS_MATCORE_HPP
#define LIECLASS_MATCORE_HPP

#include <complex>
#include <type_traits>
#include <optional>
#include <vector>

#include "lieclass/linalg.hpp"
#include "lieclass/matrix.hpp"
#include "lieclass/polyq.hpp"

namespace lieclass {

template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
  if (!a.square() || !b.square() || a.rows() != b.rows())
    throw std::invalid_argument("commutator: dimension mismatch");
  return a * b - b * a;
}

/// Block-diagonal matrix of 2x2 rotation generators [[0,1],[-1,0]]; squares
/// to minus the identity.
template <class S>
Matrix<S> build_bd1(int n) {
  if (n < 1) throw std::invalid_argument("build_bd1: n must be positive");
  Matrix<S> m(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    m(2 * k, 2 * k + 1) = scalar_traits<S>::one();
    m(2 * k + 1, 2 * k) = -scalar_traits<S>::one();
  }
  return m;
}

/// True when every 2x2 block of m has the shape [[a,b],[-b,a]].
template <class S>
bool is_block_form(const Matrix<S>& m) {
  if (!m.square() || m.rows() % 2 != 0) return false;
  int n = m.rows() / 2;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const S& a = m(2 * p, 2 * q);
      const S& b = m(2 * p, 2 * q + 1);
      if (!(m(2 * p + 1, 2 * q + 1) == a) || !(m(2 * p + 1, 2 * q) == -b)) return false;
    }
  return true;
}

/// A 2n x 2n matrix built from 2x2 blocks [[a,b],[-b,a]], stored as the
/// (a, b) pairs per block.
template <class S>
struct BlockForm {
  int n = 0;
  std::vector<std::pair<S, S>> entries;  // row-major over blocks

  const std::pair<S, S>& block(int p, int q) const { return entries[p * n + q]; }

  Matrix<S> to_matrix() const {
    Matrix<S> m(2 * n, 2 * n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const auto& [a, b] = block(p, q);
        m(2 * p, 2 * q) = a;
        m(2 * p, 2 * q + 1) = b;
        m(2 * p + 1, 2 * q) = -b;
        m(2 * p + 1, 2 * q + 1) = a;
      }
    return m;
  }
};

template <class S>
std::optional<BlockForm<S>> block_form_of(const Matrix<S>& m) {
  if (!is_block_form(m)) return std::nullopt;
  BlockForm<S> bf;
  bf.n = m.rows() / 2;
  for (int p = 0; p < bf.n; ++p)
    for (int q = 0; q < bf.n; ++q)
      bf.entries.emplace_back(m(2 * p, 2 * q), m(2 * p, 2 * q + 1));
  return bf;
}

inline bool is_block_form_approx(const MatD& m, Tolerance tol = {}) {
  if (!m.square() || m.rows() % 2 != 0) return false;
  int n = m.rows() / 2;
  double scale = std::max(m.max_abs(), 1.0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (!tol.is_zero(m(2 * p + 1, 2 * q + 1) - m(2 * p, 2 * q), scale)) return false;
      if (!tol.is_zero(m(2 * p + 1, 2 * q) + m(2 * p, 2 * q + 1), scale)) return false;
    }
  return true;
}

/// Smallest k <= rows with a^k = 0 (strict zero test), or nullopt.
template <class S>
std::optional<int> nilpotency_index(const Matrix<S>& a) {
  a.require_square("nilpotency_index");
  Matrix<S> p = a;
  for (int k = 1; k <= a.rows(); ++k) {
    if (p.is_zero()) return k;
    p = p * a;
  }
  return std::nullopt;
}

/// e^a for doubles by scaling and squaring with a degree-6 diagonal Pade kernel.
MatD mat_exp_pade(const MatD& a);

/// Matrix exponential e^{xA}. Nilpotent matrices use the exact finite series
/// in either scalar kind; other matrices are only supported in float mode.
template <class S>
Matrix<S> mat_exp(const Matrix<S>& a, const std::type_identity_t<S>& x) {
  a.require_square("mat_exp");
  std::optional<int> nil = nilpotency_index(a);
  if (nil) {
    Matrix<S> term = Matrix<S>::identity(a.rows());
    Matrix<S> sum = term;
    for (int j = 1; j < *nil; ++j) {
      term = term * a * (x / scalar_traits<S>::from_long(j));
      sum = sum + term;
    }
    return sum;
  }
  if constexpr (scalar_traits<S>::is_exact) {
    throw std::domain_error(
        "mat_exp: non-nilpotent matrix requires float mode (exact exponential unsupported)");
  } else {
    return mat_exp_pade(a * x);
  }
}

/// e^{xA} C0 e^{-xA}, the general solution of C' = AC - CA with C(0) = C0.
template <class S>
Matrix<S> conj_exp(const Matrix<S>& a, const Matrix<S>& c0, const std::type_identity_t<S>& x) {
  if (!a.square() || a.rows() != c0.rows() || !c0.square())
    throw std::invalid_argument("conj_exp: dimension mismatch");
  Matrix<S> e = mat_exp(a, x);
  S nx = -x;
  return e * c0 * mat_exp(a, nx);
}

template <class S>
struct SylvesterSolution {
  std::optional<Matrix<S>> particular;  // empty: the equation is infeasible
  std::vector<Matrix<S>> homogeneous;   // basis of AX - XB = 0
  bool feasible() const { return particular.has_value(); }
};

/// Solves AX - XB = Q through the Kronecker lift
/// (I (x) A - B^t (x) I) vec X = vec Q.
template <class S>
SylvesterSolution<S> solve_sylvester(const Matrix<S>& a, const Matrix<S>& b, const Matrix<S>& q) {
  a.require_square("solve_sylvester");
  b.require_square("solve_sylvester");
  if (q.rows() != a.rows() || q.cols() != b.rows())
    throw std::invalid_argument("solve_sylvester: rhs dimension mismatch");
  int m = a.rows(), n = b.rows();
  Matrix<S> lift = kron(Matrix<S>::identity(n), a) - kron(b.transpose(), Matrix<S>::identity(m));
  SylvesterSolution<S> sol;
  double tol = 0.0;
  if constexpr (!scalar_traits<S>::is_exact) tol = rank_threshold(lift);
  auto part = solve_linear(lift, vec_colstack(q), tol);
  if (part) sol.particular = unvec_colstack(*part, m, n);
  for (auto& v : null_space(lift, tol)) sol.homogeneous.push_back(unvec_colstack(v, m, n));
  return sol;
}

/// Basis of {X : XA - AX = 0}; always contains the identity.
template <class S>
std::vector<Matrix<S>> commutant_basis(const Matrix<S>& a) {
  a.require_square("commutant_basis");
  int m = a.rows();
  Matrix<S> lift = kron(a.transpose(), Matrix<S>::identity(m)) -
                   kron(Matrix<S>::identity(m), a);
  double tol = 0.0;
  if constexpr (!scalar_traits<S>::is_exact) tol = rank_threshold(lift);
  std::vector<Matrix<S>> basis;
  for (auto& v : null_space(lift, tol)) basis.push_back(unvec_colstack(v, m, m));
  return basis;
}

/// Basis of the matrices commuting with every element of the given set.
template <class S>
std::vector<Matrix<S>> joint_commutant(const std::vector<Matrix<S>>& mats) {
  if (mats.empty()) throw std::invalid_argument("joint_commutant: empty set");
  int m = mats.front().rows();
  Matrix<S> stacked(static_cast<int>(mats.size()) * m * m, m * m);
  int row = 0;
  for (const auto& a : mats) {
    Matrix<S> lift =
        kron(a.transpose(), Matrix<S>::identity(m)) - kron(Matrix<S>::identity(m), a);
    for (int i = 0; i < m * m; ++i, ++row)
      for (int j = 0; j < m * m; ++j) stacked(row, j) = lift(i, j);
  }
  double tol = 0.0;
  if constexpr (!scalar_traits<S>::is_exact) tol = rank_threshold(stacked);
  std::vector<Matrix<S>> basis;
  for (auto& v : null_space(stacked, tol)) basis.push_back(unvec_colstack(v, m, m));
  return basis;
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

/// Exact eigenvalue a + b*sqrt(d) with rational a, b and squarefree integer d
/// (negative d encodes a complex value). b = 0 means a plain rational.
struct QuadraticValue {
  Rat a;
  Rat b;
  mpz_class d;

  bool is_rational() const { return sgn(b) == 0; }
  bool is_real() const { return is_rational() || sgn(d) >= 0; }
  std::complex<double> to_complex() const {
    if (is_rational()) return {a.get_d(), 0.0};
    double root = std::sqrt(std::fabs(d.get_d()));
    if (sgn(d) >= 0) return {a.get_d() + b.get_d() * root, 0.0};
    return {a.get_d(), b.get_d() * root};
  }
  bool operator==(const QuadraticValue& o) const { return a == o.a && b == o.b && d == o.d; }
};

QuadraticValue make_quadratic(const Rat& a, const Rat& b, const mpz_class& d);

struct Spectrum {
  bool exact = false;
  std::vector<std::pair<QuadraticValue, int>> values;  // exact values with multiplicities
  std::vector<std::complex<double>> approx;            // float values, repeated per multiplicity
  double backward_error = 0.0;  // ~ m * eps * |A| for the float path

  int total_multiplicity() const {
    if (!exact) return static_cast<int>(approx.size());
    int t = 0;
    for (const auto& [v, k] : values) t += k;
    return t;
  }
};

/// Characteristic polynomial det(lambda*I - A), monic, by the
/// Faddeev-LeVerrier recurrence.
PolyQ charpoly(const MatQ& a);

/// Exact spectrum when the characteristic polynomial splits into rational and
/// quadratic factors; float fallback (with backward-error note) otherwise.
Spectrum spectrum(const MatQ& a);
Spectrum spectrum(const MatD& a);

std::vector<std::complex<double>> eigenvalues_float(const MatD& a);

struct ChainWitness {
  bool exact = false;
  QuadraticValue value;          // valid when exact
  std::complex<double> approx;   // always filled
};

/// Searches for an eigenvalue lambda of a such that lambda, lambda+step, ...,
/// lambda+(length-1)*step all occur in the spectrum.
std::optional<ChainWitness> eigenvalue_chain(const MatQ& a, const Rat& step, int length);
std::optional<ChainWitness> eigenvalue_chain(const MatD& a, double step, int length,
                                             Tolerance tol = {});

}  // namespace lieclass

#endif
