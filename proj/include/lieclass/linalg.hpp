#ifndef LIECLASS_LINALG_HPP
#define LIECLASS_LINALG_HPP

#include <limits>
#include <optional>
#include <vector>

#include "lieclass/matrix.hpp"

namespace lieclass {

/// Pivot threshold for floating-point rank decisions:
/// maxdim * eps * (proxy for the largest singular value).
inline double rank_threshold(const MatD& m) {
  double sigma = std::sqrt(std::max(m.norm_one(), 1e-300) * std::max(m.norm_inf(), 1e-300));
  sigma = std::max(sigma, 1.0e-300);
  return std::max(m.rows(), m.cols()) * std::numeric_limits<double>::epsilon() * sigma;
}

template <class S>
struct RrefInfo {
  int rank = 0;
  std::vector<int> pivot_cols;
  // float diagnostics: smallest accepted pivot and largest rejected candidate
  double min_pivot = std::numeric_limits<double>::infinity();
  double max_rejected = 0.0;
  bool ambiguous() const { return max_rejected > 0 && min_pivot / max_rejected < 1e3; }
};

/// Reduced row-echelon form in place. For exact scalars zero tests are exact
/// and `tol` is ignored; for doubles entries below `tol` are treated as zero.
template <class S>
RrefInfo<S> rref_in_place(Matrix<S>& m, double tol = 0.0) {
  RrefInfo<S> info;
  int rows = m.rows(), cols = m.cols();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    if constexpr (scalar_traits<S>::is_exact) {
      for (int i = r; i < rows; ++i)
        if (!scalar_traits<S>::is_zero(m(i, c))) {
          piv = i;
          break;
        }
    } else {
      double best = tol;
      for (int i = r; i < rows; ++i) {
        double a = std::fabs(scalar_traits<S>::to_double(m(i, c)));
        if (a > best) {
          best = a;
          piv = i;
        }
      }
      for (int i = r; i < rows; ++i) {
        double a = std::fabs(scalar_traits<S>::to_double(m(i, c)));
        if (a <= tol) info.max_rejected = std::max(info.max_rejected, a);
      }
      if (piv >= 0) info.min_pivot = std::min(info.min_pivot, best);
    }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j) std::swap(m(piv, j), m(r, j));
    S inv = scalar_traits<S>::one() / m(r, c);
    for (int j = c; j < cols; ++j) m(r, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const S f = m(i, c);
      if (scalar_traits<S>::is_zero(f)) continue;
      for (int j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
      m(i, c) = scalar_traits<S>::zero();
    }
    info.pivot_cols.push_back(c);
    ++r;
  }
  info.rank = r;
  return info;
}

template <class S>
int rank(Matrix<S> m, double tol = 0.0) {
  if constexpr (!scalar_traits<S>::is_exact)
    if (tol == 0.0) tol = rank_threshold(m);
  return rref_in_place(m, tol).rank;
}

/// Null-space basis of m (as column vectors of length cols). The basis is the
/// canonical one read off the reduced echelon form: vector k has a unit entry
/// at its free column and zeros at the other free columns.
template <class S>
std::vector<std::vector<S>> null_space(Matrix<S> m, double tol = 0.0,
                                       RrefInfo<S>* info_out = nullptr) {
  if constexpr (!scalar_traits<S>::is_exact)
    if (tol == 0.0) tol = rank_threshold(m);
  RrefInfo<S> info = rref_in_place(m, tol);
  if (info_out) *info_out = info;
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : info.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<S>> basis;
  for (int c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    std::vector<S> v(m.cols(), scalar_traits<S>::zero());
    v[c] = scalar_traits<S>::one();
    for (int r = 0; r < static_cast<int>(info.pivot_cols.size()); ++r)
      v[info.pivot_cols[r]] = -m(r, c);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// One solution of A x = b with free variables set to zero, or nullopt when
/// the system is inconsistent.
template <class S>
std::optional<std::vector<S>> solve_linear(const Matrix<S>& a, const std::vector<S>& b,
                                           double tol = 0.0) {
  if (static_cast<int>(b.size()) != a.rows())
    throw std::invalid_argument("solve_linear: rhs size mismatch");
  Matrix<S> aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  if constexpr (!scalar_traits<S>::is_exact)
    if (tol == 0.0) tol = rank_threshold(aug);
  RrefInfo<S> info = rref_in_place(aug, tol);
  // inconsistent iff some pivot lands in the rhs column
  if (!info.pivot_cols.empty() && info.pivot_cols.back() == a.cols()) return std::nullopt;
  std::vector<S> x(a.cols(), scalar_traits<S>::zero());
  for (int r = 0; r < static_cast<int>(info.pivot_cols.size()); ++r)
    x[info.pivot_cols[r]] = aug(r, a.cols());
  return x;
}

/// Incrementally maintained row-echelon span of vectors; used for quotient
/// bases, closure checks and span comparisons.
template <class S>
class SpanBasis {
 public:
  explicit SpanBasis(int dim, double tol = 0.0) : dim_(dim), tol_(tol) {}

  /// Reduces v against the current basis; returns true when v enlarged the span.
  bool add(std::vector<S> v) {
    reduce(v);
    int p = leading_index(v);
    if (p < 0) return false;
    S inv = scalar_traits<S>::one() / v[p];
    for (auto& e : v) e *= inv;
    // keep rows sorted by pivot and back-substitute for a reduced form
    size_t pos = 0;
    while (pos < rows_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + pos, v);
    pivots_.insert(pivots_.begin() + pos, p);
    for (size_t i = 0; i < rows_.size(); ++i) {
      if (i == pos) continue;
      const S f = rows_[i][p];
      if (scalar_traits<S>::is_zero(f)) continue;
      for (int j = 0; j < dim_; ++j) rows_[i][j] -= f * rows_[pos][j];
    }
    return true;
  }

  bool contains(std::vector<S> v) const {
    reduce(v);
    return leading_index(v) < 0;
  }

  int dim() const { return static_cast<int>(rows_.size()); }
  int ambient_dim() const { return dim_; }
  const std::vector<std::vector<S>>& rows() const { return rows_; }

  bool same_span(const SpanBasis& other) const {
    if (dim() != other.dim()) return false;
    for (const auto& r : other.rows_)
      if (!contains(r)) return false;
    return true;
  }

 private:
  void reduce(std::vector<S>& v) const {
    for (size_t i = 0; i < rows_.size(); ++i) {
      const S f = v[pivots_[i]];
      if (scalar_traits<S>::is_zero(f)) continue;
      for (int j = 0; j < dim_; ++j) v[j] -= f * rows_[i][j];
      v[pivots_[i]] = scalar_traits<S>::zero();
    }
  }
  int leading_index(const std::vector<S>& v) const {
    double scale = 0;
    if constexpr (!scalar_traits<S>::is_exact)
      for (const auto& e : v) scale = std::max(scale, std::fabs(e));
    for (int j = 0; j < dim_; ++j) {
      if constexpr (scalar_traits<S>::is_exact) {
        if (!scalar_traits<S>::is_zero(v[j])) return j;
      } else {
        double t = tol_ > 0 ? tol_ : dim_ * std::numeric_limits<double>::epsilon() * scale;
        if (std::fabs(scalar_traits<S>::to_double(v[j])) > t) return j;
      }
    }
    return -1;
  }

  int dim_;
  double tol_;
  std::vector<std::vector<S>> rows_;
  std::vector<int> pivots_;
};

/// Coordinates of v in the span of the given (not necessarily independent)
/// vectors, or nullopt when v lies outside the span.
template <class S>
std::optional<std::vector<S>> coordinates_in(const std::vector<std::vector<S>>& basis,
                                             const std::vector<S>& v, double tol = 0.0) {
  if (basis.empty()) return std::nullopt;
  int n = static_cast<int>(v.size());
  Matrix<S> a(n, static_cast<int>(basis.size()));
  for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
    if (static_cast<int>(basis[j].size()) != n)
      throw std::invalid_argument("coordinates_in: mixed vector sizes");
    for (int i = 0; i < n; ++i) a(i, j) = basis[j][i];
  }
  return solve_linear(a, v, tol);
}

}  // namespace lieclass

#endif
