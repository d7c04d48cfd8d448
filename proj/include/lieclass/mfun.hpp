#ifndef LIECLASS_MFUN_HPP
#define LIECLASS_MFUN_HPP

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lieclass/matcore.hpp"

namespace lieclass {

/// Closed working interval; the base point 0 is assumed inside for most
/// constructions and callers re-anchor at the midpoint when it is not.
struct Interval {
  double a = -1.0;
  double b = 1.0;
  bool contains(double x) const { return x >= a && x <= b; }
  double mid() const { return 0.5 * (a + b); }
  double length() const { return b - a; }
};

/// n Chebyshev-distributed points on [a, b], endpoints included.
inline std::vector<double> chebyshev_grid(const Interval& iv, int n = 101) {
  if (n < 2) throw std::invalid_argument("chebyshev_grid: need at least two points");
  std::vector<double> xs(n);
  for (int k = 0; k < n; ++k) {
    double t = std::cos(M_PI * k / (n - 1));  // 1 .. -1
    xs[n - 1 - k] = iv.mid() + 0.5 * iv.length() * t;
  }
  return xs;
}

/// Coefficient matrix function C(x) in one of three representations:
///  - Polynomial: finite list of coefficient matrices, exact arithmetic;
///  - ConjugatedExponential: the pair (A, C0) meaning e^{xA} C0 e^{-xA};
///  - Sampled: an evaluation callback plus a sample grid (float only).
template <class S>
class MatrixFunction {
 public:
  enum class Kind { Polynomial, ConjugatedExponential, Sampled };

  static MatrixFunction polynomial(std::vector<Matrix<S>> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("MatrixFunction: empty coefficient list");
    MatrixFunction f;
    f.kind_ = Kind::Polynomial;
    f.dim_ = coeffs.front().rows();
    for (const auto& c : coeffs)
      if (!c.square() || c.rows() != f.dim_)
        throw std::invalid_argument("MatrixFunction: coefficient dimension mismatch");
    f.coeffs_ = std::move(coeffs);
    return f;
  }

  static MatrixFunction constant(Matrix<S> c) { return polynomial({std::move(c)}); }

  static MatrixFunction conjugated(Matrix<S> a, Matrix<S> c0) {
    if (!a.square() || !c0.square() || a.rows() != c0.rows())
      throw std::invalid_argument("MatrixFunction: conjugation dimension mismatch");
    MatrixFunction f;
    f.kind_ = Kind::ConjugatedExponential;
    f.dim_ = a.rows();
    f.exp_a_ = std::move(a);
    f.c0_ = std::move(c0);
    return f;
  }

  static MatrixFunction sampled(std::function<Matrix<S>(double)> fn, std::vector<double> grid) {
    static_assert(!scalar_traits<S>::is_exact,
                  "sampled matrix functions exist only in the float pipeline");
    if (!fn) throw std::invalid_argument("MatrixFunction: null callback");
    if (grid.size() < 2) throw std::invalid_argument("MatrixFunction: sample grid too small");
    MatrixFunction f;
    f.kind_ = Kind::Sampled;
    f.grid_ = std::move(grid);
    f.fn_ = std::move(fn);
    f.dim_ = f.fn_(f.grid_.front()).rows();
    return f;
  }

  /// Sampled function backed by stored values; evaluation between nodes uses
  /// barycentric Lagrange interpolation (stable on Chebyshev-style grids).
  static MatrixFunction sampled_data(std::vector<double> xs, std::vector<Matrix<S>> values) {
    static_assert(!scalar_traits<S>::is_exact,
                  "sampled matrix functions exist only in the float pipeline");
    if (xs.size() != values.size() || xs.size() < 2)
      throw std::invalid_argument("MatrixFunction: bad sample data");
    auto weights = std::make_shared<std::vector<double>>(xs.size(), 1.0);
    for (size_t j = 0; j < xs.size(); ++j)
      for (size_t k = 0; k < xs.size(); ++k)
        if (k != j) (*weights)[j] /= (xs[j] - xs[k]);
    auto nodes = std::make_shared<std::vector<double>>(xs);
    auto vals = std::make_shared<std::vector<Matrix<S>>>(std::move(values));
    auto fn = [nodes, vals, weights](double x) {
      const auto& t = *nodes;
      for (size_t j = 0; j < t.size(); ++j)
        if (x == t[j]) return (*vals)[j];
      int m = (*vals).front().rows();
      Matrix<S> num(m, m);
      double den = 0;
      for (size_t j = 0; j < t.size(); ++j) {
        double w = (*weights)[j] / (x - t[j]);
        num = num + (*vals)[j] * w;
        den += w;
      }
      return num * (1.0 / den);
    };
    return sampled(fn, xs);
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  const std::vector<Matrix<S>>& coeffs() const { return coeffs_; }
  const Matrix<S>& exponent() const { return exp_a_; }
  const Matrix<S>& base() const { return c0_; }
  const std::vector<double>& grid() const { return grid_; }

  Matrix<S> value(const S& x) const {
    switch (kind_) {
      case Kind::Polynomial: {
        Matrix<S> v = coeffs_.back();
        for (int i = static_cast<int>(coeffs_.size()) - 2; i >= 0; --i) v = v * x + coeffs_[i];
        return v;
      }
      case Kind::ConjugatedExponential:
        return conj_exp(exp_a_, c0_, x);
      case Kind::Sampled:
        return fn_(scalar_traits<S>::to_double(x));
    }
    throw std::logic_error("MatrixFunction: bad kind");
  }

  /// dC/dx; exact for the polynomial and conjugated forms, central finite
  /// differences with step 1e-5 for sampled data.
  Matrix<S> derivative(const S& x) const {
    switch (kind_) {
      case Kind::Polynomial: {
        if (coeffs_.size() == 1) return Matrix<S>::zero(dim_, dim_);
        Matrix<S> v = coeffs_.back() * scalar_traits<S>::from_long(coeffs_.size() - 1);
        for (int i = static_cast<int>(coeffs_.size()) - 2; i >= 1; --i)
          v = v * x + coeffs_[i] * scalar_traits<S>::from_long(i);
        return v;
      }
      case Kind::ConjugatedExponential: {
        Matrix<S> c = value(x);
        return exp_a_ * c - c * exp_a_;
      }
      case Kind::Sampled: {
        const double h = 1e-5;
        double xd = scalar_traits<S>::to_double(x);
        return (fn_(xd + h) - fn_(xd - h)) * (1.0 / (2 * h));
      }
    }
    throw std::logic_error("MatrixFunction: bad kind");
  }

  /// Exact polynomial expansion when one exists (always for Polynomial, for
  /// ConjugatedExponential only when the exponent is nilpotent).
  std::optional<std::vector<Matrix<S>>> as_polynomial() const {
    if (kind_ == Kind::Polynomial) return coeffs_;
    if (kind_ != Kind::ConjugatedExponential) return std::nullopt;
    auto nil = nilpotency_index(exp_a_);
    if (!nil) return std::nullopt;
    int nu = *nil;
    std::vector<Matrix<S>> out(2 * nu - 1, Matrix<S>::zero(dim_, dim_));
    // powers of A and factorials
    std::vector<Matrix<S>> ap{Matrix<S>::identity(dim_)};
    for (int j = 1; j < nu; ++j) ap.push_back(ap.back() * exp_a_);
    std::vector<S> fact{scalar_traits<S>::one()};
    for (int j = 1; j < nu; ++j) fact.push_back(fact.back() * scalar_traits<S>::from_long(j));
    for (int j = 0; j < nu; ++j)
      for (int k = 0; k < nu; ++k) {
        Matrix<S> term = ap[j] * c0_ * ap[k] * (scalar_traits<S>::one() / (fact[j] * fact[k]));
        if (k % 2 == 1) term = -term;
        out[j + k] = out[j + k] + term;
      }
    while (out.size() > 1 && out.back().is_zero()) out.pop_back();
    return out;
  }

 private:
  MatrixFunction() = default;

  Kind kind_ = Kind::Polynomial;
  int dim_ = 0;
  std::vector<Matrix<S>> coeffs_;
  Matrix<S> exp_a_, c0_;
  std::vector<double> grid_;
  std::function<Matrix<S>(double)> fn_;
};

using MFunQ = MatrixFunction<Rat>;
using MFunD = MatrixFunction<double>;

inline MFunD mfun_to_double(const MFunQ& f) {
  switch (f.kind()) {
    case MFunQ::Kind::Polynomial: {
      std::vector<MatD> cs;
      for (const auto& c : f.coeffs()) cs.push_back(to_double(c));
      return MFunD::polynomial(std::move(cs));
    }
    case MFunQ::Kind::ConjugatedExponential:
      return MFunD::conjugated(to_double(f.exponent()), to_double(f.base()));
    default:
      throw std::logic_error("mfun_to_double: unexpected kind");
  }
}

}  // namespace lieclass

#endif
