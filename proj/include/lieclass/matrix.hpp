#ifndef LIECLASS_MATRIX_HPP
#define LIECLASS_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "lieclass/scalar.hpp"

namespace lieclass {

/// Dense row-major matrix over an exact rational or floating scalar.
/// Values are immutable in spirit: operations return fresh matrices.
template <class S>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, scalar_traits<S>::zero()) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
  }
  Matrix(std::initializer_list<std::initializer_list<S>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("Matrix: ragged rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scalar_traits<S>::one();
    return m;
  }
  static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  S& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const S& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<S>& data() const { return data_; }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o, "+");
    Matrix r = *this;
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_same_shape(o, "-");
    Matrix r = *this;
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
    return r;
  }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& v : r.data_) v = -v;
    return r;
  }
  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Matrix: dimension mismatch in product");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const S& a = (*this)(i, k);
        if (scalar_traits<S>::is_zero(a)) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }
  Matrix operator*(const S& c) const {
    Matrix r = *this;
    for (auto& v : r.data_) v *= c;
    return r;
  }
  friend Matrix operator*(const S& c, const Matrix& m) { return m * c; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  S trace() const {
    require_square("trace");
    S t = scalar_traits<S>::zero();
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!scalar_traits<S>::is_zero(v)) return false;
    return true;
  }

  /// Largest entry magnitude, evaluated in double precision.
  double max_abs() const {
    double m = 0;
    for (const auto& v : data_) m = std::max(m, std::fabs(scalar_traits<S>::to_double(v)));
    return m;
  }
  double norm_inf() const {
    double m = 0;
    for (int i = 0; i < rows_; ++i) {
      double s = 0;
      for (int j = 0; j < cols_; ++j) s += std::fabs(scalar_traits<S>::to_double((*this)(i, j)));
      m = std::max(m, s);
    }
    return m;
  }
  double norm_one() const { return transpose().norm_inf(); }

  void require_square(const char* where) const {
    if (!square()) throw std::invalid_argument(std::string(where) + ": matrix not square");
  }

 private:
  void check_same_shape(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string("Matrix: dimension mismatch in ") + op);
  }

  int rows_, cols_;
  std::vector<S> data_;
};

using MatQ = Matrix<Rat>;
using MatD = Matrix<double>;

template <class S>
MatD to_double(const Matrix<S>& m) {
  MatD r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = scalar_traits<S>::to_double(m(i, j));
  return r;
}

inline MatQ to_rational(const MatD&) = delete;  // never round floats into the exact path

template <class S>
double max_entry_distance(const Matrix<S>& a, const Matrix<S>& b) {
  return (a - b).max_abs();
}

/// Column-stacking vectorization and its inverse.
template <class S>
std::vector<S> vec_colstack(const Matrix<S>& m) {
  std::vector<S> v;
  v.reserve(static_cast<size_t>(m.rows()) * m.cols());
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) v.push_back(m(i, j));
  return v;
}

template <class S>
Matrix<S> unvec_colstack(const std::vector<S>& v, int rows, int cols) {
  if (static_cast<int>(v.size()) != rows * cols)
    throw std::invalid_argument("unvec_colstack: size mismatch");
  Matrix<S> m(rows, cols);
  size_t k = 0;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = v[k++];
  return m;
}

template <class S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (scalar_traits<S>::is_zero(a(i, j))) continue;
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q)
          r(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    }
  return r;
}

}  // namespace lieclass

#endif
