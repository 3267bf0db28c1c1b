#pragma once

// Exact integer / rational linear algebra for small dense matrices.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "hkl/error.hpp"

namespace hkl {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows);

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix from_columns(const std::vector<std::vector<T>>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator-() const {
    Matrix r(*this);
    for (auto& x : r.data_) x = -x;
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator<(const Matrix& a, const Matrix& b) { return a.data_ < b.data_; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.rows_, ErrorCode::input, "matrix product: dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& x) {
    require(a.cols_ == x.size(), ErrorCode::input, "matrix-vector product: dimension mismatch");
    std::vector<T> y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0), data_(rows_ * cols_) {
  std::size_t i = 0;
  for (const auto& r : rows) {
    require(r.size() == cols_, ErrorCode::input, "ragged matrix literal");
    std::size_t j = 0;
    for (long v : r) (*this)(i, j++) = v;
    ++i;
  }
}

template <class T>
Matrix<T> Matrix<T>::from_columns(const std::vector<std::vector<T>>& cols) {
  if (cols.empty()) return {};
  Matrix m(cols.front().size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    require(cols[j].size() == m.rows_, ErrorCode::input, "from_columns: ragged columns");
    for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

using IntMat = Matrix<Int>;
using RatMat = Matrix<Rat>;

IntVec make_vec(std::initializer_list<long> xs);

// Bilinear form x^T G y.
Int bilinear(const IntMat& gram, const IntVec& x, const IntVec& y);
Rat bilinear(const IntMat& gram, const RatVec& x, const RatVec& y);

Int dot(const IntVec& a, const IntVec& b);
IntVec add(const IntVec& a, const IntVec& b);
IntVec sub(const IntVec& a, const IntVec& b);
IntVec scale(const Int& s, const IntVec& a);
IntVec neg(const IntVec& a);
bool is_zero(const IntVec& v);

Int content(const IntVec& v);  // gcd of entries, >= 0
IntVec primitive(const IntVec& v);
// Scales a rational vector to the primitive integer vector on the same ray.
IntVec primitive(const RatVec& v);

RatVec to_rat(const IntVec& v);
RatMat to_rat(const IntMat& m);
bool is_integral(const RatMat& m);
bool is_integral(const RatVec& v);
IntMat to_int(const RatMat& m);
IntVec to_int(const RatVec& v);

Int determinant(const IntMat& m);  // fraction-free Bareiss
std::size_t rank(const IntMat& m);
RatMat inverse(const RatMat& m);  // throws on singular input
RatMat inverse(const IntMat& m);

// Smith normal form U * A * V = D with U, V unimodular, D diagonal with
// non-negative entries d_1 | d_2 | ... .
struct SmithForm {
  IntMat u, d, v;
};
SmithForm smith_normal_form(const IntMat& a);

// Row-style Hermite normal form of the lattice spanned by the given integer
// vectors (all of length n); returns the n x n upper-triangular basis when the
// span has full rank, otherwise throws.
IntMat hermite_basis(const std::vector<IntVec>& gens, std::size_t n);

Int isqrt(const Int& n);  // floor(sqrt(n)) for n >= 0
bool is_square(const Int& n);
Int floor_div(const Int& a, const Int& b);
Int floor(const Rat& q);
Int ceil(const Rat& q);
// Reduces q into [0, m).
Rat mod(const Rat& q, const Rat& m);

bool lex_less(const IntVec& a, const IntVec& b);

std::string to_string(const IntVec& v);
std::string to_string(const RatVec& v);
std::string to_string(const IntMat& m);
std::string to_string(const Rat& q);

}  // namespace hkl
