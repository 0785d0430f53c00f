#pragma once

// Exact arithmetic over Q(sqrt 2) and its complexification.
//
// Every amplitude used by the built-in constructions lies in Q(sqrt 2), so
// projectors onto their spans, transposes, local conjugations and trace
// products can be carried out without rounding. Eigendecomposition is not
// available here (eigenvalues are in general irrational).

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qzero/linalg.h"

namespace qzero {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// r + s*sqrt(2) with r, s rational.
class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(Rational r, Rational s = 0) : r_(std::move(r)), s_(std::move(s)) {}
  QSqrt2(long long r) : r_(r) {}  // NOLINT(google-explicit-constructor)

  static QSqrt2 sqrt2() { return QSqrt2(0, 1); }

  const Rational& rational() const { return r_; }
  const Rational& surd() const { return s_; }

  bool isZero() const { return r_ == 0 && s_ == 0; }
  double toDouble() const;
  // a - b sqrt2
  QSqrt2 galoisConjugate() const { return QSqrt2(r_, -s_); }
  // (r + s sqrt2)(r - s sqrt2) = r^2 - 2 s^2, zero only for zero.
  Rational norm() const { return r_ * r_ - 2 * s_ * s_; }
  int sign() const;

  QSqrt2 operator-() const { return QSqrt2(-r_, -s_); }
  QSqrt2& operator+=(const QSqrt2& o);
  QSqrt2& operator-=(const QSqrt2& o);
  QSqrt2& operator*=(const QSqrt2& o);
  QSqrt2& operator/=(const QSqrt2& o);

  friend QSqrt2 operator+(QSqrt2 a, const QSqrt2& b) { return a += b; }
  friend QSqrt2 operator-(QSqrt2 a, const QSqrt2& b) { return a -= b; }
  friend QSqrt2 operator*(QSqrt2 a, const QSqrt2& b) { return a *= b; }
  friend QSqrt2 operator/(QSqrt2 a, const QSqrt2& b) { return a /= b; }
  friend bool operator==(const QSqrt2& a, const QSqrt2& b) { return a.r_ == b.r_ && a.s_ == b.s_; }

  std::string str() const;

 private:
  Rational r_;
  Rational s_;
};

std::ostream& operator<<(std::ostream& os, const QSqrt2& x);

class ExactComplex {
 public:
  ExactComplex() = default;
  ExactComplex(QSqrt2 re, QSqrt2 im = QSqrt2()) : re_(std::move(re)), im_(std::move(im)) {}
  ExactComplex(long long re) : re_(re) {}  // NOLINT(google-explicit-constructor)

  const QSqrt2& re() const { return re_; }
  const QSqrt2& im() const { return im_; }
  bool isZero() const { return re_.isZero() && im_.isZero(); }
  bool isReal() const { return im_.isZero(); }
  Complex toComplex() const { return {re_.toDouble(), im_.toDouble()}; }
  ExactComplex conj() const { return ExactComplex(re_, -im_); }
  // |z|^2, an element of Q(sqrt2) that vanishes only at zero.
  QSqrt2 absSquared() const { return re_ * re_ + im_ * im_; }

  ExactComplex operator-() const { return ExactComplex(-re_, -im_); }
  ExactComplex& operator+=(const ExactComplex& o);
  ExactComplex& operator-=(const ExactComplex& o);
  ExactComplex& operator*=(const ExactComplex& o);
  ExactComplex& operator/=(const ExactComplex& o);

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::string str() const;

 private:
  QSqrt2 re_;
  QSqrt2 im_;
};

// Dense row-major matrix over Q(sqrt2)[i]. Column vectors are n x 1 matrices.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix diagonal(const std::vector<ExactComplex>& diag);
  // Columns taken from the given vectors.
  static ExactMatrix fromColumns(const std::vector<std::vector<ExactComplex>>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  ExactComplex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const ExactComplex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ExactMatrix transpose() const;
  ExactMatrix adjoint() const;
  bool isZero() const;
  bool isReal() const;

  ExactMatrix operator*(const ExactMatrix& o) const;
  ExactMatrix operator+(const ExactMatrix& o) const;
  ExactMatrix operator-(const ExactMatrix& o) const;
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix toMatrix() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<ExactComplex> data_;
};

ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b);
// Gauss-Jordan inverse; throws std::domain_error for singular input.
ExactMatrix inverse(const ExactMatrix& m);
// Indices of a maximal linearly independent subset of the columns.
std::vector<std::size_t> independentColumns(const ExactMatrix& m);
// Orthogonal projector onto the column span: V (V^dagger V)^{-1} V^dagger over
// an independent subset of the columns.
ExactMatrix exactProjectorFromSpan(const ExactMatrix& columns);
// I x ... x m x ... x I.
ExactMatrix exactEmbedLocal(const ExactMatrix& m, std::size_t slot, const Dims& dims);

}  // namespace qzero
