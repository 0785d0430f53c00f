#include "qzero/exact.h"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qzero {

namespace {

std::string rationalStr(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

double QSqrt2::toDouble() const {
  return r_.convert_to<double>() + s_.convert_to<double>() * std::sqrt(2.0);
}

int QSqrt2::sign() const {
  const int sr = r_.sign();
  const int ss = s_.sign();
  if (ss == 0) return sr;
  if (sr == 0 || sr == ss) return ss;
  // Opposite signs: compare r^2 against 2 s^2.
  const Rational diff = r_ * r_ - 2 * s_ * s_;
  return diff.sign() > 0 ? sr : ss;
}

QSqrt2& QSqrt2::operator+=(const QSqrt2& o) {
  r_ += o.r_;
  s_ += o.s_;
  return *this;
}

QSqrt2& QSqrt2::operator-=(const QSqrt2& o) {
  r_ -= o.r_;
  s_ -= o.s_;
  return *this;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
  Rational r = r_ * o.r_ + 2 * s_ * o.s_;
  Rational s = r_ * o.s_ + s_ * o.r_;
  r_ = std::move(r);
  s_ = std::move(s);
  return *this;
}

QSqrt2& QSqrt2::operator/=(const QSqrt2& o) {
  const Rational n = o.norm();
  if (n == 0) throw std::domain_error("QSqrt2: division by zero");
  *this *= o.galoisConjugate();
  r_ /= n;
  s_ /= n;
  return *this;
}

std::string QSqrt2::str() const {
  if (s_ == 0) return rationalStr(r_);
  std::string surd = (s_ == 1) ? "sqrt2" : (s_ == -1 ? "-sqrt2" : rationalStr(s_) + "*sqrt2");
  if (r_ == 0) return surd;
  if (s_.sign() < 0) return rationalStr(r_) + " - " + surd.substr(1);
  return rationalStr(r_) + " + " + surd;
}

std::ostream& operator<<(std::ostream& os, const QSqrt2& x) { return os << x.str(); }

ExactComplex& ExactComplex::operator+=(const ExactComplex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ExactComplex& ExactComplex::operator-=(const ExactComplex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ExactComplex& ExactComplex::operator*=(const ExactComplex& o) {
  QSqrt2 re = re_ * o.re_ - im_ * o.im_;
  QSqrt2 im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ExactComplex& ExactComplex::operator/=(const ExactComplex& o) {
  const QSqrt2 d = o.absSquared();
  if (d.isZero()) throw std::domain_error("ExactComplex: division by zero");
  *this *= o.conj();
  re_ /= d;
  im_ /= d;
  return *this;
}

std::string ExactComplex::str() const {
  if (im_.isZero()) return re_.str();
  if (re_.isZero()) return "(" + im_.str() + ")i";
  return "(" + re_.str() + ") + (" + im_.str() + ")i";
}

// ---------------------------------------------------------------------------

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ExactMatrix ExactMatrix::diagonal(const std::vector<ExactComplex>& diag) {
  ExactMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ExactMatrix ExactMatrix::fromColumns(const std::vector<std::vector<ExactComplex>>& columns) {
  if (columns.empty()) return {};
  const std::size_t n = columns.front().size();
  ExactMatrix m(n, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != n) throw std::invalid_argument("ExactMatrix::fromColumns: ragged columns");
    for (std::size_t r = 0; r < n; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

ExactMatrix ExactMatrix::adjoint() const {
  ExactMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c).conj();
  }
  return t;
}

bool ExactMatrix::isZero() const {
  for (const auto& x : data_) {
    if (!x.isZero()) return false;
  }
  return true;
}

bool ExactMatrix::isReal() const {
  for (const auto& x : data_) {
    if (!x.isReal()) return false;
  }
  return true;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("ExactMatrix::operator*: shape mismatch");
  ExactMatrix out(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const ExactComplex& a = (*this)(r, k);
      if (a.isZero()) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) {
        const ExactComplex& b = o(k, c);
        if (!b.isZero()) out(r, c) += a * b;
      }
    }
  }
  return out;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ExactMatrix::operator+: shape mismatch");
  ExactMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
  return out;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ExactMatrix::operator-: shape mismatch");
  ExactMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
  return out;
}

Matrix ExactMatrix::toMatrix() const {
  Matrix m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (*this)(r, c).toComplex();
    }
  }
  return m;
}

ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const ExactComplex& x = a(i, j);
      if (x.isZero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          if (!b(k, l).isZero()) out(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
        }
      }
    }
  }
  return out;
}

ExactMatrix inverse(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: non-square matrix");
  const std::size_t n = m.rows();
  ExactMatrix a = m;
  ExactMatrix inv = ExactMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col).isZero()) ++pivot;
    if (pivot == n) throw std::domain_error("inverse: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    }
    const ExactComplex p = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) /= p;
      inv(col, c) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col).isZero()) continue;
      const ExactComplex f = a(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        if (!a(col, c).isZero()) a(r, c) -= f * a(col, c);
        if (!inv(col, c).isZero()) inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

std::vector<std::size_t> independentColumns(const ExactMatrix& m) {
  // Row echelon reduction; pivot columns form an independent subset.
  ExactMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col).isZero()) ++p;
    if (p == a.rows()) continue;
    if (p != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(p, c), a(row, c));
    }
    const ExactComplex pv = a(row, col);
    for (std::size_t r = row + 1; r < a.rows(); ++r) {
      if (a(r, col).isZero()) continue;
      const ExactComplex f = a(r, col) / pv;
      for (std::size_t c = col; c < a.cols(); ++c) {
        if (!a(row, c).isZero()) a(r, c) -= f * a(row, c);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

ExactMatrix exactProjectorFromSpan(const ExactMatrix& columns) {
  const auto keep = independentColumns(columns);
  const std::size_t n = columns.rows();
  if (keep.empty()) return ExactMatrix(n, n);
  ExactMatrix v(n, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    for (std::size_t r = 0; r < n; ++r) v(r, c) = columns(r, keep[c]);
  }
  const ExactMatrix vd = v.adjoint();
  return v * inverse(vd * v) * vd;
}

ExactMatrix exactEmbedLocal(const ExactMatrix& m, std::size_t slot, const Dims& dims) {
  if (slot >= dims.size()) throw std::out_of_range("exactEmbedLocal: slot out of range");
  if (m.rows() != dims[slot] || m.cols() != dims[slot]) {
    throw std::invalid_argument("exactEmbedLocal: operator dimension does not match slot");
  }
  std::size_t left = 1;
  std::size_t right = 1;
  for (std::size_t k = 0; k < slot; ++k) left *= dims[k];
  for (std::size_t k = slot + 1; k < dims.size(); ++k) right *= dims[k];
  return kron(kron(ExactMatrix::identity(left), m), ExactMatrix::identity(right));
}

}  // namespace qzero
