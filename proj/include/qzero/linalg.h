#pragma once

// Dense complex linear algebra over small multipartite Hilbert spaces.
//
// Factor ordering is big-endian throughout: for dims (d0, d1, ..., dn-1) the
// flat index of digits (i0, ..., in-1) is i0*d1*...*dn-1 + ... + in-1, so the
// leftmost factor carries the largest stride.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qzero {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;
using Rng = std::mt19937_64;

// Rank and orthogonality decisions.
inline constexpr double kZeroTol = 1e-10;
// Normalization checks.
inline constexpr double kNormTol = 1e-12;

std::size_t dimProduct(const Dims& dims);
std::size_t flatIndex(const Dims& dims, std::span<const std::size_t> digits);
std::vector<std::size_t> digitsOf(const Dims& dims, std::size_t index);
Dims concat(const Dims& a, const Dims& b);

class Ket {
 public:
  Ket() = default;
  Ket(Dims dims, Vector amplitudes);

  static Ket basis(Dims dims, std::size_t index);
  static Ket basisDigits(Dims dims, std::span<const std::size_t> digits);
  static Ket zero(Dims dims);

  const Dims& dims() const { return dims_; }
  const Vector& amplitudes() const { return amps_; }
  std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  double norm() const { return amps_.norm(); }
  bool isNormalized(double tol = kNormTol) const;
  Ket normalized() const;

  // <this|other>
  Complex inner(const Ket& other) const;

  Ket operator+(const Ket& other) const;
  Ket operator-(const Ket& other) const;
  Ket operator*(Complex s) const;
  friend Ket operator*(Complex s, const Ket& k) { return k * s; }

 private:
  Dims dims_;
  Vector amps_;
};

// Linear operator from the space with colDims to the space with rowDims.
class Operator {
 public:
  Operator() = default;
  Operator(Dims rowDims, Dims colDims, Matrix entries);
  Operator(Dims dims, Matrix entries);

  static Operator identity(Dims dims);
  static Operator zero(Dims rowDims, Dims colDims);
  // |a><b|
  static Operator outer(const Ket& a, const Ket& b);
  // |a><a|
  static Operator projector(const Ket& a) { return outer(a, a); }
  static Operator diagonal(Dims dims, std::span<const double> diag);

  const Dims& rowDims() const { return rowDims_; }
  const Dims& colDims() const { return colDims_; }
  const Dims& dims() const { return rowDims_; }
  const Matrix& matrix() const { return m_; }
  std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
  bool isSquare() const { return m_.rows() == m_.cols(); }
  Complex operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  Operator adjoint() const;
  Complex trace() const;
  bool isHermitian(double tol = 1e-12) const;
  // Hermitian, unit trace (1e-10) and no eigenvalue below -1e-10.
  bool isDensity(double traceTol = 1e-10, double eigTol = 1e-10) const;

  Ket apply(const Ket& k) const;

  Operator operator*(const Operator& other) const;
  Operator operator+(const Operator& other) const;
  Operator operator-(const Operator& other) const;
  Operator operator*(Complex s) const;
  friend Operator operator*(Complex s, const Operator& op) { return op * s; }

 private:
  Dims rowDims_;
  Dims colDims_;
  Matrix m_;
};

double maxAbs(const Matrix& m);
double maxAbsDiff(const Operator& a, const Operator& b);
double maxAbsDiff(const Ket& a, const Ket& b);
// Re tr(A B); the Hilbert-Schmidt overlap for Hermitian operands.
double traceOverlap(const Operator& a, const Operator& b);
double traceDistance(const Operator& a, const Operator& b);

Ket tensorProduct(const Ket& a, const Ket& b);
Operator tensorProduct(const Operator& a, const Operator& b);
Ket tensorProduct(std::span<const Ket> factors);

// Orthonormal basis of the span; vectors whose residual norm after projection
// falls below kZeroTol are dropped.
std::vector<Ket> gramSchmidt(std::span<const Ket> vectors);
Operator projectorFromSpan(std::span<const Ket> vectors);

// Entrywise transpose in the computational basis (no conjugation).
Operator transpose(const Operator& m);

// I x ... x M x ... x I with M acting on factor `slot`.
Operator embedLocalOperator(const Operator& m, std::size_t slot, const Dims& dims);

struct EigenSystem {
  std::vector<double> values;  // descending
  std::vector<Ket> vectors;
};
EigenSystem hermitianEigen(const Operator& m);
std::vector<double> hermitianEigenvalues(const Operator& m);

Operator partialTrace(const Operator& m, std::span<const std::size_t> keep);

// Reorders tensor factors: factor j of the result is factor order[j] of the input.
Ket permuteFactors(const Ket& k, std::span<const std::size_t> order);
Operator permuteFactors(const Operator& m, std::span<const std::size_t> order);

// K(b, a) = <a b|psi>, an operator from the first factor to the second.
Operator ketToMatrix(const Ket& psi, std::size_t dA, std::size_t dB);

// Normalized (1/sqrt d) sum_k |k>|k>.
Ket maximallyEntangled(std::size_t d);

// Haar-distributed pure state.
Ket randomKet(const Dims& dims, Rng& rng);
// Density operator drawn from the Hilbert-Schmidt ensemble.
Operator randomDensity(const Dims& dims, Rng& rng);
Operator randomHermitian(const Dims& dims, Rng& rng);

// Independent RNG stream for (seed, stream) pairs.
Rng streamRng(std::uint64_t seed, std::uint64_t stream);

}  // namespace qzero
