#include "qzero/linalg.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qzero {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void requireSameDims(const Dims& a, const Dims& b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": factor dimensions differ");
}

Complex gaussianComplex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

// For each flat index of the permuted space, the flat index in the original.
std::vector<std::size_t> permutationMap(const Dims& dims, std::span<const std::size_t> order) {
  if (order.size() != dims.size()) throw std::invalid_argument("permuteFactors: order has wrong length");
  std::vector<bool> seen(dims.size(), false);
  Dims newDims;
  for (std::size_t o : order) {
    if (o >= dims.size() || seen[o]) throw std::invalid_argument("permuteFactors: order is not a permutation");
    seen[o] = true;
    newDims.push_back(dims[o]);
  }
  const std::size_t n = dimProduct(dims);
  std::vector<std::size_t> oldStride(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) oldStride[k - 1] = oldStride[k] * dims[k];
  std::vector<std::size_t> map(n);
  std::vector<std::size_t> digits(dims.size(), 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t old = 0;
    for (std::size_t j = 0; j < order.size(); ++j) old += digits[j] * oldStride[order[j]];
    map[flat] = old;
    for (std::size_t j = digits.size(); j-- > 0;) {
      if (++digits[j] < newDims[j]) break;
      digits[j] = 0;
    }
  }
  return map;
}

}  // namespace

std::size_t dimProduct(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t flatIndex(const Dims& dims, std::span<const std::size_t> digits) {
  if (digits.size() != dims.size()) throw std::invalid_argument("flatIndex: digit count mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (digits[k] >= dims[k]) throw std::out_of_range("flatIndex: digit out of range");
    flat = flat * dims[k] + digits[k];
  }
  return flat;
}

std::vector<std::size_t> digitsOf(const Dims& dims, std::size_t index) {
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
  if (index != 0) throw std::out_of_range("digitsOf: index out of range");
  return digits;
}

Dims concat(const Dims& a, const Dims& b) {
  Dims out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// ---------------------------------------------------------------------------
// Ket

Ket::Ket(Dims dims, Vector amplitudes) : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != dimProduct(dims_)) {
    throw std::invalid_argument("Ket: amplitude count does not match factor dimensions");
  }
}

Ket Ket::basis(Dims dims, std::size_t index) {
  const std::size_t n = dimProduct(dims);
  if (index >= n) throw std::out_of_range("Ket::basis: index out of range");
  Vector v = Vector::Zero(idx(n));
  v(idx(index)) = 1.0;
  return Ket(std::move(dims), std::move(v));
}

Ket Ket::basisDigits(Dims dims, std::span<const std::size_t> digits) {
  const std::size_t flat = flatIndex(dims, digits);
  return basis(std::move(dims), flat);
}

Ket Ket::zero(Dims dims) {
  const std::size_t n = dimProduct(dims);
  return Ket(std::move(dims), Vector::Zero(idx(n)));
}

bool Ket::isNormalized(double tol) const { return std::abs(amps_.squaredNorm() - 1.0) <= tol; }

Ket Ket::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("Ket::normalized: zero vector");
  return Ket(dims_, amps_ / n);
}

Complex Ket::inner(const Ket& other) const {
  requireSameDims(dims_, other.dims_, "Ket::inner");
  return amps_.dot(other.amps_);
}

Ket Ket::operator+(const Ket& other) const {
  requireSameDims(dims_, other.dims_, "Ket::operator+");
  return Ket(dims_, amps_ + other.amps_);
}

Ket Ket::operator-(const Ket& other) const {
  requireSameDims(dims_, other.dims_, "Ket::operator-");
  return Ket(dims_, amps_ - other.amps_);
}

Ket Ket::operator*(Complex s) const { return Ket(dims_, amps_ * s); }

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(Dims rowDims, Dims colDims, Matrix entries)
    : rowDims_(std::move(rowDims)), colDims_(std::move(colDims)), m_(std::move(entries)) {
  if (static_cast<std::size_t>(m_.rows()) != dimProduct(rowDims_) ||
      static_cast<std::size_t>(m_.cols()) != dimProduct(colDims_)) {
    throw std::invalid_argument("Operator: matrix shape does not match factor dimensions");
  }
}

Operator::Operator(Dims dims, Matrix entries) : Operator(dims, dims, std::move(entries)) {}

Operator Operator::identity(Dims dims) {
  const auto n = idx(dimProduct(dims));
  return Operator(dims, dims, Matrix::Identity(n, n));
}

Operator Operator::zero(Dims rowDims, Dims colDims) {
  const auto r = idx(dimProduct(rowDims));
  const auto c = idx(dimProduct(colDims));
  return Operator(std::move(rowDims), std::move(colDims), Matrix::Zero(r, c));
}

Operator Operator::outer(const Ket& a, const Ket& b) {
  return Operator(a.dims(), b.dims(), a.amplitudes() * b.amplitudes().adjoint());
}

Operator Operator::diagonal(Dims dims, std::span<const double> diag) {
  const std::size_t n = dimProduct(dims);
  if (diag.size() != n) throw std::invalid_argument("Operator::diagonal: wrong number of entries");
  Matrix m = Matrix::Zero(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i) m(idx(i), idx(i)) = diag[i];
  return Operator(dims, dims, std::move(m));
}

Operator Operator::adjoint() const { return Operator(colDims_, rowDims_, m_.adjoint()); }

Complex Operator::trace() const {
  if (!isSquare()) throw std::invalid_argument("Operator::trace: non-square operator");
  return m_.trace();
}

bool Operator::isHermitian(double tol) const {
  return isSquare() && maxAbs(m_ - m_.adjoint()) <= tol;
}

bool Operator::isDensity(double traceTol, double eigTol) const {
  if (!isHermitian(1e-12)) return false;
  if (std::abs(trace() - 1.0) > traceTol) return false;
  const auto ev = hermitianEigenvalues(*this);
  return ev.back() >= -eigTol;
}

Ket Operator::apply(const Ket& k) const {
  requireSameDims(colDims_, k.dims(), "Operator::apply");
  return Ket(rowDims_, m_ * k.amplitudes());
}

Operator Operator::operator*(const Operator& other) const {
  if (m_.cols() != other.m_.rows()) throw std::invalid_argument("Operator::operator*: shape mismatch");
  return Operator(rowDims_, other.colDims_, m_ * other.m_);
}

Operator Operator::operator+(const Operator& other) const {
  requireSameDims(rowDims_, other.rowDims_, "Operator::operator+");
  requireSameDims(colDims_, other.colDims_, "Operator::operator+");
  return Operator(rowDims_, colDims_, m_ + other.m_);
}

Operator Operator::operator-(const Operator& other) const {
  requireSameDims(rowDims_, other.rowDims_, "Operator::operator-");
  requireSameDims(colDims_, other.colDims_, "Operator::operator-");
  return Operator(rowDims_, colDims_, m_ - other.m_);
}

Operator Operator::operator*(Complex s) const { return Operator(rowDims_, colDims_, m_ * s); }

// ---------------------------------------------------------------------------

double maxAbs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double maxAbsDiff(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("maxAbsDiff: shape mismatch");
  return maxAbs(a.matrix() - b.matrix());
}

double maxAbsDiff(const Ket& a, const Ket& b) {
  if (a.size() != b.size()) throw std::invalid_argument("maxAbsDiff: length mismatch");
  return a.size() == 0 ? 0.0 : (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

double traceOverlap(const Operator& a, const Operator& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) throw std::invalid_argument("traceOverlap: shape mismatch");
  return (a.matrix().cwiseProduct(b.matrix().transpose())).sum().real();
}

double traceDistance(const Operator& a, const Operator& b) {
  const auto ev = hermitianEigenvalues(a - b);
  double s = 0.0;
  for (double v : ev) s += std::abs(v);
  return 0.5 * s;
}

Ket tensorProduct(const Ket& a, const Ket& b) {
  const auto& x = a.amplitudes();
  const auto& y = b.amplitudes();
  Vector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return Ket(concat(a.dims(), b.dims()), std::move(out));
}

Operator tensorProduct(const Operator& a, const Operator& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return Operator(concat(a.rowDims(), b.rowDims()), concat(a.colDims(), b.colDims()), std::move(out));
}

Ket tensorProduct(std::span<const Ket> factors) {
  if (factors.empty()) throw std::invalid_argument("tensorProduct: no factors");
  Ket out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensorProduct(out, factors[i]);
  return out;
}

std::vector<Ket> gramSchmidt(std::span<const Ket> vectors) {
  std::vector<Ket> basis;
  if (vectors.empty()) return basis;
  const Dims& dims = vectors.front().dims();
  for (const Ket& v : vectors) {
    requireSameDims(dims, v.dims(), "gramSchmidt");
    Vector r = v.amplitudes();
    // Two passes of modified Gram-Schmidt keep the basis orthogonal to ~1e-15.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Ket& e : basis) r -= e.amplitudes().dot(r) * e.amplitudes();
    }
    const double n = r.norm();
    if (n < kZeroTol) continue;
    basis.emplace_back(dims, r / n);
  }
  return basis;
}

Operator projectorFromSpan(std::span<const Ket> vectors) {
  if (vectors.empty()) throw std::invalid_argument("projectorFromSpan: need at least one vector to fix dimensions");
  const Dims& dims = vectors.front().dims();
  const auto n = idx(dimProduct(dims));
  Matrix p = Matrix::Zero(n, n);
  for (const Ket& e : gramSchmidt(vectors)) p += e.amplitudes() * e.amplitudes().adjoint();
  return Operator(dims, std::move(p));
}

Operator transpose(const Operator& m) {
  if (!m.isSquare()) throw std::invalid_argument("transpose: non-square operator");
  return Operator(m.colDims(), m.rowDims(), m.matrix().transpose());
}

Operator embedLocalOperator(const Operator& m, std::size_t slot, const Dims& dims) {
  if (slot >= dims.size()) throw std::out_of_range("embedLocalOperator: slot out of range");
  if (!m.isSquare() || m.rows() != dims[slot]) {
    throw std::invalid_argument("embedLocalOperator: operator dimension does not match slot");
  }
  Dims left(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(slot));
  Dims right(dims.begin() + static_cast<std::ptrdiff_t>(slot) + 1, dims.end());
  Operator local(Dims{dims[slot]}, m.matrix());
  Operator out = tensorProduct(tensorProduct(Operator::identity(left), local), Operator::identity(right));
  return Operator(dims, out.matrix());
}

EigenSystem hermitianEigen(const Operator& m) {
  if (!m.isHermitian(1e-10)) throw std::invalid_argument("hermitianEigen: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitianEigen: eigensolver failed");
  EigenSystem out;
  const auto n = solver.eigenvalues().size();
  for (Eigen::Index i = n; i-- > 0;) {
    out.values.push_back(solver.eigenvalues()(i));
    out.vectors.emplace_back(m.rowDims(), solver.eigenvectors().col(i));
  }
  return out;
}

std::vector<double> hermitianEigenvalues(const Operator& m) {
  if (!m.isHermitian(1e-10)) throw std::invalid_argument("hermitianEigenvalues: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> out;
  const auto n = solver.eigenvalues().size();
  for (Eigen::Index i = n; i-- > 0;) out.push_back(solver.eigenvalues()(i));
  return out;
}

Operator partialTrace(const Operator& m, std::span<const std::size_t> keep) {
  if (!m.isSquare() || m.rowDims() != m.colDims()) throw std::invalid_argument("partialTrace: operator must be square");
  const Dims& dims = m.rowDims();
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("partialTrace: repeated factor index");
  }
  for (std::size_t k : kept) {
    if (k >= dims.size()) throw std::out_of_range("partialTrace: factor index out of range");
  }
  std::vector<std::size_t> order = kept;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!std::binary_search(kept.begin(), kept.end(), k)) order.push_back(k);
  }
  Dims keptDims;
  for (std::size_t k : kept) keptDims.push_back(dims[k]);
  const std::size_t dk = dimProduct(keptDims);
  const std::size_t dt = dimProduct(dims) / dk;
  const Operator permuted = permuteFactors(m, order);
  Matrix out = Matrix::Zero(idx(dk), idx(dk));
  for (std::size_t t = 0; t < dt; ++t) {
    for (std::size_t i = 0; i < dk; ++i) {
      for (std::size_t j = 0; j < dk; ++j) out(idx(i), idx(j)) += permuted(i * dt + t, j * dt + t);
    }
  }
  return Operator(keptDims, std::move(out));
}

Ket permuteFactors(const Ket& k, std::span<const std::size_t> order) {
  const auto map = permutationMap(k.dims(), order);
  Dims newDims;
  for (std::size_t o : order) newDims.push_back(k.dims()[o]);
  Vector out(k.amplitudes().size());
  for (std::size_t i = 0; i < map.size(); ++i) out(idx(i)) = k[map[i]];
  return Ket(std::move(newDims), std::move(out));
}

Operator permuteFactors(const Operator& m, std::span<const std::size_t> order) {
  if (m.rowDims() != m.colDims()) throw std::invalid_argument("permuteFactors: operator must be square");
  const auto map = permutationMap(m.rowDims(), order);
  Dims newDims;
  for (std::size_t o : order) newDims.push_back(m.rowDims()[o]);
  const auto n = idx(map.size());
  Matrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = m.matrix()(idx(map[r]), idx(map[c]));
  }
  return Operator(newDims, std::move(out));
}

Operator ketToMatrix(const Ket& psi, std::size_t dA, std::size_t dB) {
  if (psi.size() != dA * dB) throw std::invalid_argument("ketToMatrix: length does not equal dA*dB");
  Matrix k(idx(dB), idx(dA));
  for (std::size_t a = 0; a < dA; ++a) {
    for (std::size_t b = 0; b < dB; ++b) k(idx(b), idx(a)) = psi[a * dB + b];
  }
  return Operator(Dims{dB}, Dims{dA}, std::move(k));
}

Ket maximallyEntangled(std::size_t d) {
  Vector v = Vector::Zero(idx(d * d));
  for (std::size_t k = 0; k < d; ++k) v(idx(k * d + k)) = 1.0 / std::sqrt(static_cast<double>(d));
  return Ket(Dims{d, d}, std::move(v));
}

Ket randomKet(const Dims& dims, Rng& rng) {
  const auto n = idx(dimProduct(dims));
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussianComplex(rng);
  return Ket(dims, v / v.norm());
}

Operator randomDensity(const Dims& dims, Rng& rng) {
  const auto n = idx(dimProduct(dims));
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gaussianComplex(rng);
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return Operator(dims, std::move(rho));
}

Operator randomHermitian(const Dims& dims, Rng& rng) {
  const auto n = idx(dimProduct(dims));
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gaussianComplex(rng);
  }
  return Operator(dims, 0.5 * (g + g.adjoint()));
}

Rng streamRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace qzero
