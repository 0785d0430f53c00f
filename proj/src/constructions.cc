#include "qzero/constructions.h"

#include <cmath>
#include <stdexcept>

namespace qzero {

namespace {

ExactComplex sqrt2() { return ExactComplex(QSqrt2::sqrt2()); }

std::size_t pairIndex(std::size_t a, std::size_t b, std::size_t dB) { return a * dB + b; }

}  // namespace

ExactMatrix ExactSpan::columns() const {
  const std::size_t n = dimProduct(dims);
  ExactMatrix m(n, vectors.size());
  for (std::size_t c = 0; c < vectors.size(); ++c) {
    for (const auto& [index, coeff] : vectors[c]) {
      if (index >= n) throw std::out_of_range("ExactSpan: basis index out of range");
      m(index, c) += coeff;
    }
  }
  return m;
}

std::vector<Ket> ExactSpan::kets() const {
  const Matrix m = columns().toMatrix();
  std::vector<Ket> out;
  out.reserve(vectors.size());
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.emplace_back(dims, m.col(c));
  return out;
}

Subspace ExactSpan::subspace() const {
  const auto k = kets();
  return buildSubspace(dims, k);
}

ExactMatrix ExactSpan::projector() const { return exactProjectorFromSpan(columns()); }

bool ExactSpan::isReal() const {
  for (const auto& v : vectors) {
    for (const auto& term : v) {
      if (!term.second.isReal()) return false;
    }
  }
  return true;
}

ExactSpan e21Span() {
  auto t = [](std::size_t a, std::size_t b, ExactComplex c) { return ExactTerm{pairIndex(a, b, 4), std::move(c)}; };
  ExactSpan s;
  s.dims = {4, 4};
  s.vectors = {
      {t(0, 0, 1), t(1, 1, -1)},
      {t(2, 2, 1), t(3, 3, -1)},
      {t(2, 0, 1), t(3, 1, -1)},
      {t(0, 2, 1), t(1, 3, 1)},
      {t(3, 0, 1), t(0, 3, -1)},
      {t(1, 0, 1), t(2, 1, -sqrt2()), t(3, 2, 1)},
      {t(0, 1, 1), t(1, 2, sqrt2()), t(2, 3, 1)},
      {t(1, 0, 1), t(3, 2, -1), t(0, 1, -1), t(2, 3, 1)},
  };
  return s;
}

ExactSpan variant34Span() {
  auto t = [](std::size_t a, std::size_t b, ExactComplex c) { return ExactTerm{pairIndex(a, b, 4), std::move(c)}; };
  ExactSpan s;
  s.dims = {3, 4};
  s.vectors = {
      {t(1, 0, 1), t(2, 1, -1)},
      {t(0, 2, 1), t(1, 3, 1)},
      {t(2, 0, 1), t(0, 3, -1)},
      {t(0, 0, 1), t(1, 1, -sqrt2()), t(2, 2, 1)},
      {t(0, 1, 1), t(1, 2, sqrt2()), t(2, 3, 1)},
      {t(0, 0, 1), t(2, 2, -1), t(0, 1, -1), t(2, 3, 1)},
  };
  return s;
}

ExactSpan em1Span(std::size_t m) {
  if (m < 2) throw std::invalid_argument("em1Span: m must be at least 2");
  if (m > 9) throw std::invalid_argument("em1Span: m too large for dense storage");
  const std::size_t half = std::size_t{1} << (m - 1);
  ExactSpan s;
  s.dims = Dims(m, 2);
  s.vectors.push_back({{0, 1}, {2 * half - 1, 1}});
  for (std::size_t x = 1; x < half; ++x) {
    const std::size_t xbar = (half - 1) ^ x;
    s.vectors.push_back({{x, 1}, {half + xbar, -1}});
  }
  return s;
}

Operator phaseFlip(std::size_t d) {
  std::vector<double> diag(d);
  for (std::size_t k = 0; k < d; ++k) diag[k] = (k % 2 == 0) ? 1.0 : -1.0;
  return Operator::diagonal(Dims{d}, diag);
}

ExactMatrix exactPhaseFlip(std::size_t d) {
  std::vector<ExactComplex> diag(d);
  for (std::size_t k = 0; k < d; ++k) diag[k] = (k % 2 == 0) ? 1 : -1;
  return ExactMatrix::diagonal(diag);
}

Ket alphaState() { return maximallyEntangled(2); }

ExactMatrix e12ExactRho0() {
  ExactMatrix m(4, 4);
  const ExactComplex half(QSqrt2(Rational(1, 2)));
  for (std::size_t r : {0, 3}) {
    for (std::size_t c : {0, 3}) m(r, c) = half;
  }
  return m;
}

ExactMatrix e12ExactRho1() {
  const ExactMatrix rest = ExactMatrix::identity(4) - e12ExactRho0();
  ExactMatrix m(4, 4);
  const ExactComplex third(QSqrt2(Rational(1, 3)));
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) m(r, c) = rest(r, c) * third;
  }
  return m;
}

MultiUserChannel makeE12() {
  const Operator rho0(Dims{2, 2}, e12ExactRho0().toMatrix());
  const Operator rho1(Dims{2, 2}, e12ExactRho1().toMatrix());
  return makeCQChannel("e12", Dims{2}, Dims{2, 2}, {{0, rho0}, {1, rho1}});
}

MultiUserChannel makeE21() { return makeBinaryProjectiveChannel("e21", e21Span().subspace()); }

MultiUserChannel makeEm1(std::size_t m) {
  return makeBinaryProjectiveChannel("em1:" + std::to_string(m), em1Span(m).subspace());
}

MultiUserChannel makeVariant34() { return makeBinaryProjectiveChannel("variant34", variant34Span().subspace()); }

Builtin makeBuiltin(const std::string& name) {
  if (name == "e12") return {name, makeE12(), std::nullopt, {{0, e12ExactRho0()}, {1, e12ExactRho1()}}};
  if (name == "e21") return {name, makeE21(), e21Span(), {}};
  if (name == "variant34") return {name, makeVariant34(), variant34Span(), {}};
  if (name.rfind("em1:", 0) == 0) {
    const std::string digits = name.substr(4);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 2) {
      throw std::invalid_argument("unknown builtin '" + name + "' (expected em1:<m>)");
    }
    const std::size_t m = std::stoul(digits);
    return {name, makeEm1(m), em1Span(m), {}};
  }
  throw std::invalid_argument("unknown builtin '" + name + "' (expected e12, e21, em1:<m> or variant34)");
}

}  // namespace qzero
