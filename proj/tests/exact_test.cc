#include "qzero/exact.h"

#include <gtest/gtest.h>

#include <cmath>

#include "qzero/constructions.h"

namespace qzero {
namespace {

TEST(QSqrt2, LowestTerms) {
  const QSqrt2 x(Rational(6, 8), Rational(-10, 4));
  EXPECT_EQ(numerator(x.rational()), 3);
  EXPECT_EQ(denominator(x.rational()), 4);
  EXPECT_EQ(numerator(x.surd()), -5);
  EXPECT_EQ(denominator(x.surd()), 2);
}

TEST(QSqrt2, SqrtTwoSquared) {
  EXPECT_EQ(QSqrt2::sqrt2() * QSqrt2::sqrt2(), QSqrt2(2));
}

TEST(QSqrt2, DivisionIsExact) {
  const QSqrt2 a(Rational(1, 3), Rational(2, 5));
  const QSqrt2 b(Rational(-7, 2), Rational(1, 1));
  EXPECT_EQ((a / b) * b, a);
  EXPECT_EQ(QSqrt2(1) / (QSqrt2(1) + QSqrt2::sqrt2()), QSqrt2(-1) + QSqrt2::sqrt2());
}

TEST(QSqrt2, DivisionByZeroThrows) {
  EXPECT_THROW(QSqrt2(1) / QSqrt2(0), std::domain_error);
}

TEST(QSqrt2, SignNearCancellation) {
  // 99 - 70 sqrt2 > 0, 70 - 99/sqrt2 ... 99^2 = 9801, 2 * 70^2 = 9800.
  EXPECT_EQ(QSqrt2(99, -70).sign(), 1);
  EXPECT_EQ(QSqrt2(-99, 70).sign(), -1);
  EXPECT_EQ(QSqrt2(0).sign(), 0);
  EXPECT_NEAR(QSqrt2(99, -70).toDouble(), 99.0 - 70.0 * std::sqrt(2.0), 1e-12);
}

TEST(QSqrt2, Strings) {
  EXPECT_EQ(QSqrt2(0).str(), "0");
  EXPECT_EQ(QSqrt2(0, -1).str(), "-sqrt2");
  EXPECT_EQ(QSqrt2(Rational(1, 2), 1).str(), "1/2 + sqrt2");
}

TEST(ExactComplex, FieldOperations) {
  const ExactComplex i(QSqrt2(0), QSqrt2(1));
  EXPECT_EQ(i * i, ExactComplex(-1));
  const ExactComplex z(QSqrt2(1, 1), QSqrt2(Rational(1, 3)));
  EXPECT_EQ((z / z), ExactComplex(1));
  EXPECT_EQ(z * z.conj(), ExactComplex(z.absSquared()));
}

TEST(ExactMatrix, KronOfIdentities) {
  EXPECT_EQ(kron(ExactMatrix::identity(2), ExactMatrix::identity(3)), ExactMatrix::identity(6));
}

TEST(ExactMatrix, InverseRoundTrip) {
  ExactMatrix m(2, 2);
  m(0, 0) = ExactComplex(QSqrt2::sqrt2());
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = ExactComplex(QSqrt2(0), QSqrt2(1));
  EXPECT_EQ(m * inverse(m), ExactMatrix::identity(2));
}

TEST(ExactMatrix, SingularInverseThrows) {
  ExactMatrix m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(1, 0) = 2;
  m(1, 1) = 4;
  EXPECT_THROW(inverse(m), std::domain_error);
}

TEST(ExactMatrix, IndependentColumnsSkipsDependent) {
  ExactMatrix m(2, 3);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(1, 2) = ExactComplex(QSqrt2::sqrt2());
  EXPECT_EQ(independentColumns(m), (std::vector<std::size_t>{0, 2}));
}

TEST(ExactProjector, IdempotentAndHermitian) {
  const ExactMatrix p = exactProjectorFromSpan(e21Span().columns());
  EXPECT_EQ(p * p, p);
  EXPECT_EQ(p.adjoint(), p);
  QSqrt2 tr;
  for (std::size_t i = 0; i < p.rows(); ++i) tr += p(i, i).re();
  EXPECT_EQ(tr, QSqrt2(8));
}

TEST(ExactProjector, MatchesFloat) {
  const ExactSpan s = variant34Span();
  const Matrix exact = s.projector().toMatrix();
  const Matrix numeric = s.subspace().projector().matrix();
  EXPECT_LT(maxAbs(exact - numeric), 1e-13);
}

TEST(ExactEmbed, MatchesFloatEmbedding) {
  const Dims dims{3, 4};
  const ExactMatrix u = exactEmbedLocal(exactPhaseFlip(4), 1, dims);
  EXPECT_EQ(maxAbs(u.toMatrix() - embedLocalOperator(phaseFlip(4), 1, dims).matrix()), 0.0);
}

}  // namespace
}  // namespace qzero
