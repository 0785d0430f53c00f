#include "qzero/linalg.h"

#include <gtest/gtest.h>

#include <cmath>

namespace qzero {
namespace {

Operator diag(Dims dims, std::vector<double> d) { return Operator::diagonal(std::move(dims), d); }

Ket ket(Dims dims, std::vector<std::pair<std::size_t, double>> terms) {
  Ket k = Ket::zero(dims);
  for (auto [i, c] : terms) k = k + Ket::basis(dims, i) * Complex(c, 0.0);
  return k;
}

TEST(Tensor, BasisKetsCombine) {
  const Ket k = tensorProduct(Ket::basis(Dims{2}, 0), Ket::basis(Dims{2}, 0));
  EXPECT_EQ(k.dims(), (Dims{2, 2}));
  EXPECT_EQ(k.size(), 4u);
  EXPECT_EQ(k[0], Complex(1.0));
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(k[i], Complex(0.0));
}

TEST(Tensor, IdentitiesCombine) {
  const Operator i4 = tensorProduct(Operator::identity(Dims{2}), Operator::identity(Dims{2}));
  EXPECT_EQ(maxAbsDiff(i4, Operator::identity(Dims{2, 2})), 0.0);
}

TEST(Tensor, AlphaIsNormalized) {
  const Ket a = (tensorProduct(Ket::basis(Dims{2}, 0), Ket::basis(Dims{2}, 0)) +
                 tensorProduct(Ket::basis(Dims{2}, 1), Ket::basis(Dims{2}, 1))) *
                Complex(1.0 / std::sqrt(2.0));
  EXPECT_NEAR(std::abs(a.inner(a) - 1.0), 0.0, 1e-12);
  EXPECT_TRUE(a.isNormalized());
}

TEST(Tensor, OperatorKronMatchesEigen) {
  Rng rng = streamRng(3, 0);
  const Operator a = randomHermitian(Dims{2}, rng);
  const Operator b = randomHermitian(Dims{3}, rng);
  const Operator ab = tensorProduct(a, b);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_NEAR(std::abs(ab(i, j) - a(i / 3, j / 3) * b(i % 3, j % 3)), 0.0, 1e-15);
    }
  }
}

TEST(GramSchmidt, DisjointSupports) {
  const Dims d{4, 4};
  const std::vector<Ket> in{ket(d, {{0, 1}, {5, -1}}), ket(d, {{10, 1}, {15, -1}})};
  const auto out = gramSchmidt(in);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_LT(std::abs(out[0].inner(out[1])), 1e-12);
  for (const auto& k : out) EXPECT_TRUE(k.isNormalized());
}

TEST(GramSchmidt, DropsDependentVector) {
  const std::vector<Ket> in{Ket::basis(Dims{2}, 0), Ket::basis(Dims{2}, 0)};
  EXPECT_EQ(gramSchmidt(in).size(), 1u);
}

TEST(Projector, SingleBasisVector) {
  const std::vector<Ket> in{Ket::basis(Dims{2}, 0)};
  EXPECT_EQ(maxAbsDiff(projectorFromSpan(in), diag(Dims{2}, {1, 0})), 0.0);
}

TEST(Transpose, OffDiagonalMoves) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  const Operator t = transpose(Operator(Dims{2}, m));
  EXPECT_EQ(t(1, 0), Complex(1.0));
  EXPECT_EQ(t(0, 1), Complex(0.0));
}

TEST(Transpose, NoConjugation) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0.0, 1.0);
  EXPECT_EQ(transpose(Operator(Dims{2}, m))(1, 0), Complex(0.0, 1.0));
}

TEST(Embed, LocalSlots) {
  const Operator u = diag(Dims{4}, {1, -1, 1, -1});
  const Operator i4 = Operator::identity(Dims{4});
  EXPECT_EQ(maxAbsDiff(embedLocalOperator(u, 0, Dims{4, 4}), tensorProduct(u, i4)), 0.0);
  EXPECT_EQ(maxAbsDiff(embedLocalOperator(u, 1, Dims{4, 4}), tensorProduct(i4, u)), 0.0);
}

TEST(Eigen, PureStateSpectrum) {
  const auto v = hermitianEigenvalues(diag(Dims{2}, {1, 0}));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0], 1.0, 1e-14);
  EXPECT_NEAR(v[1], 0.0, 1e-14);
}

TEST(Eigen, DescendingWithEigenvectors) {
  Rng rng = streamRng(9, 1);
  const Operator h = randomHermitian(Dims{5}, rng);
  const auto sys = hermitianEigen(h);
  for (std::size_t i = 1; i < sys.values.size(); ++i) EXPECT_GE(sys.values[i - 1], sys.values[i]);
  for (std::size_t i = 0; i < sys.values.size(); ++i) {
    const Ket hv = h.apply(sys.vectors[i]);
    EXPECT_LT(maxAbsDiff(hv, sys.vectors[i] * Complex(sys.values[i])), 1e-12);
  }
}

TEST(PartialTrace, MaximallyEntangledMarginal) {
  const Operator rho = Operator::projector(maximallyEntangled(2));
  const std::vector<std::size_t> keep{0};
  EXPECT_LT(maxAbsDiff(partialTrace(rho, keep), diag(Dims{2}, {0.5, 0.5})), 1e-15);
}

TEST(PartialTrace, ProductState) {
  Rng rng = streamRng(4, 0);
  const Operator rho = randomDensity(Dims{3}, rng);
  Operator sigma = randomHermitian(Dims{2}, rng);
  const std::vector<std::size_t> left{0};
  const Operator got = partialTrace(tensorProduct(rho, sigma), left);
  EXPECT_LT(maxAbsDiff(got, rho * sigma.trace()), 1e-14);
}

TEST(PartialTrace, TwoUseReferenceMarginals) {
  // Phi on (A, A') and (B, B'), factors ordered A, B, A', B'.
  const Ket phiPair = tensorProduct(maximallyEntangled(4), maximallyEntangled(4));
  const std::vector<std::size_t> order{0, 2, 1, 3};
  const Ket psi0 = permuteFactors(phiPair, order);
  const Operator rho = Operator::projector(psi0);
  const std::vector<std::size_t> firstUse{0, 1};
  EXPECT_LT(maxAbsDiff(partialTrace(rho, firstUse), Operator::identity(Dims{4, 4}) * Complex(1.0 / 16.0)), 1e-15);
  // Product across (AA'):(BB'), so Alice's two factors stay pure.
  const std::vector<std::size_t> alice{0, 2};
  EXPECT_LT(maxAbsDiff(partialTrace(rho, alice), Operator::projector(maximallyEntangled(4))), 1e-15);
}

TEST(PartialTrace, KeepOrderIsSorted) {
  Rng rng = streamRng(5, 0);
  const Operator a = randomDensity(Dims{2}, rng);
  const Operator b = randomDensity(Dims{3}, rng);
  const Operator c = randomDensity(Dims{2}, rng);
  const Operator abc = tensorProduct(tensorProduct(a, b), c);
  const std::vector<std::size_t> keep{2, 0};
  EXPECT_LT(maxAbsDiff(partialTrace(abc, keep), tensorProduct(a, c)), 1e-14);
}

TEST(KetToMatrix, ProductIsRankOne) {
  const Operator k = ketToMatrix(Ket::basis(Dims{2, 2}, 0), 2, 2);
  EXPECT_EQ(maxAbsDiff(k, diag(Dims{2}, {1, 0})), 0.0);
}

TEST(KetToMatrix, UnnormalizedAlphaIsIdentity) {
  const Ket a = ket(Dims{2, 2}, {{0, 1}, {3, 1}});
  EXPECT_EQ(maxAbsDiff(ketToMatrix(a, 2, 2), Operator::identity(Dims{2})), 0.0);
}

TEST(KetToMatrix, PsiSixEntries) {
  // |10> - sqrt2 |21> + |32> in 4 x 4.
  const Ket psi6 = ket(Dims{4, 4}, {{4, 1}, {9, -std::sqrt(2.0)}, {14, 1}});
  const Operator k = ketToMatrix(psi6, 4, 4);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 1) = 1.0;
  expected(1, 2) = -std::sqrt(2.0);
  expected(2, 3) = 1.0;
  EXPECT_LT(maxAbs(k.matrix() - expected), 1e-15);
}

TEST(Operator, DensityFlags) {
  EXPECT_TRUE(diag(Dims{2}, {0.5, 0.5}).isDensity());
  EXPECT_FALSE(diag(Dims{2}, {0.6, 0.5}).isDensity());
  EXPECT_FALSE(diag(Dims{2}, {1.1, -0.1}).isDensity());
}

TEST(Operator, MismatchedShapesThrow) {
  EXPECT_THROW(Operator::identity(Dims{2}) + Operator::identity(Dims{3}), std::invalid_argument);
  EXPECT_THROW(Ket(Dims{2, 2}, Vector::Zero(3)), std::invalid_argument);
}

TEST(Random, StreamsAreReproducible) {
  Rng a = streamRng(7, 3);
  Rng b = streamRng(7, 3);
  Rng c = streamRng(7, 4);
  const Ket ka = randomKet(Dims{3}, a);
  EXPECT_EQ(maxAbsDiff(ka, randomKet(Dims{3}, b)), 0.0);
  EXPECT_GT(maxAbsDiff(ka, randomKet(Dims{3}, c)), 0.0);
  EXPECT_TRUE(ka.isNormalized());
}

TEST(Random, DensityIsValid) {
  Rng rng = streamRng(11, 0);
  for (int i = 0; i < 20; ++i) EXPECT_TRUE(randomDensity(Dims{2, 3}, rng).isDensity());
}

}  // namespace
}  // namespace qzero
