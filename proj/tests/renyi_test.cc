#include "qzero/renyi.h"

#include <gtest/gtest.h>

#include <cmath>

#include "qzero/constructions.h"

namespace qzero {
namespace {

Operator diag(Dims dims, std::vector<double> d) { return Operator::diagonal(std::move(dims), d); }

const std::vector<double> kOrders{0.0, 0.5, 1.0, 2.0, 3.0, kInfinity};

TEST(Entropy, FlatQubit) {
  for (double p : kOrders) EXPECT_NEAR(renyiEntropy(diag(Dims{2}, {0.5, 0.5}), p), 1.0, 1e-12) << p;
}

TEST(Entropy, PureState) {
  for (double p : kOrders) EXPECT_NEAR(renyiEntropy(Operator::projector(alphaState()), p), 0.0, 1e-12) << p;
}

TEST(Entropy, RankTwoAtZero) {
  EXPECT_NEAR(renyiEntropy(diag(Dims{2, 2}, {0.5, 0.5, 0, 0}), 0.0), 1.0, 1e-12);
}

TEST(Entropy, KnownSpectrum) {
  const std::vector<double> s{0.5, 0.25, 0.25};
  EXPECT_NEAR(renyiEntropyOfSpectrum(s, 1.0), 1.5, 1e-12);
  EXPECT_NEAR(renyiEntropyOfSpectrum(s, 2.0), -std::log2(0.375), 1e-12);
  EXPECT_NEAR(renyiEntropyOfSpectrum(s, kInfinity), 1.0, 1e-12);
  EXPECT_NEAR(renyiEntropyOfSpectrum(s, 0.0), std::log2(3.0), 1e-12);
}

TEST(Entropy, RejectsNonStates) {
  EXPECT_THROW(renyiEntropy(diag(Dims{2}, {1, 1}), 1.0), std::invalid_argument);
  EXPECT_THROW(renyiEntropy(diag(Dims{2}, {1.2, -0.2}), 1.0), std::invalid_argument);
  EXPECT_THROW(renyiEntropy(diag(Dims{2}, {0.5, 0.5}), -1.0), std::invalid_argument);
}

TEST(Rank, Threshold) {
  EXPECT_EQ(numericalRank({1.0, 1e-6, 1e-9}), 2u);
  EXPECT_EQ(numericalRank({0.5, 0.5, 0.0}), 2u);
  EXPECT_EQ(numericalRank({1.0, 0.0}), 1u);
}

TEST(MinOutput, IdentityChannel) {
  for (double p : {0.0, 1.0, 2.0}) EXPECT_NEAR(minOutputRenyi(identityChannel(3), p).value, 0.0, 1e-8) << p;
}

TEST(MinOutput, CompletelyDepolarizing) {
  for (double p : {0.0, 0.5, 1.0, 2.0}) {
    const auto r = minOutputRenyi(completelyDepolarizing(2), p);
    EXPECT_NEAR(r.value, 1.0, 1e-9) << p;
  }
}

TEST(MinOutput, E21AtZeroIsZero) {
  const auto r = minOutputRenyi(makeE21(), 0.0);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  EXPECT_EQ(numericalRank(r.outputSpectrum), 1u);
}

TEST(MinOutput, ValueMatchesAchiever) {
  const MultiUserChannel n = makeCJChannel(variant34Span().subspace(), CJCompletion::Flag);
  const auto r = minOutputRenyi(n, 2.0, RenyiOptions{.restarts = 5});
  Operator out = applyToPure(n, r.achiever);
  out = out * Complex(1.0 / out.trace().real());
  EXPECT_NEAR(renyiEntropy(out, 2.0), r.value, 1e-9);
  EXPECT_NEAR(renyiEntropyOfSpectrum(r.outputSpectrum, 2.0), r.value, 1e-9);
}

TEST(RankSearch, UnitaryLikeKraus) {
  const Dims d{2, 2};
  const std::vector<Ket> v{Ket::basis(d, 0) + Ket::basis(d, 3)};
  const auto r = minOutputRankSearch(makeCJChannel(buildSubspace(d, v)), {});
  EXPECT_EQ(r.bestRank, 1u);
}

TEST(RankSearch, E21SubspaceStaysAboveOne) {
  const auto r = minOutputRankSearch(makeCJChannel(e21Span().subspace()), {}, RankSearchOptions{.restarts = 100});
  EXPECT_GE(r.bestRank, 2u);
  EXPECT_EQ(r.bestRank, 4u);
  EXPECT_EQ(numericalRank(r.spectrum, r.threshold), r.bestRank);
}

TEST(RankSearch, ReproducibleAcrossThreads) {
  const MultiUserChannel n = makeCJChannel(variant34Span().subspace());
  const auto a = minOutputRankSearch(n, {}, RankSearchOptions{.restarts = 40, .seed = 3});
  const auto b = minOutputRankSearch(n, {}, RankSearchOptions{.restarts = 40, .seed = 3, .threads = 4});
  EXPECT_EQ(a.bestRank, b.bestRank);
  EXPECT_EQ(a.source, b.source);
  EXPECT_EQ(maxAbsDiff(a.achiever, b.achiever), 0.0);
}

TEST(PairSeeds, StructuredInputs) {
  const auto seeds = structuredPairSeeds(4, {Ket::basis(Dims{4}, 0)});
  ASSERT_GE(seeds.size(), 3u);
  EXPECT_LT(maxAbsDiff(seeds[0], maximallyEntangled(4)), 1e-15);
  for (const Ket& s : seeds) EXPECT_TRUE(s.isNormalized());
}

TEST(Gap, FullQubitPairIsAdditive) {
  const Subspace full = complement(Subspace(Dims{2, 2}, {}));
  const auto g = additivityGapAtZero(full, GapOptions{.pairRestarts = 50});
  EXPECT_EQ(g.single.bestRank, 2u);
  EXPECT_EQ(g.pair.bestRank, 4u);
  EXPECT_EQ(g.verdict, GapVerdict::NoGap);
}

TEST(Gap, E21) {
  const auto g = additivityGapAtZero(e21Span().subspace(), GapOptions{.pairRestarts = 50, .ce = {.threads = 4}});
  EXPECT_TRUE(g.r1Certified);
  EXPECT_EQ(g.r1LowerBound, 4u);
  EXPECT_EQ(g.single.bestRank, 4u);
  EXPECT_EQ(g.pair.bestRank, 15u);
  EXPECT_EQ(g.pair.source, "seed:0");
  EXPECT_LT(g.log2r2, g.twiceLog2r1);
  EXPECT_EQ(g.verdict, GapVerdict::GapFound);
}

TEST(Gap, RejectsUnsupportedInput) {
  const Dims d{2, 2};
  const std::vector<Ket> complexSpan{Ket::basis(d, 0) + Ket::basis(d, 3) * Complex(0.0, 1.0)};
  EXPECT_THROW(additivityGapAtZero(buildSubspace(d, complexSpan)), std::invalid_argument);
  EXPECT_THROW(additivityGapAtZero(em1Span(3).subspace()), std::invalid_argument);
}

}  // namespace
}  // namespace qzero
