#pragma once

// Minimum output Renyi entropies, minimum output rank search and the p = 0
// additivity test for channels built from bipartite subspaces.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qzero/channel.h"
#include "qzero/subspace.h"

namespace qzero {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
// Eigenvalues below kRankThreshold * lambda_max count as zero.
inline constexpr double kRankThreshold = 1e-7;

// Renyi entropy in bits; p = 0 gives log2 rank, p = 1 the von Neumann entropy
// and p = infinity -log2 lambda_max.
double renyiEntropy(const Operator& rho, double p);
double renyiEntropyOfSpectrum(const std::vector<double>& spectrum, double p);
// Number of eigenvalues above threshold * lambda_max.
std::size_t numericalRank(const std::vector<double>& spectrum, double threshold = kRankThreshold);

struct RenyiOptions {
  std::size_t restarts = 20;
  std::uint64_t seed = 1;
  std::size_t maxIterations = 4000;
  double tol = 1e-12;
};

struct RenyiEstimate {
  double p = 0.0;
  double value = 0.0;
  Ket achiever;
  std::vector<double> outputSpectrum;  // of the normalized output, descending
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  bool converged = false;
};

// Upper bound on S_min^(p) by Nelder-Mead over pure inputs (real and
// imaginary parts, normalized inside the objective). Outputs are normalized
// before the entropy is taken, so unnormalized CP maps are accepted. p = 0 is
// delegated to minOutputRankSearch.
RenyiEstimate minOutputRenyi(const MultiUserChannel& e, double p, const RenyiOptions& opts = {});

struct RankSearchOptions {
  std::size_t restarts = 200;
  std::uint64_t seed = 1;
  std::size_t maxIterations = 150;
  double threshold = kRankThreshold;
  unsigned threads = 1;
};

struct RankSearchResult {
  std::size_t bestRank = 0;
  Ket achiever;
  double secondEigenvalue = 0.0;  // relative to the largest
  double threshold = kRankThreshold;
  std::vector<double> spectrum;  // normalized output spectrum of the achiever
  std::size_t restarts = 0;       // random restarts after the seeds
  std::size_t seedsTried = 0;
  std::string source;  // "seed:<k>" or "restart:<r>"
  std::uint64_t rngSeed = 0;
};

// For each start: lowers the target rank r one step at a time, minimizing the
// weight of the output outside its top-r eigenspace by alternating between
// the eigenspace and the input (a generalized eigenproblem); the first
// target that cannot be driven below threshold ends that start. Seeds are
// tried before random restarts.
RankSearchResult minOutputRankSearch(const MultiUserChannel& e, const std::vector<Ket>& seeds,
                                     const RankSearchOptions& opts = {});

enum class GapVerdict { GapFound, NoGap, Inconclusive };
std::string toString(GapVerdict v);

struct GapOptions {
  std::size_t singleRestarts = 200;
  std::size_t pairRestarts = 5000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  CEOptions ce;
};

struct GapReport {
  std::size_t outputDimension = 0;  // dB
  RankSearchResult single;
  RankSearchResult pair;
  CECertificate complementCertificate;  // for S^perp
  // r1 >= lower bound; equal to dB when S^perp contains no product vector.
  std::size_t r1LowerBound = 1;
  bool r1Certified = false;
  // r2 >= lower bound; dB^2 when (S x S)^perp contains no product vector.
  std::size_t r2LowerBound = 1;
  std::optional<CECertificate> pairComplementCertificate;
  double log2r2 = 0.0;
  double twiceLog2r1 = 0.0;
  GapVerdict verdict = GapVerdict::Inconclusive;
};

// N = makeCJChannel(S, None). An output of N has rank below dB exactly when
// S^perp contains a product vector, which fixes r1 = dB for S^perp completely
// entangled; the two-use search then only has to exhibit some r2 < dB^2.
// Throws for bases with non-real coefficients.
GapReport additivityGapAtZero(const Subspace& s, const GapOptions& opts = {});

// Seeds for the two-use search on inputs (A, A'): the maximally entangled
// state, its images under the local phase flips and products of the given
// single-use achievers.
std::vector<Ket> structuredPairSeeds(std::size_t dA, const std::vector<Ket>& singleAchievers);

}  // namespace qzero
