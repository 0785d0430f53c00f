#pragma once

// Subspaces of multipartite spaces, complements, the transpose / local
// conjugation symmetry checks, and certification that a subspace contains no
// product vector.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qzero/exact.h"
#include "qzero/linalg.h"

namespace qzero {

class Subspace {
 public:
  Subspace() = default;
  // Orthonormal basis is assumed; use buildSubspace for arbitrary spanning sets.
  Subspace(Dims dims, std::vector<Ket> orthonormalBasis);

  const Dims& dims() const { return dims_; }
  const std::vector<Ket>& basis() const { return basis_; }
  const Operator& projector() const { return projector_; }
  std::size_t dimension() const { return basis_.size(); }
  std::size_t ambientDimension() const { return dimProduct(dims_); }
  // Real coefficients in the computational basis.
  bool isReal(double tol = 1e-12) const;

 private:
  Dims dims_;
  std::vector<Ket> basis_;
  Operator projector_;
};

// Spanning vectors may be unnormalized and linearly dependent.
Subspace buildSubspace(const Dims& dims, std::span<const Ket> spanning);
Subspace complement(const Subspace& s);
Subspace tensorProduct(const Subspace& a, const Subspace& b);

struct ProductStateCandidate {
  std::vector<Ket> factors;  // one normalized ket per party
  double overlap = 0.0;      // <x|P|x> for x the tensor product of factors

  Ket product() const;
};

double productOverlap(const Subspace& s, std::span<const Ket> factors);

struct SeesawOptions {
  std::size_t restarts = 1000;
  double tol = 1e-12;
  std::size_t maxSweeps = 500;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct SeesawRun {
  ProductStateCandidate best;
  std::vector<double> objectives;  // one entry per sweep
  bool converged = false;
};

// One alternating-maximization restart from the given initial factors.
SeesawRun seesawRestart(const Subspace& s, std::vector<Ket> factors, const SeesawOptions& opts);

struct ProductSearchResult {
  ProductStateCandidate best;
  std::size_t restarts = 0;
  std::size_t convergedRestarts = 0;
  bool monotone = true;
  std::uint64_t seed = 0;
};

// Best product overlap over restarts seeded from Haar-random factors; the
// stream for restart r is streamRng(seed, r), so the result does not depend on
// the thread count.
ProductSearchResult maxProductOverlap(const Subspace& s, const SeesawOptions& opts);

enum class CEVerdict { CertifiedCE, ProductStateFound, Inconclusive };
std::string toString(CEVerdict v);

struct CEOptions {
  std::size_t restarts = 1000;
  std::size_t minRestarts = 100;
  double gap = 1e-3;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t maxSweeps = 500;
  double tol = 1e-12;
};

inline constexpr double kProductFoundThreshold = 1.0 - 1e-6;

struct CECertificate {
  std::string subspaceId;
  double maxOverlapFound = 0.0;
  ProductStateCandidate witness;
  std::size_t restarts = 0;
  bool converged = false;
  CEVerdict verdict = CEVerdict::Inconclusive;
  std::uint64_t seed = 0;
  double gap = 0.0;
};

CECertificate certifyCompletelyEntangled(const Subspace& s, const CEOptions& opts, std::string id = {});

struct GridOptions {
  // Largest number of objective evaluations accepted before refusing.
  std::size_t maxEvaluations = 50'000'000;
};

// Exhaustive search over a grid of gauge-fixed product states. Each factor but
// the largest is parameterized by hyperspherical magnitude angles in [0, pi/2]
// (endpoints included) and relative phases in [0, 2pi); the largest factor is
// maximized exactly as the leading eigenvalue of the contracted projector.
// `resolution` is the number of grid points per parameter.
double gridOracleProductSearch(const Subspace& s, std::size_t resolution, const GridOptions& opts = {});
// Total real parameter count of the gauge-fixed product manifold.
std::size_t productManifoldParameters(const Dims& dims);

struct SymmetryCheck {
  std::string name;
  double residual = 0.0;
  bool passed = false;
};

struct SymmetryToggles {
  bool transposeInvariance = true;
  bool conjugationSwap = true;
  bool transposeOrthogonality = true;
  bool conjugatedOrthogonality = true;
};

struct SymmetryReport {
  std::vector<SymmetryCheck> checks;
  bool allPassed() const;
  double maxResidual() const;
};

inline constexpr double kSymmetryTol = 1e-9;

// Residuals of P_l - P_l^T, P_l - U^i P_lbar U^i, P_l^T P_lbar and
// P_l^T U^i P_l U^i for l in {0, 1} and each party slot i in `localU`.
SymmetryReport checkSymmetryProperties(const Subspace& s0, const Subspace& s1,
                                       const std::map<std::size_t, Operator>& localU,
                                       const SymmetryToggles& toggles = {});

struct ExactSymmetryCheck {
  std::string name;
  bool exactlyZero = false;
};

// Same checks with exact projectors; every identity is decided by exact zero.
std::vector<ExactSymmetryCheck> checkSymmetryPropertiesExact(const ExactMatrix& p0, const ExactMatrix& p1,
                                                             const Dims& dims,
                                                             const std::map<std::size_t, ExactMatrix>& localU,
                                                             const SymmetryToggles& toggles = {});

}  // namespace qzero
