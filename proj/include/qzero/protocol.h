#pragma once

// Zero-error coding: two-use codebooks, local preparability, output
// orthogonality, single-use impossibility certificates, the teleportation
// decoder for E12 and the privacy check.

#include <cstddef>
#include <string>
#include <vector>

#include "qzero/channel.h"
#include "qzero/subspace.h"

namespace qzero {

struct CodeBook {
  std::string channelId;
  std::size_t uses = 1;
  Dims dims;                 // input factors of the k-use channel
  std::vector<Ket> inputs;   // pure codewords
  Partition senderPartition;  // factors owned by each sender
};

// Codewords {Psi0, U^slot Psi0} for two uses of `e`. Psi0 pairs every input
// factor f of use 1 with factor f of use 2 in a maximally entangled state;
// slots index the two-use factors (A, B, ..., A', B', ...) and U is
// diag(1, -1, 1, -1, ...) on the slot.
CodeBook buildTwoUseCode(const MultiUserChannel& e, std::size_t messageSlot);
// Psi0 alone, in two-use factor order.
Ket twoUseReference(const MultiUserChannel& e);
// U^slot Psi0.
Ket twoUseCodeword(const MultiUserChannel& e, std::size_t slot);

// Product across the partition: the state equals the tensor product of its
// group marginals within 1e-9.
bool checkLocalPreparability(const Ket& psi, const Partition& partition);
bool checkLocalPreparability(const Operator& rho, const Partition& partition);

enum class Decoder { SingleReceiverProjective, TeleportationLOCC, None };
std::string toString(Decoder d);

inline constexpr double kOrthogonalityTol = 1e-9;

struct DistinguishabilityCertificate {
  Matrix overlaps;  // tr(E(rho_i) E(rho_j)), real
  double maxOffDiagonal = 0.0;
  bool orthogonal = false;
  Decoder decoder = Decoder::None;
  // Receiver that decodes alone when the others only see codeword-independent
  // product states.
  std::size_t decodingReceiver = 0;
};

// `e` must act on the codebook's input space (e.g. tensorPower(base, 2)).
DistinguishabilityCertificate verifyOrthogonalOutputs(const MultiUserChannel& e, const CodeBook& code);

struct AlphaLocalCertificate {
  bool certified = false;
  CECertificate s0;
  CECertificate s1;
  std::string reasoning;
};

// Binary-projective channels only: alpha_local = 1 whenever both S0 and S1
// contain no product vector.
AlphaLocalCertificate certifyAlphaLocalOne(const MultiUserChannel& e, const CEOptions& opts);

// Bell states on (x, y): 0 = (|00>+|11>)/sqrt2, 1 = (|00>-|11>)/sqrt2,
// 2 = (|01>+|10>)/sqrt2, 3 = (|01>-|10>)/sqrt2; corrections I, Z, X, XZ.
Ket bellState(std::size_t k);
Operator bellCorrection(std::size_t k);

// Teleports `rho` (one qubit) through `resource` (two qubits, sender first);
// returns the receiver's qubit after the Pauli correction, averaged over
// Bell outcomes.
Operator teleport(const Operator& rho, const Operator& resource);

struct TeleportationOutcome {
  double p0 = 0.0;  // rho0 detected
  double p1 = 0.0;
  double resourceDeviation = 0.0;  // max-norm distance of the use-1 marginal from rho0
  bool resourceWarning = false;
};

inline constexpr double kResourceTol = 1e-6;

// Qubits ordered (A1, B1, A2, B2). Alice Bell-measures (A2, A1), Bob corrects
// B1 and measures {|alpha><alpha|, I - |alpha><alpha|} on (B1, B2).
TeleportationOutcome teleportationDecode(const Operator& outputPair);

struct PrivacyResult {
  bool privateBit = false;
  double outputDifference = 0.0;  // max-norm of E(U^i Psi0) - E(U^j Psi0)
  double overlapI = 0.0;          // tr(E(U^i Psi0) E(Psi0))
  double overlapJ = 0.0;
};

PrivacyResult privacyCheck(const MultiUserChannel& e, std::size_t slotI, std::size_t slotJ);

// log2(N) / k
double capacityLowerBound(std::size_t uses, std::size_t distinguishable);

}  // namespace qzero
