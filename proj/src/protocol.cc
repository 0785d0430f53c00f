#include "qzero/protocol.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "qzero/constructions.h"

namespace qzero {

namespace {

void validatePartition(const Partition& partition, std::size_t factors) {
  std::vector<int> seen(factors, 0);
  for (const auto& group : partition) {
    for (std::size_t f : group) {
      if (f >= factors) throw std::invalid_argument("partition refers to a factor out of range");
      ++seen[f];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw std::invalid_argument("partition must cover every factor exactly once");
  }
}

Partition sortedGroups(const Partition& partition) {
  Partition out = partition;
  for (auto& g : out) std::sort(g.begin(), g.end());
  return out;
}

// Tensor product of the group marginals, in the factor order obtained by
// concatenating the groups; returned together with that order.
std::pair<Operator, std::vector<std::size_t>> productOfMarginals(const Operator& rho, const Partition& groups) {
  std::vector<std::size_t> order;
  Operator product = Operator::identity(Dims{});
  for (const auto& g : groups) {
    order.insert(order.end(), g.begin(), g.end());
    product = tensorProduct(product, partialTrace(rho, g));
  }
  return {product, order};
}

double productResidual(const Operator& rho, const Partition& groups) {
  auto [product, order] = productOfMarginals(rho, groups);
  const Operator permuted = permuteFactors(rho, order);
  const double t = std::abs(rho.trace());
  // Marginals each carry the full trace; rescale for unnormalized inputs.
  const double scale = groups.size() > 1 && t > 0 ? std::pow(t, static_cast<double>(groups.size()) - 1.0) : 1.0;
  return maxAbs(permuted.matrix() - product.matrix() / scale);
}

}  // namespace

Ket twoUseReference(const MultiUserChannel& e) {
  const Dims& in = e.inputDims();
  const std::size_t n = in.size();
  Ket paired = Ket::basis(Dims{}, 0);
  std::vector<std::size_t> order(2 * n);
  for (std::size_t f = 0; f < n; ++f) {
    paired = tensorProduct(paired, maximallyEntangled(in[f]));
    order[f] = 2 * f;
    order[n + f] = 2 * f + 1;
  }
  return permuteFactors(paired, order);
}

Ket twoUseCodeword(const MultiUserChannel& e, std::size_t slot) {
  const Dims dims = concat(e.inputDims(), e.inputDims());
  if (slot >= dims.size()) throw std::out_of_range("twoUseCodeword: slot out of range");
  return embedLocalOperator(phaseFlip(dims[slot]), slot, dims).apply(twoUseReference(e));
}

CodeBook buildTwoUseCode(const MultiUserChannel& e, std::size_t messageSlot) {
  CodeBook code;
  code.channelId = e.name();
  code.uses = 2;
  code.dims = concat(e.inputDims(), e.inputDims());
  if (messageSlot >= code.dims.size()) throw std::out_of_range("buildTwoUseCode: slot out of range");
  code.inputs = {twoUseReference(e), twoUseCodeword(e, messageSlot)};
  const std::size_t n = e.inputDims().size();
  for (const auto& g : e.senderPartition()) {
    std::vector<std::size_t> both = g;
    for (std::size_t f : g) both.push_back(f + n);
    code.senderPartition.push_back(std::move(both));
  }
  return code;
}

bool checkLocalPreparability(const Operator& rho, const Partition& partition) {
  validatePartition(partition, rho.dims().size());
  return productResidual(rho, sortedGroups(partition)) <= 1e-9;
}

bool checkLocalPreparability(const Ket& psi, const Partition& partition) {
  return checkLocalPreparability(Operator::projector(psi), partition);
}

std::string toString(Decoder d) {
  switch (d) {
    case Decoder::SingleReceiverProjective:
      return "single-receiver-projective";
    case Decoder::TeleportationLOCC:
      return "teleportation-LOCC";
    case Decoder::None:
      return "none";
  }
  return "unknown";
}

DistinguishabilityCertificate verifyOrthogonalOutputs(const MultiUserChannel& e, const CodeBook& code) {
  std::vector<Operator> outputs;
  outputs.reserve(code.inputs.size());
  for (const Ket& x : code.inputs) {
    if (x.size() != e.inputDimension()) throw std::invalid_argument("verifyOrthogonalOutputs: dimension mismatch");
    outputs.push_back(applyToPure(e, x));
  }
  const auto n = static_cast<Eigen::Index>(outputs.size());
  DistinguishabilityCertificate cert;
  cert.overlaps = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cert.overlaps(i, j) = traceOverlap(outputs[static_cast<std::size_t>(i)], outputs[static_cast<std::size_t>(j)]);
      if (i != j) cert.maxOffDiagonal = std::max(cert.maxOffDiagonal, std::abs(cert.overlaps(i, j)));
    }
  }
  cert.orthogonal = cert.maxOffDiagonal <= kOrthogonalityTol;
  if (!cert.orthogonal) return cert;
  if (e.numReceivers() == 1) {
    cert.decoder = Decoder::SingleReceiverProjective;
    return cert;
  }
  // A receiver decodes alone when every output factorizes as (its part) x
  // (the rest) with the rest independent of the codeword.
  for (std::size_t r = 0; r < e.numReceivers(); ++r) {
    std::vector<std::size_t> rest;
    for (std::size_t q = 0; q < e.numReceivers(); ++q) {
      if (q != r) rest.insert(rest.end(), e.receiverPartition()[q].begin(), e.receiverPartition()[q].end());
    }
    const Partition cut = sortedGroups({e.receiverPartition()[r], rest});
    bool ok = true;
    Operator firstRest;
    for (std::size_t c = 0; c < outputs.size() && ok; ++c) {
      const Operator& out = outputs[c];
      if (productResidual(out, cut) > 1e-9) {
        ok = false;
        break;
      }
      Operator restMarginal = partialTrace(out, cut[1]);
      restMarginal = restMarginal * Complex(1.0 / std::abs(restMarginal.trace()));
      if (c == 0) {
        firstRest = restMarginal;
      } else if (maxAbsDiff(restMarginal, firstRest) > 1e-9) {
        ok = false;
      }
    }
    if (ok) {
      cert.decoder = Decoder::SingleReceiverProjective;
      cert.decodingReceiver = r;
      return cert;
    }
  }
  return cert;
}

AlphaLocalCertificate certifyAlphaLocalOne(const MultiUserChannel& e, const CEOptions& opts) {
  if (e.kind() != ChannelKind::BinaryProjective) {
    throw std::invalid_argument("certifyAlphaLocalOne: binary-projective channel required, got " + toString(e.kind()));
  }
  const auto& p = e.as<BinaryProjectivePayload>();
  AlphaLocalCertificate cert;
  cert.s0 = certifyCompletelyEntangled(p.s0, opts, e.name() + ":S0");
  cert.s1 = certifyCompletelyEntangled(p.s1, opts, e.name() + ":S1");
  cert.certified = cert.s0.verdict == CEVerdict::CertifiedCE && cert.s1.verdict == CEVerdict::CertifiedCE;
  if (cert.certified) {
    cert.reasoning =
        "outputs lie in span{out0, out1}; two perfectly distinguishable outputs must be out0 and out1, which "
        "requires a product input supported in S0 and another in S1; neither subspace contains a product vector";
  } else {
    cert.reasoning = "no certificate: S0 " + toString(cert.s0.verdict) + ", S1 " + toString(cert.s1.verdict);
  }
  return cert;
}

Ket bellState(std::size_t k) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (k) {
    case 0:
      v << s, 0, 0, s;
      break;
    case 1:
      v << s, 0, 0, -s;
      break;
    case 2:
      v << 0, s, s, 0;
      break;
    case 3:
      v << 0, s, -s, 0;
      break;
    default:
      throw std::out_of_range("bellState: index must be in [0, 4)");
  }
  return Ket(Dims{2, 2}, v);
}

Operator bellCorrection(std::size_t k) {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  switch (k) {
    case 0:
      return Operator::identity(Dims{2});
    case 1:
      return Operator(Dims{2}, z);
    case 2:
      return Operator(Dims{2}, x);
    case 3:
      return Operator(Dims{2}, x * z);
    default:
      throw std::out_of_range("bellCorrection: index must be in [0, 4)");
  }
}

namespace {

// State on (X, A, rest...): Bell measurement on (X, A), correction on the
// first factor of rest, outcomes summed. Returns the state of rest.
Operator bellMeasureAndCorrect(const Operator& state) {
  Dims rest(state.dims().begin() + 2, state.dims().end());
  const auto other = static_cast<Eigen::Index>(dimProduct(Dims(rest.begin() + 1, rest.end())));
  const auto n = static_cast<Eigen::Index>(dimProduct(rest));
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < 4; ++k) {
    const Matrix correction =
        Eigen::kroneckerProduct(bellCorrection(k).matrix(), Matrix::Identity(other, other)).eval();
    const Matrix kraus = Eigen::kroneckerProduct(bellState(k).amplitudes().adjoint(), correction).eval();
    out += kraus * state.matrix() * kraus.adjoint();
  }
  return Operator(rest, std::move(out));
}

}  // namespace

Operator teleport(const Operator& rho, const Operator& resource) {
  if (rho.rows() != 2 || resource.rows() != 4) throw std::invalid_argument("teleport: qubit input and two-qubit resource");
  return bellMeasureAndCorrect(tensorProduct(Operator(Dims{2}, rho.matrix()), Operator(Dims{2, 2}, resource.matrix())));
}

TeleportationOutcome teleportationDecode(const Operator& outputPair) {
  if (outputPair.rows() != 16 || !outputPair.isSquare()) {
    throw std::invalid_argument("teleportationDecode: expected a four-qubit operator");
  }
  const Operator rho(Dims{2, 2, 2, 2}, outputPair.matrix());
  TeleportationOutcome result;
  const std::vector<std::size_t> firstUse{0, 1};
  const Operator resource = partialTrace(rho, firstUse);
  result.resourceDeviation = maxAbsDiff(Operator(Dims{2, 2}, resource.matrix()), Operator::projector(alphaState()));
  result.resourceWarning = result.resourceDeviation > kResourceTol;

  const std::vector<std::size_t> order{2, 0, 1, 3};
  const Operator bob = bellMeasureAndCorrect(permuteFactors(rho, order));
  const Operator detect = Operator::projector(alphaState());
  result.p0 = traceOverlap(detect, bob);
  result.p1 = std::real(bob.trace()) - result.p0;
  return result;
}

PrivacyResult privacyCheck(const MultiUserChannel& e, std::size_t slotI, std::size_t slotJ) {
  const std::size_t slots = 2 * e.inputDims().size();
  if (slotI >= slots || slotJ >= slots) throw std::out_of_range("privacyCheck: slot out of range");
  const MultiUserChannel twice = tensorPower(e, 2);
  const Operator out0 = applyToPure(twice, twoUseReference(e));
  const Operator outI = applyToPure(twice, twoUseCodeword(e, slotI));
  const Operator outJ = applyToPure(twice, twoUseCodeword(e, slotJ));
  PrivacyResult r;
  r.outputDifference = maxAbsDiff(outI, outJ);
  r.overlapI = traceOverlap(outI, out0);
  r.overlapJ = traceOverlap(outJ, out0);
  r.privateBit = r.outputDifference <= kOrthogonalityTol && std::abs(r.overlapI) <= kOrthogonalityTol &&
                 std::abs(r.overlapJ) <= kOrthogonalityTol;
  return r;
}

double capacityLowerBound(std::size_t uses, std::size_t distinguishable) {
  if (uses == 0) throw std::invalid_argument("capacityLowerBound: uses must be positive");
  if (distinguishable == 0) throw std::invalid_argument("capacityLowerBound: N must be positive");
  return std::log2(static_cast<double>(distinguishable)) / static_cast<double>(uses);
}

}  // namespace qzero
