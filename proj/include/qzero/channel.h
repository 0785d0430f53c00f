#pragma once

// Multi-user quantum channels in kind-specific forms.
//
// A channel maps operators on the tensor product of its input factors to
// operators on the tensor product of its output factors. Party metadata
// records which factors each sender and receiver owns; for a k-fold power the
// factors are ordered use-major (A, B, A', B', ...) and sender A owns the
// factors {A, A', ...}.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qzero/linalg.h"
#include "qzero/subspace.h"

namespace qzero {

using Partition = std::vector<std::vector<std::size_t>>;

enum class ChannelKind { ClassicalQuantum, BinaryProjective, Kraus, SubspaceCJ, Product };
enum class KrausFlag { TracePreserving, TraceNonIncreasing, UnnormalizedCP };

std::string toString(ChannelKind k);
std::string toString(KrausFlag f);

class MultiUserChannel;

// rho -> sum_k <k|rho|k> rho_k
struct CQPayload {
  std::vector<std::pair<std::size_t, Operator>> outputs;
};

// rho -> tr(P0 rho)|out0><out0| + tr(P1 rho)|out1><out1|
struct BinaryProjectivePayload {
  Subspace s0;
  Subspace s1;
  Ket out0;
  Ket out1;
};

struct KrausPayload {
  std::vector<Operator> ops;
  KrausFlag flag = KrausFlag::TracePreserving;
};

// Kraus operators read off the basis of a bipartite subspace, scaled so that
// sum K^dagger K <= I; optionally completed with a flag output level.
struct SubspaceCJPayload {
  Subspace subspace;
  std::vector<Operator> ops;
  double scale = 1.0;
  bool flagCompletion = false;
  KrausFlag flag = KrausFlag::UnnormalizedCP;
};

// Parallel composition; factor j acts on the j-th contiguous block of input
// factors and produces the j-th block of output factors.
struct ProductPayload {
  std::vector<std::shared_ptr<const MultiUserChannel>> factors;
};

class MultiUserChannel {
 public:
  using Payload = std::variant<CQPayload, BinaryProjectivePayload, KrausPayload, SubspaceCJPayload, ProductPayload>;

  MultiUserChannel(std::string name, Dims inputDims, Dims outputDims, Partition senders, Partition receivers,
                   Payload payload);

  const std::string& name() const { return name_; }
  ChannelKind kind() const;
  const Dims& inputDims() const { return inputDims_; }
  const Dims& outputDims() const { return outputDims_; }
  std::size_t inputDimension() const { return dimProduct(inputDims_); }
  std::size_t outputDimension() const { return dimProduct(outputDims_); }
  const Partition& senderPartition() const { return senders_; }
  const Partition& receiverPartition() const { return receivers_; }
  std::size_t numSenders() const { return senders_.size(); }
  std::size_t numReceivers() const { return receivers_.size(); }
  // Product of the factor dimensions owned by each sender.
  Dims senderDims() const;
  Dims receiverDims() const;
  bool acceptsUnnormalizedInput() const;

  const Payload& payload() const { return payload_; }
  template <typename T>
  const T& as() const {
    return std::get<T>(payload_);
  }

 private:
  std::string name_;
  Dims inputDims_;
  Dims outputDims_;
  Partition senders_;
  Partition receivers_;
  Payload payload_;
};

// One sender per input factor and one receiver per output factor.
Partition singletonPartition(std::size_t n);

MultiUserChannel makeKrausChannel(std::string name, Dims inputDims, Dims outputDims, std::vector<Operator> ops,
                                  KrausFlag flag = KrausFlag::TracePreserving);
MultiUserChannel makeCQChannel(std::string name, Dims inputDims, Dims outputDims,
                               std::vector<std::pair<std::size_t, Operator>> outputs);
MultiUserChannel makeBinaryProjectiveChannel(std::string name, const Subspace& s0);
MultiUserChannel identityChannel(std::size_t d);
// rho -> tr(rho) I/d
MultiUserChannel completelyDepolarizing(std::size_t d);

// Binary-projective: {|out0><e_i|} and {|out1><f_j|} over the two bases;
// cq: {sqrt(lambda)|v><k|} over each eigenpair of rho_k.
std::vector<Operator> toKraus(const MultiUserChannel& e);

// Validates the input (dimensions, trace unless unnormalized-CP, positivity).
Operator applyChannel(const MultiUserChannel& e, const Operator& rho);
// Linear action without input validation.
Matrix applyLinear(const MultiUserChannel& e, const Matrix& x);
// E(|psi><psi|), computed through Kraus images.
Operator applyToPure(const MultiUserChannel& e, const Ket& psi);

MultiUserChannel tensorPower(const MultiUserChannel& e, std::size_t k);
// E (x) F with distinct parties.
MultiUserChannel tensorProduct(const MultiUserChannel& e, const MultiUserChannel& f);

enum class CJCompletion { None, Flag };
MultiUserChannel makeCJChannel(const Subspace& s, CJCompletion completion = CJCompletion::None);

// (E x id)(|Omega><Omega|) with |Omega> = sum_a |a>|a> on output (x) input.
Operator choiMatrix(const MultiUserChannel& e);

// Extra senders are ignored; extra receivers are handed |0>.
MultiUserChannel extendTrivialParties(const MultiUserChannel& e, const Dims& extraSenders,
                                      const Dims& extraReceivers);

double checkTracePreserving(const MultiUserChannel& e);

}  // namespace qzero
