#pragma once

// The concrete channels: E12, E21, the m-qubit family Em1 and the 3x4 variant
// of E21. Spanning sets are kept with exact coefficients so that projectors and
// the symmetry identities can be evaluated without rounding.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qzero/channel.h"
#include "qzero/exact.h"
#include "qzero/subspace.h"

namespace qzero {

using ExactTerm = std::pair<std::size_t, ExactComplex>;

// Unnormalized spanning vectors given as sparse term lists.
struct ExactSpan {
  Dims dims;
  std::vector<std::vector<ExactTerm>> vectors;

  // One column per spanning vector.
  ExactMatrix columns() const;
  std::vector<Ket> kets() const;
  Subspace subspace() const;
  ExactMatrix projector() const;
  bool isReal() const;
};

ExactSpan e21Span();
ExactSpan variant34Span();
// psi_0 = |0..0> + |1..1>, psi_x = |0>|x> - |1>|not x> for x != 0.
ExactSpan em1Span(std::size_t m);

// diag(1, -1, 1, -1, ...)
Operator phaseFlip(std::size_t d);
ExactMatrix exactPhaseFlip(std::size_t d);

// (|00> + |11>)/sqrt 2
Ket alphaState();
// rho0 = |alpha><alpha| and rho1 = (I - rho0)/3 with exact entries.
ExactMatrix e12ExactRho0();
ExactMatrix e12ExactRho1();

MultiUserChannel makeE12();
MultiUserChannel makeE21();
MultiUserChannel makeEm1(std::size_t m);
MultiUserChannel makeVariant34();

struct Builtin {
  std::string name;
  MultiUserChannel channel;
  // Spanning set of S0 for the binary-projective builtins.
  std::optional<ExactSpan> s0;
  // Exact output states of the cq builtins, keyed by input index.
  std::vector<std::pair<std::size_t, ExactMatrix>> cqStates;
};

// "e12", "e21", "em1:<m>" or "variant34"; throws std::invalid_argument otherwise.
Builtin makeBuiltin(const std::string& name);

}  // namespace qzero
