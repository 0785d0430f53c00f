#pragma once

// Channel specification files.
//
//   {"builtin": "e21"}
//
//   {"format": "qzero-channel/1", "name": "...", "kind": "binary-projective",
//    "senderDims": [4, 4], "receiverDims": [2],
//    "basis": [[{"index": 0, "coeff": C}, ...], ...]}
//
//   {"format": "qzero-channel/1", "name": "...", "kind": "cq",
//    "senderDims": [2], "receiverDims": [2, 2],
//    "states": [{"input": 0, "matrix": [[C, ...], ...]}, ...]}
//
// C = {"re": {"r": [n, d], "s": [n, d]}, "im": {...}} stands for
// (r + s sqrt2) + i (r' + s' sqrt2); missing parts are zero.

#include <stdexcept>
#include <string>

#include "qzero/constructions.h"

namespace qzero {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Builtin parseChannelSpec(const std::string& text);
Builtin loadChannelSpecFile(const std::string& path);

// Re-ingestible spec for a builtin; cq states are written exactly only for
// e12 (the only cq builtin).
std::string describeJson(const std::string& builtinName);
std::string describeText(const std::string& builtinName);

}  // namespace qzero
