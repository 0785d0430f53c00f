#pragma once

// Machine-readable verification reports. Serialization is deterministic:
// insertion-ordered keys and floating-point values rounded to 15 significant
// digits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qzero/linalg.h"

namespace qzero {

using Json = nlohmann::ordered_json;

enum class Verdict { Pass, Fail, Info, Inconclusive };
std::string toString(Verdict v);

struct CheckRecord {
  std::string name;
  std::string claim;
  Json value;
  std::optional<double> tolerance;
  Verdict verdict = Verdict::Info;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 3;

class Report {
 public:
  Report(std::string command, std::string channel, std::uint64_t seed);

  void add(CheckRecord record);
  // Pass / fail record from a residual compared against a tolerance.
  void addResidual(std::string name, std::string claim, double residual, double tolerance);
  void addFlag(std::string name, std::string claim, bool ok, Json value);
  void addInfo(std::string name, std::string claim, Json value);

  const std::vector<CheckRecord>& checks() const { return checks_; }
  // Fail if any check fails, otherwise inconclusive if any is, otherwise pass.
  Verdict overall() const;
  int exitCode() const;
  std::string toJson() const;

 private:
  std::string command_;
  std::string channel_;
  std::uint64_t seed_;
  std::vector<CheckRecord> checks_;
};

double roundSignificant(double x, int digits = 15);
Json ketJson(const Ket& k);
Json spectrumJson(const std::vector<double>& values);

}  // namespace qzero
