#include "qzero/report.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#ifndef QZERO_VERSION
#define QZERO_VERSION "0.0.0"
#endif

namespace qzero {

namespace {

void roundFloats(Json& j) {
  if (j.is_number_float()) {
    j = roundSignificant(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& child : j) roundFloats(child);
  }
}

}  // namespace

std::string toString(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Info:
      return "info";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double roundSignificant(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

Report::Report(std::string command, std::string channel, std::uint64_t seed)
    : command_(std::move(command)), channel_(std::move(channel)), seed_(seed) {}

void Report::add(CheckRecord record) { checks_.push_back(std::move(record)); }

void Report::addResidual(std::string name, std::string claim, double residual, double tolerance) {
  add({std::move(name), std::move(claim), Json(residual), tolerance,
       residual <= tolerance ? Verdict::Pass : Verdict::Fail});
}

void Report::addFlag(std::string name, std::string claim, bool ok, Json value) {
  add({std::move(name), std::move(claim), std::move(value), std::nullopt, ok ? Verdict::Pass : Verdict::Fail});
}

void Report::addInfo(std::string name, std::string claim, Json value) {
  add({std::move(name), std::move(claim), std::move(value), std::nullopt, Verdict::Info});
}

Verdict Report::overall() const {
  bool inconclusive = false;
  for (const auto& c : checks_) {
    if (c.verdict == Verdict::Fail) return Verdict::Fail;
    if (c.verdict == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

int Report::exitCode() const {
  switch (overall()) {
    case Verdict::Fail:
      return kExitFail;
    case Verdict::Inconclusive:
      return kExitInconclusive;
    default:
      return kExitPass;
  }
}

std::string Report::toJson() const {
  Json j = Json::object();
  j["tool"] = "qzero";
  j["version"] = QZERO_VERSION;
  j["command"] = command_;
  j["channel"] = channel_;
  j["seed"] = seed_;
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json r = Json::object();
    r["name"] = c.name;
    r["claim"] = c.claim;
    r["value"] = c.value;
    r["tolerance"] = c.tolerance ? Json(*c.tolerance) : Json(nullptr);
    r["verdict"] = toString(c.verdict);
    checks.push_back(std::move(r));
  }
  j["checks"] = std::move(checks);
  j["overall"] = toString(overall());
  roundFloats(j);
  return j.dump(2) + "\n";
}

Json ketJson(const Ket& k) {
  Json amps = Json::array();
  for (std::size_t i = 0; i < k.size(); ++i) amps.push_back(Json::array({k[i].real(), k[i].imag()}));
  Json j = Json::object();
  j["dims"] = k.dims();
  j["amplitudes"] = std::move(amps);
  return j;
}

Json spectrumJson(const std::vector<double>& values) {
  Json j = Json::array();
  for (double v : values) j.push_back(v);
  return j;
}

}  // namespace qzero
