// Acceptance driver: one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N]
//
// Exit status is 0 when every selected criterion passes, 2 when a search ran
// out of budget without the claimed witness, and 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qzero/channel.h"
#include "qzero/constructions.h"
#include "qzero/protocol.h"
#include "qzero/renyi.h"
#include "qzero/subspace.h"

using namespace qzero;

namespace {

// Pinned tolerances.
constexpr double kFloatSymmetryTol = 1e-9;
constexpr double kEntrywiseTol = 1e-10;
constexpr double kTeleportTol = 1e-10;
constexpr double kCEGap = 1e-3;
constexpr std::size_t kCERestarts = 1000;
constexpr double kGridAgreement = 0.05;
constexpr double kIdentityTol = 1e-10;
constexpr double kProjectorTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kRenyiTol = 1e-10;

// Runtime budgets in seconds.
constexpr double kBudgetProperties = 1.0;
constexpr double kBudgetCE = 60.0;
constexpr double kBudgetTeleport = 1.0;
constexpr double kBudgetRenyi = 600.0;

enum class Status { Pass, Fail, Inconclusive };

struct Line {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct Result {
  Status status = Status::Fail;
  std::string summary;
  std::vector<Line> lines;
};

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Result collect(std::string summary, std::vector<Line> lines) {
  Result r;
  r.summary = std::move(summary);
  r.lines = std::move(lines);
  const bool ok = std::all_of(r.lines.begin(), r.lines.end(), [](const Line& l) { return l.pass; });
  r.status = ok ? Status::Pass : Status::Fail;
  return r;
}

Operator diag(Dims dims, std::vector<double> d) { return Operator::diagonal(std::move(dims), d); }

Ket randomProduct(const Dims& dims, Rng& rng) {
  std::vector<Ket> f;
  for (std::size_t d : dims) f.push_back(randomKet(Dims{d}, rng));
  return tensorProduct(f);
}

CEOptions ceOptions() {
  CEOptions o;
  o.restarts = kCERestarts;
  o.gap = kCEGap;
  o.threads = threads();
  return o;
}

// ---------------------------------------------------------------------------

Result criterion1() {
  Timer t;
  const Builtin b = makeBuiltin("e21");
  const auto& p = b.channel.as<BinaryProjectivePayload>();
  const auto floatReport =
      checkSymmetryProperties(p.s0, p.s1, {{0, phaseFlip(4)}, {1, phaseFlip(4)}});
  const ExactMatrix p0 = b.s0->projector();
  const ExactMatrix p1 = ExactMatrix::identity(16) - p0;
  const auto exact = checkSymmetryPropertiesExact(p0, p1, Dims{4, 4}, {{0, exactPhaseFlip(4)}, {1, exactPhaseFlip(4)}});
  const double elapsed = t.seconds();
  std::size_t exactZero = 0;
  for (const auto& c : exact) exactZero += c.exactlyZero ? 1 : 0;
  return collect("E21 symmetry residuals, float and exact",
                 {{"float", floatReport.checks.size() == 12 && floatReport.maxResidual() <= kFloatSymmetryTol,
                   std::to_string(floatReport.checks.size()) + " checks, max residual " +
                       fmt(floatReport.maxResidual()) + " <= " + fmt(kFloatSymmetryTol)},
                  {"exact", exact.size() == 12 && exactZero == exact.size(),
                   std::to_string(exactZero) + "/" + std::to_string(exact.size()) + " identities exactly zero in Q(sqrt2)"},
                  {"runtime", elapsed < kBudgetProperties, fmt(elapsed) + " s < " + fmt(kBudgetProperties) + " s"}});
}

Result criterion2() {
  Timer t;
  std::vector<Line> lines;
  for (const char* name : {"e21", "variant34", "em1:3", "em1:4"}) {
    const Builtin b = makeBuiltin(name);
    const auto& p = b.channel.as<BinaryProjectivePayload>();
    const std::size_t resolution = productManifoldParameters(p.s0.dims()) <= 8 ? 12 : 8;
    for (int l = 0; l < 2; ++l) {
      const Subspace& s = l == 0 ? p.s0 : p.s1;
      const std::string label = std::string(name) + " S" + std::to_string(l);
      const auto cert = certifyCompletelyEntangled(s, ceOptions(), label);
      lines.push_back({label, cert.verdict == CEVerdict::CertifiedCE,
                       toString(cert.verdict) + ", max overlap " + fmt(cert.maxOverlapFound) + " over " +
                           std::to_string(cert.restarts) + " restarts"});
      const double grid = gridOracleProductSearch(s, resolution);
      lines.push_back({label + " grid", std::abs(grid - cert.maxOverlapFound) <= kGridAgreement,
                       "grid(" + std::to_string(resolution) + ") " + fmt(grid) + ", |grid - seesaw| <= " +
                           fmt(kGridAgreement) + ", " + std::to_string(productManifoldParameters(s.dims())) +
                           " parameters"});
    }
  }
  const double elapsed = t.seconds();
  lines.push_back({"runtime", elapsed < kBudgetCE, fmt(elapsed) + " s < " + fmt(kBudgetCE) + " s"});
  return collect("no product vector in S0 or S1", std::move(lines));
}

Result criterion3() {
  const MultiUserChannel e = makeE21();
  const MultiUserChannel e2 = tensorPower(e, 2);
  const Operator even = diag(Dims{2, 2}, {0.5, 0, 0, 0.5});
  const Operator odd = diag(Dims{2, 2}, {0, 0.5, 0.5, 0});
  std::vector<Line> lines;
  const double r0 = maxAbsDiff(applyToPure(e2, twoUseReference(e)), even);
  lines.push_back({"Psi0", r0 <= kEntrywiseTol, "output residual " + fmt(r0)});
  const char* slotNames[] = {"A", "B", "A'", "B'"};
  for (std::size_t slot = 0; slot < 4; ++slot) {
    const CodeBook code = buildTwoUseCode(e, slot);
    const double r1 = maxAbsDiff(applyToPure(e2, code.inputs[1]), odd);
    const auto cert = verifyOrthogonalOutputs(e2, code);
    lines.push_back({std::string("U Psi0 [") + slotNames[slot] + "]",
                     r1 <= kEntrywiseTol && cert.maxOffDiagonal <= kEntrywiseTol,
                     "output residual " + fmt(r1) + ", overlap " + fmt(cert.maxOffDiagonal)});
  }
  lines.push_back({"rate", capacityLowerBound(2, 2) == 0.5, "capacityLowerBound(2, 2) = " + fmt(capacityLowerBound(2, 2))});
  return collect("E21 two-use outputs", std::move(lines));
}

Result criterion4() {
  std::vector<Line> lines;
  struct Case {
    const char* name;
    std::vector<std::size_t> slots;  // party slots usable for the two-use code
  };
  const std::vector<Case> cases{{"e21", {0, 1}}, {"variant34", {1}}, {"em1:3", {0, 1, 2}}, {"em1:4", {0, 1, 2, 3}}};
  for (const Case& c : cases) {
    const MultiUserChannel e = makeBuiltin(c.name).channel;
    const auto alpha = certifyAlphaLocalOne(e, ceOptions());
    const std::size_t n = e.inputDims().size();
    const MultiUserChannel e2 = tensorPower(e, 2);
    bool orthogonal = true;
    for (std::size_t s : c.slots) {
      orthogonal = orthogonal && verifyOrthogonalOutputs(e2, buildTwoUseCode(e, s)).orthogonal &&
                   verifyOrthogonalOutputs(e2, buildTwoUseCode(e, s + n)).orthogonal;
    }
    lines.push_back({c.name, alpha.certified && orthogonal,
                     std::string("alpha_local = 1 ") + (alpha.certified ? "certified" : "not certified") +
                         ", two-use outputs " + (orthogonal ? "orthogonal" : "overlap")});

    // Extension by one ignored sender and one receiver fed |0>.
    const MultiUserChannel x = extendTrivialParties(e, Dims{2}, Dims{2});
    double identity = 0.0;
    bool mixed = true;
    for (std::uint64_t k = 0; k < 20; ++k) {
      Rng rng = streamRng(71, k);
      const Operator rho = randomDensity(e.inputDims(), rng);
      const Operator sigma = randomDensity(Dims{2}, rng);
      const Operator expected = tensorProduct(applyChannel(e, rho), diag(Dims{2}, {1, 0}));
      identity = std::max(identity, maxAbsDiff(applyChannel(x, tensorProduct(rho, sigma)), expected));
      const auto spectrum = hermitianEigenvalues(applyToPure(x, randomProduct(x.inputDims(), rng)));
      mixed = mixed && numericalRank(spectrum, 1e-10) >= 2;
    }
    const bool xOrthogonal = verifyOrthogonalOutputs(tensorPower(x, 2), buildTwoUseCode(x, c.slots.front())).orthogonal;
    lines.push_back({std::string(c.name) + " extended", identity <= kEntrywiseTol && mixed && xOrthogonal,
                     "E'(rho x sigma) = E(rho) x |0><0| within " + fmt(identity) +
                         ", product inputs give mixed outputs, two-use code " +
                         (xOrthogonal ? "orthogonal" : "overlaps")});
  }
  return collect("alpha_local = 1 and C_local > 0 for every construction", std::move(lines));
}

Result criterion5() {
  Timer t;
  const MultiUserChannel e2 = tensorPower(makeE12(), 2);
  const auto d0 = teleportationDecode(applyToPure(e2, Ket::basis(Dims{2, 2}, 0)));
  const auto d1 = teleportationDecode(applyToPure(e2, Ket::basis(Dims{2, 2}, 1)));
  const double decodeError = std::max(std::abs(1.0 - d0.p0), std::abs(1.0 - d1.p1));
  const Operator resource = Operator::projector(alphaState());
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng = streamRng(73, k);
    const Operator rho = Operator::projector(randomKet(Dims{2}, rng));
    worst = std::max(worst, traceDistance(teleport(rho, resource), rho));
  }
  const double elapsed = t.seconds();
  return collect("E12 teleportation decoder",
                 {{"decoder", decodeError <= kTeleportTol,
                   "P(0 | |00>) = " + fmt(d0.p0) + ", P(1 | |01>) = " + fmt(d1.p1)},
                  {"identity", worst <= kTeleportTol, "max trace distance " + fmt(worst) + " over 100 states"},
                  {"runtime", elapsed < kBudgetTeleport, fmt(elapsed) + " s < " + fmt(kBudgetTeleport) + " s"}});
}

Result criterion6() {
  std::vector<Line> lines;
  const auto e21 = privacyCheck(makeE21(), 0, 1);
  lines.push_back({"e21 (A,B)", e21.privateBit,
                   "difference " + fmt(e21.outputDifference) + ", overlaps " + fmt(e21.overlapI) + ", " +
                       fmt(e21.overlapJ)});
  for (std::size_t m : {3, 4}) {
    const MultiUserChannel e = makeEm1(m);
    bool all = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const auto r = privacyCheck(e, i, j);
        all = all && r.privateBit;
        worst = std::max({worst, r.outputDifference, r.overlapI, r.overlapJ});
      }
    }
    lines.push_back({"em1:" + std::to_string(m), all && worst <= kEntrywiseTol, "all sender pairs, worst " + fmt(worst)});
  }
  const auto x = privacyCheck(extendTrivialParties(makeE21(), Dims{2}, Dims{}), 0, 2);
  lines.push_back({"extended e21 (A,C)", !x.privateBit,
                   std::string("property ") + (x.privateBit ? "kept" : "lost") + " as expected, difference " +
                       fmt(x.outputDifference)});
  return collect("private bit from any one sender", std::move(lines));
}

Result criterion7() {
  Timer t;
  const Subspace s0 = e21Span().subspace();
  GapOptions opts;
  opts.threads = threads();
  opts.ce = ceOptions();
  const GapReport g = additivityGapAtZero(s0, opts);

  // Independent check of the single-use rank criterion on qubit pairs: a
  // rank-deficient output occurs exactly when S^perp holds a product vector.
  std::size_t agree = 0;
  constexpr std::size_t kOracleCases = 12;
  for (std::uint64_t k = 0; k < kOracleCases; ++k) {
    Rng rng = streamRng(79, k);
    std::normal_distribution<double> gauss;
    std::vector<Ket> v;
    for (std::size_t i = 0; i < 1 + k % 3; ++i) {
      Vector a(4);
      for (auto& z : a) z = gauss(rng);
      v.emplace_back(Dims{2, 2}, a);
    }
    const Subspace s = buildSubspace(Dims{2, 2}, v);
    const bool product = gridOracleProductSearch(complement(s), 400) > 1.0 - 1e-3;
    const auto r = minOutputRankSearch(makeCJChannel(s), {}, RankSearchOptions{.restarts = 40, .seed = k});
    agree += (r.bestRank < 2) == product ? 1 : 0;
  }
  const double elapsed = t.seconds();

  Result res;
  res.summary = "p = 0 additivity gap for the subspace channel of E21's S0";
  res.lines.push_back(
      {"7a r1 >= 2", g.r1Certified && g.r1LowerBound >= 2 && g.single.bestRank == g.r1LowerBound && agree == kOracleCases,
       "S1 " + toString(g.complementCertificate.verdict) + " (max overlap " +
           fmt(g.complementCertificate.maxOverlapFound) + ") so r1 = dB = " + std::to_string(g.r1LowerBound) +
           "; search found " + std::to_string(g.single.bestRank) + "; rank criterion matched the grid oracle on " +
           std::to_string(agree) + "/" + std::to_string(kOracleCases) + " cases"});
  res.lines.push_back(
      {"7b r2 = 1", g.pair.bestRank == 1,
       "best two-use rank " + std::to_string(g.pair.bestRank) + " (" + g.pair.source + ") after " +
           std::to_string(g.pair.seedsTried) + " seeds and " + std::to_string(g.pair.restarts) +
           " restarts; full-rank single-use outputs force every two-use output to rank >= dB = " +
           std::to_string(g.outputDimension)});
  res.lines.push_back({"7c verdict", g.verdict == GapVerdict::GapFound,
                       toString(g.verdict) + ": log2 r2 = " + fmt(g.log2r2) + " vs 2 log2 r1 = " + fmt(g.twiceLog2r1)});
  res.lines.push_back({"runtime", elapsed < kBudgetRenyi, fmt(elapsed) + " s < " + fmt(kBudgetRenyi) + " s"});

  const bool ok = std::all_of(res.lines.begin(), res.lines.end(), [](const Line& l) { return l.pass; });
  res.status = ok ? Status::Pass : Status::Fail;
  // The rank-1 witness search used its whole budget without success.
  if (g.pair.bestRank != 1 && res.lines[0].pass && res.lines[2].pass && res.lines[3].pass) {
    res.status = Status::Inconclusive;
  }
  return res;
}

Result criterion8() {
  std::vector<Line> lines;

  double identity = 0.0;
  Ket psi0 = Ket::zero(Dims{4, 4, 4, 4});
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      const std::vector<std::size_t> digits{a, b, a, b};
      psi0 = psi0 + Ket::basisDigits(Dims{4, 4, 4, 4}, digits);
    }
  }
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng = streamRng(83, k);
    const Operator r1 = randomHermitian(Dims{4, 4}, rng) + randomHermitian(Dims{4, 4}, rng) * Complex(0, 1);
    const Operator r2 = randomHermitian(Dims{4, 4}, rng) + randomHermitian(Dims{4, 4}, rng) * Complex(0, 1);
    const Complex lhs = psi0.inner(tensorProduct(r1, r2).apply(psi0));
    const Complex rhs = (transpose(r1) * r2).trace();
    identity = std::max(identity, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  lines.push_back({"<Psi0|R1 x R2|Psi0> = tr(R1^T R2)", identity <= kIdentityTol,
                   "100 random pairs, max relative error " + fmt(identity)});

  double idempotence = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    Rng rng = streamRng(89, k);
    const Dims dims{2 + k % 3, 2 + (k / 3) % 3};
    std::vector<Ket> v;
    for (std::size_t i = 0; i <= k % dimProduct(dims); ++i) v.push_back(randomKet(dims, rng));
    const Subspace sub = buildSubspace(dims, v);
    const Operator& p = sub.projector();
    idempotence = std::max({idempotence, maxAbsDiff(p * p, p), maxAbsDiff(p.adjoint(), p)});
  }
  for (const char* name : {"e21", "variant34", "em1:3", "em1:4"}) {
    const Builtin b = makeBuiltin(name);
    const Operator& p = b.channel.as<BinaryProjectivePayload>().s0.projector();
    idempotence = std::max(idempotence, maxAbsDiff(p * p, p));
  }
  lines.push_back({"projector idempotence", idempotence <= kProjectorTol, "max residual " + fmt(idempotence)});

  double tp = 0.0;
  bool states = true;
  const std::vector<MultiUserChannel> channels{makeE12(), makeE21(), makeVariant34(), makeEm1(3), makeEm1(4),
                                               extendTrivialParties(makeE21(), Dims{2}, Dims{2}),
                                               makeCJChannel(e21Span().subspace(), CJCompletion::Flag)};
  for (const MultiUserChannel& e : channels) {
    tp = std::max(tp, checkTracePreserving(e));
    for (std::uint64_t k = 0; k < 10; ++k) {
      Rng rng = streamRng(97, k);
      states = states && applyChannel(e, randomDensity(e.inputDims(), rng)).isDensity();
    }
  }
  lines.push_back({"trace preservation", tp <= kTraceTol && states,
                   "max residual " + fmt(tp) + ", outputs " + (states ? "valid states" : "invalid")});

  bool monotone = true;
  double additivity = 0.0;
  const std::vector<double> orders{0.0, 0.5, 1.0, 2.0, 5.0, kInfinity};
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng = streamRng(101, k);
    const Operator rho = randomDensity(Dims{2 + k % 3}, rng);
    const Operator sigma = randomDensity(Dims{2}, rng);
    double previous = kInfinity;
    for (double p : orders) {
      const double s = renyiEntropy(rho, p);
      monotone = monotone && s <= previous + 1e-12;
      previous = s;
      additivity = std::max(additivity, std::abs(renyiEntropy(tensorProduct(rho, sigma), p) - s -
                                                 renyiEntropy(sigma, p)));
    }
  }
  lines.push_back({"Renyi monotone in p", monotone, "100 random states"});
  lines.push_back({"Renyi additive on products", additivity <= kRenyiTol, "max error " + fmt(additivity)});
  return collect("module invariants on random inputs", std::move(lines));
}

const std::vector<std::function<Result()>> kCriteria{criterion1, criterion2, criterion3, criterion4,
                                                     criterion5, criterion6, criterion7, criterion8};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::size_t only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  int exitCode = 0;
  for (std::size_t i = 1; i <= kCriteria.size(); ++i) {
    if (only != 0 && only != i) continue;
    Result r;
    try {
      r = kCriteria[i - 1]();
    } catch (const std::exception& e) {
      r.status = Status::Fail;
      r.summary = std::string("exception: ") + e.what();
    }
    const char* word = r.status == Status::Pass ? "PASS" : "FAIL";
    std::cout << "criterion " << i << ": " << word;
    if (r.status == Status::Inconclusive) std::cout << " (inconclusive)";
    std::cout << "  " << r.summary << "\n";
    for (const Line& l : r.lines) {
      std::cout << "    " << (l.pass ? "pass" : "FAIL") << "  " << l.label << ": " << l.detail << "\n";
    }
    if (r.status == Status::Fail) exitCode = 1;
    if (r.status == Status::Inconclusive && exitCode == 0) exitCode = 2;
  }
  return exitCode;
}
