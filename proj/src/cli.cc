#include "qzero/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qzero/constructions.h"
#include "qzero/protocol.h"
#include "qzero/renyi.h"
#include "qzero/report.h"
#include "qzero/spec_file.h"

namespace qzero {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kSuites{"properties", "ce", "two-use", "teleport", "privacy", "renyi"};

constexpr double kEntrywiseTol = 1e-10;

struct ChannelOptions {
  std::string builtin;
  std::string spec;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t restarts = 1000;
  std::size_t budget = 5000;
  unsigned threads = 1;
};

struct VerifyOptions {
  ChannelOptions channel;
  std::string suites = "all";
  std::string slots;
};

std::uint64_t defaultSeed() {
  if (const char* env = std::getenv("QZERO_SEED")) {
    const std::string s(env);
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos && s.size() < 20) {
      return std::stoull(s);
    }
  }
  return 1;
}

Builtin loadChannel(const ChannelOptions& o) {
  if (o.builtin.empty() == o.spec.empty()) throw UsageError("exactly one of --builtin and --spec is required");
  if (!o.builtin.empty()) {
    try {
      return makeBuiltin(o.builtin);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return loadChannelSpecFile(o.spec);
}

std::string partyName(std::size_t p) { return std::string(1, static_cast<char>('A' + p)); }

std::string slotName(std::size_t slot, std::size_t parties) {
  return slot < parties ? partyName(slot) : partyName(slot - parties) + "'";
}

std::vector<std::string> splitList(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::set<std::string> parseSuites(const std::string& list) {
  std::set<std::string> out;
  for (const auto& s : splitList(list)) {
    if (s == "all") {
      out.insert(kSuites.begin(), kSuites.end());
    } else if (std::find(kSuites.begin(), kSuites.end(), s) != kSuites.end()) {
      out.insert(s);
    } else {
      throw UsageError("unknown suite '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("no suite selected");
  return out;
}

std::vector<std::size_t> parseSlots(const std::string& list, std::size_t parties) {
  std::vector<std::size_t> out;
  if (list.empty()) {
    for (std::size_t p = 0; p < parties; ++p) out.push_back(p);
    return out;
  }
  for (const auto& s : splitList(list)) {
    if (s.size() != 1 || s[0] < 'A' || static_cast<std::size_t>(s[0] - 'A') >= parties) {
      throw UsageError("slot '" + s + "' does not name a sender (A.." + partyName(parties - 1) + ")");
    }
    const std::size_t p = static_cast<std::size_t>(s[0] - 'A');
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string renameSlots(std::string name, std::size_t parties) {
  for (std::size_t p = 0; p < parties; ++p) {
    const std::string from = "[slot " + std::to_string(p) + "]";
    const auto pos = name.find(from);
    if (pos != std::string::npos) name.replace(pos, from.size(), "[" + partyName(p) + "]");
  }
  return name;
}

Verdict ceVerdict(const CECertificate& c) {
  switch (c.verdict) {
    case CEVerdict::CertifiedCE:
      return Verdict::Pass;
    case CEVerdict::ProductStateFound:
      return Verdict::Fail;
    case CEVerdict::Inconclusive:
      return Verdict::Inconclusive;
  }
  return Verdict::Inconclusive;
}

Json ceJson(const CECertificate& c) {
  Json j = Json::object();
  j["verdict"] = toString(c.verdict);
  j["maxOverlapFound"] = c.maxOverlapFound;
  j["restarts"] = c.restarts;
  j["converged"] = c.converged;
  j["seed"] = c.seed;
  Json factors = Json::array();
  for (const Ket& f : c.witness.factors) factors.push_back(ketJson(f));
  j["witness"] = std::move(factors);
  return j;
}

Json rankJson(const RankSearchResult& r) {
  Json j = Json::object();
  j["bestRank"] = r.bestRank;
  j["source"] = r.source;
  j["threshold"] = r.threshold;
  j["seedsTried"] = r.seedsTried;
  j["restarts"] = r.restarts;
  j["rngSeed"] = r.rngSeed;
  j["spectrum"] = spectrumJson(r.spectrum);
  j["achiever"] = ketJson(r.achiever);
  return j;
}

CEOptions ceOptions(const ChannelOptions& o) {
  CEOptions ce;
  ce.restarts = o.restarts;
  ce.minRestarts = std::min<std::size_t>(ce.minRestarts, o.restarts);
  ce.seed = o.seed;
  ce.threads = o.threads;
  return ce;
}

Operator diagonalState(std::initializer_list<double> diag) {
  std::vector<double> d(diag);
  return Operator::diagonal(Dims{2, 2}, d);
}

void addNotApplicable(Report& rep, const std::string& suite, const std::string& why) {
  rep.addInfo(suite, "suite not applicable to this channel", why);
}

// ---------------------------------------------------------------------------
// Binary-projective channels.

void binaryProperties(Report& rep, const Builtin& b, const std::vector<std::size_t>& parties) {
  const auto& p = b.channel.as<BinaryProjectivePayload>();
  const Dims& dims = p.s0.dims();
  rep.addResidual("trace preservation", "P0 + P1 = I", checkTracePreserving(b.channel), 1e-9);
  Json dimsValue = Json::object();
  dimsValue["S0"] = p.s0.dimension();
  dimsValue["S1"] = p.s1.dimension();
  rep.addInfo("subspace dimensions", "dim S0 + dim S1 = input dimension", dimsValue);

  const std::string claim = "P_l = P_l^T and P_l = U^i P_lbar U^i, hence P_l^T P_lbar = P_l^T U^i P_l U^i = 0";
  std::map<std::size_t, Operator> localU;
  for (std::size_t q : parties) localU.emplace(q, phaseFlip(dims[q]));
  for (const auto& c : checkSymmetryProperties(p.s0, p.s1, localU).checks) {
    rep.addResidual("float: " + renameSlots(c.name, dims.size()), claim, c.residual, kSymmetryTol);
  }
  if (b.s0) {
    const ExactMatrix p0 = b.s0->projector();
    const ExactMatrix p1 = ExactMatrix::identity(p0.rows()) - p0;
    std::map<std::size_t, ExactMatrix> exactU;
    for (std::size_t q : parties) exactU.emplace(q, exactPhaseFlip(dims[q]));
    for (const auto& c : checkSymmetryPropertiesExact(p0, p1, dims, exactU)) {
      rep.addFlag("exact: " + renameSlots(c.name, dims.size()), claim, c.exactlyZero, c.exactlyZero ? "zero" : "nonzero");
    }
  }
}

void binaryCE(Report& rep, const Builtin& b, const ChannelOptions& o) {
  const auto cert = certifyAlphaLocalOne(b.channel, ceOptions(o));
  const double threshold = 1.0 - ceOptions(o).gap;
  rep.add({"S0 completely entangled", "S0 contains no product vector", ceJson(cert.s0), threshold, ceVerdict(cert.s0)});
  rep.add({"S1 completely entangled", "S1 contains no product vector", ceJson(cert.s1), threshold, ceVerdict(cert.s1)});
  Verdict v = cert.certified ? Verdict::Pass : Verdict::Fail;
  if (!cert.certified && ceVerdict(cert.s0) != Verdict::Fail && ceVerdict(cert.s1) != Verdict::Fail) {
    v = Verdict::Inconclusive;
  }
  rep.add({"alpha_local = 1", "a single use cannot carry one bit with zero error", cert.reasoning, std::nullopt, v});
}

void binaryTwoUse(Report& rep, const Builtin& b, const std::vector<std::size_t>& parties) {
  const MultiUserChannel& e = b.channel;
  const std::size_t n = e.inputDims().size();
  const MultiUserChannel twice = tensorPower(e, 2);
  const Operator expected0 = diagonalState({0.5, 0.0, 0.0, 0.5});
  const Operator expected1 = diagonalState({0.0, 0.5, 0.5, 0.0});
  const Operator out0 = applyToPure(twice, twoUseReference(e));
  rep.addResidual("two-use output on Psi0", "E^{x2}(Psi0) = (|00><00| + |11><11|)/2",
                  maxAbsDiff(Operator(Dims{2, 2}, out0.matrix()), expected0), kEntrywiseTol);
  bool allOrthogonal = true;
  for (std::size_t q : parties) {
    for (std::size_t slot : {q, q + n}) {
      const std::string tag = " [" + slotName(slot, n) + "]";
      const CodeBook code = buildTwoUseCode(e, slot);
      bool local = true;
      for (const Ket& x : code.inputs) local = local && checkLocalPreparability(x, code.senderPartition);
      rep.addFlag("local preparability" + tag, "each codeword is a product across the senders", local, local);
      const Operator out1 = applyToPure(twice, code.inputs[1]);
      rep.addResidual("two-use output on U Psi0" + tag, "E^{x2}(U^i Psi0) = (|01><01| + |10><10|)/2",
                      maxAbsDiff(Operator(Dims{2, 2}, out1.matrix()), expected1), kEntrywiseTol);
      const auto cert = verifyOrthogonalOutputs(twice, code);
      rep.addResidual("orthogonal outputs" + tag, "tr(E^{x2}(Psi0) E^{x2}(U^i Psi0)) = 0", cert.maxOffDiagonal,
                      kEntrywiseTol);
      allOrthogonal = allOrthogonal && cert.maxOffDiagonal <= kEntrywiseTol;
    }
  }
  Json bound = Json::object();
  bound["uses"] = 2;
  bound["distinguishable"] = 2;
  bound["rate"] = capacityLowerBound(2, 2);
  rep.addFlag("capacity lower bound", "C_local >= log2(2)/2 = 0.5", allOrthogonal, bound);
}

void binaryPrivacy(Report& rep, const Builtin& b, const std::vector<std::size_t>& parties) {
  if (parties.size() < 2) {
    addNotApplicable(rep, "privacy", "fewer than two senders selected");
    return;
  }
  for (std::size_t i = 0; i < parties.size(); ++i) {
    for (std::size_t j = i + 1; j < parties.size(); ++j) {
      const auto r = privacyCheck(b.channel, parties[i], parties[j]);
      Json v = Json::object();
      v["outputDifference"] = r.outputDifference;
      v["overlapI"] = r.overlapI;
      v["overlapJ"] = r.overlapJ;
      rep.add({"privacy [" + partyName(parties[i]) + "," + partyName(parties[j]) + "]",
               "E^{x2}(U^i Psi0) = E^{x2}(U^j Psi0), both orthogonal to E^{x2}(Psi0)", v, kOrthogonalityTol,
               r.privateBit ? Verdict::Pass : Verdict::Fail});
    }
  }
}

void addGapRecords(Report& rep, const GapReport& g, bool verifySuite) {
  Json single = rankJson(g.single);
  single["lowerBound"] = g.r1LowerBound;
  single["certified"] = g.r1Certified;
  single["complementCertificate"] = ceJson(g.complementCertificate);
  const bool r1Ok = g.r1Certified && g.single.bestRank == g.r1LowerBound;
  rep.add({"single-use minimum output rank", "r1 = dB: S^perp contains no product vector", single, std::nullopt,
           r1Ok ? Verdict::Pass : Verdict::Inconclusive});
  Json pair = rankJson(g.pair);
  pair["lowerBound"] = g.r2LowerBound;
  if (g.pairComplementCertificate) pair["complementCertificate"] = ceJson(*g.pairComplementCertificate);
  rep.addInfo("two-use minimum output rank", "smallest two-use output rank found", pair);
  Json v = Json::object();
  v["verdict"] = toString(g.verdict);
  v["log2r2"] = g.log2r2;
  v["twiceLog2r1"] = g.twiceLog2r1;
  Verdict verdict = Verdict::Inconclusive;
  if (g.verdict == GapVerdict::GapFound) verdict = Verdict::Pass;
  if (g.verdict == GapVerdict::NoGap) verdict = verifySuite ? Verdict::Fail : Verdict::Pass;
  rep.add({"p=0 additivity", "S_min^(0)(E^{x2}) < 2 S_min^(0)(E)", v, std::nullopt, verdict});
}

GapOptions gapOptions(const ChannelOptions& o) {
  GapOptions g;
  g.pairRestarts = o.budget;
  g.seed = o.seed;
  g.threads = o.threads;
  g.ce = ceOptions(o);
  return g;
}

void binaryRenyi(Report& rep, const Builtin& b, const ChannelOptions& o) {
  const auto& s0 = b.channel.as<BinaryProjectivePayload>().s0;
  if (s0.dims().size() != 2) {
    addNotApplicable(rep, "renyi", "the construction needs a bipartite S0");
    return;
  }
  if (!s0.isReal()) {
    rep.add({"renyi", "real basis required", "S0 has non-real coefficients", std::nullopt, Verdict::Fail});
    return;
  }
  addGapRecords(rep, additivityGapAtZero(s0, gapOptions(o)), true);
}

// ---------------------------------------------------------------------------
// cq channels (E12).

bool isQubitToTwoQubits(const MultiUserChannel& e) {
  return e.inputDimension() == 2 && e.outputDims() == Dims{2, 2} && e.numReceivers() == 2;
}

void cqProperties(Report& rep, const Builtin& b) {
  rep.addResidual("trace preservation", "every rho_k has unit trace", checkTracePreserving(b.channel), 1e-9);
  const auto& outputs = b.channel.as<CQPayload>().outputs;
  if (outputs.size() == 2) {
    rep.addResidual("orthogonal outputs", "tr(rho0 rho1) = 0", std::abs(traceOverlap(outputs[0].second, outputs[1].second)),
                    kEntrywiseTol);
  }
  for (const auto& [k, rho] : outputs) rep.addInfo("spectrum of rho_" + std::to_string(k), "", spectrumJson(hermitianEigenvalues(rho)));
}

void cqTwoUse(Report& rep, const Builtin& b, bool teleportSuite, bool twoUseSuite, std::uint64_t seed) {
  if (!isQubitToTwoQubits(b.channel)) {
    addNotApplicable(rep, teleportSuite ? "teleport" : "two-use", "expects one input qubit and two output qubits");
    return;
  }
  const MultiUserChannel twice = tensorPower(b.channel, 2);
  CodeBook code;
  code.channelId = b.channel.name();
  code.uses = 2;
  code.dims = Dims{2, 2};
  code.inputs = {Ket::basis(Dims{2, 2}, 0), Ket::basis(Dims{2, 2}, 1)};
  code.senderPartition = {{0, 1}};
  const auto cert = verifyOrthogonalOutputs(twice, code);
  const Operator out00 = applyToPure(twice, code.inputs[0]);
  const Operator out01 = applyToPure(twice, code.inputs[1]);
  const auto d0 = teleportationDecode(out00);
  const auto d1 = teleportationDecode(out01);
  const double error = std::max(std::abs(1.0 - d0.p0), std::abs(1.0 - d1.p1));
  if (twoUseSuite) {
    rep.addResidual("orthogonal outputs", "tr(E^{x2}(|00><00|) E^{x2}(|01><01|)) = 0", cert.maxOffDiagonal,
                    kEntrywiseTol);
    Json bound = Json::object();
    bound["uses"] = 2;
    bound["distinguishable"] = 2;
    bound["rate"] = capacityLowerBound(2, 2);
    bound["decoder"] = toString(error <= kEntrywiseTol ? Decoder::TeleportationLOCC : Decoder::None);
    rep.addFlag("capacity lower bound", "C_local >= 0.5 via the teleportation decoder",
                cert.orthogonal && error <= kEntrywiseTol, bound);
    rep.addInfo("alpha_local = 1", "rho0 and rho1 are not LOCC-distinguishable",
                "assumed external fact; not verified by this tool");
  }
  if (teleportSuite) {
    Json v = Json::object();
    v["p0 on |00>"] = d0.p0;
    v["p1 on |01>"] = d1.p1;
    rep.addResidual("teleportation decoder", "P(correct) = 1 for both codewords", error, kEntrywiseTol);
    if (d0.resourceWarning || d1.resourceWarning) {
      rep.addInfo("teleportation resource", "use-1 marginal equals rho0",
                  std::max(d0.resourceDeviation, d1.resourceDeviation));
    }
    double worst = 0.0;
    const Operator resource = Operator::projector(alphaState());
    for (std::size_t k = 0; k < 100; ++k) {
      Rng rng = streamRng(seed, k);
      const Operator rho = Operator::projector(randomKet(Dims{2}, rng));
      worst = std::max(worst, traceDistance(teleport(rho, resource), rho));
    }
    rep.addResidual("teleportation identity", "teleport(rho) = rho on 100 random qubit states", worst, kEntrywiseTol);
  }
}

// ---------------------------------------------------------------------------

int runVerify(const VerifyOptions& o, std::ostream& out) {
  const Builtin b = loadChannel(o.channel);
  const auto suites = parseSuites(o.suites);
  Report rep("verify", b.name, o.channel.seed);
  const bool binary = b.channel.kind() == ChannelKind::BinaryProjective;
  const std::vector<std::size_t> parties = parseSlots(o.slots, b.channel.inputDims().size());
  for (const std::string& suite : kSuites) {
    if (!suites.count(suite)) continue;
    if (binary) {
      if (suite == "properties") binaryProperties(rep, b, parties);
      if (suite == "ce") binaryCE(rep, b, o.channel);
      if (suite == "two-use") binaryTwoUse(rep, b, parties);
      if (suite == "teleport") addNotApplicable(rep, suite, "the teleportation decoder applies to two receivers");
      if (suite == "privacy") binaryPrivacy(rep, b, parties);
      if (suite == "renyi") binaryRenyi(rep, b, o.channel);
    } else {
      if (suite == "properties") cqProperties(rep, b);
      if (suite == "ce") addNotApplicable(rep, suite, "completely entangled subspaces apply to binary-projective channels");
      if (suite == "two-use") cqTwoUse(rep, b, false, true, o.channel.seed);
      if (suite == "teleport") cqTwoUse(rep, b, true, false, o.channel.seed);
      if (suite == "privacy") addNotApplicable(rep, suite, "a single sender");
      if (suite == "renyi") addNotApplicable(rep, suite, "needs a bipartite subspace");
    }
  }
  const std::string json = rep.toJson();
  if (o.channel.out.empty()) {
    out << json;
  } else {
    std::ofstream f(o.channel.out);
    if (!f) throw UsageError("cannot write '" + o.channel.out + "'");
    f << json;
    out << "overall: " << toString(rep.overall()) << "\n";
  }
  return rep.exitCode();
}

int runRenyiGap(const ChannelOptions& o, std::ostream& out) {
  const Builtin b = loadChannel(o);
  if (b.channel.kind() != ChannelKind::BinaryProjective) {
    throw UsageError("renyi-gap needs a subspace: use a binary-projective channel (its S0 is taken)");
  }
  const auto& s0 = b.channel.as<BinaryProjectivePayload>().s0;
  if (s0.dims().size() != 2) throw UsageError("renyi-gap needs a bipartite subspace (two sender dimensions)");
  GapReport g;
  try {
    g = additivityGapAtZero(s0, gapOptions(o));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Report rep("renyi-gap", b.name, o.seed);
  addGapRecords(rep, g, false);
  const std::string json = rep.toJson();
  if (o.out.empty()) {
    out << json;
  } else {
    std::ofstream f(o.out);
    if (!f) throw UsageError("cannot write '" + o.out + "'");
    f << json;
    out << "verdict: " << toString(g.verdict) << "\n";
  }
  return rep.exitCode();
}

void addChannelOptions(CLI::App* cmd, ChannelOptions& o) {
  cmd->add_option("--builtin", o.builtin, "e12, e21, em1:<m> or variant34");
  cmd->add_option("--spec", o.spec, "channel spec file (JSON)");
  cmd->add_option("--seed", o.seed, "RNG seed (default: $QZERO_SEED or 1)");
  cmd->add_option("--out", o.out, "write the JSON report to this path");
  cmd->add_option("--restarts", o.restarts, "seesaw restarts per product-state search")->check(CLI::PositiveNumber);
  cmd->add_option("--budget", o.budget, "random restarts of the two-use rank search");
  cmd->add_option("--threads", o.threads, "worker threads for restart loops")->check(CLI::PositiveNumber);
}

}  // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qzero: zero-error multi-user channel verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(QZERO_VERSION));

  VerifyOptions verify;
  verify.channel.seed = defaultSeed();
  auto* verifyCmd = app.add_subcommand("verify", "run verification suites on a channel");
  addChannelOptions(verifyCmd, verify.channel);
  verifyCmd->add_option("--suite", verify.suites, "all or a comma list of properties,ce,two-use,teleport,privacy,renyi");
  verifyCmd->add_option("--slots", verify.slots, "comma list of senders (A,B,...); default all");

  ChannelOptions gap;
  gap.seed = defaultSeed();
  auto* gapCmd = app.add_subcommand("renyi-gap", "minimum output rank of N and N x N for N built from S0");
  addChannelOptions(gapCmd, gap);

  std::string describeName;
  std::string format = "text";
  auto* describeCmd = app.add_subcommand("describe", "print a builtin channel");
  describeCmd->add_option("name", describeName, "builtin name")->required();
  describeCmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*verifyCmd) return runVerify(verify, out);
    if (*gapCmd) return runRenyiGap(gap, out);
    if (*describeCmd) {
      out << (format == "json" ? describeJson(describeName) : describeText(describeName));
      return kExitPass;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpecError& e) {
    err << "error: invalid channel spec: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qzero
