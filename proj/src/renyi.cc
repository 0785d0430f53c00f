#include "qzero/renyi.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "internal/parallel.h"

namespace qzero {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Kraus operators stacked vertically: rows (i, o) for operator i, output o.
struct StackedKraus {
  Matrix stack;
  std::size_t count = 0;
  std::size_t dout = 0;
  std::size_t din = 0;
  Matrix gram;  // sum_i K_i^dagger K_i

  explicit StackedKraus(const MultiUserChannel& e) {
    const auto ops = toKraus(e);
    count = ops.size();
    dout = e.outputDimension();
    din = e.inputDimension();
    stack = Matrix(idx(count * dout), idx(din));
    for (std::size_t i = 0; i < count; ++i) stack.middleRows(idx(i * dout), idx(dout)) = ops[i].matrix();
    gram = stack.adjoint() * stack;
  }

  // Columns K_i psi.
  Matrix images(const Vector& psi) const {
    const Vector flat = stack * psi;
    return Eigen::Map<const Matrix>(flat.data(), idx(dout), idx(count));
  }

  Matrix output(const Vector& psi) const {
    const Matrix v = images(psi);
    Matrix out = v * v.adjoint();
    return 0.5 * (out + out.adjoint());
  }
};

// Descending spectrum and eigenvectors (as columns, same order).
struct Spectrum {
  std::vector<double> values;
  Matrix vectors;
};

Spectrum spectrumOf(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  const auto n = m.rows();
  Spectrum s;
  s.values.resize(static_cast<std::size_t>(n));
  s.vectors = Matrix(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    s.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(n - 1 - k);
    s.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return s;
}

std::vector<double> normalizedSpectrum(const Matrix& out) {
  auto values = spectrumOf(out).values;
  double total = 0.0;
  for (double v : values) total += v;
  if (total <= 0.0) throw std::domain_error("channel output vanishes on the given input");
  for (double& v : values) v /= total;
  return values;
}

struct DescentResult {
  Vector psi;
  std::size_t rank = 0;
};

// Drives the output of psi to rank <= target; returns true on success with
// psi updated in place.
bool lowerRank(const StackedKraus& k, Vector& psi, std::size_t target, const RankSearchOptions& opts) {
  const auto dout = idx(k.dout);
  const Eigen::Index tail = dout - idx(target);
  const double ridge = 1e-12 * std::max(1.0, k.gram.trace().real());
  const Matrix b = k.gram + ridge * Matrix::Identity(k.gram.rows(), k.gram.cols());
  std::vector<double> history;
  Vector current = psi;
  for (std::size_t it = 0; it <= opts.maxIterations; ++it) {
    const Spectrum s = spectrumOf(k.output(current));
    if (numericalRank(s.values, opts.threshold) <= target) {
      psi = current;
      return true;
    }
    double total = 0.0;
    double weight = 0.0;
    for (std::size_t j = 0; j < s.values.size(); ++j) {
      total += s.values[j];
      if (idx(j) >= idx(target)) weight += std::max(0.0, s.values[j]);
    }
    const double f = weight / total;
    history.push_back(f);
    if (history.size() > 10 && f > history[history.size() - 11] * (1.0 - 1e-3)) return false;
    if (it == opts.maxIterations) return false;

    // A = sum_i K_i^dagger W W^dagger K_i for W the trailing eigenvectors.
    const Matrix w = s.vectors.rightCols(tail);
    Matrix a = Matrix::Zero(k.gram.rows(), k.gram.cols());
    for (std::size_t i = 0; i < k.count; ++i) {
      const Matrix proj = w.adjoint() * k.stack.middleRows(idx(i * k.dout), dout);
      a.noalias() += proj.adjoint() * proj;
    }
    a = 0.5 * (a + a.adjoint()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(a, b);
    if (solver.info() != Eigen::Success) return false;
    current = solver.eigenvectors().col(0).normalized();
  }
  return false;
}

DescentResult descend(const StackedKraus& k, Vector psi, const RankSearchOptions& opts) {
  DescentResult r;
  r.rank = numericalRank(spectrumOf(k.output(psi)).values, opts.threshold);
  r.psi = psi;
  while (r.rank > 1) {
    Vector trial = r.psi;
    if (!lowerRank(k, trial, r.rank - 1, opts)) break;
    r.psi = trial;
    r.rank = numericalRank(spectrumOf(k.output(trial)).values, opts.threshold);
  }
  return r;
}

// Nelder-Mead objective over (Re psi, Im psi).
struct RenyiObjective {
  const StackedKraus* kraus;
  double p;
};

Vector unpack(const gsl_vector* x, std::size_t din) {
  Vector psi(idx(din));
  for (std::size_t i = 0; i < din; ++i) psi(idx(i)) = Complex(gsl_vector_get(x, i), gsl_vector_get(x, i + din));
  return psi;
}

double renyiObjective(const gsl_vector* x, void* params) {
  const auto* obj = static_cast<const RenyiObjective*>(params);
  const Vector psi = unpack(x, obj->kraus->din);
  const double n = psi.norm();
  if (n < 1e-150) return 1e300;
  const Matrix out = obj->kraus->output(psi / n);
  const double t = out.trace().real();
  if (t <= 1e-300) return 1e300;
  auto values = spectrumOf(out).values;
  for (double& v : values) v /= t;
  return renyiEntropyOfSpectrum(values, obj->p);
}

}  // namespace

std::size_t numericalRank(const std::vector<double>& spectrum, double threshold) {
  if (spectrum.empty()) return 0;
  const double top = *std::max_element(spectrum.begin(), spectrum.end());
  if (top <= 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(spectrum.begin(), spectrum.end(), [&](double v) { return v > threshold * top; }));
}

double renyiEntropyOfSpectrum(const std::vector<double>& spectrum, double p) {
  if (std::isnan(p) || p < 0.0) throw std::invalid_argument("renyiEntropy: p must be non-negative");
  if (spectrum.empty()) throw std::invalid_argument("renyiEntropy: empty spectrum");
  const double top = *std::max_element(spectrum.begin(), spectrum.end());
  if (top <= 0.0) throw std::invalid_argument("renyiEntropy: spectrum has no positive weight");
  const double cut = kRankThreshold * top;
  if (p == 0.0) return std::log2(static_cast<double>(numericalRank(spectrum)));
  if (std::isinf(p)) return -std::log2(top);
  if (p == 1.0) {
    double h = 0.0;
    for (double v : spectrum) {
      if (v > cut) h -= v * std::log2(v);
    }
    return h;
  }
  double sum = 0.0;
  for (double v : spectrum) {
    if (v > cut) sum += std::pow(v, p);
  }
  return std::log2(sum) / (1.0 - p);
}

double renyiEntropy(const Operator& rho, double p) {
  if (std::isnan(p) || p < 0.0) throw std::invalid_argument("renyiEntropy: p must be non-negative");
  if (!rho.isSquare()) throw std::invalid_argument("renyiEntropy: operator must be square");
  if (std::abs(rho.trace() - 1.0) > 1e-9) throw std::invalid_argument("renyiEntropy: trace must be 1");
  const auto values = hermitianEigenvalues(rho);
  if (values.back() < -1e-8) throw std::invalid_argument("renyiEntropy: negative eigenvalue");
  return renyiEntropyOfSpectrum(values, p);
}

RankSearchResult minOutputRankSearch(const MultiUserChannel& e, const std::vector<Ket>& seeds,
                                     const RankSearchOptions& opts) {
  const StackedKraus kraus(e);
  for (const Ket& s : seeds) {
    if (s.size() != kraus.din) throw std::invalid_argument("minOutputRankSearch: seed dimension mismatch");
  }
  const std::size_t starts = seeds.size() + opts.restarts;
  if (starts == 0) throw std::invalid_argument("minOutputRankSearch: no seeds and no restarts");

  std::vector<DescentResult> results(starts);
  auto run = [&](std::size_t i) {
    Vector psi;
    if (i < seeds.size()) {
      psi = seeds[i].amplitudes().normalized();
    } else {
      Rng rng = streamRng(opts.seed, i - seeds.size());
      psi = randomKet(Dims{kraus.din}, rng).amplitudes();
    }
    results[i] = descend(kraus, psi, opts);
  };
  // Seeds run first so that a rank-1 hit skips the random phase.
  for (std::size_t i = 0; i < seeds.size(); ++i) run(i);
  std::size_t bestIndex = 0;
  for (std::size_t i = 1; i < seeds.size(); ++i) {
    if (results[i].rank < results[bestIndex].rank) bestIndex = i;
  }
  std::size_t randomRun = 0;
  if (seeds.empty() || results[bestIndex].rank > 1) {
    randomRun = opts.restarts;
    detail::parallelFor(opts.restarts, opts.threads, [&](std::size_t r) { run(seeds.size() + r); });
    for (std::size_t i = seeds.size(); i < starts; ++i) {
      if (seeds.empty() && i == 0) continue;
      if (results[i].rank < results[bestIndex].rank) bestIndex = i;
    }
  }

  RankSearchResult out;
  out.threshold = opts.threshold;
  out.seedsTried = seeds.size();
  out.restarts = randomRun;
  out.rngSeed = opts.seed;
  out.achiever = Ket(e.inputDims(), results[bestIndex].psi);
  out.spectrum = normalizedSpectrum(kraus.output(results[bestIndex].psi));
  out.bestRank = numericalRank(out.spectrum, opts.threshold);
  out.secondEigenvalue = out.spectrum.size() > 1 ? out.spectrum[1] / out.spectrum[0] : 0.0;
  out.source = bestIndex < seeds.size() ? "seed:" + std::to_string(bestIndex)
                                        : "restart:" + std::to_string(bestIndex - seeds.size());
  return out;
}

RenyiEstimate minOutputRenyi(const MultiUserChannel& e, double p, const RenyiOptions& opts) {
  if (std::isnan(p) || p < 0.0) throw std::invalid_argument("minOutputRenyi: p must be non-negative");
  RenyiEstimate est;
  est.p = p;
  est.seed = opts.seed;
  est.restarts = opts.restarts;
  if (p == 0.0) {
    RankSearchOptions ro;
    ro.restarts = std::max<std::size_t>(opts.restarts, 1);
    ro.seed = opts.seed;
    const auto r = minOutputRankSearch(e, {}, ro);
    est.value = std::log2(static_cast<double>(r.bestRank));
    est.achiever = r.achiever;
    est.outputSpectrum = r.spectrum;
    est.converged = true;
    return est;
  }
  if (opts.restarts == 0) throw std::invalid_argument("minOutputRenyi: restarts must be positive");

  const StackedKraus kraus(e);
  const std::size_t din = kraus.din;
  RenyiObjective objective{&kraus, p};
  gsl_multimin_function fn;
  fn.n = 2 * din;
  fn.f = &renyiObjective;
  fn.params = &objective;

  gsl_vector* x = gsl_vector_alloc(fn.n);
  gsl_vector* step = gsl_vector_alloc(fn.n);
  gsl_multimin_fminimizer* solver = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, fn.n);
  double best = kInfinity;
  Vector bestPsi;
  bool anyConverged = false;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    Rng rng = streamRng(opts.seed, r);
    const Ket start = randomKet(Dims{din}, rng);
    for (std::size_t i = 0; i < din; ++i) {
      gsl_vector_set(x, i, start[i].real());
      gsl_vector_set(x, i + din, start[i].imag());
    }
    gsl_vector_set_all(step, 0.25 / std::sqrt(static_cast<double>(din)));
    gsl_multimin_fminimizer_set(solver, &fn, x, step);
    bool converged = false;
    for (std::size_t it = 0; it < opts.maxIterations; ++it) {
      if (gsl_multimin_fminimizer_iterate(solver) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver), opts.tol) == GSL_SUCCESS) {
        converged = true;
        break;
      }
    }
    anyConverged = anyConverged || converged;
    const double value = gsl_multimin_fminimizer_minimum(solver);
    if (value < best) {
      best = value;
      bestPsi = unpack(gsl_multimin_fminimizer_x(solver), din).normalized();
    }
  }
  gsl_multimin_fminimizer_free(solver);
  gsl_vector_free(step);
  gsl_vector_free(x);

  est.achiever = Ket(e.inputDims(), bestPsi);
  est.outputSpectrum = normalizedSpectrum(kraus.output(bestPsi));
  est.value = renyiEntropyOfSpectrum(est.outputSpectrum, p);
  est.converged = anyConverged;
  return est;
}

std::string toString(GapVerdict v) {
  switch (v) {
    case GapVerdict::GapFound:
      return "gap-found";
    case GapVerdict::NoGap:
      return "no-gap";
    case GapVerdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::vector<Ket> structuredPairSeeds(std::size_t dA, const std::vector<Ket>& singleAchievers) {
  const Dims dims{dA, dA};
  const Ket phi = maximallyEntangled(dA);
  std::vector<double> flip(dA);
  for (std::size_t k = 0; k < dA; ++k) flip[k] = (k % 2 == 0) ? 1.0 : -1.0;
  const Operator u = Operator::diagonal(Dims{dA}, flip);
  std::vector<Ket> seeds{Ket(dims, phi.amplitudes())};
  seeds.push_back(embedLocalOperator(u, 0, dims).apply(seeds.front()));
  seeds.push_back(embedLocalOperator(u, 1, dims).apply(seeds.front()));
  for (const Ket& a : singleAchievers) {
    for (const Ket& b : singleAchievers) {
      seeds.push_back(Ket(dims, tensorProduct(Ket(Dims{dA}, a.amplitudes()), Ket(Dims{dA}, b.amplitudes()))
                                     .amplitudes()));
    }
  }
  return seeds;
}

GapReport additivityGapAtZero(const Subspace& s, const GapOptions& opts) {
  if (s.dims().size() != 2) throw std::invalid_argument("additivityGapAtZero: subspace must be bipartite");
  if (!s.isReal()) {
    throw std::invalid_argument(
        "additivityGapAtZero: basis has non-real coefficients; the p = 0 argument pairs the channel with its "
        "complex conjugate, so supply a real basis (or a subspace invariant under conjugation)");
  }
  const std::size_t dA = s.dims()[0];
  const std::size_t dB = s.dims()[1];
  const MultiUserChannel n = makeCJChannel(s, CJCompletion::None);

  GapReport rep;
  rep.outputDimension = dB;
  CEOptions ce = opts.ce;
  ce.seed = opts.seed;
  ce.threads = opts.threads;
  rep.complementCertificate = certifyCompletelyEntangled(complement(s), ce, "S^perp");
  rep.r1Certified = rep.complementCertificate.verdict == CEVerdict::CertifiedCE;
  rep.r1LowerBound = rep.r1Certified ? dB : 1;

  RankSearchOptions single;
  single.restarts = opts.singleRestarts;
  single.seed = opts.seed;
  single.threads = opts.threads;
  rep.single = minOutputRankSearch(n, {}, single);

  RankSearchOptions pair = single;
  pair.restarts = opts.pairRestarts;
  const MultiUserChannel nn = tensorPower(n, 2);
  rep.pair = minOutputRankSearch(nn, structuredPairSeeds(dA, {rep.single.achiever}), pair);

  rep.log2r2 = std::log2(static_cast<double>(rep.pair.bestRank));
  rep.twiceLog2r1 = 2.0 * std::log2(static_cast<double>(rep.r1LowerBound));
  if (rep.r1Certified && rep.single.bestRank < rep.r1LowerBound) {
    // The search contradicts the certificate; neither can be trusted.
    rep.verdict = GapVerdict::Inconclusive;
    return rep;
  }
  if (rep.log2r2 < rep.twiceLog2r1) {
    rep.verdict = GapVerdict::GapFound;
    return rep;
  }
  // A rank-1 single-use output pins r1 = 1, and r2 >= 1 always.
  if (rep.single.bestRank == 1) {
    rep.verdict = GapVerdict::NoGap;
    return rep;
  }
  // No gap is certain once every two-use output has full rank dB^2 >= r1^2.
  const std::vector<std::size_t> order{0, 2, 1, 3};
  std::vector<Ket> pairBasis;
  const Subspace twice = tensorProduct(s, s);
  for (const Ket& v : twice.basis()) {
    pairBasis.emplace_back(Dims{dA * dA, dB * dB}, permuteFactors(v, order).amplitudes());
  }
  const Subspace cut(Dims{dA * dA, dB * dB}, std::move(pairBasis));
  rep.pairComplementCertificate = certifyCompletelyEntangled(complement(cut), ce, "(S x S)^perp");
  if (rep.pairComplementCertificate->verdict == CEVerdict::CertifiedCE) rep.r2LowerBound = dB * dB;
  rep.verdict = rep.r2LowerBound == dB * dB ? GapVerdict::NoGap : GapVerdict::Inconclusive;
  return rep;
}

}  // namespace qzero
