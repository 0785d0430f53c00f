#include "qzero/subspace.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "internal/parallel.h"

namespace qzero {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Contracted operator for `slot`: M = sum_i w_i w_i^dagger where w_i is the
// basis vector e_i contracted with the conjugated factors on every other slot.
Matrix contractedOperator(const Subspace& s, const std::vector<Ket>& factors, std::size_t slot) {
  const Dims& dims = s.dims();
  const std::size_t n = s.ambientDimension();
  std::vector<Complex> weight(n);
  std::vector<std::size_t> slotDigit(n);
  std::vector<std::size_t> digits(dims.size(), 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    Complex w = 1.0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
      if (j != slot) w *= std::conj(factors[j][digits[j]]);
    }
    weight[flat] = w;
    slotDigit[flat] = digits[slot];
    for (std::size_t j = dims.size(); j-- > 0;) {
      if (++digits[j] < dims[j]) break;
      digits[j] = 0;
    }
  }
  const auto d = idx(dims[slot]);
  Matrix m = Matrix::Zero(d, d);
  Vector w(d);
  for (const Ket& e : s.basis()) {
    w.setZero();
    for (std::size_t flat = 0; flat < n; ++flat) w(idx(slotDigit[flat])) += e[flat] * weight[flat];
    m.noalias() += w * w.adjoint();
  }
  return m;
}

std::pair<double, Vector> leadingEigen(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  const auto last = solver.eigenvalues().size() - 1;
  return {solver.eigenvalues()(last), solver.eigenvectors().col(last)};
}

double leadingEigenvalue(const Matrix& m) {
  if (m.rows() == 2) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double b = std::abs(m(0, 1));
    return 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

std::vector<Ket> randomFactors(const Dims& dims, Rng& rng) {
  std::vector<Ket> f;
  f.reserve(dims.size());
  for (std::size_t d : dims) f.push_back(randomKet(Dims{d}, rng));
  return f;
}

// All gauge-fixed grid kets of dimension d.
std::vector<Vector> gridKets(std::size_t d, std::size_t resolution) {
  const std::size_t params = d - 1;
  std::vector<double> angles(resolution);
  std::vector<double> phases(resolution);
  for (std::size_t k = 0; k < resolution; ++k) {
    angles[k] = (std::numbers::pi / 2) * static_cast<double>(k) / static_cast<double>(resolution - 1);
    phases[k] = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(resolution);
  }
  std::size_t total = 1;
  for (std::size_t p = 0; p < 2 * params; ++p) total *= resolution;
  std::vector<Vector> out;
  out.reserve(total);
  std::vector<std::size_t> counter(2 * params, 0);
  for (std::size_t t = 0; t < total; ++t) {
    Vector v(idx(d));
    double sinProd = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      double mag = sinProd;
      if (k < params) {
        mag *= std::cos(angles[counter[k]]);
        sinProd *= std::sin(angles[counter[k]]);
      }
      const double phase = (k == 0) ? 0.0 : phases[counter[params + k - 1]];
      v(idx(k)) = std::polar(mag, phase);
    }
    out.push_back(std::move(v));
    for (std::size_t j = counter.size(); j-- > 0;) {
      if (++counter[j] < resolution) break;
      counter[j] = 0;
    }
  }
  return out;
}

}  // namespace

Subspace::Subspace(Dims dims, std::vector<Ket> orthonormalBasis)
    : dims_(std::move(dims)), basis_(std::move(orthonormalBasis)) {
  const auto n = idx(dimProduct(dims_));
  Matrix p = Matrix::Zero(n, n);
  for (const Ket& e : basis_) {
    if (e.dims() != dims_) throw std::invalid_argument("Subspace: basis vector has wrong factor dimensions");
    p += e.amplitudes() * e.amplitudes().adjoint();
  }
  projector_ = Operator(dims_, std::move(p));
}

bool Subspace::isReal(double tol) const {
  for (const Ket& e : basis_) {
    if (e.size() > 0 && e.amplitudes().imag().cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

Subspace buildSubspace(const Dims& dims, std::span<const Ket> spanning) {
  const std::size_t n = dimProduct(dims);
  for (const Ket& v : spanning) {
    if (v.size() != n) throw std::invalid_argument("buildSubspace: spanning vector has inconsistent length");
  }
  std::vector<Ket> relabeled;
  relabeled.reserve(spanning.size());
  for (const Ket& v : spanning) relabeled.emplace_back(dims, v.amplitudes());
  return Subspace(dims, gramSchmidt(relabeled));
}

Subspace complement(const Subspace& s) {
  const Operator q = Operator::identity(s.dims()) - s.projector();
  const auto eig = hermitianEigen(q);
  std::vector<Ket> basis;
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] > 0.5) basis.push_back(eig.vectors[i]);
  }
  // Re-orthonormalize against the exact eigen output to keep kZeroTol margins.
  return Subspace(s.dims(), gramSchmidt(basis));
}

Subspace tensorProduct(const Subspace& a, const Subspace& b) {
  std::vector<Ket> basis;
  basis.reserve(a.dimension() * b.dimension());
  for (const Ket& x : a.basis()) {
    for (const Ket& y : b.basis()) basis.push_back(tensorProduct(x, y));
  }
  return Subspace(concat(a.dims(), b.dims()), std::move(basis));
}

Ket ProductStateCandidate::product() const { return tensorProduct(std::span<const Ket>(factors)); }

double productOverlap(const Subspace& s, std::span<const Ket> factors) {
  if (factors.size() != s.dims().size()) throw std::invalid_argument("productOverlap: one factor per party required");
  const Ket x = tensorProduct(factors);
  double total = 0.0;
  for (const Ket& e : s.basis()) total += std::norm(e.inner(x));
  return total;
}

SeesawRun seesawRestart(const Subspace& s, std::vector<Ket> factors, const SeesawOptions& opts) {
  const Dims& dims = s.dims();
  if (factors.size() != dims.size()) throw std::invalid_argument("seesawRestart: one factor per party required");
  SeesawRun run;
  double previous = productOverlap(s, factors);
  for (std::size_t sweep = 0; sweep < opts.maxSweeps; ++sweep) {
    double value = previous;
    for (std::size_t slot = 0; slot < dims.size(); ++slot) {
      auto [lambda, vec] = leadingEigen(contractedOperator(s, factors, slot));
      factors[slot] = Ket(Dims{dims[slot]}, vec.normalized());
      value = lambda;
    }
    run.objectives.push_back(value);
    const double improvement = value - previous;
    previous = value;
    if (improvement < opts.tol) {
      run.converged = true;
      break;
    }
  }
  run.best.overlap = std::clamp(productOverlap(s, factors), 0.0, 1.0);
  run.best.factors = std::move(factors);
  return run;
}

ProductSearchResult maxProductOverlap(const Subspace& s, const SeesawOptions& opts) {
  if (opts.restarts == 0) throw std::invalid_argument("maxProductOverlap: restarts must be positive");
  ProductSearchResult result;
  result.seed = opts.seed;
  result.restarts = opts.restarts;
  if (s.dimension() == 0) {
    Rng rng = streamRng(opts.seed, 0);
    result.best.factors = randomFactors(s.dims(), rng);
    result.best.overlap = 0.0;
    result.convergedRestarts = opts.restarts;
    return result;
  }
  std::vector<SeesawRun> runs(opts.restarts);
  detail::parallelFor(opts.restarts, opts.threads, [&](std::size_t r) {
    Rng rng = streamRng(opts.seed, r);
    runs[r] = seesawRestart(s, randomFactors(s.dims(), rng), opts);
  });
  std::size_t bestIndex = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].best.overlap > runs[bestIndex].best.overlap) bestIndex = r;
    if (runs[r].converged) ++result.convergedRestarts;
    for (std::size_t k = 1; k < runs[r].objectives.size(); ++k) {
      if (runs[r].objectives[k] < runs[r].objectives[k - 1] - 1e-12) result.monotone = false;
    }
  }
  result.best = runs[bestIndex].best;
  return result;
}

std::string toString(CEVerdict v) {
  switch (v) {
    case CEVerdict::CertifiedCE:
      return "certified-CE";
    case CEVerdict::ProductStateFound:
      return "product-state-found";
    case CEVerdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

CECertificate certifyCompletelyEntangled(const Subspace& s, const CEOptions& opts, std::string id) {
  if (opts.restarts == 0) throw std::invalid_argument("certifyCompletelyEntangled: restarts must be positive");
  SeesawOptions so;
  so.restarts = opts.restarts;
  so.seed = opts.seed;
  so.threads = opts.threads;
  so.maxSweeps = opts.maxSweeps;
  so.tol = opts.tol;
  const auto search = maxProductOverlap(s, so);
  CECertificate cert;
  cert.subspaceId = std::move(id);
  cert.maxOverlapFound = search.best.overlap;
  cert.witness = search.best;
  cert.restarts = search.restarts;
  cert.converged = search.convergedRestarts > 0;
  cert.seed = opts.seed;
  cert.gap = opts.gap;
  if (cert.maxOverlapFound >= kProductFoundThreshold) {
    cert.verdict = CEVerdict::ProductStateFound;
  } else if (cert.restarts >= opts.minRestarts && cert.maxOverlapFound <= 1.0 - opts.gap) {
    cert.verdict = CEVerdict::CertifiedCE;
  } else {
    cert.verdict = CEVerdict::Inconclusive;
  }
  return cert;
}

std::size_t productManifoldParameters(const Dims& dims) {
  std::size_t p = 0;
  for (std::size_t d : dims) p += 2 * (d - 1);
  return p;
}

double gridOracleProductSearch(const Subspace& s, std::size_t resolution, const GridOptions& opts) {
  if (resolution < 2) throw std::invalid_argument("gridOracleProductSearch: resolution must be at least 2");
  if (s.dimension() == 0) return 0.0;
  const Dims& dims = s.dims();
  const std::size_t parties = dims.size();
  const std::size_t elim = static_cast<std::size_t>(
      std::distance(dims.begin(), std::max_element(dims.begin(), dims.end())));

  std::vector<std::size_t> order;
  Dims gridDims;
  for (std::size_t j = 0; j < parties; ++j) {
    if (j != elim) {
      order.push_back(j);
      gridDims.push_back(dims[j]);
    }
  }
  order.push_back(elim);

  double evaluations = 1.0;
  for (std::size_t d : gridDims) evaluations *= std::pow(static_cast<double>(resolution), 2.0 * static_cast<double>(d - 1));
  if (evaluations > static_cast<double>(opts.maxEvaluations)) {
    throw std::invalid_argument("gridOracleProductSearch: grid too large for this resolution (" +
                                std::to_string(productManifoldParameters(dims)) +
                                " parameters); lower the resolution or use maxProductOverlap");
  }

  // Bcat(rest, i*de + x) = e_i(rest, x) with the eliminated party last.
  const std::size_t de = dims[elim];
  const std::size_t rest = s.ambientDimension() / de;
  const std::size_t r = s.dimension();
  Matrix bcat(idx(rest), idx(r * de));
  for (std::size_t i = 0; i < r; ++i) {
    const Ket e = permuteFactors(s.basis()[i], order);
    for (std::size_t a = 0; a < rest; ++a) {
      for (std::size_t x = 0; x < de; ++x) bcat(idx(a), idx(i * de + x)) = e[a * de + x];
    }
  }

  std::vector<std::vector<Vector>> grids;
  for (std::size_t d : gridDims) grids.push_back(gridKets(d, resolution));

  double best = 0.0;
  Matrix c(idx(r), idx(de));
  auto evaluate = [&](const Matrix& row) {
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t x = 0; x < de; ++x) c(idx(i), idx(x)) = row(0, idx(i * de + x));
    }
    best = std::max(best, leadingEigenvalue(c.adjoint() * c));
  };
  auto recurse = [&](auto&& self, std::size_t level, const Matrix& t) -> void {
    if (level == grids.size()) {
      evaluate(t);
      return;
    }
    const std::size_t d = gridDims[level];
    const Eigen::Index block = t.rows() / idx(d);
    Matrix next(block, t.cols());
    for (const Vector& f : grids[level]) {
      next.setZero();
      for (std::size_t x = 0; x < d; ++x) {
        if (f(idx(x)) != Complex(0.0)) next += std::conj(f(idx(x))) * t.middleRows(idx(x) * block, block);
      }
      self(self, level + 1, next);
    }
  };
  recurse(recurse, 0, bcat);
  return std::min(best, 1.0);
}

bool SymmetryReport::allPassed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SymmetryCheck& c) { return c.passed; });
}

double SymmetryReport::maxResidual() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.residual);
  return m;
}

SymmetryReport checkSymmetryProperties(const Subspace& s0, const Subspace& s1,
                                       const std::map<std::size_t, Operator>& localU,
                                       const SymmetryToggles& toggles) {
  if (s0.dims() != s1.dims()) throw std::invalid_argument("checkSymmetryProperties: subspace dimensions differ");
  const Dims& dims = s0.dims();
  const Operator* p[2] = {&s0.projector(), &s1.projector()};
  SymmetryReport report;
  auto add = [&](std::string name, double residual) {
    report.checks.push_back({std::move(name), residual, residual <= kSymmetryTol});
  };
  for (int l = 0; l < 2; ++l) {
    const std::string pl = "P" + std::to_string(l);
    const std::string pb = "P" + std::to_string(1 - l);
    const Operator& P = *p[l];
    const Operator& Pbar = *p[1 - l];
    const Operator Pt = transpose(P);
    if (toggles.transposeInvariance) add(pl + " = " + pl + "^T", maxAbsDiff(P, Pt));
    if (toggles.transposeOrthogonality) add(pl + "^T " + pb + " = 0", maxAbs((Pt * Pbar).matrix()));
    for (const auto& [slot, u] : localU) {
      const Operator U = embedLocalOperator(u, slot, dims);
      const std::string tag = " [slot " + std::to_string(slot) + "]";
      if (toggles.conjugationSwap) add(pl + " = U " + pb + " U" + tag, maxAbsDiff(P, U * Pbar * U));
      if (toggles.conjugatedOrthogonality) add(pl + "^T U " + pl + " U = 0" + tag, maxAbs((Pt * U * P * U).matrix()));
    }
  }
  return report;
}

std::vector<ExactSymmetryCheck> checkSymmetryPropertiesExact(const ExactMatrix& p0, const ExactMatrix& p1,
                                                             const Dims& dims,
                                                             const std::map<std::size_t, ExactMatrix>& localU,
                                                             const SymmetryToggles& toggles) {
  const std::size_t n = dimProduct(dims);
  if (p0.rows() != n || p1.rows() != n) throw std::invalid_argument("checkSymmetryPropertiesExact: dimension mismatch");
  const ExactMatrix* p[2] = {&p0, &p1};
  std::vector<ExactSymmetryCheck> out;
  for (int l = 0; l < 2; ++l) {
    const std::string pl = "P" + std::to_string(l);
    const std::string pb = "P" + std::to_string(1 - l);
    const ExactMatrix& P = *p[l];
    const ExactMatrix& Pbar = *p[1 - l];
    const ExactMatrix Pt = P.transpose();
    if (toggles.transposeInvariance) out.push_back({pl + " = " + pl + "^T", (P - Pt).isZero()});
    if (toggles.transposeOrthogonality) out.push_back({pl + "^T " + pb + " = 0", (Pt * Pbar).isZero()});
    for (const auto& [slot, u] : localU) {
      const ExactMatrix U = exactEmbedLocal(u, slot, dims);
      const std::string tag = " [slot " + std::to_string(slot) + "]";
      if (toggles.conjugationSwap) out.push_back({pl + " = U " + pb + " U" + tag, (P - U * Pbar * U).isZero()});
      if (toggles.conjugatedOrthogonality) {
        out.push_back({pl + "^T U " + pl + " U = 0" + tag, (Pt * U * P * U).isZero()});
      }
    }
  }
  return out;
}

}  // namespace qzero
