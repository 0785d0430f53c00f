#include "qzero/channel.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qzero {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Rows of x are indexed (l, b, r) with b in [0, din); returns rows (l, o, r)
// of (I_left x K x I_right) x.
Matrix leftApplyBlock(const Matrix& k, const Matrix& x, std::size_t left, std::size_t right) {
  const std::size_t din = static_cast<std::size_t>(k.cols());
  const std::size_t dout = static_cast<std::size_t>(k.rows());
  Matrix out = Matrix::Zero(idx(left * dout * right), x.cols());
  for (std::size_t l = 0; l < left; ++l) {
    for (std::size_t o = 0; o < dout; ++o) {
      for (std::size_t b = 0; b < din; ++b) {
        const Complex kob = k(idx(o), idx(b));
        if (kob == Complex(0.0)) continue;
        for (std::size_t r = 0; r < right; ++r) {
          out.row(idx((l * dout + o) * right + r)) += kob * x.row(idx((l * din + b) * right + r));
        }
      }
    }
  }
  return out;
}

// sum_K (I x K x I) x (I x K x I)^dagger
Matrix applyKrausOnBlock(const std::vector<Operator>& ops, const Matrix& x, std::size_t left, std::size_t right) {
  Matrix out;
  for (const Operator& op : ops) {
    const Matrix y = leftApplyBlock(op.matrix(), x, left, right);
    const Matrix z = leftApplyBlock(op.matrix(), y.adjoint(), left, right).adjoint();
    if (out.size() == 0) {
      out = z;
    } else {
      out += z;
    }
  }
  return out;
}

Ket zeroKet(const Dims& dims) { return Ket::basis(dims, 0); }

}  // namespace

std::string toString(ChannelKind k) {
  switch (k) {
    case ChannelKind::ClassicalQuantum:
      return "cq";
    case ChannelKind::BinaryProjective:
      return "binary-projective";
    case ChannelKind::Kraus:
      return "kraus";
    case ChannelKind::SubspaceCJ:
      return "subspace-cj";
    case ChannelKind::Product:
      return "product";
  }
  return "unknown";
}

std::string toString(KrausFlag f) {
  switch (f) {
    case KrausFlag::TracePreserving:
      return "trace-preserving";
    case KrausFlag::TraceNonIncreasing:
      return "trace-non-increasing";
    case KrausFlag::UnnormalizedCP:
      return "unnormalized-CP";
  }
  return "unknown";
}

MultiUserChannel::MultiUserChannel(std::string name, Dims inputDims, Dims outputDims, Partition senders,
                                   Partition receivers, Payload payload)
    : name_(std::move(name)),
      inputDims_(std::move(inputDims)),
      outputDims_(std::move(outputDims)),
      senders_(std::move(senders)),
      receivers_(std::move(receivers)),
      payload_(std::move(payload)) {
  auto checkPartition = [](const Partition& p, std::size_t n, const char* what) {
    std::vector<int> seen(n, 0);
    for (const auto& group : p) {
      for (std::size_t f : group) {
        if (f >= n) throw std::invalid_argument(std::string("MultiUserChannel: ") + what + " factor out of range");
        ++seen[f];
      }
    }
    if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
      throw std::invalid_argument(std::string("MultiUserChannel: ") + what + " partition must cover each factor once");
    }
  };
  checkPartition(senders_, inputDims_.size(), "sender");
  checkPartition(receivers_, outputDims_.size(), "receiver");
}

ChannelKind MultiUserChannel::kind() const {
  return std::visit(Overloaded{[](const CQPayload&) { return ChannelKind::ClassicalQuantum; },
                               [](const BinaryProjectivePayload&) { return ChannelKind::BinaryProjective; },
                               [](const KrausPayload&) { return ChannelKind::Kraus; },
                               [](const SubspaceCJPayload&) { return ChannelKind::SubspaceCJ; },
                               [](const ProductPayload&) { return ChannelKind::Product; }},
                    payload_);
}

Dims MultiUserChannel::senderDims() const {
  Dims out;
  for (const auto& g : senders_) {
    std::size_t d = 1;
    for (std::size_t f : g) d *= inputDims_[f];
    out.push_back(d);
  }
  return out;
}

Dims MultiUserChannel::receiverDims() const {
  Dims out;
  for (const auto& g : receivers_) {
    std::size_t d = 1;
    for (std::size_t f : g) d *= outputDims_[f];
    out.push_back(d);
  }
  return out;
}

bool MultiUserChannel::acceptsUnnormalizedInput() const {
  return std::visit(Overloaded{[](const KrausPayload& p) { return p.flag == KrausFlag::UnnormalizedCP; },
                               [](const SubspaceCJPayload& p) { return p.flag == KrausFlag::UnnormalizedCP; },
                               [](const ProductPayload& p) {
                                 return std::any_of(p.factors.begin(), p.factors.end(), [](const auto& f) {
                                   return f->acceptsUnnormalizedInput();
                                 });
                               },
                               [](const auto&) { return false; }},
                    payload_);
}

Partition singletonPartition(std::size_t n) {
  Partition p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = {i};
  return p;
}

MultiUserChannel makeKrausChannel(std::string name, Dims inputDims, Dims outputDims, std::vector<Operator> ops,
                                  KrausFlag flag) {
  const std::size_t din = dimProduct(inputDims);
  const std::size_t dout = dimProduct(outputDims);
  for (auto& op : ops) {
    if (op.cols() != din || op.rows() != dout) throw std::invalid_argument("makeKrausChannel: Kraus operator shape");
    op = Operator(outputDims, inputDims, op.matrix());
  }
  const std::size_t ns = inputDims.size();
  const std::size_t nr = outputDims.size();
  return MultiUserChannel(std::move(name), std::move(inputDims), std::move(outputDims), singletonPartition(ns),
                          singletonPartition(nr), KrausPayload{std::move(ops), flag});
}

MultiUserChannel makeCQChannel(std::string name, Dims inputDims, Dims outputDims,
                               std::vector<std::pair<std::size_t, Operator>> outputs) {
  const std::size_t din = dimProduct(inputDims);
  const std::size_t dout = dimProduct(outputDims);
  for (auto& [k, rho] : outputs) {
    if (k >= din) throw std::invalid_argument("makeCQChannel: input index out of range");
    if (rho.rows() != dout || !rho.isSquare()) throw std::invalid_argument("makeCQChannel: output state shape");
    if (!rho.isDensity(1e-9, 1e-9)) throw std::invalid_argument("makeCQChannel: output is not a density operator");
    rho = Operator(outputDims, rho.matrix());
  }
  const std::size_t ns = inputDims.size();
  const std::size_t nr = outputDims.size();
  return MultiUserChannel(std::move(name), std::move(inputDims), std::move(outputDims), singletonPartition(ns),
                          singletonPartition(nr), CQPayload{std::move(outputs)});
}

MultiUserChannel makeBinaryProjectiveChannel(std::string name, const Subspace& s0) {
  Subspace s1 = complement(s0);
  const Dims& dims = s0.dims();
  BinaryProjectivePayload payload{s0, std::move(s1), Ket::basis(Dims{2}, 0), Ket::basis(Dims{2}, 1)};
  return MultiUserChannel(std::move(name), dims, Dims{2}, singletonPartition(dims.size()), singletonPartition(1),
                          std::move(payload));
}

MultiUserChannel identityChannel(std::size_t d) {
  return makeKrausChannel("id" + std::to_string(d), Dims{d}, Dims{d}, {Operator::identity(Dims{d})});
}

MultiUserChannel completelyDepolarizing(std::size_t d) {
  std::vector<Operator> ops;
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ops.push_back(Operator::outer(Ket::basis(Dims{d}, i), Ket::basis(Dims{d}, j)) * s);
    }
  }
  return makeKrausChannel("depolarize" + std::to_string(d), Dims{d}, Dims{d}, std::move(ops));
}

std::vector<Operator> toKraus(const MultiUserChannel& e) {
  const Dims& in = e.inputDims();
  const Dims& out = e.outputDims();
  return std::visit(
      Overloaded{
          [&](const CQPayload& p) {
            std::vector<Operator> ops;
            for (const auto& [k, rho] : p.outputs) {
              const auto eig = hermitianEigen(rho);
              for (std::size_t i = 0; i < eig.values.size(); ++i) {
                if (eig.values[i] <= 1e-14) continue;
                const Ket v(out, eig.vectors[i].amplitudes());
                ops.push_back(Operator::outer(v, Ket::basis(in, k)) * std::sqrt(eig.values[i]));
              }
            }
            return ops;
          },
          [&](const BinaryProjectivePayload& p) {
            std::vector<Operator> ops;
            for (const Ket& b : p.s0.basis()) ops.push_back(Operator::outer(Ket(out, p.out0.amplitudes()), b));
            for (const Ket& b : p.s1.basis()) ops.push_back(Operator::outer(Ket(out, p.out1.amplitudes()), b));
            return ops;
          },
          [&](const KrausPayload& p) { return p.ops; },
          [&](const SubspaceCJPayload& p) { return p.ops; },
          [&](const ProductPayload& p) {
            std::vector<Operator> ops{Operator::identity(Dims{})};
            for (const auto& f : p.factors) {
              const auto fk = toKraus(*f);
              std::vector<Operator> next;
              next.reserve(ops.size() * fk.size());
              for (const Operator& a : ops) {
                for (const Operator& b : fk) next.push_back(tensorProduct(a, b));
              }
              ops = std::move(next);
            }
            for (auto& op : ops) op = Operator(out, in, op.matrix());
            return ops;
          }},
      e.payload());
}

Matrix applyLinear(const MultiUserChannel& e, const Matrix& x) {
  if (static_cast<std::size_t>(x.rows()) != e.inputDimension() || x.rows() != x.cols()) {
    throw std::invalid_argument("applyChannel: input dimension mismatch for " + e.name());
  }
  return std::visit(
      Overloaded{
          [&](const CQPayload& p) {
            const auto n = idx(e.outputDimension());
            Matrix out = Matrix::Zero(n, n);
            for (const auto& [k, rho] : p.outputs) out += x(idx(k), idx(k)) * rho.matrix();
            return out;
          },
          [&](const BinaryProjectivePayload& p) {
            const Complex t0 = (p.s0.projector().matrix().cwiseProduct(x.transpose())).sum();
            const Complex t1 = (p.s1.projector().matrix().cwiseProduct(x.transpose())).sum();
            return Matrix(t0 * p.out0.amplitudes() * p.out0.amplitudes().adjoint() +
                          t1 * p.out1.amplitudes() * p.out1.amplitudes().adjoint());
          },
          [&](const KrausPayload& p) { return applyKrausOnBlock(p.ops, x, 1, 1); },
          [&](const SubspaceCJPayload& p) { return applyKrausOnBlock(p.ops, x, 1, 1); },
          [&](const ProductPayload& p) {
            Matrix cur = x;
            std::size_t doneOut = 1;
            std::size_t remainingIn = e.inputDimension();
            for (const auto& f : p.factors) {
              remainingIn /= f->inputDimension();
              cur = applyKrausOnBlock(toKraus(*f), cur, doneOut, remainingIn);
              doneOut *= f->outputDimension();
            }
            return cur;
          }},
      e.payload());
}

Operator applyChannel(const MultiUserChannel& e, const Operator& rho) {
  if (rho.rows() != e.inputDimension() || !rho.isSquare()) {
    throw std::invalid_argument("applyChannel: input dimension mismatch for " + e.name());
  }
  if (!rho.isHermitian(1e-9)) throw std::invalid_argument("applyChannel: input is not Hermitian");
  if (!e.acceptsUnnormalizedInput() && std::abs(rho.trace() - 1.0) > 1e-9) {
    throw std::invalid_argument("applyChannel: input trace differs from 1");
  }
  const auto ev = hermitianEigenvalues(rho);
  if (ev.back() < -1e-8) throw std::invalid_argument("applyChannel: input has a negative eigenvalue");
  Matrix out = applyLinear(e, rho.matrix());
  out = 0.5 * (out + out.adjoint()).eval();
  return Operator(e.outputDims(), std::move(out));
}

Operator applyToPure(const MultiUserChannel& e, const Ket& psi) {
  if (psi.size() != e.inputDimension()) throw std::invalid_argument("applyToPure: input dimension mismatch");
  const auto n = idx(e.outputDimension());
  if (e.kind() == ChannelKind::BinaryProjective || e.kind() == ChannelKind::ClassicalQuantum) {
    const Matrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
    return Operator(e.outputDims(), applyLinear(e, rho));
  }
  std::vector<Vector> images{psi.amplitudes()};
  if (e.kind() == ChannelKind::Product) {
    std::size_t doneOut = 1;
    std::size_t remainingIn = e.inputDimension();
    for (const auto& f : e.as<ProductPayload>().factors) {
      remainingIn /= f->inputDimension();
      const auto ops = toKraus(*f);
      std::vector<Vector> next;
      next.reserve(images.size() * ops.size());
      for (const Vector& v : images) {
        for (const Operator& op : ops) {
          Matrix img = leftApplyBlock(op.matrix(), v, doneOut, remainingIn);
          if (img.norm() > 1e-300) next.emplace_back(img.col(0));
        }
      }
      images = std::move(next);
      doneOut *= f->outputDimension();
    }
  } else {
    std::vector<Vector> next;
    for (const Operator& op : toKraus(e)) next.emplace_back(op.matrix() * psi.amplitudes());
    images = std::move(next);
  }
  Matrix out = Matrix::Zero(n, n);
  for (const Vector& v : images) out.noalias() += v * v.adjoint();
  return Operator(e.outputDims(), std::move(out));
}

namespace {

MultiUserChannel compose(std::string name, const std::vector<std::shared_ptr<const MultiUserChannel>>& factors,
                         bool mergeParties) {
  Dims in;
  Dims out;
  Partition senders;
  Partition receivers;
  std::size_t inOffset = 0;
  std::size_t outOffset = 0;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const auto& f = *factors[j];
    in.insert(in.end(), f.inputDims().begin(), f.inputDims().end());
    out.insert(out.end(), f.outputDims().begin(), f.outputDims().end());
    for (std::size_t p = 0; p < f.numSenders(); ++p) {
      std::vector<std::size_t> shifted;
      for (std::size_t x : f.senderPartition()[p]) shifted.push_back(x + inOffset);
      if (mergeParties && j > 0) {
        senders[p].insert(senders[p].end(), shifted.begin(), shifted.end());
      } else {
        senders.push_back(std::move(shifted));
      }
    }
    for (std::size_t p = 0; p < f.numReceivers(); ++p) {
      std::vector<std::size_t> shifted;
      for (std::size_t x : f.receiverPartition()[p]) shifted.push_back(x + outOffset);
      if (mergeParties && j > 0) {
        receivers[p].insert(receivers[p].end(), shifted.begin(), shifted.end());
      } else {
        receivers.push_back(std::move(shifted));
      }
    }
    inOffset += f.inputDims().size();
    outOffset += f.outputDims().size();
  }
  return MultiUserChannel(std::move(name), std::move(in), std::move(out), std::move(senders), std::move(receivers),
                          ProductPayload{factors});
}

}  // namespace

MultiUserChannel tensorPower(const MultiUserChannel& e, std::size_t k) {
  if (k == 0) throw std::invalid_argument("tensorPower: k must be positive");
  if (k == 1) return e;
  auto shared = std::make_shared<const MultiUserChannel>(e);
  std::vector<std::shared_ptr<const MultiUserChannel>> factors(k, shared);
  return compose(e.name() + "^" + std::to_string(k), factors, true);
}

MultiUserChannel tensorProduct(const MultiUserChannel& e, const MultiUserChannel& f) {
  return compose(e.name() + "*" + f.name(),
                 {std::make_shared<const MultiUserChannel>(e), std::make_shared<const MultiUserChannel>(f)}, false);
}

MultiUserChannel makeCJChannel(const Subspace& s, CJCompletion completion) {
  if (s.dims().size() != 2) throw std::invalid_argument("makeCJChannel: subspace must be bipartite");
  if (s.dimension() == 0) throw std::invalid_argument("makeCJChannel: empty subspace");
  const std::size_t dA = s.dims()[0];
  const std::size_t dB = s.dims()[1];
  std::vector<Operator> ops;
  Matrix m = Matrix::Zero(idx(dA), idx(dA));
  for (const Ket& e : s.basis()) {
    ops.push_back(ketToMatrix(e, dA, dB));
    m += ops.back().matrix().adjoint() * ops.back().matrix();
  }
  const double lambda = hermitianEigenvalues(Operator(Dims{dA}, m)).front();
  const double scale = 1.0 / std::sqrt(lambda);
  for (auto& op : ops) op = op * scale;
  m *= scale * scale;

  SubspaceCJPayload payload;
  payload.subspace = s;
  payload.scale = scale;
  if (completion == CJCompletion::None) {
    payload.ops = std::move(ops);
    payload.flag = KrausFlag::UnnormalizedCP;
    return MultiUserChannel("cj", Dims{dA}, Dims{dB}, singletonPartition(1), singletonPartition(1),
                            std::move(payload));
  }
  // Pad every Kraus operator with a zero flag row and route I - sum K^dagger K
  // to the flag level |dB>.
  const std::size_t dOut = dB + 1;
  for (auto& op : ops) {
    Matrix padded = Matrix::Zero(idx(dOut), idx(dA));
    padded.topRows(idx(dB)) = op.matrix();
    payload.ops.emplace_back(Dims{dOut}, Dims{dA}, std::move(padded));
  }
  Matrix rest = Matrix::Identity(idx(dA), idx(dA)) - m;
  rest = 0.5 * (rest + rest.adjoint()).eval();
  const auto eig = hermitianEigen(Operator(Dims{dA}, rest));
  for (std::size_t j = 0; j < eig.values.size(); ++j) {
    if (eig.values[j] <= 1e-14) continue;
    Matrix k = Matrix::Zero(idx(dOut), idx(dA));
    k.row(idx(dB)) = std::sqrt(eig.values[j]) * eig.vectors[j].amplitudes().adjoint();
    payload.ops.emplace_back(Dims{dOut}, Dims{dA}, std::move(k));
  }
  payload.flagCompletion = true;
  payload.flag = KrausFlag::TracePreserving;
  return MultiUserChannel("cj+flag", Dims{dA}, Dims{dOut}, singletonPartition(1), singletonPartition(1),
                          std::move(payload));
}

Operator choiMatrix(const MultiUserChannel& e) {
  const std::size_t din = e.inputDimension();
  const std::size_t dout = e.outputDimension();
  const auto n = idx(dout * din);
  Matrix j = Matrix::Zero(n, n);
  for (const Operator& k : toKraus(e)) {
    Vector v(n);
    for (std::size_t o = 0; o < dout; ++o) {
      for (std::size_t a = 0; a < din; ++a) v(idx(o * din + a)) = k(o, a);
    }
    j.noalias() += v * v.adjoint();
  }
  return Operator(concat(e.outputDims(), e.inputDims()), std::move(j));
}

MultiUserChannel extendTrivialParties(const MultiUserChannel& e, const Dims& extraSenders,
                                      const Dims& extraReceivers) {
  const Dims in = concat(e.inputDims(), extraSenders);
  const Dims out = concat(e.outputDims(), extraReceivers);
  Partition senders = e.senderPartition();
  for (std::size_t i = 0; i < extraSenders.size(); ++i) senders.push_back({e.inputDims().size() + i});
  Partition receivers = e.receiverPartition();
  for (std::size_t i = 0; i < extraReceivers.size(); ++i) receivers.push_back({e.outputDims().size() + i});
  const std::size_t de = dimProduct(extraSenders);
  const Ket flag0 = zeroKet(extraReceivers);
  const Operator flagState = Operator::projector(flag0);
  const std::string name = e.name() + "+trivial";

  MultiUserChannel::Payload payload = std::visit(
      Overloaded{
          [&](const CQPayload& p) -> MultiUserChannel::Payload {
            CQPayload q;
            for (const auto& [k, rho] : p.outputs) {
              for (std::size_t j = 0; j < de; ++j) q.outputs.emplace_back(k * de + j, tensorProduct(rho, flagState));
            }
            return q;
          },
          [&](const BinaryProjectivePayload& p) -> MultiUserChannel::Payload {
            const Subspace extra(extraSenders.empty() ? Dims{} : extraSenders, [&] {
              std::vector<Ket> b;
              for (std::size_t j = 0; j < de; ++j) b.push_back(Ket::basis(extraSenders, j));
              return b;
            }());
            BinaryProjectivePayload q{tensorProduct(p.s0, extra), tensorProduct(p.s1, extra),
                                      tensorProduct(p.out0, flag0), tensorProduct(p.out1, flag0)};
            return q;
          },
          [&](const auto& p) -> MultiUserChannel::Payload {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, ProductPayload>) {
              throw std::invalid_argument("extendTrivialParties: extend a single use, then take powers");
            } else {
              KrausPayload q;
              q.flag = p.flag;
              for (const Operator& k : p.ops) {
                for (std::size_t j = 0; j < de; ++j) {
                  const Operator ext = Operator::outer(flag0, Ket::basis(extraSenders, j));
                  q.ops.push_back(tensorProduct(k, ext));
                }
              }
              return q;
            }
          }},
      e.payload());
  return MultiUserChannel(name, in, out, std::move(senders), std::move(receivers), std::move(payload));
}

double checkTracePreserving(const MultiUserChannel& e) {
  return std::visit(
      Overloaded{[&](const CQPayload& p) {
                   double r = 0.0;
                   std::vector<bool> covered(e.inputDimension(), false);
                   for (const auto& [k, rho] : p.outputs) {
                     r = std::max(r, std::abs(rho.trace() - 1.0));
                     covered[k] = true;
                   }
                   if (std::find(covered.begin(), covered.end(), false) != covered.end()) r = std::max(r, 1.0);
                   return r;
                 },
                 [&](const BinaryProjectivePayload& p) {
                   const Operator sum = p.s0.projector() + p.s1.projector();
                   return maxAbsDiff(sum, Operator::identity(e.inputDims()));
                 },
                 [&](const ProductPayload& p) {
                   double r = 0.0;
                   for (const auto& f : p.factors) r = std::max(r, checkTracePreserving(*f));
                   return r;
                 },
                 [&](const auto& p) {
                   const auto n = idx(e.inputDimension());
                   Matrix s = Matrix::Zero(n, n);
                   for (const Operator& k : p.ops) s += k.matrix().adjoint() * k.matrix();
                   return maxAbs(s - Matrix::Identity(n, n));
                 }},
      e.payload());
}

}  // namespace qzero
