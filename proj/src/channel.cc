// Copyright 2026 The entbuffer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "entbuffer/channel.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entbuffer {

namespace {

void check_buffer_state(const DensityMatrix& rho, const BufferSystem& sys) {
  if (rho.n_qubits() != sys.buffer_qubits()) {
    throw std::invalid_argument("buffer state has " + std::to_string(rho.n_qubits()) +
                                " qubits, system expects " + std::to_string(sys.buffer_qubits()));
  }
}

}  // namespace

Eigen::Vector4cd bell_state(int j) {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  switch (j) {
    case 1: v(0) = r; v(3) = r; break;
    case 2: v(0) = r; v(3) = -r; break;
    // |01> has the first qubit 0 and the second 1, local index 2.
    case 3: v(2) = r; v(1) = r; break;
    case 4: v(2) = r; v(1) = -r; break;
    default: throw std::invalid_argument("Bell index must be 1..4");
  }
  return v;
}

double KrausSet::completeness_residual() const {
  ComplexMatrix sum = ComplexMatrix::Zero(ops[0].cols(), ops[0].cols());
  for (const auto& m : ops) sum += m.adjoint() * m;
  return (sum - ComplexMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

ComplexMatrix KrausSet::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& m : ops) out += m * rho * m.adjoint();
  return out;
}

// ---------------------------------------------------------------------------
// CachingChannel

CachingChannel::CachingChannel(const BufferSystem& sys, const SwapParams& params, LossMask mask)
    : sys_(sys), params_(params), mask_(mask) {
  const int k = sys.k();
  const Eigen::Index dk = sys.side_dim();
  const ComplexMatrix side = side_unitary(k, params);
  // block(s, t) = <s| U_side |t> on the source qubit, a dk x dk operator.
  auto block = [&](int s, int t) -> ComplexMatrix { return side.block(s * dk, t * dk, dk, dk); };

  const double r = 1.0 / std::numbers::sqrt2;
  for (int sa = 0; sa < 2; ++sa) {
    for (int sb = 0; sb < 2; ++sb) {
      auto& terms = terms_[sa + 2 * sb];
      // |psi1> = (|00> + |11>)/sqrt2: sum over the shared source value t.
      for (int t = 0; t < 2; ++t) {
        if (!mask.arrived_a && sa != t) continue;
        if (!mask.arrived_b && sb != t) continue;
        KronTerm term{r, {}, {}};
        if (mask.arrived_a) term.side_a = block(sa, t);
        if (mask.arrived_b) term.side_b = block(sb, t);
        terms.push_back(std::move(term));
      }
    }
  }
}

ComplexMatrix CachingChannel::apply_terms(const std::vector<KronTerm>& terms,
                                          const ComplexMatrix& in) const {
  const Eigen::Index dk = sys_.side_dim();
  const Eigen::Index cols = in.cols();
  ComplexMatrix out = ComplexMatrix::Zero(in.rows(), cols);
  ComplexMatrix tmp(in.rows(), cols);
  ComplexMatrix scratch(dk, dk);
  for (const auto& term : terms) {
    // Row index of `in` is a + dk*b: viewed column-major as a dk x (dk*cols)
    // matrix the side-A factor is a single product.
    if (term.side_a.size() != 0) {
      Eigen::Map<const ComplexMatrix> src(in.data(), dk, dk * cols);
      Eigen::Map<ComplexMatrix> dst(tmp.data(), dk, dk * cols);
      dst.noalias() = term.side_a * src;
    } else {
      tmp = in;
    }
    if (term.side_b.size() != 0) {
      const ComplexMatrix bt = term.side_b.transpose();
      for (Eigen::Index c = 0; c < cols; ++c) {
        Eigen::Map<ComplexMatrix> col(tmp.col(c).data(), dk, dk);
        scratch.noalias() = col * bt;
        col = scratch;
      }
    }
    out += term.coef * tmp;
  }
  return out;
}

ComplexMatrix CachingChannel::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != sys_.buffer_dim() || rho.cols() != sys_.buffer_dim()) {
    throw std::invalid_argument("CachingChannel::apply: dimension mismatch");
  }
  if (mask_ == LossMask::none()) return rho;
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& terms : terms_) {
    if (terms.empty()) continue;
    const ComplexMatrix left = apply_terms(terms, rho);                  // M rho
    const ComplexMatrix both = apply_terms(terms, left.adjoint());       // M (M rho)^dagger
    out += both.adjoint();                                               // M rho M^dagger
  }
  return out;
}

DensityMatrix CachingChannel::apply(const DensityMatrix& rho) const {
  check_buffer_state(rho, sys_);
  if (mask_ == LossMask::none()) return rho;
  return DensityMatrix(hermitian_part(apply(rho.mat())), rho.ordering());
}

std::array<ComplexMatrix, 4> CachingChannel::kraus_operators() const {
  const Eigen::Index dk = sys_.side_dim();
  const ComplexMatrix id = ComplexMatrix::Identity(dk, dk);
  std::array<ComplexMatrix, 4> ops;
  for (int s = 0; s < 4; ++s) {
    ops[s] = ComplexMatrix::Zero(sys_.buffer_dim(), sys_.buffer_dim());
    for (const auto& term : terms_[s]) {
      const ComplexMatrix& a = term.side_a.size() ? term.side_a : id;
      const ComplexMatrix& b = term.side_b.size() ? term.side_b : id;
      ops[s] += term.coef * tensor(a, b);
    }
  }
  return ops;
}

// ---------------------------------------------------------------------------

DensityMatrix apply_channel(const DensityMatrix& rho, const BufferSystem& sys,
                            const SwapParams& params, LossMask mask) {
  check_buffer_state(rho, sys);
  if (mask == LossMask::none()) return rho;
  const Eigen::Vector4cd src = bell_state(1);
  const ComplexMatrix source = src * src.adjoint();
  const ComplexMatrix joint = tensor(rho.mat(), source);
  const ComplexMatrix u = caching_unitary(sys, params, mask);
  const ComplexMatrix evolved = hermitian_part(u * joint * u.adjoint());

  std::vector<int> keep(sys.buffer_qubits());
  for (int p = 0; p < sys.buffer_qubits(); ++p) keep[p] = p;
  const DensityMatrix full(evolved, sys.ordering());
  const DensityMatrix reduced = partial_trace(full, keep);
  return DensityMatrix(reduced.mat(), rho.ordering());
}

KrausSet kraus_k1(const SwapParams& params) {
  const BufferSystem sys(1);
  const ComplexMatrix u = caching_unitary(sys, params);
  // Combined index = buffer + 4 * source, source index = a + 2b.
  const Eigen::Vector4cd in = bell_state(1);
  KrausSet set;
  for (int j = 1; j <= 4; ++j) {
    const Eigen::Vector4cd out = bell_state(j);
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    for (int s = 0; s < 4; ++s) {
      for (int t = 0; t < 4; ++t) {
        const Complex w = std::conj(out(s)) * in(t);
        if (w != 0.0) m += w * u.block(4 * s, 4 * t, 4, 4);
      }
    }
    set.ops[j - 1] = m;
  }
  return set;
}

KrausSet kraus_k1_closed_form(const SwapParams& params) {
  const Complex i(0.0, 1.0);
  const double al = params.alpha();
  const double be = params.beta();
  const Complex e_b = std::exp(i * be);
  const Complex e_hb = std::exp(-i * be / 2.0);
  const Complex e_a = std::exp(i * al);
  const Complex e_2a = std::exp(2.0 * i * al);
  const Complex e_ab = std::exp(i * (al - be));

  auto op = [](int x, int y) -> ComplexMatrix {
    return bell_state(x) * bell_state(y).adjoint();
  };

  KrausSet set;
  set.ops[0] = 0.25 / e_b * (1.0 + e_2a + 2.0 * e_b) * op(1, 1) + 0.5 * (1.0 + e_ab) * op(2, 2) +
               0.5 * e_hb * (1.0 + e_a) * (op(3, 3) + op(4, 4));
  set.ops[1] = 0.5 * (1.0 - e_ab) * op(1, 2) + 0.25 / e_b * (2.0 * e_b - 1.0 - e_2a) * op(2, 1);
  set.ops[2] = 0.5 * e_hb * (1.0 - e_a) * op(1, 3) + 0.25 / e_b * (1.0 - e_2a) * op(3, 1);
  set.ops[3] = 0.5 * e_hb * (1.0 - e_a) * op(1, 4) - 0.25 / e_b * (1.0 - e_2a) * op(4, 1);
  return set;
}

ChainTrace iterate(const DensityMatrix& rho0, const BufferSystem& sys, const SwapParams& params,
                   int n) {
  if (n < 0) throw std::invalid_argument("iterate: negative step count");
  check_buffer_state(rho0, sys);
  const CachingChannel channel(sys, params);
  const BipartiteCut cut = sys.buffer_cut();
  ChainTrace trace;
  trace.states.reserve(n + 1);
  trace.states.push_back(rho0);
  trace.negativity.push_back(log_negativity(rho0, cut));
  for (int step = 0; step < n; ++step) {
    trace.states.push_back(channel.apply(trace.states.back()));
    trace.negativity.push_back(log_negativity(trace.states.back(), cut));
  }
  return trace;
}

ComplexMatrix generator_apply(const DensityMatrix& rho, const BufferSystem& sys,
                              const SwapParams& params) {
  check_buffer_state(rho, sys);
  return CachingChannel(sys, params).apply(rho.mat()) - rho.mat();
}

}  // namespace entbuffer
