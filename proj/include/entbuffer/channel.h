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

#ifndef ENTBUFFER_CHANNEL_H
#define ENTBUFFER_CHANNEL_H

#include <array>
#include <vector>

#include "entbuffer/gates.h"
#include "entbuffer/linalg.h"

namespace entbuffer {

/// Bell state j = 1..4 on two qubits (x, y), local index x + 2y:
/// psi1,2 = (|00> +- |11>)/sqrt2, psi3,4 = (|01> +- |10>)/sqrt2 where |xy>
/// lists the first qubit first.
Eigen::Vector4cd bell_state(int j);

/// Four Kraus operators on a 1-pair buffer, indexed by the Bell state the
/// source pair is projected on.
struct KrausSet {
  std::array<ComplexMatrix, 4> ops;

  /// max |sum_j M_j^dagger M_j - I|
  double completeness_residual() const;
  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

/// The buffer update channel: couple to a fresh |psi1> source pair with the
/// caching unitary, then trace the source out. A side whose qubit was lost
/// does not interact.
///
/// Internally the unitary factorizes into side A and side B parts, so each
/// Kraus operator <s_A s_B| U |psi1> is a sum of two Kronecker products of
/// 2^k x 2^k blocks. apply() uses that structure; no superoperator is formed.
class CachingChannel {
 public:
  CachingChannel(const BufferSystem& sys, const SwapParams& params,
                 LossMask mask = LossMask::both());

  DensityMatrix apply(const DensityMatrix& rho) const;
  /// Linear action on any buffer-sized matrix.
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  /// Dense Kraus operators in the computational source basis (s_A + 2 s_B).
  std::array<ComplexMatrix, 4> kraus_operators() const;

  const BufferSystem& system() const { return sys_; }
  const SwapParams& params() const { return params_; }
  LossMask mask() const { return mask_; }

 private:
  struct KronTerm {
    Complex coef;
    ComplexMatrix side_a;  // empty means identity
    ComplexMatrix side_b;
  };

  ComplexMatrix apply_terms(const std::vector<KronTerm>& terms, const ComplexMatrix& in) const;

  BufferSystem sys_;
  SwapParams params_;
  LossMask mask_;
  std::array<std::vector<KronTerm>, 4> terms_;
};

/// Reference implementation: embeds rho (x) |psi1><psi1| in the 2k+2 qubit
/// register, conjugates by the dense caching unitary, and traces out A, B.
DensityMatrix apply_channel(const DensityMatrix& rho, const BufferSystem& sys,
                            const SwapParams& params, LossMask mask = LossMask::both());

/// M_j = <psi_j| U |psi1> on the source pair, extracted from caching_unitary.
KrausSet kraus_k1(const SwapParams& params);

/// Same operators from their Bell-basis closed-form coefficients.
KrausSet kraus_k1_closed_form(const SwapParams& params);

struct ChainTrace {
  std::vector<DensityMatrix> states;
  std::vector<double> negativity;
};

/// rho_0, C[rho_0], ..., C^n[rho_0] and their buffer negativities.
ChainTrace iterate(const DensityMatrix& rho0, const BufferSystem& sys, const SwapParams& params,
                   int n);

/// L rho = C[rho] - rho.
ComplexMatrix generator_apply(const DensityMatrix& rho, const BufferSystem& sys,
                              const SwapParams& params);

}  // namespace entbuffer

#endif  // ENTBUFFER_CHANNEL_H
