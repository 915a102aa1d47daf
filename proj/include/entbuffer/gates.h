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

#ifndef ENTBUFFER_GATES_H
#define ENTBUFFER_GATES_H

#include "entbuffer/linalg.h"

namespace entbuffer {

/// Swap angle alpha and relative phase beta, radians, 0 <= beta <= alpha <= pi.
class SwapParams {
 public:
  SwapParams(double alpha, double beta);
  /// Angles given in units of pi.
  static SwapParams from_pi(double alpha_over_pi, double beta_over_pi);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  /// sin^2(alpha/2)
  double a() const;
  /// sin^2((alpha - beta)/2)
  double b() const;

 private:
  double alpha_;
  double beta_;
};

/// Which source qubits reached the buffer in one caching step.
struct LossMask {
  bool arrived_a = true;
  bool arrived_b = true;

  static constexpr LossMask both() { return {true, true}; }
  static constexpr LossMask none() { return {false, false}; }
  bool operator==(const LossMask&) const = default;
};

/// k buffer pairs plus the source pair. Combined register ordering is
/// [A1..Ak, B1..Bk, A, B]; the buffer alone is [A1..Ak, B1..Bk].
class BufferSystem {
 public:
  explicit BufferSystem(int k);

  int k() const { return k_; }
  int buffer_qubits() const { return 2 * k_; }
  int total_qubits() const { return 2 * k_ + 2; }
  Eigen::Index buffer_dim() const { return Eigen::Index{1} << (2 * k_); }
  /// Dimension of one side's buffer qubits, 2^k.
  Eigen::Index side_dim() const { return Eigen::Index{1} << k_; }

  int pos_a(int j) const { return j - 1; }
  int pos_b(int j) const { return k_ + j - 1; }
  int pos_source_a() const { return 2 * k_; }
  int pos_source_b() const { return 2 * k_ + 1; }

  const QubitOrdering& ordering() const { return ordering_; }
  QubitOrdering buffer_ordering() const { return QubitOrdering::buffer(k_); }
  BipartiteCut buffer_cut() const { return BipartiteCut::buffer(k_); }

 private:
  int k_;
  QubitOrdering ordering_;
};

/// S(alpha, beta) = diag(1, e^{-i beta/2}, e^{-i beta/2}, 1) [SWAP]^{alpha/pi}.
/// Symmetric under exchange of its two qubits.
Gate2 partial_swap(const SwapParams& params);

inline const Gate2& swap_gate() {
  static const Gate2 g = [] {
    Gate2 m = Gate2::Zero();
    m(0, 0) = m(3, 3) = 1.0;
    m(1, 2) = m(2, 1) = 1.0;
    return m;
  }();
  return g;
}

/// iSWAP with the -i off-diagonal convention.
inline const Gate2& iswap_gate() {
  static const Gate2 g = [] {
    Gate2 m = Gate2::Zero();
    m(0, 0) = m(3, 3) = 1.0;
    m(1, 2) = m(2, 1) = Complex(0.0, -1.0);
    return m;
  }();
  return g;
}

/// S(p1) * S(p2). Throws std::invalid_argument when the summed parameters
/// leave the valid range.
Gate2 compose_check(const SwapParams& p1, const SwapParams& p2);

/// Applies the caching unitary to a combined-register state vector in place:
/// for j = 1..k, S on (A, A_j) then S on (B, B_j). A side whose mask bit is
/// false is left untouched.
void apply_caching_unitary(ComplexVector& psi, const BufferSystem& sys, const SwapParams& params,
                           LossMask mask = LossMask::both());

/// Dense caching unitary on the 2k+2 qubit register.
ComplexMatrix caching_unitary(const BufferSystem& sys, const SwapParams& params,
                              LossMask mask = LossMask::both());

/// One side's factor: acts on [X1..Xk, X] (buffer bits low, source bit k).
ComplexMatrix side_unitary(int k, const SwapParams& params);

double unitarity_residual(const ComplexMatrix& u);

}  // namespace entbuffer

#endif  // ENTBUFFER_GATES_H
