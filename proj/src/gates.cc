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

#include "entbuffer/gates.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entbuffer {

namespace {

// Angles built from sums and fractions of pi round slightly past the range
// edges; accept that much.
constexpr double kAngleSlack = 1e-12;

}  // namespace

SwapParams::SwapParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  constexpr double pi = std::numbers::pi;
  if (!(alpha >= -kAngleSlack && alpha <= pi + kAngleSlack)) {
    throw std::invalid_argument("swap angle alpha=" + std::to_string(alpha) + " outside [0, pi]");
  }
  if (!(beta >= -kAngleSlack && beta <= alpha + kAngleSlack)) {
    throw std::invalid_argument("relative phase beta=" + std::to_string(beta) +
                                " outside [0, alpha]");
  }
}

SwapParams SwapParams::from_pi(double alpha_over_pi, double beta_over_pi) {
  return SwapParams(alpha_over_pi * std::numbers::pi, beta_over_pi * std::numbers::pi);
}

double SwapParams::a() const {
  const double s = std::sin(alpha_ / 2);
  return s * s;
}

double SwapParams::b() const {
  const double s = std::sin((alpha_ - beta_) / 2);
  return s * s;
}

BufferSystem::BufferSystem(int k) : k_(k) {
  if (k < 1) throw std::invalid_argument("buffer size k must be >= 1");
  if (2 * k + 2 > kMaxQubits) {
    throw std::invalid_argument("buffer size k=" + std::to_string(k) + " exceeds the " +
                                std::to_string(kMaxQubits) + "-qubit limit");
  }
  ordering_ = QubitOrdering::combined(k);
}

Gate2 partial_swap(const SwapParams& params) {
  const Complex i(0.0, 1.0);
  const Complex ph = std::exp(-i * params.beta() / 2.0);
  const Complex e = std::exp(i * params.alpha());

  Gate2 phase = Gate2::Zero();
  phase(0, 0) = 1.0;
  phase(1, 1) = ph;
  phase(2, 2) = ph;
  phase(3, 3) = 1.0;

  Gate2 root_swap = Gate2::Zero();
  root_swap(0, 0) = 1.0;
  root_swap(1, 1) = root_swap(2, 2) = (1.0 + e) / 2.0;
  root_swap(1, 2) = root_swap(2, 1) = (1.0 - e) / 2.0;
  root_swap(3, 3) = 1.0;

  return phase * root_swap;
}

Gate2 compose_check(const SwapParams& p1, const SwapParams& p2) {
  // Range check of the composed parameters.
  SwapParams(p1.alpha() + p2.alpha(), p1.beta() + p2.beta());
  return partial_swap(p1) * partial_swap(p2);
}

void apply_caching_unitary(ComplexVector& psi, const BufferSystem& sys, const SwapParams& params,
                           LossMask mask) {
  if (psi.size() != qubit_dim(sys.total_qubits())) {
    throw std::invalid_argument("apply_caching_unitary: state size mismatch");
  }
  const Gate2 s = partial_swap(params);
  for (int j = 1; j <= sys.k(); ++j) {
    if (mask.arrived_a) apply_two_qubit_gate(psi, s, sys.pos_source_a(), sys.pos_a(j));
    if (mask.arrived_b) apply_two_qubit_gate(psi, s, sys.pos_source_b(), sys.pos_b(j));
  }
}

ComplexMatrix caching_unitary(const BufferSystem& sys, const SwapParams& params, LossMask mask) {
  const Eigen::Index d = qubit_dim(sys.total_qubits());
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  const Gate2 s = partial_swap(params);
  for (int j = 1; j <= sys.k(); ++j) {
    if (mask.arrived_a) apply_two_qubit_gate_left(u, s, sys.pos_source_a(), sys.pos_a(j));
    if (mask.arrived_b) apply_two_qubit_gate_left(u, s, sys.pos_source_b(), sys.pos_b(j));
  }
  return u;
}

ComplexMatrix side_unitary(int k, const SwapParams& params) {
  const Eigen::Index d = qubit_dim(k + 1);
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  const Gate2 s = partial_swap(params);
  for (int j = 0; j < k; ++j) apply_two_qubit_gate_left(u, s, k, j);
  return u;
}

double unitarity_residual(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace entbuffer
