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

#include <gtest/gtest.h>

#include "test_util.h"

namespace entbuffer {
namespace {

using testing::kPi;

using testing::embed;
using testing::oracle_partial_swap;

TEST(SwapParams, Validation) {
  EXPECT_NO_THROW(SwapParams(0.0, 0.0));
  EXPECT_NO_THROW(SwapParams(kPi, kPi));
  EXPECT_THROW(SwapParams(-0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(SwapParams(kPi + 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(SwapParams(0.5, 0.6), std::invalid_argument);
  EXPECT_THROW(SwapParams(0.5, -0.1), std::invalid_argument);
  EXPECT_THROW(SwapParams(std::nan(""), 0.0), std::invalid_argument);
  const SwapParams p = SwapParams::from_pi(0.5, 0.25);
  EXPECT_NEAR(p.alpha(), kPi / 2, 1e-15);
  EXPECT_NEAR(p.a(), 0.5, 1e-15);
  EXPECT_NEAR(p.b(), std::pow(std::sin(kPi / 8), 2), 1e-15);
}

TEST(PartialSwap, EndpointsAreNamedGates) {
  EXPECT_LT(max_abs_diff(partial_swap(SwapParams(kPi, 0.0)), swap_gate()), 1e-15);
  EXPECT_LT(max_abs_diff(partial_swap(SwapParams(kPi, kPi)), iswap_gate()), 1e-15);
  EXPECT_LT(max_abs_diff(partial_swap(SwapParams(0.0, 0.0)), Gate2::Identity()), 1e-15);
}

TEST(PartialSwap, MatchesSpectralOracle) {
  auto rng = testing::test_rng(10);
  for (int i = 0; i < 50; ++i) {
    const SwapParams p = testing::random_params(rng);
    const Gate2 g = partial_swap(p);
    EXPECT_LT(max_abs_diff(g, oracle_partial_swap(p.alpha(), p.beta())), 1e-14);
    EXPECT_LT(unitarity_residual(g), 1e-14);
    // Exchange symmetry.
    EXPECT_LT(max_abs_diff(swap_gate() * g * swap_gate(), g), 1e-15);
  }
}

TEST(PartialSwap, Composition) {
  auto rng = testing::test_rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double a1 = u(rng) * kPi / 2, a2 = u(rng) * kPi / 2;
    const SwapParams p1(a1, u(rng) * a1), p2(a2, u(rng) * a2);
    const Gate2 sum = partial_swap(SwapParams(a1 + a2, p1.beta() + p2.beta()));
    EXPECT_LT(max_abs_diff(compose_check(p1, p2), sum), 1e-14);
  }
  EXPECT_THROW(compose_check(SwapParams(2.0, 0.0), SwapParams(2.0, 0.0)), std::invalid_argument);
}

TEST(BufferSystem, Layout) {
  const BufferSystem s(3);
  EXPECT_EQ(s.total_qubits(), 8);
  EXPECT_EQ(s.buffer_dim(), 64);
  EXPECT_EQ(s.ordering().label(s.pos_a(2)), "A2");
  EXPECT_EQ(s.ordering().label(s.pos_b(3)), "B3");
  EXPECT_EQ(s.ordering().label(s.pos_source_b()), "B");
  EXPECT_THROW(BufferSystem(0), std::invalid_argument);
  EXPECT_THROW(BufferSystem(6), std::invalid_argument);
}

TEST(CachingUnitary, MatchesGateProduct) {
  auto rng = testing::test_rng(12);
  for (int k = 1; k <= 3; ++k) {
    const BufferSystem sys(k);
    const int n = sys.total_qubits();
    for (int trial = 0; trial < 3; ++trial) {
      const SwapParams p = testing::random_params(rng);
      const Gate2 s = oracle_partial_swap(p.alpha(), p.beta());
      for (LossMask mask : {LossMask::both(), LossMask{true, false}, LossMask{false, true},
                            LossMask::none()}) {
        ComplexMatrix u = ComplexMatrix::Identity(qubit_dim(n), qubit_dim(n));
        for (int j = 1; j <= k; ++j) {
          if (mask.arrived_a) u = embed(s, sys.pos_source_a(), sys.pos_a(j), n) * u;
          if (mask.arrived_b) u = embed(s, sys.pos_source_b(), sys.pos_b(j), n) * u;
        }
        EXPECT_LT(max_abs_diff(caching_unitary(sys, p, mask), u), 1e-13) << k;
        ComplexVector psi = testing::random_vector(qubit_dim(n), rng);
        const ComplexVector expected = u * psi;
        apply_caching_unitary(psi, sys, p, mask);
        EXPECT_LT(max_abs_diff(psi, expected), 1e-13);
      }
    }
  }
}

TEST(CachingUnitary, SideFactorization) {
  auto rng = testing::test_rng(13);
  const int k = 2;
  const BufferSystem sys(k);
  const SwapParams p = testing::random_params(rng);
  const ComplexMatrix side = side_unitary(k, p);
  EXPECT_LT(unitarity_residual(side), 1e-13);
  // Side A on [A1, A2, A] against the dense unitary restricted by B = none.
  ComplexMatrix expected = ComplexMatrix::Identity(8, 8);
  const Gate2 s = partial_swap(p);
  for (int j = 0; j < k; ++j) expected = embed(s, k, j, 3) * expected;
  EXPECT_LT(max_abs_diff(side, expected), 1e-14);
}

TEST(CachingUnitary, FullSwapMovesSourceIntoBuffer) {
  // k = 1, alpha = pi, beta = 0: source pair lands in the buffer pair.
  const BufferSystem sys(1);
  ComplexVector psi = ComplexVector::Zero(16);
  psi(4 | 8) = 1.0;  // source A = B = 1
  apply_caching_unitary(psi, sys, SwapParams(kPi, 0.0));
  EXPECT_NEAR(std::abs(psi(1 | 2)), 1.0, 1e-15);
  ComplexVector wrong(4);
  EXPECT_THROW(apply_caching_unitary(wrong, sys, SwapParams(1.0, 0.0)), std::invalid_argument);
}

}  // namespace
}  // namespace entbuffer
