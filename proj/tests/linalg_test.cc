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


#include "entbuffer/linalg.h"

#include <gtest/gtest.h>

#include <vector>

#include "test_util.h"

namespace entbuffer {
namespace {

using testing::kPi;

// Reference partial trace by explicit index summation over traced bits.
ComplexMatrix naive_partial_trace(const ComplexMatrix& rho, int n, const std::vector<int>& keep) {
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  }
  const int dk = 1 << keep.size();
  const int dt = 1 << traced.size();
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  auto full_index = [&](int kept, int tr) {
    int idx = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) idx |= ((kept >> i) & 1) << keep[i];
    for (std::size_t i = 0; i < traced.size(); ++i) idx |= ((tr >> i) & 1) << traced[i];
    return idx;
  };
  for (int r = 0; r < dk; ++r) {
    for (int c = 0; c < dk; ++c) {
      for (int t = 0; t < dt; ++t) out(r, c) += rho(full_index(r, t), full_index(c, t));
    }
  }
  return out;
}

TEST(QubitOrdering, BufferAndCombinedLayouts) {
  const QubitOrdering b = QubitOrdering::buffer(2);
  EXPECT_EQ(b.labels(), (std::vector<std::string>{"A1", "A2", "B1", "B2"}));
  const QubitOrdering c = QubitOrdering::combined(2);
  EXPECT_EQ(c.size(), 6);
  EXPECT_EQ(c.position("A"), 4);
  EXPECT_EQ(c.position("B"), 5);
  EXPECT_EQ(c.label(2), "B1");
  EXPECT_THROW(c.position("C"), std::invalid_argument);
  EXPECT_THROW(QubitOrdering({"x", "x"}), std::invalid_argument);
  EXPECT_THROW(QubitOrdering::buffer(0), std::invalid_argument);
  const std::vector<int> pos{0, 2};
  EXPECT_EQ(c.subset(pos).labels(), (std::vector<std::string>{"A1", "B1"}));
}

TEST(DensityMatrix, RejectsInvalidInput) {
  const QubitOrdering o = QubitOrdering::buffer(1);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(3, 3) / 3.0, o), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(4, 4), o), std::domain_error);
  ComplexMatrix nh = ComplexMatrix::Identity(4, 4) / 4.0;
  nh(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix(nh, o), std::domain_error);
  EXPECT_THROW(DensityMatrix::from_pure(ComplexVector::Zero(4), o), std::invalid_argument);
}

TEST(DensityMatrix, PositivityIsCheckedOnDemand) {
  const QubitOrdering o = QubitOrdering::buffer(1);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.2;
  m(1, 1) = -0.2;
  const DensityMatrix rho(m, o);
  EXPECT_NEAR(rho.min_eigenvalue(), -0.2, 1e-14);
  EXPECT_THROW(rho.check_positive(), std::domain_error);
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(o).check_positive());
}

TEST(DensityMatrix, Factories) {
  const QubitOrdering o = QubitOrdering::buffer(1);
  const DensityMatrix z = DensityMatrix::all_zero(o);
  EXPECT_EQ(z.mat()(0, 0), Complex(1.0));
  EXPECT_NEAR(z.mat().norm(), 1.0, 1e-15);
  EXPECT_NEAR(max_abs_diff(DensityMatrix::maximally_mixed(o).mat(),
                           ComplexMatrix::Identity(4, 4) / 4.0),
              0.0, 1e-15);
  ComplexVector v(4);
  v << 3.0, 0.0, 0.0, Complex(0, 4.0);
  const DensityMatrix p = DensityMatrix::from_pure(v, o);
  EXPECT_NEAR(p.mat()(3, 0).imag(), 12.0 / 25.0, 1e-15);
}

TEST(Tensor, HandBuiltSigmaXSigmaZ) {
  // sigma_x on the low qubit, sigma_z on the high qubit.
  const ComplexMatrix t = tensor(testing::pauli_x(), testing::pauli_z());
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 1) = expected(1, 0) = 1.0;
  expected(2, 3) = expected(3, 2) = -1.0;
  EXPECT_EQ(max_abs_diff(t, expected), 0.0);
}

TEST(Tensor, VectorOrderMatchesMatrixOrder) {
  auto rng = testing::test_rng(1);
  const ComplexVector a = testing::random_vector(2, rng);
  const ComplexVector b = testing::random_vector(4, rng);
  const ComplexMatrix outer = tensor(ComplexMatrix(a * a.adjoint()), ComplexMatrix(b * b.adjoint()));
  const ComplexVector ab = tensor(a, b);
  EXPECT_LT(max_abs_diff(outer, ab * ab.adjoint()), 1e-15);
  EXPECT_EQ(ab(1), a(1) * b(0));
}

TEST(PartialTrace, MatchesIndexSummation) {
  auto rng = testing::test_rng(2);
  const DensityMatrix rho = testing::random_state(QubitOrdering::combined(1), rng);
  for (const std::vector<int>& keep :
       {std::vector<int>{0}, {1, 2}, {0, 3}, {3, 1}, {0, 1, 2}, {0, 1, 2, 3}}) {
    const DensityMatrix red = partial_trace(rho, keep);
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_LT(max_abs_diff(red.mat(), naive_partial_trace(rho.mat(), 4, sorted)), 1e-14);
    EXPECT_EQ(red.n_qubits(), static_cast<int>(keep.size()));
  }
}

TEST(PartialTrace, ProductStateFactorizes) {
  auto rng = testing::test_rng(3);
  const ComplexMatrix a = testing::random_density(2, rng);
  const ComplexMatrix b = testing::random_density(1, rng);
  EXPECT_THROW(DensityMatrix(tensor(a, b), QubitOrdering::buffer(1)), std::invalid_argument);
  const DensityMatrix full(tensor(a, b), QubitOrdering({"x", "y", "z"}));
  EXPECT_LT(max_abs_diff(partial_trace(full, std::vector<int>{0, 1}).mat(), a), 1e-15);
  EXPECT_LT(max_abs_diff(partial_trace(full, std::vector<int>{2}).mat(), b), 1e-15);
  EXPECT_EQ(partial_trace(full, std::vector<int>{2}).ordering().label(0), "z");
}

TEST(PartialTrace, Errors) {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(QubitOrdering::buffer(1));
  EXPECT_THROW(partial_trace(rho, std::vector<int>{}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, std::vector<int>{0, 0}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, std::vector<int>{2}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, std::vector<int>{-1}), std::invalid_argument);
}

TEST(PartialTranspose, InvolutionAndTracePreservation) {
  auto rng = testing::test_rng(4);
  const BipartiteCut cut = BipartiteCut::buffer(2);
  for (int i = 0; i < 5; ++i) {
    const ComplexMatrix rho = testing::random_density(4, rng);
    const ComplexMatrix pt = partial_transpose(rho, cut);
    EXPECT_LT(max_abs_diff(partial_transpose(pt, cut), rho), 1e-16);
    EXPECT_NEAR(std::abs(pt.trace() - rho.trace()), 0.0, 1e-15);
  }
}

TEST(PartialTranspose, ExplicitEntries) {
  // Transposing qubit 1 maps |a b><c d| to |a d><c b| (a, c on qubit 0).
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0 + 2 * 1, 1 + 2 * 0) = 1.0;  // |0,1><1,0|
  const ComplexMatrix pt = partial_transpose(m, BipartiteCut({0}, 2));
  EXPECT_EQ(pt(0 + 2 * 0, 1 + 2 * 1), Complex(1.0));
  EXPECT_EQ(pt.cwiseAbs().sum(), 1.0);
}

TEST(PartialTranspose, CutMismatch) {
  EXPECT_THROW(partial_transpose(ComplexMatrix::Identity(8, 8), BipartiteCut::buffer(1)),
               std::invalid_argument);
  EXPECT_THROW(BipartiteCut({0, 0}, 2), std::invalid_argument);
  EXPECT_THROW(BipartiteCut({2}, 2), std::invalid_argument);
}

TEST(LogNegativity, BellAndSeparableStates) {
  const QubitOrdering o = QubitOrdering::buffer(1);
  const BipartiteCut cut = BipartiteCut::buffer(1);
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0;
  EXPECT_NEAR(log_negativity(DensityMatrix::from_pure(bell, o), cut), 1.0, 1e-14);
  EXPECT_EQ(log_negativity(DensityMatrix::maximally_mixed(o), cut), 0.0);
  EXPECT_EQ(log_negativity(DensityMatrix::all_zero(o), cut), 0.0);
}

TEST(LogNegativity, WernerStateClosedForm) {
  // p |bell><bell| + (1-p) I/4 has E = log2((1 + 3p)/2) for p > 1/3.
  const QubitOrdering o = QubitOrdering::buffer(1);
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.9, 1.0}) {
    const ComplexMatrix m = p * bell * bell.adjoint() + (1 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
    const double expected = p > 1.0 / 3.0 ? std::log2((1 + 3 * p) / 2) : 0.0;
    EXPECT_NEAR(log_negativity(DensityMatrix(m, o), BipartiteCut::buffer(1)), expected, 1e-13) << p;
  }
}

TEST(LogNegativity, AdditiveOverBellPairs) {
  // Two Bell pairs (A1,B1), (A2,B2) on the k=2 buffer ordering carry 2 ebits.
  ComplexVector v = ComplexVector::Zero(16);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) v(x | (y << 1) | (x << 2) | (y << 3)) = 0.5;
  }
  EXPECT_NEAR(log_negativity(DensityMatrix::from_pure(v, QubitOrdering::buffer(2)),
                             BipartiteCut::buffer(2)),
              2.0, 1e-13);
}

TEST(LogNegativity, InvariantUnderLocalUnitaries) {
  auto rng = testing::test_rng(5);
  const QubitOrdering o = QubitOrdering::buffer(1);
  const BipartiteCut cut = BipartiteCut::buffer(1);
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix rho = testing::random_density(2, rng, 1);
    Eigen::HouseholderQR<ComplexMatrix> qa(ComplexMatrix::Random(2, 2));
    Eigen::HouseholderQR<ComplexMatrix> qb(ComplexMatrix::Random(2, 2));
    const ComplexMatrix u = tensor(ComplexMatrix(qa.householderQ()), ComplexMatrix(qb.householderQ()));
    const double e0 = log_negativity(DensityMatrix(rho, o), cut);
    const double e1 = log_negativity(DensityMatrix(hermitian_part(u * rho * u.adjoint()), o), cut);
    EXPECT_NEAR(e0, e1, 1e-12);
  }
}

TEST(Eigen, TraceNormAndEigenvalues) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = -3.0;
  EXPECT_NEAR(trace_norm_hermitian(m), 5.0, 1e-15);
  const Eigen::VectorXd ev = hermitian_eigenvalues(m);
  EXPECT_NEAR(ev(0), -3.0, 1e-15);
  EXPECT_NEAR(ev(1), 2.0, 1e-15);
}

TEST(Helpers, PhaseAlignedDistance) {
  auto rng = testing::test_rng(6);
  const ComplexVector a = testing::random_vector(8, rng);
  EXPECT_LT(phase_aligned_distance(a, std::polar(1.0, 0.7) * a), 1e-14);
  const ComplexVector b = testing::random_vector(8, rng);
  EXPECT_GT(phase_aligned_distance(a, b), 1e-3);
  EXPECT_THROW(max_abs_diff(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)),
               std::invalid_argument);
}

TEST(TwoQubitGate, MatchesDenseEmbedding) {
  auto rng = testing::test_rng(7);
  Gate2 g = Gate2::Random();
  ComplexVector psi = testing::random_vector(8, rng);
  // Dense: gate on qubits (2, 0) with local index bit2 + 2 bit0.
  ComplexMatrix dense = ComplexMatrix::Zero(8, 8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      if (((r >> 1) & 1) != ((c >> 1) & 1)) continue;
      const int lr = ((r >> 2) & 1) + 2 * (r & 1);
      const int lc = ((c >> 2) & 1) + 2 * (c & 1);
      dense(r, c) = g(lr, lc);
    }
  }
  const ComplexVector expected = dense * psi;
  apply_two_qubit_gate(psi, g, 2, 0);
  EXPECT_LT(max_abs_diff(psi, expected), 1e-14);

  ComplexMatrix m = ComplexMatrix::Random(8, 3);
  const ComplexMatrix expected_m = dense * m;
  apply_two_qubit_gate_left(m, g, 2, 0);
  EXPECT_LT(max_abs_diff(m, expected_m), 1e-14);

  EXPECT_THROW(apply_two_qubit_gate(psi, g, 1, 1), std::invalid_argument);
  EXPECT_THROW(apply_two_qubit_gate(psi, g, 0, 3), std::invalid_argument);
}

TEST(QubitDim, RangeChecked) {
  EXPECT_EQ(qubit_dim(3), 8);
  EXPECT_THROW(qubit_dim(-1), std::invalid_argument);
  EXPECT_THROW(qubit_dim(kMaxQubits + 1), std::invalid_argument);
}

TEST(Tolerances, RoundTrip) {
  const Tolerances saved = tolerances();
  Tolerances t = saved;
  t.psd = 1e-6;
  set_tolerances(t);
  EXPECT_EQ(tolerances().psd, 1e-6);
  set_tolerances(saved);
  EXPECT_EQ(tolerances().psd, saved.psd);
  (void)kPi;
}

}  // namespace
}  // namespace entbuffer
