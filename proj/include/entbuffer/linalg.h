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

#ifndef ENTBUFFER_LINALG_H
#define ENTBUFFER_LINALG_H

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace entbuffer {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Gate2 = Eigen::Matrix4cd;

/// Largest supported register. A k=4 buffer plus its source pair needs 10.
inline constexpr int kMaxQubits = 12;

/// Numerical tolerances shared by every module and test.
struct Tolerances {
  double hermitian = 1e-12;
  double trace = 1e-12;
  double psd = 1e-10;
};

/// Process-wide tolerance record. Set it once at startup, before any
/// computation runs; it is read without synchronization afterwards.
const Tolerances& tolerances();
void set_tolerances(const Tolerances& tol);

/// Qubit labels in basis-index order. Little-endian: the label at position 0
/// is the least significant bit of the basis index.
class QubitOrdering {
 public:
  QubitOrdering() = default;
  explicit QubitOrdering(std::vector<std::string> labels);

  /// [A1..Ak, B1..Bk]
  static QubitOrdering buffer(int k);
  /// [A1..Ak, B1..Bk, A, B]
  static QubitOrdering combined(int k);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int position) const { return labels_.at(position); }
  /// Position of `label`; throws std::invalid_argument if absent.
  int position(const std::string& label) const;
  /// Ordering restricted to `positions` (ascending), relabelled compactly.
  QubitOrdering subset(std::span<const int> positions) const;

  bool operator==(const QubitOrdering&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// A Hermitian, unit-trace matrix together with its qubit labels.
///
/// Construction checks shape, Hermiticity and trace against tolerances().
/// Positivity costs an eigendecomposition, so it is checked on demand by
/// min_eigenvalue()/check_positive().
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix mat, QubitOrdering ordering);

  /// Pure state |v><v| (v is normalized here).
  static DensityMatrix from_pure(const ComplexVector& v, QubitOrdering ordering);
  /// |0...0><0...0| on the given ordering.
  static DensityMatrix all_zero(QubitOrdering ordering);
  static DensityMatrix maximally_mixed(QubitOrdering ordering);

  const ComplexMatrix& mat() const { return mat_; }
  const QubitOrdering& ordering() const { return ordering_; }
  int n_qubits() const { return ordering_.size(); }
  Eigen::Index dim() const { return mat_.rows(); }

  double min_eigenvalue() const;
  /// Throws std::domain_error if the smallest eigenvalue is below -psd.
  void check_positive() const;

 private:
  ComplexMatrix mat_;
  QubitOrdering ordering_;
};

/// Two-sided partition of qubit positions. Transposition acts on side B.
class BipartiteCut {
 public:
  BipartiteCut(std::vector<int> side_a, int n_qubits);

  /// side_a = {A1..Ak} of a 2k-qubit buffer.
  static BipartiteCut buffer(int k);

  const std::vector<int>& side_a() const { return side_a_; }
  const std::vector<int>& side_b() const { return side_b_; }
  int n_qubits() const { return n_qubits_; }

 private:
  std::vector<int> side_a_;
  std::vector<int> side_b_;
  int n_qubits_;
};

/// Kronecker product in little-endian order: `a` occupies the low-order
/// qubits, so its index varies fastest.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

/// Reduced state on `keep` (any order; result keeps ascending positions).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Transpose of the side-B qubits.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const BipartiteCut& cut);
ComplexMatrix partial_transpose(const DensityMatrix& rho, const BipartiteCut& cut);

/// Eigenvalues of (m + m^dagger)/2, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);
double trace_norm_hermitian(const ComplexMatrix& m);

/// log2 of the trace norm of the partial transpose, in ebits. Clamped at 0.
double log_negativity(const DensityMatrix& rho, const BipartiteCut& cut);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_residual(const ComplexMatrix& m);
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// min over phi of ||a - e^{i phi} b||, Frobenius norm (works for vectors).
double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Applies `gate` in place to a state vector of `n_qubits` qubits. The gate's
/// local basis index is bit(q0) + 2*bit(q1).
void apply_two_qubit_gate(ComplexVector& psi, const Gate2& gate, int q0, int q1);
/// Left-multiplies every column of `m` by the embedded gate.
void apply_two_qubit_gate_left(ComplexMatrix& m, const Gate2& gate, int q0, int q1);

/// Dimension 2^n with range checks against kMaxQubits.
Eigen::Index qubit_dim(int n_qubits);

}  // namespace entbuffer

#endif  // ENTBUFFER_LINALG_H
