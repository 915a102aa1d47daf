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

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace entbuffer {

namespace {

Tolerances g_tolerances;

// Basis indices of the full register obtained by spreading the bits of
// 0..2^|positions|-1 onto `positions`.
std::vector<Eigen::Index> scatter_table(std::span<const int> positions) {
  const std::size_t count = std::size_t{1} << positions.size();
  std::vector<Eigen::Index> table(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::Index full = 0;
    for (std::size_t bit = 0; bit < positions.size(); ++bit) {
      if ((i >> bit) & 1U) full |= Eigen::Index{1} << positions[bit];
    }
    table[i] = full;
  }
  return table;
}

}  // namespace

const Tolerances& tolerances() { return g_tolerances; }
void set_tolerances(const Tolerances& tol) { g_tolerances = tol; }

Eigen::Index qubit_dim(int n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(n_qubits) +
                                " outside [0, " + std::to_string(kMaxQubits) + "]");
  }
  return Eigen::Index{1} << n_qubits;
}

// ---------------------------------------------------------------------------
// QubitOrdering

QubitOrdering::QubitOrdering(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) {
    throw std::invalid_argument("qubit labels must be unique");
  }
}

QubitOrdering QubitOrdering::buffer(int k) {
  if (k < 1) throw std::invalid_argument("buffer size must be >= 1");
  std::vector<std::string> labels;
  for (int j = 1; j <= k; ++j) labels.push_back("A" + std::to_string(j));
  for (int j = 1; j <= k; ++j) labels.push_back("B" + std::to_string(j));
  return QubitOrdering(std::move(labels));
}

QubitOrdering QubitOrdering::combined(int k) {
  auto labels = buffer(k).labels();
  labels.push_back("A");
  labels.push_back("B");
  return QubitOrdering(std::move(labels));
}

int QubitOrdering::position(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::invalid_argument("unknown qubit label " + label);
  return static_cast<int>(it - labels_.begin());
}

QubitOrdering QubitOrdering::subset(std::span<const int> positions) const {
  std::vector<int> sorted(positions.begin(), positions.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> labels;
  for (int p : sorted) labels.push_back(labels_.at(p));
  return QubitOrdering(std::move(labels));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix mat, QubitOrdering ordering)
    : mat_(std::move(mat)), ordering_(std::move(ordering)) {
  const Eigen::Index d = qubit_dim(ordering_.size());
  if (mat_.rows() != d || mat_.cols() != d) {
    throw std::invalid_argument("density matrix shape does not match " +
                                std::to_string(ordering_.size()) + " qubits");
  }
  const auto& tol = tolerances();
  const double herm = hermiticity_residual(mat_);
  if (herm > tol.hermitian) {
    throw std::domain_error("density matrix not Hermitian (residual " + std::to_string(herm) + ")");
  }
  const Complex tr = mat_.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw std::domain_error("density matrix trace differs from 1 by " +
                            std::to_string(std::abs(tr - 1.0)));
  }
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& v, QubitOrdering ordering) {
  const double norm = v.norm();
  if (norm == 0.0) throw std::invalid_argument("zero state vector");
  const ComplexVector u = v / norm;
  return DensityMatrix(hermitian_part(u * u.adjoint()), std::move(ordering));
}

DensityMatrix DensityMatrix::all_zero(QubitOrdering ordering) {
  const Eigen::Index d = qubit_dim(ordering.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(m), std::move(ordering));
}

DensityMatrix DensityMatrix::maximally_mixed(QubitOrdering ordering) {
  const Eigen::Index d = qubit_dim(ordering.size());
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d), std::move(ordering));
}

double DensityMatrix::min_eigenvalue() const { return hermitian_eigenvalues(mat_)(0); }

void DensityMatrix::check_positive() const {
  const double lo = min_eigenvalue();
  if (lo < -tolerances().psd) {
    throw std::domain_error("density matrix has eigenvalue " + std::to_string(lo));
  }
}

// ---------------------------------------------------------------------------
// BipartiteCut

BipartiteCut::BipartiteCut(std::vector<int> side_a, int n_qubits)
    : side_a_(std::move(side_a)), n_qubits_(n_qubits) {
  std::sort(side_a_.begin(), side_a_.end());
  if (std::adjacent_find(side_a_.begin(), side_a_.end()) != side_a_.end()) {
    throw std::invalid_argument("cut positions repeat");
  }
  for (int p : side_a_) {
    if (p < 0 || p >= n_qubits) throw std::invalid_argument("cut position out of range");
  }
  for (int p = 0; p < n_qubits; ++p) {
    if (!std::binary_search(side_a_.begin(), side_a_.end(), p)) side_b_.push_back(p);
  }
}

BipartiteCut BipartiteCut::buffer(int k) {
  std::vector<int> a(k);
  for (int j = 0; j < k; ++j) a[j] = j;
  return BipartiteCut(std::move(a), 2 * k);
}

// ---------------------------------------------------------------------------
// Kernels

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols();
  ComplexMatrix out(ra * b.rows(), ca * b.cols());
  for (Eigen::Index jb = 0; jb < b.cols(); ++jb) {
    for (Eigen::Index ib = 0; ib < b.rows(); ++ib) {
      out.block(ib * ra, jb * ca, ra, ca) = b(ib, jb) * a;
    }
  }
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index ib = 0; ib < b.size(); ++ib) {
    out.segment(ib * a.size(), a.size()) = b(ib) * a;
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.n_qubits();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("partial_trace: repeated position");
  }
  std::vector<int> traced;
  for (int p = 0; p < n; ++p) {
    if (!std::binary_search(kept.begin(), kept.end(), p)) traced.push_back(p);
  }
  for (int p : kept) {
    if (p < 0 || p >= n) throw std::invalid_argument("partial_trace: position out of range");
  }

  const auto keep_idx = scatter_table(kept);
  const auto trace_idx = scatter_table(traced);
  const Eigen::Index dk = static_cast<Eigen::Index>(keep_idx.size());
  const ComplexMatrix& m = rho.mat();
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index c = 0; c < dk; ++c) {
    for (Eigen::Index r = 0; r < dk; ++r) {
      Complex acc = 0.0;
      for (Eigen::Index t : trace_idx) acc += m(keep_idx[r] | t, keep_idx[c] | t);
      out(r, c) = acc;
    }
  }
  return DensityMatrix(hermitian_part(out), rho.ordering().subset(kept));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const BipartiteCut& cut) {
  const Eigen::Index d = qubit_dim(cut.n_qubits());
  if (m.rows() != d || m.cols() != d) {
    throw std::invalid_argument("partial_transpose: cut does not match matrix size");
  }
  Eigen::Index mask_b = 0;
  for (int p : cut.side_b()) mask_b |= Eigen::Index{1} << p;
  ComplexMatrix out(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      const Eigen::Index r2 = (r & ~mask_b) | (c & mask_b);
      const Eigen::Index c2 = (c & ~mask_b) | (r & mask_b);
      out(r, c) = m(r2, c2);
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, const BipartiteCut& cut) {
  if (rho.n_qubits() != cut.n_qubits()) {
    throw std::invalid_argument("partial_transpose: cut covers " + std::to_string(cut.n_qubits()) +
                                " qubits, state has " + std::to_string(rho.n_qubits()));
  }
  return partial_transpose(rho.mat(), cut);
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return solver.eigenvalues();
}

double trace_norm_hermitian(const ComplexMatrix& m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

double log_negativity(const DensityMatrix& rho, const BipartiteCut& cut) {
  const double e = std::log2(trace_norm_hermitian(partial_transpose(rho, cut)));
  return e > 0.0 ? e : 0.0;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  // The minimizing phase is that of <b,a>. The difference is formed
  // explicitly; the expanded quadratic loses half the digits.
  const Complex overlap = (b.array().conjugate() * a.array()).sum();
  const double mag = std::abs(overlap);
  const Complex phase = mag > 0.0 ? overlap / mag : Complex(1.0);
  return (a - phase * b).norm();
}

void apply_two_qubit_gate(ComplexVector& psi, const Gate2& gate, int q0, int q1) {
  const Eigen::Index m0 = Eigen::Index{1} << q0;
  const Eigen::Index m1 = Eigen::Index{1} << q1;
  if (q0 == q1 || psi.size() <= std::max(m0, m1)) {
    throw std::invalid_argument("apply_two_qubit_gate: bad qubit pair");
  }
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i & (m0 | m1)) continue;
    const Eigen::Index idx[4] = {i, i | m0, i | m1, i | m0 | m1};
    Eigen::Vector4cd v(psi(idx[0]), psi(idx[1]), psi(idx[2]), psi(idx[3]));
    const Eigen::Vector4cd w = gate * v;
    for (int j = 0; j < 4; ++j) psi(idx[j]) = w(j);
  }
}

void apply_two_qubit_gate_left(ComplexMatrix& m, const Gate2& gate, int q0, int q1) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    ComplexVector col = m.col(c);
    apply_two_qubit_gate(col, gate, q0, q1);
    m.col(c) = col;
  }
}

}  // namespace entbuffer
