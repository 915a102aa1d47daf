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

#include "entbuffer/single_copy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "entbuffer/parallel.h"

namespace entbuffer {

namespace {

constexpr double kPi = std::numbers::pi;

double log_negativity_of(const ComplexMatrix& rho, const BufferSystem& sys) {
  return log_negativity(DensityMatrix(hermitian_part(rho), sys.buffer_ordering()),
                        sys.buffer_cut());
}

// Joint buffer + source register with the buffer in all-|0> and the source
// pair in psi1.
ComplexVector initial_joint_state(const BufferSystem& sys) {
  ComplexVector v = ComplexVector::Zero(qubit_dim(sys.total_qubits()));
  const Eigen::Index both = (Eigen::Index{1} << sys.pos_source_a()) |
                            (Eigen::Index{1} << sys.pos_source_b());
  v(0) = v(both) = 1.0 / std::numbers::sqrt2;
  return v;
}

double buffer_negativity(const ComplexVector& joint, const BufferSystem& sys) {
  const Eigen::Index d = sys.buffer_dim();
  Eigen::Map<const ComplexMatrix> psi(joint.data(), d, 4);
  return log_negativity_of(psi * psi.adjoint(), sys);
}

// A local maximum at the last entry is not recognized; the caller extends
// the sequence until it is decided.
CachingTime find_caching_time(const std::vector<double>& e, const BufferSystem& sys,
                              const SwapParams& params) {
  CachingTime t;
  auto fill = [&](std::size_t idx, CachingTimeCriterion c) {
    t.n_star = static_cast<long>(idx) + 1;
    t.E = e[idx];
    t.scaled_time = static_cast<double>(t.n_star) * sys.k() * params.alpha() / kPi;
    t.criterion = c;
  };
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] >= 1.0 - kOneEbitTolerance) {
      fill(i, CachingTimeCriterion::kThreshold);
      return t;
    }
    const bool peak = i >= 1 && i + 1 < e.size() && e[i] > e[i - 1] && e[i] >= e[i + 1];
    if (peak) {
      if (e[i] >= kLocalMaximumFloor) fill(i, CachingTimeCriterion::kLocalMaximum);
      return t;
    }
  }
  return t;
}

}  // namespace

PureInit::PureInit(double theta, double delta) : theta_(theta), delta_(delta) {
  if (!(theta >= 0.0 && theta < kPi)) throw std::invalid_argument("PureInit: theta outside [0, pi)");
  if (!(delta >= 0.0 && delta < 2.0 * kPi)) {
    throw std::invalid_argument("PureInit: delta outside [0, 2 pi)");
  }
}

Eigen::Vector2cd PureInit::qubit() const {
  return {Complex(std::cos(theta_), 0.0), std::polar(std::sin(theta_), delta_)};
}

ComplexVector PureInit::buffer_vector(const BufferSystem& sys) const {
  const Eigen::Vector2cd q = qubit();
  ComplexVector v = ComplexVector::Ones(1);
  for (int i = 0; i < sys.buffer_qubits(); ++i) v = tensor(v, ComplexVector(q));
  return v;
}

DensityMatrix PureInit::buffer_state(const BufferSystem& sys) const {
  return DensityMatrix::from_pure(buffer_vector(sys), sys.buffer_ordering());
}

double single_copy_E(const BufferSystem& sys, const SwapParams& params,
                     const DensityMatrix& init) {
  if (init.n_qubits() != sys.buffer_qubits()) {
    throw std::invalid_argument("single_copy_E: initial state does not match the buffer");
  }
  const CachingChannel channel(sys, params);
  return log_negativity(channel.apply(init), sys.buffer_cut());
}

double mixed_init_E_closed_form(const SwapParams& params) {
  const double a = params.a();
  const double b = params.b();
  const double g = 1.0 - a * (a + 2.0 * b);
  return std::log2(1.0 - (g - std::abs(g)) / 4.0);
}

double all_zero_E_closed_form(double alpha) {
  return std::log2(1.0 + std::pow(std::sin(alpha / 2.0), 4));
}

double full_iswap_E_closed_form(double theta) {
  const double c = std::cos(2.0 * theta);
  return std::log2(1.0 + c * c);
}

PureSweep pure_sweep(const BufferSystem& sys, const SwapParams& params,
                     const std::vector<double>& theta_grid, const std::vector<double>& delta_grid,
                     int threads) {
  const CachingChannel channel(sys, params);
  const std::size_t nd = delta_grid.size();
  PureSweep out;
  out.rows.resize(theta_grid.size() * nd);
  parallel_for(out.rows.size(), threads, [&](std::size_t idx) {
    const PureInit init(theta_grid[idx / nd], delta_grid[idx % nd]);
    const double e = log_negativity(channel.apply(init.buffer_state(sys)), sys.buffer_cut());
    out.rows[idx] = {init.theta(), init.delta(), e};
  });
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t j = 0; j < nd; ++j) {
      lo = std::min(lo, out.rows[i * nd + j].E);
      hi = std::max(hi, out.rows[i * nd + j].E);
    }
    const double spread = nd == 0 ? 0.0 : hi - lo;
    out.delta_spread.push_back(spread);
    out.max_delta_spread = std::max(out.max_delta_spread, spread);
  }
  return out;
}

const char* to_string(CachingTimeCriterion c) {
  switch (c) {
    case CachingTimeCriterion::kThreshold:
      return "threshold";
    case CachingTimeCriterion::kLocalMaximum:
      return "local_maximum";
    case CachingTimeCriterion::kNotReached:
      break;
  }
  return "not_reached";
}

MultiPassResult multi_pass_single_pair(const BufferSystem& sys, const SwapParams& params,
                                       long n_passes) {
  if (n_passes < 1) throw std::invalid_argument("multi_pass_single_pair: n_passes must be >= 1");
  ComplexVector joint = initial_joint_state(sys);
  MultiPassResult result;
  result.negativity.reserve(static_cast<std::size_t>(n_passes));
  for (long n = 1; n <= n_passes; ++n) {
    apply_caching_unitary(joint, sys, params);
    result.negativity.push_back(buffer_negativity(joint, sys));
  }
  result.time = find_caching_time(result.negativity, sys, params);
  return result;
}

CachingTime caching_time(const BufferSystem& sys, const SwapParams& params, long max_passes) {
  ComplexVector joint = initial_joint_state(sys);
  std::vector<double> e;
  for (long n = 1; n <= max_passes; ++n) {
    apply_caching_unitary(joint, sys, params);
    e.push_back(buffer_negativity(joint, sys));
    const std::size_t m = e.size();
    const bool decided = e.back() >= 1.0 - kOneEbitTolerance ||
                         (m >= 3 && e[m - 2] > e[m - 3] && e[m - 2] >= e[m - 1]);
    if (decided) return find_caching_time(e, sys, params);
  }
  return find_caching_time(e, sys, params);
}

double dicke_weak_E(int k, double alpha, long n, double /*r*/) {
  if (k < 1) throw std::invalid_argument("dicke_weak_E: k must be >= 1");
  const double s = std::sin(std::sqrt(static_cast<double>(k)) * static_cast<double>(n) * alpha / 2.0);
  return std::log2(1.0 + s * s * s * s);
}

DickeModelState::DickeModelState(int k, double r) : k_(k), r_(r) {
  if (k < 1) throw std::invalid_argument("DickeModelState: k must be >= 1");
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("DickeModelState: r outside [0, 1]");
  const double kd = static_cast<double>(k);
  Eigen::Matrix4cd side = Eigen::Matrix4cd::Zero();
  side(1, 2) = side(2, 1) = std::sqrt(kd) / 2.0;
  const double jz_g = kd / 2.0;
  const double jz_e = kd / 2.0 - 1.0;
  side(0, 0) += (1.0 - r) * 0.5 * jz_g;
  side(1, 1) += (1.0 - r) * -0.5 * jz_g;
  side(2, 2) += (1.0 - r) * 0.5 * jz_e;
  side(3, 3) += (1.0 - r) * -0.5 * jz_e;
  hamiltonian_.setZero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        hamiltonian_(a + 4 * c, b + 4 * c) += side(a, b);
        hamiltonian_(c + 4 * a, c + 4 * b) += side(a, b);
      }
    }
  }
  evolve(0.0);
}

void DickeModelState::evolve(double t) {
  Eigen::Matrix<Complex, 16, 1> init = Eigen::Matrix<Complex, 16, 1>::Zero();
  init(0) = init(5) = 1.0 / std::numbers::sqrt2;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, 16, 16>> eig(hamiltonian_);
  const auto& vecs = eig.eigenvectors();
  Eigen::Matrix<Complex, 16, 1> coeffs = vecs.adjoint() * init;
  for (int i = 0; i < 16; ++i) coeffs(i) *= std::polar(1.0, -eig.eigenvalues()(i) * t);
  amps_ = vecs * coeffs;
  const double c = std::cos(std::sqrt(static_cast<double>(k_)) * t / 2.0);
  x_ = c * c;
}

Eigen::Matrix4cd DickeModelState::buffer_state() const {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  auto idx = [](int sa, int ea, int sb, int eb) { return sa + 2 * ea + 4 * (sb + 2 * eb); };
  for (int sa = 0; sa < 2; ++sa) {
    for (int sb = 0; sb < 2; ++sb) {
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          rho(r, c) += amps_(idx(sa, r & 1, sb, r >> 1)) *
                       std::conj(amps_(idx(sa, c & 1, sb, c >> 1)));
        }
      }
    }
  }
  return rho;
}

double DickeModelState::negativity() const {
  const ComplexMatrix rho = buffer_state();
  return log_negativity(DensityMatrix(hermitian_part(rho / rho.trace().real()),
                                      QubitOrdering::buffer(1)),
                        BipartiteCut::buffer(1));
}

double dicke_model_E(int k, double alpha, long n, double r) {
  DickeModelState s(k, r);
  s.evolve(static_cast<double>(n) * alpha);
  return s.negativity();
}

}  // namespace entbuffer
