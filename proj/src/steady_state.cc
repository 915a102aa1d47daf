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

#include "entbuffer/steady_state.h"

#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>

#include "entbuffer/parallel.h"

namespace entbuffer {

namespace {

constexpr int kMaxTransferK = 2;
constexpr double kKernelSingularTolerance = 1e-9;
constexpr double kMinAlpha = 1e-12;

void require_nondegenerate(const SwapParams& params) {
  if (params.alpha() <= kMinAlpha) {
    throw DegenerateChannelError("alpha = 0: the caching channel is the identity");
  }
}

// Trace renormalization and Hermitian projection, applied between steps so
// rounding does not accumulate over long chains.
ComplexMatrix normalize(const ComplexMatrix& m) {
  ComplexMatrix h = hermitian_part(m);
  return h / h.trace().real();
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d) {
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

struct KernelInfo {
  int dimension;
  ComplexVector null_vector;
};

KernelInfo generator_kernel(const ComplexMatrix& transfer) {
  const Eigen::Index n = transfer.rows();
  const ComplexMatrix gen = transfer - ComplexMatrix::Identity(n, n);
  Eigen::BDCSVD<ComplexMatrix> svd(gen, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();  // descending
  int dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < kKernelSingularTolerance) ++dim;
  }
  return {dim, svd.matrixV().col(n - 1)};
}

SteadyStateResult finish(const CachingChannel& channel, ComplexMatrix rho, SteadyStateMethod method,
                         int kernel_dimension, long steps) {
  const BufferSystem& sys = channel.system();
  DensityMatrix state(normalize(rho), sys.buffer_ordering());
  const double residual = max_abs_diff(channel.apply(state.mat()), state.mat());
  const double e = log_negativity(state, sys.buffer_cut());
  return {std::move(state), e, residual, method, kernel_dimension, steps};
}

}  // namespace

const char* to_string(SteadyStateMethod m) {
  return m == SteadyStateMethod::kPowerIteration ? "PowerIteration" : "NullSpace";
}

ComplexMatrix transfer_matrix(const CachingChannel& channel) {
  if (channel.system().k() > kMaxTransferK) {
    throw std::invalid_argument("transfer_matrix: only buffers with k <= 2 are supported");
  }
  // vec(M rho M^dagger) = (conj(M) kron M) vec(rho) for column-major vec; in
  // little-endian tensor() order that is tensor(M, conj(M)).
  const Eigen::Index d = channel.system().buffer_dim();
  ComplexMatrix t = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& m : channel.kraus_operators()) t += tensor(m, m.conjugate().eval());
  return t;
}

SteadyStateResult steady_state(const BufferSystem& sys, const SwapParams& params,
                               const DensityMatrix& rho0, const SteadyStateOptions& options) {
  require_nondegenerate(params);
  if (rho0.n_qubits() != sys.buffer_qubits()) {
    throw std::invalid_argument("steady_state: initial state does not match the buffer");
  }
  const CachingChannel channel(sys, params);
  const Eigen::Index d = sys.buffer_dim();

  if (options.allow_doubling && sys.k() <= kMaxTransferK) {
    ComplexMatrix power = transfer_matrix(channel);
    const KernelInfo kernel = generator_kernel(power);
    ComplexVector v = vec(rho0.mat());
    long steps = 0;
    double change = std::numeric_limits<double>::infinity();
    for (int m = 0; m < options.max_doublings; ++m) {
      // v holds rho_{2^m - 1}; power = T^{2^m}.
      ComplexVector next = vec(normalize(unvec(power * v, d)));
      change = (next - v).cwiseAbs().maxCoeff();
      v = std::move(next);
      steps = 2 * steps + 1;
      if (change < options.step_tolerance) {
        return finish(channel, unvec(v, d), SteadyStateMethod::kPowerIteration, kernel.dimension,
                      steps);
      }
      power = (power * power).eval();
    }
    throw ConvergenceError("steady_state: no convergence after repeated squaring", change);
  }

  ComplexMatrix rho = rho0.mat();
  double change = std::numeric_limits<double>::infinity();
  for (long step = 1; step <= options.max_steps; ++step) {
    ComplexMatrix next = normalize(channel.apply(rho));
    change = max_abs_diff(next, rho);
    rho = std::move(next);
    if (change < options.step_tolerance) {
      return finish(channel, rho, SteadyStateMethod::kPowerIteration, 1, step);
    }
  }
  throw ConvergenceError("steady_state: step cap reached, last change " + std::to_string(change),
                         change);
}

SteadyStateResult steady_state_null_space(const BufferSystem& sys, const SwapParams& params) {
  require_nondegenerate(params);
  const CachingChannel channel(sys, params);
  const KernelInfo kernel = generator_kernel(transfer_matrix(channel));
  const ComplexMatrix rho = unvec(kernel.null_vector, sys.buffer_dim());
  return finish(channel, rho, SteadyStateMethod::kNullSpace, kernel.dimension, 0);
}

std::array<double, 4> steady_state_weights_k1(const SwapParams& params) {
  require_nondegenerate(params);
  const double a = params.a();
  const double b = params.b();
  const double norm = a * a + 4.0 * b * (1.0 - a);
  if (norm <= 0.0) throw DegenerateChannelError("steady state normalization vanishes");
  return {b / norm, ((a - b) * (a - b) + b * (1.0 - b)) / norm, (1.0 - a) * b / norm,
          (1.0 - a) * b / norm};
}

DensityMatrix steady_state_closed_form_k1(const SwapParams& params) {
  const auto w = steady_state_weights_k1(params);
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int j = 0; j < 4; ++j) {
    const Eigen::Vector4cd v = bell_state(j + 1);
    rho += w[j] * (v * v.adjoint());
  }
  return DensityMatrix(hermitian_part(rho), QubitOrdering::buffer(1));
}

double steady_state_negativity_k1(const SwapParams& params) {
  require_nondegenerate(params);
  const double a = params.a();
  const double b = params.b();
  const double norm = a * a + 4.0 * b * (1.0 - a);
  if (norm <= 0.0) throw DegenerateChannelError("steady state normalization vanishes");
  const double num = std::abs(a * a - 2.0 * b) + std::abs(a * a - 4.0 * a * b + 2.0 * b) -
                     4.0 * b * (1.0 - a);
  return std::log2(1.0 + num / (2.0 * norm));
}

double verify_iswap_fixed_point(int k, double alpha) {
  if (k < 1 || k > 4) throw std::invalid_argument("verify_iswap_fixed_point: k must be 1..4");
  if (!(alpha > 0.0)) throw std::invalid_argument("verify_iswap_fixed_point: alpha must be > 0");
  const BufferSystem sys(k);
  const Eigen::Vector4cd psi1 = bell_state(1);
  const Eigen::Vector4cd psi2 = bell_state(2);
  const Eigen::Index d = qubit_dim(sys.total_qubits());
  ComplexVector in(d);
  for (Eigen::Index idx = 0; idx < d; ++idx) {
    auto bit = [&](int pos) { return static_cast<int>((idx >> pos) & 1); };
    Complex amp = psi1(bit(sys.pos_source_a()) + 2 * bit(sys.pos_source_b()));
    for (int j = 1; j <= k && amp != 0.0; ++j) amp *= psi2(bit(sys.pos_a(j)) + 2 * bit(sys.pos_b(j)));
    in(idx) = amp;
  }
  ComplexVector out = in;
  apply_caching_unitary(out, sys, SwapParams(alpha, alpha));
  return phase_aligned_distance(out, in);
}

SteadyGrid steady_state_grid(const BufferSystem& sys, const std::vector<double>& alpha_grid,
                             const std::vector<double>& beta_grid, const SteadyStateOptions& options,
                             int threads) {
  const std::size_t na = alpha_grid.size();
  const std::size_t nb = beta_grid.size();
  const DensityMatrix rho0 = DensityMatrix::all_zero(sys.buffer_ordering());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> values(na * nb, nan);
  std::vector<SteadyGridPoint> slots(na * nb, SteadyGridPoint{nan, nan, nan, nan, 0});
  parallel_for(na * nb, threads, [&](std::size_t idx) {
    const double alpha = alpha_grid[idx / nb];
    const double beta = beta_grid[idx % nb];
    if (beta > alpha + 1e-12) return;
    const SteadyStateResult r = steady_state(sys, SwapParams(alpha, std::min(beta, alpha)), rho0,
                                             options);
    slots[idx] = {alpha, beta, r.negativity, r.residual, r.kernel_dimension};
    values[idx] = r.negativity;
  });

  SteadyGrid grid;
  for (const auto& p : slots) {
    if (!std::isnan(p.alpha)) grid.points.push_back(p);
  }
  if (sys.k() >= 2) {
    std::vector<double> xs, ys;
    for (double a : alpha_grid) xs.push_back(a / std::numbers::pi);
    for (double b : beta_grid) ys.push_back(b / std::numbers::pi);
    grid.contour = marching_squares(xs, ys, values, 1.0);
  }
  return grid;
}

}  // namespace entbuffer
