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

#ifndef ENTBUFFER_STEADY_STATE_H
#define ENTBUFFER_STEADY_STATE_H

#include <array>
#include <stdexcept>
#include <vector>

#include "entbuffer/channel.h"
#include "entbuffer/contour.h"

namespace entbuffer {

/// alpha = 0 leaves every state fixed; there is no unique limit to report.
class DegenerateChannelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_change)
      : std::runtime_error(what), last_change_(last_change) {}
  double last_change() const { return last_change_; }

 private:
  double last_change_;
};

enum class SteadyStateMethod { kPowerIteration, kNullSpace };

const char* to_string(SteadyStateMethod m);

struct SteadyStateOptions {
  /// Stop once successive iterates differ by less than this (max norm).
  double step_tolerance = 1e-12;
  /// Sequential iteration cap.
  long max_steps = 1'000'000;
  /// For k <= 2 the chain is sampled at steps 2^m - 1 by squaring the
  /// transfer matrix, which reaches the slow-mixing small-alpha limits.
  bool allow_doubling = true;
  int max_doublings = 60;
};

struct SteadyStateResult {
  DensityMatrix rho;
  double negativity;
  /// max |C[rho] - rho|
  double residual;
  SteadyStateMethod method;
  /// Dimension of ker(C - id). Exact for k <= 2; for larger buffers it is
  /// not computed and the lower bound 1 is reported.
  int kernel_dimension;
  /// Chain steps represented by the returned state.
  long steps;
};

/// Limit of C^n[rho0]. Throws DegenerateChannelError for alpha = 0 and
/// ConvergenceError when the step cap is hit.
SteadyStateResult steady_state(const BufferSystem& sys, const SwapParams& params,
                               const DensityMatrix& rho0, const SteadyStateOptions& options = {});

/// Kernel of the vectorized generator via SVD. Only for k <= 2.
SteadyStateResult steady_state_null_space(const BufferSystem& sys, const SwapParams& params);

/// Dense transfer matrix acting on column-major vec(rho). k <= 2 only.
ComplexMatrix transfer_matrix(const CachingChannel& channel);

/// Bell-basis weights (psi1..psi4) of the k=1 fixed point:
/// {b, (a-b)^2 + b(1-b), (1-a)b, (1-a)b} / (a^2 + 4b(1-a)).
std::array<double, 4> steady_state_weights_k1(const SwapParams& params);
DensityMatrix steady_state_closed_form_k1(const SwapParams& params);
double steady_state_negativity_k1(const SwapParams& params);

/// Phase-minimized distance between U(alpha, alpha)|psi1>|psi2>^k and the
/// input. Requires 1 <= k <= 4 and alpha > 0.
double verify_iswap_fixed_point(int k, double alpha);

struct SteadyGridPoint {
  double alpha;  // radians
  double beta;
  double negativity;
  double residual;
  int kernel_dimension;
};

struct SteadyGrid {
  std::vector<SteadyGridPoint> points;
  /// Level-1 ebit contour in (alpha, beta), units of pi; k >= 2 only.
  std::vector<Polyline> contour;
};

/// E_infinity over alpha_grid x beta_grid (radians), skipping beta > alpha.
/// Every solve starts from the all-|0> buffer.
SteadyGrid steady_state_grid(const BufferSystem& sys, const std::vector<double>& alpha_grid,
                             const std::vector<double>& beta_grid,
                             const SteadyStateOptions& options = {}, int threads = 1);

}  // namespace entbuffer

#endif  // ENTBUFFER_STEADY_STATE_H
