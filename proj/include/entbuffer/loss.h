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

#ifndef ENTBUFFER_LOSS_H
#define ENTBUFFER_LOSS_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entbuffer/channel.h"

namespace entbuffer {

/// Final E is compared as E >= threshold - kThresholdSlack.
inline constexpr double kThresholdSlack = 1e-9;

struct LossConfig {
  /// Per-side transmission probability, 0 < p <= 1.
  double p = 0.5;
  /// Caching steps per trajectory.
  int n = 10;
  /// Number of trajectories M.
  long samples = 5000;
  double e_threshold = 1.0;
  std::uint64_t seed = 0;
  /// Worker threads; 0 means all hardware threads. Results do not depend on it.
  int threads = 1;

  /// Throws std::invalid_argument on out-of-range fields. The threshold must
  /// lie in [0, k].
  void validate(int k) const;
};

struct LossTrajectory {
  std::vector<LossMask> masks;
  /// Base seed of the run; the stream seed follows from (seed, index).
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

struct TrajectorySample {
  DensityMatrix final_state;
  double negativity;
  LossTrajectory trajectory;
};

struct SuccessEstimate {
  double q_hat = 0.0;
  /// sqrt(q_hat (1 - q_hat) / M)
  double std_error = 0.0;
  long successes = 0;
  LossConfig config;
};

/// Seed of trajectory `index`'s private generator.
std::uint64_t trajectory_stream_seed(std::uint64_t seed, std::uint64_t index);

/// Masks of trajectory `index`. Each step draws side A, then side B; a side
/// arrives when its uniform draw is below p.
LossTrajectory draw_trajectory(const LossConfig& cfg, std::uint64_t index);

/// Runs trajectory `index` from the all-|0> buffer, one channel per step.
TrajectorySample sample_trajectory(const BufferSystem& sys, const SwapParams& params,
                                   const LossConfig& cfg, std::uint64_t index);

/// Fraction of cfg.samples trajectories ending with E >= cfg.e_threshold.
SuccessEstimate estimate_q(const BufferSystem& sys, const SwapParams& params,
                           const LossConfig& cfg);

/// One estimate per threshold, all from the same trajectory set.
std::vector<SuccessEstimate> estimate_q(const BufferSystem& sys, const SwapParams& params,
                                        const LossConfig& cfg,
                                        const std::vector<double>& thresholds);

/// Final negativities of trajectories 0..cfg.samples-1, in index order.
std::vector<double> trajectory_negativities(const BufferSystem& sys, const SwapParams& params,
                                            const LossConfig& cfg);

/// 1-ebit rate of full SWAPs on a 1-pair buffer after n steps.
double q_n_full_swap(double p, int n);
/// Same for full iSWAPs from a depleted buffer.
double q_n_full_iswap(double p, int n);

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BranchResult {
  double q = 0.0;
  double total_weight = 0.0;
  /// Distinct buffer states met along the way, including the start.
  std::size_t distinct_states = 0;
};

/// Exact q_n: sums the weights of all 4^n mask sequences, merging branches
/// that reach the same buffer state. Allowed sizes: n <= 8 for k <= 2 and
/// n <= 6 for k <= 4; larger requests throw BudgetError. Starts from
/// all-|0> unless `init` is given.
BranchResult exact_branch_distribution(const BufferSystem& sys, const SwapParams& params, double p,
                                       int n, double e_threshold,
                                       const std::optional<DensityMatrix>& init = std::nullopt);

/// Same propagation without the n budget, for parameters whose reachable
/// state set is small (full swaps). Throws BudgetError once more than
/// max_states distinct states appear.
BranchResult markov_success_rate(const BufferSystem& sys, const SwapParams& params, double p,
                                 int n, double e_threshold, std::size_t max_states = 4096,
                                 const std::optional<DensityMatrix>& init = std::nullopt);

/// Long-run 1-ebit rate at alpha = pi for the given beta: p/(2-p) for SWAP at
/// k=1, otherwise the exact distribution at n = 16, 32, 64, ... until two
/// successive values agree within 1e-12.
double asymptotic_success_rate(const BufferSystem& sys, double beta, double p,
                               double e_threshold = 1.0);

struct LossSweepRow {
  int k;
  double alpha_over_pi;
  std::string family;
  double e_threshold;
  double q_hat;
  double std_error;
  int n;
  long samples;
  double p;
  std::uint64_t seed;
};

/// Rows for every (alpha, family, threshold) plus the reference rows
/// "reference_p2" (p^2) and "reference_asymptote" (1-ebit long-run rate at
/// alpha = pi). Families are "swap" (beta = 0) and "iswap" (beta = alpha).
std::vector<LossSweepRow> loss_sweep(const BufferSystem& sys, const LossConfig& base,
                                     const std::vector<double>& alpha_grid,
                                     const std::vector<std::string>& families,
                                     const std::vector<double>& thresholds);

/// Exact 1-ebit rate at alpha = pi against the step count, for both
/// families, in increasing n. Rows use family "swap_exact"/"iswap_exact",
/// samples 0 and std_error 0.
std::vector<LossSweepRow> convergence_rows(int k, double p, const std::vector<int>& steps);

}  // namespace entbuffer

#endif  // ENTBUFFER_LOSS_H
