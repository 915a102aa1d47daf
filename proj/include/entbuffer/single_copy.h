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

#ifndef ENTBUFFER_SINGLE_COPY_H
#define ENTBUFFER_SINGLE_COPY_H

#include <array>
#include <vector>

#include "entbuffer/channel.h"

namespace entbuffer {

/// cos(theta)|0> + e^{i delta} sin(theta)|1>, theta in [0, pi), delta in
/// [0, 2 pi).
class PureInit {
 public:
  PureInit(double theta, double delta);

  double theta() const { return theta_; }
  double delta() const { return delta_; }

  Eigen::Vector2cd qubit() const;
  /// |phi>^{(x) 2k} on the buffer ordering.
  ComplexVector buffer_vector(const BufferSystem& sys) const;
  DensityMatrix buffer_state(const BufferSystem& sys) const;

 private:
  double theta_;
  double delta_;
};

/// Buffer negativity after one caching step from `init`.
double single_copy_E(const BufferSystem& sys, const SwapParams& params, const DensityMatrix& init);

/// Closed form for the k=1 maximally mixed start; zero when a(a+2b) <= 1.
double mixed_init_E_closed_form(const SwapParams& params);

/// log2(1 + sin^4(alpha/2)), the all-|0> (or all-|1>) result at k=1.
double all_zero_E_closed_form(double alpha);

/// log2(1 + cos^2(2 theta)), the full-iSWAP k=1 result for PureInit(theta, 0).
double full_iswap_E_closed_form(double theta);

struct PureSweepRow {
  double theta;
  double delta;
  double E;
};

struct PureSweep {
  /// theta-major: rows[i * delta_grid.size() + j].
  std::vector<PureSweepRow> rows;
  /// max_delta E - min_delta E for each theta.
  std::vector<double> delta_spread;
  double max_delta_spread = 0.0;
};

PureSweep pure_sweep(const BufferSystem& sys, const SwapParams& params,
                     const std::vector<double>& theta_grid, const std::vector<double>& delta_grid,
                     int threads = 1);

/// How n_star was determined.
enum class CachingTimeCriterion {
  /// First pass with E >= 1 - 1e-6.
  kThreshold,
  /// No pass reached the threshold; first local maximum of E, accepted when
  /// it is at least kLocalMaximumFloor.
  kLocalMaximum,
  kNotReached,
};

inline constexpr double kOneEbitTolerance = 1e-6;
inline constexpr double kLocalMaximumFloor = 0.99;
inline constexpr long kMaxPasses = 100'000;

const char* to_string(CachingTimeCriterion c);

struct CachingTime {
  long n_star = 0;
  double E = 0.0;
  /// n_star * k * alpha / pi
  double scaled_time = 0.0;
  CachingTimeCriterion criterion = CachingTimeCriterion::kNotReached;

  bool reached() const { return criterion != CachingTimeCriterion::kNotReached; }
};

struct MultiPassResult {
  /// negativity[n - 1] is the buffer E after n passes.
  std::vector<double> negativity;
  CachingTime time;
};

/// The same source pair passes through the buffer n_passes times. The joint
/// pure state evolves coherently under U^n; E is read off the buffer marginal
/// after every pass. Buffer starts in all-|0>.
MultiPassResult multi_pass_single_pair(const BufferSystem& sys, const SwapParams& params,
                                       long n_passes);

/// Runs passes until n_star is determined (or max_passes is hit).
CachingTime caching_time(const BufferSystem& sys, const SwapParams& params,
                         long max_passes = kMaxPasses);

/// log2(1 + sin^4(sqrt(k) n alpha / 2)). The weak-coupling formula carries no
/// r dependence; r is accepted so call sites mirror the exact model.
double dicke_weak_E(int k, double alpha, long n, double r);

/// Collective-spin model for an all-|0> start: each side holds its source
/// qubit and the buffer in {|g>, |e>} = {all-|0>, symmetric one-excitation
/// Dicke state}. Amplitudes are indexed sideA + 4 sideB with side index
/// s + 2e (s = source bit, e = 1 for |e>).
///
/// Evolution uses H = H_xy + (1 - r) H_z per side for time n alpha, with the
/// z term kept (the closed form above drops it).
class DickeModelState {
 public:
  DickeModelState(int k, double r);

  int k() const { return k_; }
  double r() const { return r_; }
  const Eigen::Matrix<Complex, 16, 1>& amplitudes() const { return amps_; }

  /// Evolves the initial state for total interaction time t = n alpha.
  void evolve(double t);
  double norm() const { return amps_.norm(); }
  /// cos^2(sqrt(k) t / 2) for the last evolve() time.
  double x() const { return x_; }

  /// Buffer state on (e_A, e_B) after tracing out both source qubits.
  Eigen::Matrix4cd buffer_state() const;
  double negativity() const;

 private:
  int k_;
  double r_;
  double x_ = 1.0;
  Eigen::Matrix<Complex, 16, 1> amps_;
  Eigen::Matrix<Complex, 16, 16> hamiltonian_;
};

/// E from DickeModelState after n passes at angle alpha.
double dicke_model_E(int k, double alpha, long n, double r);

}  // namespace entbuffer

#endif  // ENTBUFFER_SINGLE_COPY_H
