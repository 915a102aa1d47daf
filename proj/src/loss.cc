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

#include "entbuffer/loss.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <unordered_map>

#include "entbuffer/parallel.h"

namespace entbuffer {

namespace {

constexpr double kHashScale = 1e8;
constexpr double kSameStateTolerance = 1e-10;
constexpr std::size_t kStoreBytes = std::size_t{1} << 30;
constexpr std::size_t kNegativityBatch = 32;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Effective steps: a two-sided loss is the identity and is dropped.
enum Step : std::uint8_t { kBoth = 0, kOnlyA = 1, kOnlyB = 2 };

int step_of(LossMask m) {
  if (m.arrived_a && m.arrived_b) return kBoth;
  if (m.arrived_a) return kOnlyA;
  if (m.arrived_b) return kOnlyB;
  return -1;
}

std::size_t state_hash(const ComplexMatrix& m) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  const Complex* p = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto re = static_cast<std::uint64_t>(std::llround(p[i].real() * kHashScale));
    const auto im = static_cast<std::uint64_t>(std::llround(p[i].imag() * kHashScale));
    h = splitmix64(h ^ re);
    h = splitmix64(h ^ im);
  }
  return static_cast<std::size_t>(h);
}

// Interned buffer states with memoized transitions and negativities.
class StateStore {
 public:
  StateStore(const BufferSystem& sys, const SwapParams& params, std::size_t max_states)
      : sys_(sys),
        channels_{CachingChannel(sys, params, {true, true}),
                  CachingChannel(sys, params, {true, false}),
                  CachingChannel(sys, params, {false, true})},
        max_states_(max_states) {}

  std::size_t size() const { return nodes_.size(); }
  bool full() const { return nodes_.size() >= max_states_; }

  // Id of an equal stored state, else stores it; -1 if the store is full.
  int intern(ComplexMatrix rho) {
    const std::size_t h = state_hash(rho);
    auto [lo, hi] = index_.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      if (max_abs_diff(nodes_[it->second].rho, rho) <= kSameStateTolerance) return it->second;
    }
    if (full()) return -1;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({std::move(rho), {-1, -1, -1}, std::numeric_limits<double>::quiet_NaN()});
    index_.emplace(h, id);
    return id;
  }

  const ComplexMatrix& state(int id) const { return nodes_[id].rho; }

  ComplexMatrix apply(int step, const ComplexMatrix& rho) const {
    return hermitian_part(channels_[step].apply(rho));
  }

  // Memoized successor; -1 when it could not be stored.
  int child(int id, int step) {
    if (nodes_[id].next[step] < 0) {
      const int next = intern(apply(step, nodes_[id].rho));
      nodes_[id].next[step] = next;
    }
    return nodes_[id].next[step];
  }

  int known_child(int id, int step) const { return nodes_[id].next[step]; }
  void set_child(int id, int step, int child) { nodes_[id].next[step] = child; }

  double negativity(int id) {
    double& e = nodes_[id].negativity;
    if (std::isnan(e)) e = negativity_of(nodes_[id].rho);
    return e;
  }

  double negativity_of(const ComplexMatrix& rho) const {
    return log_negativity(DensityMatrix(rho, sys_.buffer_ordering()), sys_.buffer_cut());
  }

 private:
  struct Node {
    ComplexMatrix rho;
    std::array<int, 3> next;
    double negativity;
  };

  BufferSystem sys_;
  std::array<CachingChannel, 3> channels_;
  std::size_t max_states_;
  std::vector<Node> nodes_;
  std::unordered_multimap<std::size_t, int> index_;
};

std::size_t default_store_capacity(const BufferSystem& sys) {
  const std::size_t bytes = static_cast<std::size_t>(sys.buffer_dim() * sys.buffer_dim()) *
                            sizeof(Complex);
  return std::max<std::size_t>(16, kStoreBytes / bytes);
}

std::vector<std::uint8_t> effective_steps(const LossTrajectory& t) {
  std::vector<std::uint8_t> out;
  for (const LossMask& m : t.masks) {
    const int s = step_of(m);
    if (s >= 0) out.push_back(static_cast<std::uint8_t>(s));
  }
  return out;
}

// Walks the trajectories in lexicographic order of their effective step
// sequences so that shared prefixes are simulated once. Equal states reached
// by different prefixes are merged through the store.
std::vector<double> simulate_negativities(const BufferSystem& sys, const SwapParams& params,
                                          const LossConfig& cfg) {
  const auto m = static_cast<std::size_t>(cfg.samples);
  std::vector<std::vector<std::uint8_t>> seqs(m);
  for (std::size_t i = 0; i < m; ++i) seqs[i] = effective_steps(draw_trajectory(cfg, i));
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return seqs[a] < seqs[b]; });

  StateStore store(sys, params, default_store_capacity(sys));
  const int root = store.intern(DensityMatrix::all_zero(sys.buffer_ordering()).mat());

  struct Frame {
    int id;
    ComplexMatrix owned;  // used when id < 0
  };
  std::vector<Frame> stack{{root, {}}};
  auto frame_state = [&](const Frame& f) -> const ComplexMatrix& {
    return f.id >= 0 ? store.state(f.id) : f.owned;
  };

  std::vector<double> e(m, 0.0);
  std::vector<std::pair<std::size_t, ComplexMatrix>> pending;
  auto flush = [&] {
    parallel_for(pending.size(), cfg.threads, [&](std::size_t i) {
      e[pending[i].first] = store.negativity_of(pending[i].second);
    });
    pending.clear();
  };

  const std::vector<std::uint8_t>* prev = nullptr;
  for (std::size_t idx : order) {
    const auto& seq = seqs[idx];
    std::size_t common = 0;
    if (prev != nullptr) {
      while (common < seq.size() && common < prev->size() && seq[common] == (*prev)[common]) {
        ++common;
      }
    }
    stack.resize(common + 1);
    for (std::size_t d = common; d < seq.size(); ++d) {
      const Frame& top = stack.back();
      Frame next{top.id >= 0 ? store.known_child(top.id, seq[d]) : -1, {}};
      if (next.id < 0) {
        next.owned = store.apply(seq[d], frame_state(top));
        next.id = store.intern(next.owned);
        if (next.id >= 0) {
          if (top.id >= 0) store.set_child(top.id, seq[d], next.id);
          next.owned = ComplexMatrix();
        }
      }
      stack.push_back(std::move(next));
    }
    const Frame& leaf = stack.back();
    if (leaf.id >= 0) {
      e[idx] = store.negativity(leaf.id);
    } else {
      pending.emplace_back(idx, frame_state(leaf));
      if (pending.size() >= kNegativityBatch) flush();
    }
    prev = &seq;
  }
  flush();
  return e;
}

SuccessEstimate make_estimate(const std::vector<double>& e, const LossConfig& cfg,
                              double threshold) {
  SuccessEstimate est;
  est.config = cfg;
  est.config.e_threshold = threshold;
  for (double v : e) {
    if (v >= threshold - kThresholdSlack) ++est.successes;
  }
  const double mcount = static_cast<double>(e.size());
  est.q_hat = static_cast<double>(est.successes) / mcount;
  est.std_error = std::sqrt(est.q_hat * (1.0 - est.q_hat) / mcount);
  return est;
}

void check_probability(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("transmission probability outside (0, 1]");
}

// Exact distribution over interned buffer states, advanced one step at a
// time.
class Propagator {
 public:
  Propagator(const BufferSystem& sys, const SwapParams& params, double p, std::size_t max_states,
             const std::optional<DensityMatrix>& init)
      : store_(sys, params, std::min(max_states, default_store_capacity(sys))) {
    check_probability(p);
    if (init && init->n_qubits() != sys.buffer_qubits()) {
      throw std::invalid_argument("initial state does not match the buffer");
    }
    const double q = 1.0 - p;
    w_ = {p * p, p * q, q * p};
    w_none_ = q * q;
    const ComplexMatrix start =
        init ? init->mat() : DensityMatrix::all_zero(sys.buffer_ordering()).mat();
    dist_ = {{store_.intern(start), 1.0}};
  }

  void advance(int steps) {
    for (int step = 0; step < steps; ++step) {
      std::map<int, double> next;
      for (const auto& [id, weight] : dist_) {
        next[id] += weight * w_none_;
        for (int s = 0; s < 3; ++s) {
          if (w_[s] == 0.0) continue;
          const int child = store_.child(id, s);
          if (child < 0) throw BudgetError("state budget exceeded");
          next[child] += weight * w_[s];
        }
      }
      dist_ = std::move(next);
    }
  }

  BranchResult result(double e_threshold) {
    BranchResult r;
    for (const auto& [id, weight] : dist_) {
      r.total_weight += weight;
      if (store_.negativity(id) >= e_threshold - kThresholdSlack) r.q += weight;
    }
    r.distinct_states = store_.size();
    return r;
  }

 private:
  StateStore store_;
  std::array<double, 3> w_{};
  double w_none_ = 0.0;
  std::map<int, double> dist_;
};

BranchResult propagate(const BufferSystem& sys, const SwapParams& params, double p, int n,
                       double e_threshold, std::size_t max_states,
                       const std::optional<DensityMatrix>& init) {
  if (n < 0) throw std::invalid_argument("step count must be >= 0");
  Propagator prop(sys, params, p, max_states, init);
  prop.advance(n);
  return prop.result(e_threshold);
}

}  // namespace

void LossConfig::validate(int k) const {
  check_probability(p);
  if (n < 1) throw std::invalid_argument("LossConfig: n must be >= 1");
  if (samples < 1) throw std::invalid_argument("LossConfig: samples must be >= 1");
  if (!(e_threshold >= 0.0 && e_threshold <= static_cast<double>(k))) {
    throw std::invalid_argument("LossConfig: E threshold outside [0, k]");
  }
  if (threads < 0) throw std::invalid_argument("LossConfig: threads must be >= 0");
}

std::uint64_t trajectory_stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) + index);
}

LossTrajectory draw_trajectory(const LossConfig& cfg, std::uint64_t index) {
  LossTrajectory t;
  t.seed = cfg.seed;
  t.index = index;
  std::mt19937_64 rng(trajectory_stream_seed(cfg.seed, index));
  t.masks.reserve(static_cast<std::size_t>(cfg.n));
  for (int s = 0; s < cfg.n; ++s) {
    const bool a = uniform01(rng) < cfg.p;
    const bool b = uniform01(rng) < cfg.p;
    t.masks.push_back({a, b});
  }
  return t;
}

TrajectorySample sample_trajectory(const BufferSystem& sys, const SwapParams& params,
                                   const LossConfig& cfg, std::uint64_t index) {
  cfg.validate(sys.k());
  LossTrajectory traj = draw_trajectory(cfg, index);
  DensityMatrix rho = DensityMatrix::all_zero(sys.buffer_ordering());
  for (const LossMask& m : traj.masks) rho = CachingChannel(sys, params, m).apply(rho);
  const double e = log_negativity(rho, sys.buffer_cut());
  return {std::move(rho), e, std::move(traj)};
}

std::vector<double> trajectory_negativities(const BufferSystem& sys, const SwapParams& params,
                                            const LossConfig& cfg) {
  cfg.validate(sys.k());
  return simulate_negativities(sys, params, cfg);
}

SuccessEstimate estimate_q(const BufferSystem& sys, const SwapParams& params,
                           const LossConfig& cfg) {
  return make_estimate(trajectory_negativities(sys, params, cfg), cfg, cfg.e_threshold);
}

std::vector<SuccessEstimate> estimate_q(const BufferSystem& sys, const SwapParams& params,
                                        const LossConfig& cfg,
                                        const std::vector<double>& thresholds) {
  for (double t : thresholds) {
    LossConfig c = cfg;
    c.e_threshold = t;
    c.validate(sys.k());
  }
  const std::vector<double> e = trajectory_negativities(sys, params, cfg);
  std::vector<SuccessEstimate> out;
  for (double t : thresholds) out.push_back(make_estimate(e, cfg, t));
  return out;
}

double q_n_full_swap(double p, int n) {
  check_probability(p);
  if (n < 1) throw std::invalid_argument("q_n_full_swap: n must be >= 1");
  return (1.0 - std::pow(1.0 - p, 2.0 * n)) * p / (2.0 - p);
}

double q_n_full_iswap(double p, int n) {
  check_probability(p);
  if (n < 1) throw std::invalid_argument("q_n_full_iswap: n must be >= 1");
  const double decay = std::pow(1.0 - p, 2.0 * (n - 1));
  return p * p * (1.0 - decay - (n - 1) * p * (2.0 - p) * decay) / ((2.0 - p) * (2.0 - p));
}

BranchResult exact_branch_distribution(const BufferSystem& sys, const SwapParams& params, double p,
                                       int n, double e_threshold,
                                       const std::optional<DensityMatrix>& init) {
  const int limit = sys.k() <= 2 ? 8 : (sys.k() <= 4 ? 6 : 0);
  if (n > limit) {
    throw BudgetError("exact_branch_distribution: n = " + std::to_string(n) +
                      " exceeds the budget " + std::to_string(limit) + " for k = " +
                      std::to_string(sys.k()));
  }
  // 3^n effective branches bound the number of distinct states.
  std::size_t bound = 1;
  for (int i = 0; i <= n; ++i) bound *= 3;
  return propagate(sys, params, p, n, e_threshold, bound, init);
}

BranchResult markov_success_rate(const BufferSystem& sys, const SwapParams& params, double p,
                                 int n, double e_threshold, std::size_t max_states,
                                 const std::optional<DensityMatrix>& init) {
  return propagate(sys, params, p, n, e_threshold, max_states, init);
}

double asymptotic_success_rate(const BufferSystem& sys, double beta, double p,
                               double e_threshold) {
  check_probability(p);
  const SwapParams params(std::numbers::pi, beta);
  if (sys.k() == 1 && beta == 0.0 && e_threshold == 1.0) return p / (2.0 - p);
  // Deviation from the limit decays like (1-p)^{2n} times a polynomial.
  Propagator prop(sys, params, p, 4096, std::nullopt);
  prop.advance(16);
  double prev = prop.result(e_threshold).q;
  for (int n = 16; n < 1 << 16; n *= 2) {
    prop.advance(n);
    const double q = prop.result(e_threshold).q;
    if (std::abs(q - prev) < 1e-12) return q;
    prev = q;
  }
  throw std::runtime_error("asymptotic_success_rate: no convergence");
}

std::vector<LossSweepRow> loss_sweep(const BufferSystem& sys, const LossConfig& base,
                                     const std::vector<double>& alpha_grid,
                                     const std::vector<std::string>& families,
                                     const std::vector<double>& thresholds) {
  base.validate(sys.k());
  std::vector<LossSweepRow> rows;
  for (double alpha : alpha_grid) {
    for (const std::string& family : families) {
      double beta = 0.0;
      if (family == "iswap") {
        beta = alpha;
      } else if (family != "swap") {
        throw std::invalid_argument("loss_sweep: unknown family '" + family + "'");
      }
      const auto estimates = estimate_q(sys, SwapParams(alpha, beta), base, thresholds);
      for (const SuccessEstimate& est : estimates) {
        rows.push_back({sys.k(), alpha / std::numbers::pi, family, est.config.e_threshold,
                        est.q_hat, est.std_error, base.n, base.samples, base.p, base.seed});
      }
    }
  }
  rows.push_back({sys.k(), 1.0, "reference_p2", 1.0, base.p * base.p, 0.0, base.n, 0, base.p,
                  base.seed});
  rows.push_back({sys.k(), 1.0, "reference_asymptote", 1.0,
                  asymptotic_success_rate(sys, 0.0, base.p), 0.0, base.n, 0, base.p, base.seed});
  return rows;
}

std::vector<LossSweepRow> convergence_rows(int k, double p, const std::vector<int>& steps) {
  const BufferSystem sys(k);
  std::vector<int> sorted = steps;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() < 0) {
    throw std::invalid_argument("convergence_rows: negative step count");
  }
  std::vector<LossSweepRow> rows;
  for (const auto& [family, beta] :
       {std::pair<const char*, double>{"swap_exact", 0.0}, {"iswap_exact", std::numbers::pi}}) {
    Propagator prop(sys, SwapParams(std::numbers::pi, beta), p, 4096, std::nullopt);
    int done = 0;
    for (int n : sorted) {
      prop.advance(n - done);
      done = n;
      rows.push_back({k, 1.0, family, 1.0, prop.result(1.0).q, 0.0, n, 0, p, 0});
    }
  }
  return rows;
}

}  // namespace entbuffer
