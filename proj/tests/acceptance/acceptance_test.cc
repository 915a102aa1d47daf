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


// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line each. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "entbuffer/channel.h"
#include "entbuffer/experiment.h"
#include "entbuffer/loss.h"
#include "entbuffer/single_copy.h"
#include "entbuffer/steady_state.h"
#include "test_util.h"

namespace {

using namespace entbuffer;
using testing::kPi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.2e", v); }

Outcome gate_algebra() {
  Outcome o;
  const double swap = max_abs_diff(partial_swap(SwapParams(kPi, 0.0)), swap_gate());
  const double iswap = max_abs_diff(partial_swap(SwapParams(kPi, kPi)), iswap_gate());
  Gate2 expected_iswap = Gate2::Zero();
  expected_iswap(0, 0) = expected_iswap(3, 3) = 1.0;
  expected_iswap(1, 2) = expected_iswap(2, 1) = Complex(0.0, -1.0);
  const double convention = max_abs_diff(iswap_gate(), expected_iswap);
  auto rng = testing::test_rng(100);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double comp = 0.0, oracle = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a1 = u(rng) * kPi / 2, a2 = u(rng) * kPi / 2;
    const SwapParams p1(a1, u(rng) * a1), p2(a2, u(rng) * a2);
    const SwapParams sum(a1 + a2, p1.beta() + p2.beta());
    comp = std::max(comp, max_abs_diff(compose_check(p1, p2), partial_swap(sum)));
    oracle = std::max(oracle, max_abs_diff(partial_swap(p1),
                                           testing::oracle_partial_swap(a1, p1.beta())));
  }
  o.check(swap <= 1e-12, "S(pi,0) vs SWAP " + sci(swap));
  o.check(iswap <= 1e-12 && convention == 0.0, "S(pi,pi) vs iSWAP " + sci(iswap));
  o.check(comp <= 1e-12, "composition x100 " + sci(comp));
  o.check(oracle <= 1e-12, "spectral oracle " + sci(oracle));
  return o;
}

// Choi matrix of a buffer channel; the buffer output factor is the high index.
ComplexMatrix choi(const CachingChannel& c) {
  const Eigen::Index d = c.system().buffer_dim();
  ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = 1.0;
      const ComplexMatrix img = c.apply(e);
      for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index s = 0; s < d; ++s) out(i + d * r, j + d * s) = img(r, s);
      }
    }
  }
  return out;
}

Outcome channel_correctness() {
  Outcome o;
  auto rng = testing::test_rng(101);
  const BufferSystem sys(1);
  double kraus_vs_trace = 0.0, structured = 0.0;
  std::vector<SwapParams> params;
  for (int j = 0; j < 20; ++j) params.push_back(testing::random_params(rng));
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = testing::random_state(sys.buffer_ordering(), rng);
    for (const SwapParams& p : params) {
      const ComplexMatrix reference = apply_channel(rho, sys, p).mat();
      kraus_vs_trace =
          std::max(kraus_vs_trace, max_abs_diff(kraus_k1_closed_form(p).apply(rho.mat()), reference));
      structured = std::max(structured, max_abs_diff(CachingChannel(sys, p).apply(rho).mat(),
                                                     reference));
    }
  }
  o.check(kraus_vs_trace <= 1e-11, "Kraus vs partial trace 50x20 " + sci(kraus_vs_trace));
  o.check(structured <= 1e-11, "structured channel " + sci(structured));

  double completeness = 0.0, choi_min = 0.0, trace_err = 0.0, herm = 0.0;
  for (int k = 1; k <= 2; ++k) {
    const BufferSystem s(k);
    for (int t = 0; t < 5; ++t) {
      const SwapParams p = testing::random_params(rng);
      for (LossMask m : {LossMask::both(), LossMask{true, false}, LossMask{false, true},
                         LossMask::none()}) {
        const CachingChannel c(s, p, m);
        completeness = std::max(completeness, KrausSet{c.kraus_operators()}.completeness_residual());
        const ComplexMatrix j = choi(c);
        herm = std::max(herm, hermiticity_residual(j));
        choi_min = std::min(choi_min, hermitian_eigenvalues(hermitian_part(j)).minCoeff());
        const ComplexMatrix rho = testing::random_density(2 * k, rng);
        trace_err = std::max(trace_err, std::abs(c.apply(rho).trace() - 1.0));
      }
    }
  }
  o.check(completeness <= 1e-12, "sum M^dag M = I over masks " + sci(completeness));
  o.check(choi_min >= -1e-12 && herm <= 1e-12, "Choi PSD, min eig " + sci(choi_min));
  o.check(trace_err <= 1e-12, "trace preserved " + sci(trace_err));
  return o;
}

Outcome mixed_init_closed_form() {
  Outcome o;
  const BufferSystem sys(1);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(sys.buffer_ordering());
  double err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double alpha = kPi * i / 49.0;
    for (int j = 0; j < 50; ++j) {
      const SwapParams p(alpha, alpha * j / 49.0);
      err = std::max(err, std::abs(single_copy_E(sys, p, mixed) - mixed_init_E_closed_form(p)));
    }
  }
  o.check(err <= 1e-10, "50x50 grid max |E - closed form| " + sci(err));

  const double a0 = 2.0 * std::asin(std::pow(3.0, -0.25));
  const double at_zero = single_copy_E(sys, SwapParams(a0, 0.0), mixed);
  const double above = single_copy_E(sys, SwapParams(a0 + 0.05, 0.0), mixed);
  const double below = single_copy_E(sys, SwapParams(a0 - 0.05, 0.0), mixed);
  o.check(std::abs(at_zero) <= 1e-10 && above > 0.0 && below == 0.0,
          "threshold 2 arcsin(3^-1/4): E " + sci(at_zero) + ", above " + sci(above));

  double diag = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double alpha = kPi * i / 100.0;
    diag = std::max(diag, single_copy_E(sys, SwapParams(alpha, alpha), mixed));
  }
  o.check(diag <= 1e-10, "beta = alpha max E " + sci(diag));
  return o;
}

Outcome pure_init_closed_forms() {
  Outcome o;
  const BufferSystem sys(1);
  const DensityMatrix zero = DensityMatrix::all_zero(sys.buffer_ordering());
  double err = 0.0, spread = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double alpha = kPi * i / 50.0;
    double lo = 1e9, hi = -1e9;
    for (int j = 0; j <= 20; ++j) {
      const double e = single_copy_E(sys, SwapParams(alpha, alpha * j / 20.0), zero);
      err = std::max(err, std::abs(e - all_zero_E_closed_form(alpha)));
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    spread = std::max(spread, hi - lo);
  }
  o.check(err <= 1e-10, "|00> init vs log2(1+sin^4(a/2)) " + sci(err));
  o.check(spread <= 1e-10, "beta spread " + sci(spread));

  double iswap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double theta = kPi * i / 100.0;
    const double e = single_copy_E(sys, SwapParams(kPi, kPi), PureInit(theta, 0.0).buffer_state(sys));
    iswap = std::max(iswap, std::abs(e - full_iswap_E_closed_form(theta)));
  }
  o.check(iswap <= 1e-10, "full iSWAP vs log2(1+cos^2(2 theta)) x100 " + sci(iswap));
  return o;
}

Outcome steady_state_criteria() {
  Outcome o;
  const BufferSystem k1(1);
  const DensityMatrix zero = DensityMatrix::all_zero(k1.buffer_ordering());
  double rho_err = 0.0, e_err = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double alpha = kPi * (i + 1) / 20.0;
    for (int j = 0; j < 20; ++j) {
      const SwapParams p(alpha, alpha * j / 19.0);
      const SteadyStateResult r = steady_state(k1, p, zero);
      rho_err = std::max(rho_err, max_abs_diff(r.rho.mat(), steady_state_closed_form_k1(p).mat()));
      e_err = std::max(e_err, std::abs(r.negativity - steady_state_negativity_k1(p)));
    }
  }
  o.check(rho_err <= 1e-9, "k=1 20x20 rho vs closed form " + sci(rho_err));
  o.check(e_err <= 1e-9, "k=1 20x20 E vs closed form " + sci(e_err));

  const double a0 = 2.0 * std::asin(std::sqrt(2.0 / 3.0));
  const double e0 = steady_state(k1, SwapParams(a0, 0.0), zero).negativity;
  o.check(std::abs(e0) <= 1e-9, "E_inf at 2 arcsin(sqrt(2/3)) " + sci(e0));

  double col = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const BufferSystem sys(k);
    for (double a : {0.3, 0.6, 1.0}) {
      const auto r = steady_state(sys, SwapParams(a * kPi, a * kPi),
                                  DensityMatrix::all_zero(sys.buffer_ordering()));
      col = std::max(col, std::abs(r.negativity - k));
    }
  }
  o.check(col <= 1e-8, "iSWAP column E_inf = k, k=1..3 " + sci(col));

  auto rng = testing::test_rng(102);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double fixed = 0.0;
  for (int k = 1; k <= 4; ++k) {
    for (int i = 0; i < 10; ++i) fixed = std::max(fixed, verify_iswap_fixed_point(k, (0.01 + 0.99 * u(rng)) * kPi));
  }
  o.check(fixed <= 1e-11, "fixed-point residual k<=4 x10 " + sci(fixed));
  return o;
}

Outcome sqrt_k_scaling() {
  Outcome o;
  const double alpha = 0.02 * kPi;
  for (int k = 1; k <= 4; ++k) {
    const CachingTime t = caching_time(BufferSystem(k), SwapParams(alpha, alpha));
    const double target = std::sqrt(static_cast<double>(k));
    const double rel = std::abs(t.scaled_time - target) / target;
    o.check(t.reached() && rel <= 0.05, "k=" + std::to_string(k) + " n*=" +
                                            std::to_string(t.n_star) + " (" + to_string(t.criterion) +
                                            ") nk alpha/pi=" + fmt("%.3f", t.scaled_time) +
                                            " rel " + fmt("%.3f", rel));
  }
  // Deviation of the weak-coupling formula from the exact multi-pass run
  // over n alpha <= 0.48 pi.
  for (int k = 2; k <= 4; ++k) {
    double dev[2];
    for (int h = 0; h < 2; ++h) {
      const double a = 0.04 * kPi / (1 << h);
      const long n_max = 12L << h;
      const MultiPassResult r = multi_pass_single_pair(BufferSystem(k), SwapParams(a, a), n_max);
      dev[h] = 0.0;
      for (long n = 1; n <= n_max; ++n) {
        dev[h] = std::max(dev[h], std::abs(r.negativity[n - 1] - dicke_weak_E(k, a, n, 1.0)));
      }
    }
    o.check(dev[1] < dev[0], "Dicke deviation k=" + std::to_string(k) + " " + sci(dev[0]) +
                                 " -> " + sci(dev[1]));
  }
  return o;
}

Outcome loss_statistics() {
  Outcome o;
  LossConfig c;
  c.p = 0.5;
  c.n = 10;
  c.samples = 5000;
  c.seed = 20260101;
  c.threads = 0;
  c.e_threshold = 1.0;
  auto mc = [&](int k, double beta) { return estimate_q(BufferSystem(k), SwapParams(kPi, beta), c); };

  const SuccessEstimate s = mc(1, 0.0);
  const double qs = q_n_full_swap(0.5, 10);
  o.check(std::abs(s.q_hat - qs) <= 3 * s.std_error,
          "SWAP q=" + fmt("%.4f", s.q_hat) + " vs " + fmt("%.4f", qs) + " +- " + fmt("%.4f", 3 * s.std_error));

  const SuccessEstimate i = mc(1, kPi);
  const double qi = q_n_full_iswap(0.5, 10);
  o.check(std::abs(i.q_hat - qi) <= 3 * i.std_error,
          "iSWAP q=" + fmt("%.4f", i.q_hat) + " vs " + fmt("%.4f", qi) + " +- " + fmt("%.4f", 3 * i.std_error));

  const SuccessEstimate k2 = mc(2, 0.0);
  o.check(std::abs(k2.q_hat - 0.63) <= 0.02, "k=2 rate " + fmt("%.4f", k2.q_hat));
  const SuccessEstimate k4 = mc(4, 0.0);
  o.check(std::abs(k4.q_hat - 0.89) <= 0.02, "k=4 rate " + fmt("%.4f", k4.q_hat));

  const BufferSystem sys1(1);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(sys1.buffer_ordering());
  double es = 0.0, ei = 0.0;
  for (int n = 1; n <= 8; ++n) {
    es = std::max(es, std::abs(exact_branch_distribution(sys1, SwapParams(kPi, 0.0), 0.5, n, 1.0).q -
                               q_n_full_swap(0.5, n)));
    ei = std::max(ei, std::abs(exact_branch_distribution(sys1, SwapParams(kPi, kPi), 0.5, n, 1.0, mixed).q -
                               q_n_full_iswap(0.5, n)));
  }
  o.check(es <= 1e-12, "exact oracle vs SWAP closed form n<=8 " + sci(es));
  o.check(ei <= 1e-12, "exact oracle vs iSWAP closed form n<=8 " + sci(ei));
  return o;
}

Outcome low_transmission() {
  Outcome o;
  LossConfig c;
  c.p = 0.1;
  c.n = 66;
  c.samples = 5000;
  c.seed = 20260102;
  c.threads = 0;
  const SuccessEstimate s = estimate_q(BufferSystem(1), SwapParams(kPi, 0.0), c);
  const double target = 0.1 / 1.9;
  o.check(std::abs(s.q_hat - target) <= 3 * s.std_error,
          "q=" + fmt("%.4f", s.q_hat) + " vs p/(2-p)=" + fmt("%.4f", target) + " +- " +
              fmt("%.4f", 3 * s.std_error));
  o.check(s.q_hat > 0.01, "exceeds p^2");
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  LossConfig c;
  c.p = 0.5;
  c.n = 10;
  c.samples = 2000;
  c.seed = 7;
  const BufferSystem sys(2);
  const SwapParams p(0.7 * kPi, 0.2 * kPi);
  c.threads = 1;
  const std::vector<double> e1 = trajectory_negativities(sys, p, c);
  c.threads = 4;
  const std::vector<double> e4 = trajectory_negativities(sys, p, c);
  o.check(e1 == e4, "per-trajectory E identical for 1 and 4 threads");

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "entbuffer_acceptance";
  fs::remove_all(dir);
  std::string text[2];
  for (int t = 0; t < 2; ++t) {
    ExperimentConfig cfg = find_figure("fig6b").config;
    cfg.set_from_text("threads", t == 0 ? "1" : "3");
    cfg.set_from_text("alpha_points", "5");
    cfg.set_from_text("samples", "1000");
    cfg.output_path = (dir / ("run" + std::to_string(t)) / "fig6b.csv").string();
    run(cfg, "fig6b");
    text[t] = slurp(cfg.output_path);
  }
  fs::remove_all(dir);
  o.check(!text[0].empty() && text[0] == text[1], "fig6b CSV byte-identical across thread counts");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> fn;
    double max_seconds;  // 0 = no runtime bound
  };
  const std::vector<Criterion> criteria = {
      {"gate-algebra", gate_algebra, 1.0},
      {"channel-correctness", channel_correctness, 10.0},
      {"mixed-init-closed-form", mixed_init_closed_form, 0.0},
      {"pure-init-closed-forms", pure_init_closed_forms, 0.0},
      {"steady-state", steady_state_criteria, 0.0},
      {"sqrt-k-scaling", sqrt_k_scaling, 0.0},
      {"loss-statistics", loss_statistics, 600.0},
      {"low-transmission", low_transmission, 0.0},
      {"determinism", determinism, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.max_seconds > 0.0) o.check(secs < c.max_seconds, "runtime < " + fmt("%g", c.max_seconds) + " s");
    std::printf("%s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
