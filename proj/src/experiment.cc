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


#include "entbuffer/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "entbuffer/csv.h"
#include "entbuffer/loss.h"
#include "entbuffer/single_copy.h"
#include "entbuffer/steady_state.h"
#include "json.hpp"

#ifndef ENTBUFFER_VERSION
#define ENTBUFFER_VERSION "unknown"
#endif

namespace entbuffer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxK = 4;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list element in '" + text + "'");
    out.push_back(item);
  }
  return out;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a real number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError("not a real number: '" + s + "'");
  return v;
}

std::string real_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Linear grid on [lo, hi] with n points (n = 1 gives hi).
std::vector<double> closed_grid(double lo, double hi, std::int64_t n) {
  std::vector<double> g;
  if (n == 1) return {hi};
  for (std::int64_t i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  return g;
}

// n points on [0, span).
std::vector<double> half_open_grid(double span, std::int64_t n) {
  std::vector<double> g;
  for (std::int64_t i = 0; i < n; ++i) g.push_back(span * static_cast<double>(i) / n);
  return g;
}

using Schema = std::vector<ParamSpec>;

const std::map<Experiment, Schema>& schemas() {
  using T = ParamType;
  static const std::map<Experiment, Schema> s = {
      {Experiment::kSingleCopy,
       {{"ks", T::kInts, "buffer sizes"},
        {"family", T::kString, "swap (beta = 0) or iswap (beta = alpha)"},
        {"init", T::kString, "pure (theta grid, delta = 0), zero or mixed"},
        {"theta_points", T::kInt, "theta samples on [0, 1) pi; used for init = pure"},
        {"alpha_points", T::kInt, "alpha samples on [0, 1] pi"},
        {"threads", T::kInt, "worker threads, 0 = all"}}},
      {Experiment::kPureSweep,
       {{"k", T::kInt, "buffer size"},
        {"alpha", T::kReal, "swap angle / pi"},
        {"beta", T::kReal, "phase angle / pi"},
        {"theta_points", T::kInt, "theta samples on [0, 1) pi"},
        {"delta_points", T::kInt, "delta samples on [0, 2) pi"},
        {"threads", T::kInt, "worker threads, 0 = all"}}},
      {Experiment::kMultiPass,
       {{"ks", T::kInts, "buffer sizes"},
        {"alpha", T::kReal, "swap angle / pi per pass"},
        {"family", T::kString, "swap or iswap"},
        {"max_passes", T::kInt, "pass cap"}}},
      {Experiment::kSteadyGrid,
       {{"k", T::kInt, "buffer size"},
        {"alpha_min", T::kReal, "smallest alpha / pi"},
        {"alpha_points", T::kInt, "alpha samples on [alpha_min, 1] pi"},
        {"beta_points", T::kInt, "beta samples on [0, 1] pi; beta > alpha skipped"},
        {"threads", T::kInt, "worker threads, 0 = all"}}},
      {Experiment::kMultiCopyTrace,
       {{"k", T::kInt, "buffer size"},
        {"alphas", T::kReals, "swap angles / pi"},
        {"family", T::kString, "swap or iswap"},
        {"steps", T::kInt, "caching steps"}}},
      {Experiment::kLossSweep,
       {{"ks", T::kInts, "buffer sizes"},
        {"mode", T::kString, "sweep (alpha grid) or convergence (exact rate vs n at alpha = pi)"},
        {"p", T::kReal, "per-side transmission probability"},
        {"n", T::kInt, "steps per trajectory (largest n in convergence mode)"},
        {"samples", T::kInt, "trajectories per point"},
        {"seed", T::kInt, "base seed"},
        {"alpha_min", T::kReal, "smallest alpha / pi"},
        {"alpha_points", T::kInt, "alpha samples on [alpha_min, 1] pi"},
        {"thresholds", T::kReals, "E thresholds (ebits)"},
        {"families", T::kStrings, "swap and/or iswap"},
        {"threads", T::kInt, "worker threads, 0 = all"}}},
      {Experiment::kOracles, {}},
  };
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void check_family(const std::string& f) {
  require(f == "swap" || f == "iswap", "family must be swap or iswap, got '" + f + "'");
}

void check_k(std::int64_t k) {
  require(k >= 1 && k <= kMaxK, "k must be in 1.." + std::to_string(kMaxK));
}

SwapParams family_params(const std::string& family, double alpha) {
  return SwapParams(alpha, family == "iswap" ? alpha : 0.0);
}

std::string replace_suffix(const std::string& path, const std::string& suffix) {
  const std::string ext = ".csv";
  if (path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size()) + suffix + ext;
  }
  return path + suffix + ext;
}

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // path, content
};

// ---- experiment bodies -------------------------------------------------

Outputs run_single_copy(const ExperimentConfig& c) {
  const std::string family = c.get_string("family");
  const std::string init = c.get_string("init");
  const auto alphas = closed_grid(0.0, 1.0, c.get_int("alpha_points"));
  const int threads = static_cast<int>(c.get_int("threads"));
  const bool pure = init == "pure";
  CsvTable table(pure ? std::vector<std::string>{"k", "theta", "alpha", "E"}
                      : std::vector<std::string>{"k", "alpha", "E"});
  for (std::int64_t k : c.get_ints("ks")) {
    const BufferSystem sys(static_cast<int>(k));
    if (pure) {
      const auto thetas = half_open_grid(kPi, c.get_int("theta_points"));
      for (double a : alphas) {
        const PureSweep sweep = pure_sweep(sys, family_params(family, a * kPi), thetas, {0.0},
                                           threads);
        for (const auto& row : sweep.rows) {
          table.add_row({k, row.theta / kPi, a, row.E});
        }
      }
    } else {
      const DensityMatrix rho0 = init == "zero"
                                     ? DensityMatrix::all_zero(sys.buffer_ordering())
                                     : DensityMatrix::maximally_mixed(sys.buffer_ordering());
      for (double a : alphas) {
        table.add_row({k, a, single_copy_E(sys, family_params(family, a * kPi), rho0)});
      }
    }
  }
  return {{{c.output_path, table.str()}}};
}

Outputs run_pure_sweep(const ExperimentConfig& c) {
  const BufferSystem sys(static_cast<int>(c.get_int("k")));
  const SwapParams params = SwapParams::from_pi(c.get_real("alpha"), c.get_real("beta"));
  const PureSweep sweep =
      pure_sweep(sys, params, half_open_grid(kPi, c.get_int("theta_points")),
                 half_open_grid(2.0 * kPi, c.get_int("delta_points")),
                 static_cast<int>(c.get_int("threads")));
  CsvTable table({"theta", "delta", "E"});
  for (const auto& row : sweep.rows) table.add_row({row.theta / kPi, row.delta / kPi, row.E});
  return {{{c.output_path, table.str()}}};
}

Outputs run_multi_pass(const ExperimentConfig& c) {
  const double alpha = c.get_real("alpha") * kPi;
  const SwapParams params = family_params(c.get_string("family"), alpha);
  CsvTable table({"k", "n_star", "time_scaled", "sqrt_k", "E_n_star", "criterion"});
  for (std::int64_t k : c.get_ints("ks")) {
    const BufferSystem sys(static_cast<int>(k));
    const CachingTime t = caching_time(sys, params, c.get_int("max_passes"));
    table.add_row({k, static_cast<std::int64_t>(t.n_star), t.scaled_time,
                   std::sqrt(static_cast<double>(k)), t.E, std::string(to_string(t.criterion))});
  }
  return {{{c.output_path, table.str()}}};
}

Outputs run_steady_grid(const ExperimentConfig& c) {
  const BufferSystem sys(static_cast<int>(c.get_int("k")));
  std::vector<double> alphas, betas;
  for (double a : closed_grid(c.get_real("alpha_min"), 1.0, c.get_int("alpha_points"))) {
    alphas.push_back(a * kPi);
  }
  for (double b : closed_grid(0.0, 1.0, c.get_int("beta_points"))) betas.push_back(b * kPi);
  const SteadyGrid grid = steady_state_grid(sys, alphas, betas, {},
                                            static_cast<int>(c.get_int("threads")));
  CsvTable table({"alpha", "beta", "E_infinity", "residual", "kernel_dim"});
  for (const auto& p : grid.points) {
    table.add_row({p.alpha / kPi, p.beta / kPi, p.negativity, p.residual,
                   static_cast<std::int64_t>(p.kernel_dimension)});
  }
  Outputs out{{{c.output_path, table.str()}}};
  if (sys.k() >= 2) {
    CsvTable contour({"line", "alpha", "beta"});
    for (std::size_t i = 0; i < grid.contour.size(); ++i) {
      for (const auto& [a, b] : grid.contour[i]) {
        contour.add_row({static_cast<std::int64_t>(i), a, b});
      }
    }
    out.files.emplace_back(replace_suffix(c.output_path, "_contour"), contour.str());
  }
  return out;
}

Outputs run_multi_copy_trace(const ExperimentConfig& c) {
  const BufferSystem sys(static_cast<int>(c.get_int("k")));
  const DensityMatrix rho0 = DensityMatrix::all_zero(sys.buffer_ordering());
  CsvTable table({"alpha", "n", "E"});
  for (double a : c.get_reals("alphas")) {
    const ChainTrace trace = iterate(rho0, sys, family_params(c.get_string("family"), a * kPi),
                                     static_cast<int>(c.get_int("steps")));
    for (std::size_t n = 0; n < trace.negativity.size(); ++n) {
      table.add_row({a, static_cast<std::int64_t>(n), trace.negativity[n]});
    }
  }
  return {{{c.output_path, table.str()}}};
}

CsvTable loss_table() {
  return CsvTable(
      {"k", "alpha_over_pi", "family", "E_threshold", "q_hat", "stderr", "n", "M", "p", "seed"});
}

void add_loss_rows(CsvTable& table, const std::vector<LossSweepRow>& rows) {
  for (const auto& r : rows) {
    table.add_row({static_cast<std::int64_t>(r.k), r.alpha_over_pi, r.family, r.e_threshold,
                   r.q_hat, r.std_error, static_cast<std::int64_t>(r.n),
                   static_cast<std::int64_t>(r.samples), r.p, r.seed});
  }
}

Outputs run_loss_sweep(const ExperimentConfig& c) {
  CsvTable table = loss_table();
  const double p = c.get_real("p");
  const auto n = static_cast<int>(c.get_int("n"));
  for (std::int64_t k : c.get_ints("ks")) {
    if (c.get_string("mode") == "convergence") {
      std::vector<int> steps;
      for (int i = 1; i <= n; ++i) steps.push_back(i);
      add_loss_rows(table, convergence_rows(static_cast<int>(k), p, steps));
      continue;
    }
    LossConfig base;
    base.p = p;
    base.n = n;
    base.samples = c.get_int("samples");
    base.seed = static_cast<std::uint64_t>(c.get_int("seed"));
    base.threads = static_cast<int>(c.get_int("threads"));
    base.e_threshold = 0.0;
    std::vector<double> alphas;
    for (double a : closed_grid(c.get_real("alpha_min"), 1.0, c.get_int("alpha_points"))) {
      alphas.push_back(a * kPi);
    }
    add_loss_rows(table, loss_sweep(BufferSystem(static_cast<int>(k)), base, alphas,
                                    c.get_strings("families"), c.get_reals("thresholds")));
  }
  return {{{c.output_path, table.str()}}};
}

struct OracleCheck {
  std::string name;
  double value;
  double tolerance;
};

std::vector<OracleCheck> oracle_checks() {
  std::vector<OracleCheck> out;
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  out.push_back({"gate_swap", max_abs_diff(partial_swap(SwapParams(kPi, 0.0)), swap_gate()), 1e-12});
  out.push_back({"gate_iswap", max_abs_diff(partial_swap(SwapParams(kPi, kPi)), iswap_gate()), 1e-12});
  double comp = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double a1 = unit(rng) * kPi / 2, a2 = unit(rng) * kPi / 2;
    const SwapParams p1(a1, unit(rng) * a1), p2(a2, unit(rng) * a2);
    comp = std::max(comp, max_abs_diff(compose_check(p1, p2),
                                       partial_swap(SwapParams(a1 + a2, p1.beta() + p2.beta()))));
  }
  out.push_back({"gate_composition", comp, 1e-12});

  double kraus = 0.0, complete = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double a = unit(rng) * kPi;
    const SwapParams params(a, unit(rng) * a);
    const KrausSet num = kraus_k1(params);
    const KrausSet cf = kraus_k1_closed_form(params);
    for (int j = 0; j < 4; ++j) kraus = std::max(kraus, max_abs_diff(num.ops[j], cf.ops[j]));
    complete = std::max(complete, num.completeness_residual());
  }
  out.push_back({"kraus_closed_form", kraus, 1e-12});
  out.push_back({"kraus_completeness", complete, 1e-12});

  const BufferSystem k1(1);
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(k1.buffer_ordering());
  double eq5 = 0.0;
  for (double a : closed_grid(0.0, 1.0, 10)) {
    for (double b : closed_grid(0.0, 1.0, 10)) {
      if (b > a) continue;
      const SwapParams params = SwapParams::from_pi(a, b);
      eq5 = std::max(eq5, std::abs(single_copy_E(k1, params, mixed) -
                                   mixed_init_E_closed_form(params)));
    }
  }
  out.push_back({"mixed_init_closed_form", eq5, 1e-10});

  double ss = 0.0;
  for (double a : closed_grid(0.1, 1.0, 5)) {
    for (double b : closed_grid(0.0, 1.0, 5)) {
      if (b > a) continue;
      const SwapParams params = SwapParams::from_pi(a, b);
      const SteadyStateResult r =
          steady_state(k1, params, DensityMatrix::all_zero(k1.buffer_ordering()));
      ss = std::max(ss, max_abs_diff(r.rho.mat(), steady_state_closed_form_k1(params).mat()));
    }
  }
  out.push_back({"steady_state_k1_closed_form", ss, 1e-9});

  double fixed = 0.0;
  for (int k = 1; k <= 4; ++k) {
    fixed = std::max(fixed, verify_iswap_fixed_point(k, (0.05 + 0.95 * unit(rng)) * kPi));
  }
  out.push_back({"iswap_fixed_point", fixed, 1e-11});

  double qs = 0.0, qi = 0.0;
  for (int n = 1; n <= 8; ++n) {
    qs = std::max(qs, std::abs(exact_branch_distribution(k1, SwapParams(kPi, 0.0), 0.5, n, 1.0).q -
                               q_n_full_swap(0.5, n)));
    qi = std::max(qi, std::abs(exact_branch_distribution(k1, SwapParams(kPi, kPi), 0.5, n, 1.0,
                                                         mixed)
                                   .q -
                               q_n_full_iswap(0.5, n)));
  }
  out.push_back({"loss_exact_swap", qs, 1e-12});
  out.push_back({"loss_exact_iswap", qi, 1e-12});
  return out;
}

Outputs run_oracles(const ExperimentConfig& c) {
  CsvTable table({"check", "value", "tolerance", "pass"});
  for (const auto& o : oracle_checks()) {
    table.add_row({o.name, o.value, o.tolerance, std::string(o.value <= o.tolerance ? "1" : "0")});
  }
  return {{{c.output_path, table.str()}}};
}

nlohmann::json param_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::kSingleCopy:
      return "SingleCopy";
    case Experiment::kPureSweep:
      return "PureSweep";
    case Experiment::kMultiPass:
      return "MultiPass";
    case Experiment::kSteadyGrid:
      return "SteadyGrid";
    case Experiment::kMultiCopyTrace:
      return "MultiCopyTrace";
    case Experiment::kLossSweep:
      return "LossSweep";
    case Experiment::kOracles:
      return "Oracles";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& name) {
  for (const auto& [e, schema] : schemas()) {
    if (name == to_string(e)) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

const char* to_string(ParamType t) {
  switch (t) {
    case ParamType::kInt:
      return "int";
    case ParamType::kReal:
      return "real";
    case ParamType::kString:
      return "string";
    case ParamType::kBool:
      return "bool";
    case ParamType::kInts:
      return "ints";
    case ParamType::kReals:
      return "reals";
    case ParamType::kStrings:
      return "strings";
  }
  return "?";
}

ParamType type_of(const ParamValue& v) { return static_cast<ParamType>(v.index()); }

std::string format_param(const ParamValue& v) {
  auto scalar = [](const auto& x) -> std::string {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, std::string>) {
      return x;
    } else if constexpr (std::is_same_v<T, bool>) {
      return x ? "true" : "false";
    } else if constexpr (std::is_same_v<T, double>) {
      return real_text(x);
    } else {
      return std::to_string(x);
    }
  };
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::vector<std::int64_t>> ||
                      std::is_same_v<T, std::vector<double>> ||
                      std::is_same_v<T, std::vector<std::string>>) {
          std::string s;
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i > 0) s += ", ";
            s += scalar(x[i]);
          }
          return s;
        } else {
          return scalar(x);
        }
      },
      v);
}

ParamValue parse_param(ParamType type, const std::string& raw) {
  const std::string text = trim(raw);
  switch (type) {
    case ParamType::kInt:
      return parse_int(text);
    case ParamType::kReal:
      return parse_real(text);
    case ParamType::kString:
      if (text.empty()) throw ConfigError("empty string value");
      return text;
    case ParamType::kBool:
      if (text == "true") return true;
      if (text == "false") return false;
      throw ConfigError("not a bool: '" + text + "'");
    case ParamType::kInts: {
      std::vector<std::int64_t> v;
      for (const auto& s : split_list(text)) v.push_back(parse_int(s));
      return v;
    }
    case ParamType::kReals: {
      std::vector<double> v;
      for (const auto& s : split_list(text)) v.push_back(parse_real(s));
      return v;
    }
    case ParamType::kStrings:
      return split_list(text);
  }
  throw ConfigError("unknown parameter type");
}

const std::vector<ParamSpec>& param_schema(Experiment e) { return schemas().at(e); }

void ExperimentConfig::validate() const {
  const Schema& schema = param_schema(experiment);
  for (const auto& [key, value] : params) {
    auto it = std::find_if(schema.begin(), schema.end(),
                           [&](const ParamSpec& s) { return s.name == key; });
    if (it == schema.end()) {
      throw ConfigError("unknown key '" + key + "' for experiment " + to_string(experiment));
    }
    if (type_of(value) != it->type) {
      throw ConfigError("key '" + key + "' must have type " + to_string(it->type));
    }
  }
  for (const auto& s : schema) {
    if (!has(s.name)) {
      throw ConfigError("missing key '" + s.name + "' for experiment " + to_string(experiment));
    }
  }
  if (output_path.empty()) throw ConfigError("missing output path");

  auto positive = [&](const char* key, std::int64_t min) {
    require(get_int(key) >= min, std::string(key) + " must be >= " + std::to_string(min));
  };
  auto threads = [&] { positive("threads", 0); };
  auto alpha_range = [&](const char* key) {
    const double a = get_real(key);
    require(a > 0.0 && a <= 1.0, std::string(key) + " must be in (0, 1]");
  };

  switch (experiment) {
    case Experiment::kSingleCopy: {
      require(!get_ints("ks").empty(), "ks must not be empty");
      for (auto k : get_ints("ks")) check_k(k);
      check_family(get_string("family"));
      const auto& init = get_string("init");
      require(init == "pure" || init == "zero" || init == "mixed",
              "init must be pure, zero or mixed");
      positive("theta_points", 1);
      positive("alpha_points", 2);
      threads();
      break;
    }
    case Experiment::kPureSweep: {
      check_k(get_int("k"));
      const double a = get_real("alpha");
      const double b = get_real("beta");
      require(a >= 0.0 && a <= 1.0, "alpha must be in [0, 1]");
      require(b >= 0.0 && b <= a, "beta must be in [0, alpha]");
      positive("theta_points", 1);
      positive("delta_points", 1);
      threads();
      break;
    }
    case Experiment::kMultiPass:
      require(!get_ints("ks").empty(), "ks must not be empty");
      for (auto k : get_ints("ks")) check_k(k);
      alpha_range("alpha");
      check_family(get_string("family"));
      positive("max_passes", 1);
      break;
    case Experiment::kSteadyGrid:
      check_k(get_int("k"));
      alpha_range("alpha_min");
      positive("alpha_points", 1);
      positive("beta_points", 1);
      threads();
      break;
    case Experiment::kMultiCopyTrace:
      check_k(get_int("k"));
      require(!get_reals("alphas").empty(), "alphas must not be empty");
      for (double a : get_reals("alphas")) require(a >= 0.0 && a <= 1.0, "alphas must be in [0, 1]");
      check_family(get_string("family"));
      positive("steps", 0);
      break;
    case Experiment::kLossSweep: {
      require(!get_ints("ks").empty(), "ks must not be empty");
      for (auto k : get_ints("ks")) check_k(k);
      const auto& mode = get_string("mode");
      require(mode == "sweep" || mode == "convergence", "mode must be sweep or convergence");
      const double p = get_real("p");
      require(p > 0.0 && p <= 1.0, "p must be in (0, 1]");
      positive("n", 1);
      positive("samples", 1);
      positive("seed", 0);
      alpha_range("alpha_min");
      positive("alpha_points", 1);
      require(!get_reals("thresholds").empty(), "thresholds must not be empty");
      const auto& ks = get_ints("ks");
      const auto kmin = *std::min_element(ks.begin(), ks.end());
      for (double t : get_reals("thresholds")) {
        require(t >= 0.0 && t <= static_cast<double>(kmin), "thresholds must be in [0, k]");
      }
      require(!get_strings("families").empty(), "families must not be empty");
      for (const auto& f : get_strings("families")) check_family(f);
      threads();
      break;
    }
    case Experiment::kOracles:
      break;
  }
}

namespace {

template <typename T>
const T& get_typed(const ExperimentConfig& c, const std::string& key) {
  auto it = c.params.find(key);
  if (it == c.params.end()) throw ConfigError("missing key '" + key + "'");
  const T* v = std::get_if<T>(&it->second);
  if (v == nullptr) throw ConfigError("key '" + key + "' has type " + to_string(type_of(it->second)));
  return *v;
}

}  // namespace

std::int64_t ExperimentConfig::get_int(const std::string& key) const {
  return get_typed<std::int64_t>(*this, key);
}
double ExperimentConfig::get_real(const std::string& key) const {
  return get_typed<double>(*this, key);
}
const std::string& ExperimentConfig::get_string(const std::string& key) const {
  return get_typed<std::string>(*this, key);
}
bool ExperimentConfig::get_bool(const std::string& key) const { return get_typed<bool>(*this, key); }
const std::vector<std::int64_t>& ExperimentConfig::get_ints(const std::string& key) const {
  return get_typed<std::vector<std::int64_t>>(*this, key);
}
const std::vector<double>& ExperimentConfig::get_reals(const std::string& key) const {
  return get_typed<std::vector<double>>(*this, key);
}
const std::vector<std::string>& ExperimentConfig::get_strings(const std::string& key) const {
  return get_typed<std::vector<std::string>>(*this, key);
}

void ExperimentConfig::set_from_text(const std::string& key, const std::string& text) {
  const Schema& schema = param_schema(experiment);
  auto it = std::find_if(schema.begin(), schema.end(),
                         [&](const ParamSpec& s) { return s.name == key; });
  if (it == schema.end()) {
    throw ConfigError("unknown key '" + key + "' for experiment " + to_string(experiment));
  }
  params[key] = parse_param(it->type, text);
}

ExperimentConfig parse_config(const std::string& text, std::string* figure_id) {
  ExperimentConfig cfg;
  bool have_experiment = false;
  std::vector<std::tuple<std::string, std::string, std::string, int>> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto colon = line.find(':');
    if (eq == std::string::npos || colon == std::string::npos || colon > eq) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key:type = value'");
    }
    const std::string key = trim(line.substr(0, colon));
    const std::string type = trim(line.substr(colon + 1, eq - colon - 1));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (key == "experiment" || key == "output" || key == "figure_id") {
      if (type != "string") {
        throw ConfigError("line " + std::to_string(lineno) + ": " + key + " must be a string");
      }
      if (key == "experiment") {
        cfg.experiment = experiment_from_string(value);
        have_experiment = true;
      } else if (key == "output") {
        cfg.output_path = value;
      } else if (figure_id != nullptr) {
        *figure_id = value;
      }
      continue;
    }
    entries.emplace_back(key, type, value, lineno);
  }
  if (!have_experiment) throw ConfigError("missing 'experiment:string' line");
  const Schema& schema = param_schema(cfg.experiment);
  for (const auto& [key, type, value, ln] : entries) {
    auto it = std::find_if(schema.begin(), schema.end(),
                           [&](const ParamSpec& s) { return s.name == key; });
    if (it == schema.end()) {
      throw ConfigError("line " + std::to_string(ln) + ": unknown key '" + key +
                        "' for experiment " + to_string(cfg.experiment));
    }
    if (type != to_string(it->type)) {
      throw ConfigError("line " + std::to_string(ln) + ": key '" + key + "' must have type " +
                        to_string(it->type) + ", got " + type);
    }
    if (cfg.params.count(key)) {
      throw ConfigError("line " + std::to_string(ln) + ": duplicate key '" + key + "'");
    }
    cfg.params[key] = parse_param(it->type, value);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::string* figure_id) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), figure_id);
}

std::string format_config(const ExperimentConfig& cfg, const std::string& figure_id) {
  std::string out = "experiment:string = " + std::string(to_string(cfg.experiment)) + "\n";
  if (!figure_id.empty()) out += "figure_id:string = " + figure_id + "\n";
  if (!cfg.output_path.empty()) out += "output:string = " + cfg.output_path + "\n";
  for (const auto& [key, value] : cfg.params) {
    out += key + ":" + to_string(type_of(value)) + " = " + format_param(value) + "\n";
  }
  return out;
}

const char* tool_version() { return ENTBUFFER_VERSION; }

std::string RunManifest::to_json_line() const {
  nlohmann::json j;
  j["figure_id"] = figure_id;
  j["experiment"] = to_string(config.experiment);
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : config.params) params[key] = param_json(value);
  j["config"] = {{"experiment", to_string(config.experiment)},
                 {"parameters", params},
                 {"output_path", config.output_path}};
  j["tool_version"] = tool_version;
  j["wall_time"] = wall_time;
  j["seed"] = seed;
  j["outputs"] = outputs;
  j["initial_buffer_state"] = config.experiment == Experiment::kSingleCopy &&
                                      config.has("init")
                                  ? config.get_string("init")
                                  : "all-zero";
  return j.dump();
}

std::string manifest_path_for(const std::string& csv_path) {
  const std::filesystem::path p(csv_path);
  return (p.has_parent_path() ? p.parent_path() / "manifest.jsonl"
                              : std::filesystem::path("manifest.jsonl"))
      .string();
}

RunManifest run(const ExperimentConfig& config, const std::string& figure_id) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Outputs out;
  switch (config.experiment) {
    case Experiment::kSingleCopy:
      out = run_single_copy(config);
      break;
    case Experiment::kPureSweep:
      out = run_pure_sweep(config);
      break;
    case Experiment::kMultiPass:
      out = run_multi_pass(config);
      break;
    case Experiment::kSteadyGrid:
      out = run_steady_grid(config);
      break;
    case Experiment::kMultiCopyTrace:
      out = run_multi_copy_trace(config);
      break;
    case Experiment::kLossSweep:
      out = run_loss_sweep(config);
      break;
    case Experiment::kOracles:
      out = run_oracles(config);
      break;
  }
  RunManifest m;
  m.figure_id = figure_id;
  m.config = config;
  m.tool_version = tool_version();
  m.seed = config.has("seed") ? static_cast<std::uint64_t>(config.get_int("seed")) : 0;
  for (const auto& [path, content] : out.files) {
    write_file_atomic(path, content);
    m.outputs.push_back(path);
  }
  m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  append_line(manifest_path_for(config.output_path), m.to_json_line());
  return m;
}

}  // namespace entbuffer
