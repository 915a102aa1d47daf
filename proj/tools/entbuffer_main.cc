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


// Command-line front end. Angles on the command line are in units of pi.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "entbuffer/csv.h"
#include "entbuffer/experiment.h"
#include "entbuffer/loss.h"
#include "entbuffer/single_copy.h"
#include "entbuffer/steady_state.h"
#include "json.hpp"

namespace {

using namespace entbuffer;

constexpr double kPi = std::numbers::pi;

struct Flags {
  std::optional<int> k;
  std::optional<double> alpha, beta, theta, delta, p, e_threshold;
  std::optional<int> n;
  std::optional<long> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, config;
  std::optional<int> threads;
};

void add_flags(CLI::App* cmd, Flags& f, bool figure_flags) {
  cmd->add_option("--k", f.k, "buffer size");
  cmd->add_option("--alpha", f.alpha, "swap angle / pi");
  cmd->add_option("--beta", f.beta, "phase angle / pi");
  cmd->add_option("--p", f.p, "per-side transmission probability");
  cmd->add_option("--n", f.n, "caching steps");
  cmd->add_option("--samples", f.samples, "Monte Carlo trajectories");
  cmd->add_option("--e-threshold", f.e_threshold, "E threshold in ebits");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--out", f.out, "output CSV path");
  cmd->add_option("--threads", f.threads, "worker threads, 0 = all");
  if (!figure_flags) {
    cmd->add_option("--theta", f.theta, "pure-state mixing angle / pi");
    cmd->add_option("--delta", f.delta, "pure-state phase / pi");
  } else {
    cmd->add_option("--config", f.config, "config file");
  }
}

void fail(const std::string& kind, const std::string& message, int code) {
  nlohmann::json j{{"error", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
  std::exit(code);
}

bool has_key(const ExperimentConfig& cfg, const std::string& key) {
  for (const auto& spec : param_schema(cfg.experiment)) {
    if (spec.name == key) return true;
  }
  return false;
}

// Maps command-line flags onto the config keys of the chosen experiment.
void apply_overrides(ExperimentConfig& cfg, const Flags& f) {
  auto set = [&](const std::string& flag, const std::vector<std::string>& keys,
                 const std::string& text) {
    for (const auto& key : keys) {
      for (const auto& spec : param_schema(cfg.experiment)) {
        if (spec.name == key) {
          cfg.set_from_text(key, text);
          return;
        }
      }
    }
    throw ConfigError("flag " + flag + " does not apply to experiment " +
                      to_string(cfg.experiment));
  };
  auto real = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  if (f.k) set("--k", {"k", "ks"}, std::to_string(*f.k));
  if (f.alpha) set("--alpha", {"alpha", "alpha_min"}, real(*f.alpha));
  if (f.beta) set("--beta", {"beta"}, real(*f.beta));
  if (f.p) set("--p", {"p"}, real(*f.p));
  if (f.n) set("--n", {"n", "steps", "max_passes"}, std::to_string(*f.n));
  if (f.samples) set("--samples", {"samples"}, std::to_string(*f.samples));
  if (f.e_threshold) set("--e-threshold", {"thresholds"}, real(*f.e_threshold));
  if (f.seed) set("--seed", {"seed"}, std::to_string(*f.seed));
  // Thread count never changes results, so it is ignored where unused.
  if (f.threads && has_key(cfg, "threads")) cfg.set_from_text("threads", std::to_string(*f.threads));
  if (f.out) cfg.output_path = *f.out;
}

int cmd_list() {
  for (const auto& e : figure_catalog()) {
    std::cout << e.figure_id << "\tmodule=" << e.module
              << "\texperiment=" << to_string(e.config.experiment) << "\truntime~" << e.runtime
              << "\t" << e.description << '\n';
    for (const auto& [key, value] : e.config.params) {
      std::cout << "    " << key << " = " << format_param(value) << '\n';
    }
    if (!e.extra_outputs.empty()) {
      std::cout << "    extra outputs:";
      for (const auto& x : e.extra_outputs) std::cout << ' ' << x;
      std::cout << '\n';
    }
  }
  return 0;
}

int cmd_figure(const std::string& id, const Flags& f) {
  ExperimentConfig cfg;
  std::string figure_id = id;
  if (f.config) {
    std::string from_file;
    cfg = load_config(*f.config, &from_file);
    if (figure_id.empty()) figure_id = from_file;
    if (!figure_id.empty()) find_figure(figure_id);
    if (cfg.output_path.empty()) {
      cfg.output_path = "out/" + (figure_id.empty() ? std::string("run") : figure_id) + ".csv";
    }
  } else {
    if (figure_id.empty()) throw ConfigError("figure: a figure_id or --config is required");
    cfg = find_figure(figure_id).config;
  }
  apply_overrides(cfg, f);
  const RunManifest m = run(cfg, figure_id);
  for (const auto& path : m.outputs) std::cout << path << '\n';
  return 0;
}

void emit(const CsvTable& table, const std::optional<std::string>& out) {
  if (out) {
    write_file_atomic(*out, table.str());
    std::cout << *out << '\n';
  } else {
    std::cout << table.str();
  }
}

SwapParams params_from(const Flags& f) {
  if (!f.alpha) throw ConfigError("--alpha is required");
  return SwapParams::from_pi(*f.alpha, f.beta.value_or(0.0));
}

int cmd_single_copy(const Flags& f) {
  const BufferSystem sys(f.k.value_or(1));
  const SwapParams params = params_from(f);
  const double theta = f.theta.value_or(0.0);
  const double delta = f.delta.value_or(0.0);
  const PureInit init(theta * kPi, delta * kPi);
  const double e = single_copy_E(sys, params, init.buffer_state(sys));
  CsvTable t({"k", "alpha", "beta", "theta", "delta", "E"});
  t.add_row({std::int64_t{sys.k()}, *f.alpha, f.beta.value_or(0.0), theta, delta, e});
  emit(t, f.out);
  return 0;
}

int cmd_steady_state(const Flags& f) {
  const BufferSystem sys(f.k.value_or(1));
  const SteadyStateResult r = steady_state(sys, params_from(f),
                                           DensityMatrix::all_zero(sys.buffer_ordering()));
  CsvTable t({"alpha", "beta", "E_infinity", "residual", "kernel_dim", "steps"});
  t.add_row({*f.alpha, f.beta.value_or(0.0), r.negativity, r.residual,
             std::int64_t{r.kernel_dimension}, std::int64_t{r.steps}});
  emit(t, f.out);
  return 0;
}

int cmd_loss_mc(const Flags& f) {
  const BufferSystem sys(f.k.value_or(1));
  LossConfig cfg;
  cfg.p = f.p.value_or(cfg.p);
  cfg.n = f.n.value_or(cfg.n);
  cfg.samples = f.samples.value_or(cfg.samples);
  cfg.e_threshold = f.e_threshold.value_or(cfg.e_threshold);
  cfg.seed = f.seed.value_or(cfg.seed);
  cfg.threads = f.threads.value_or(0);
  cfg.validate(sys.k());
  const SuccessEstimate est = estimate_q(sys, params_from(f), cfg);
  CsvTable t({"k", "alpha_over_pi", "family", "E_threshold", "q_hat", "stderr", "n", "M", "p",
              "seed"});
  t.add_row({std::int64_t{sys.k()}, *f.alpha, std::string("custom"), cfg.e_threshold, est.q_hat,
             est.std_error, std::int64_t{cfg.n}, std::int64_t{cfg.samples}, cfg.p, cfg.seed});
  emit(t, f.out);
  return 0;
}

int cmd_oracle_check(const Flags& f) {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::kOracles;
  cfg.output_path = f.out.value_or("out/oracle-check.csv");
  const RunManifest m = run(cfg, "");
  const ParsedCsv table = read_csv(m.outputs.front());
  int failures = 0;
  for (const auto& row : table.rows) {
    std::cout << row[0] << ' ' << row[1] << " <= " << row[2] << (row[3] == "1" ? " PASS" : " FAIL")
              << '\n';
    failures += row[3] != "1";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement buffer simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  Flags figure_flags, sc_flags, ss_flags, loss_flags, oracle_flags;
  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "reproduce a cataloged figure");
  figure->add_option("figure_id", figure_id, "catalog id, see 'list'");
  add_flags(figure, figure_flags, true);
  auto* sc = app.add_subcommand("single-copy", "E after one caching step from a pure product state");
  add_flags(sc, sc_flags, false);
  auto* ss = app.add_subcommand("steady-state", "steady state of repeated caching from all-|0>");
  add_flags(ss, ss_flags, false);
  auto* lm = app.add_subcommand("loss-mc", "Monte Carlo q_n(E) under transmission loss");
  add_flags(lm, loss_flags, false);
  auto* oc = app.add_subcommand("oracle-check", "run the built-in oracle comparisons");
  oc->add_option("--out", oracle_flags.out, "output CSV path");
  auto* ls = app.add_subcommand("list", "print the figure catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail("usage", e.what(), 2);
  }

  try {
    if (*figure) return cmd_figure(figure_id, figure_flags);
    if (*sc) return cmd_single_copy(sc_flags);
    if (*ss) return cmd_steady_state(ss_flags);
    if (*lm) return cmd_loss_mc(loss_flags);
    if (*oc) return cmd_oracle_check(oracle_flags);
    if (*ls) return cmd_list();
  } catch (const ConfigError& e) {
    fail("config", e.what(), 2);
  } catch (const std::invalid_argument& e) {
    fail("invalid_argument", e.what(), 2);
  } catch (const DegenerateChannelError& e) {
    fail("degenerate", e.what(), 2);
  } catch (const ConvergenceError& e) {
    fail("convergence", e.what(), 3);
  } catch (const std::exception& e) {
    fail("runtime", e.what(), 1);
  }
  return 0;
}
