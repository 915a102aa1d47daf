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


#include <algorithm>

#include "entbuffer/experiment.h"

namespace entbuffer {

namespace {

using Params = std::map<std::string, ParamValue>;
using Ints = std::vector<std::int64_t>;
using Reals = std::vector<double>;
using Strings = std::vector<std::string>;

CatalogEntry entry(std::string id, std::string module, std::string description,
                   std::string runtime, Experiment e, Params params,
                   std::vector<std::string> extra = {}) {
  CatalogEntry c;
  c.figure_id = id;
  c.module = std::move(module);
  c.description = std::move(description);
  c.runtime = std::move(runtime);
  c.config.experiment = e;
  c.config.params = std::move(params);
  c.config.output_path = "out/" + id + ".csv";
  c.extra_outputs = std::move(extra);
  return c;
}

Params single_copy(std::int64_t k, const char* family) {
  return {{"ks", Ints{k}},
          {"family", std::string(family)},
          {"init", std::string("pure")},
          {"theta_points", std::int64_t{60}},
          {"alpha_points", std::int64_t{61}},
          {"threads", std::int64_t{0}}};
}

Params pure_sweep(double alpha, double beta) {
  return {{"k", std::int64_t{1}},     {"alpha", alpha},
          {"beta", beta},             {"theta_points", std::int64_t{60}},
          {"delta_points", std::int64_t{60}}, {"threads", std::int64_t{0}}};
}

Params steady(std::int64_t k, std::int64_t alpha_points, std::int64_t beta_points,
              double alpha_min) {
  return {{"k", k},
          {"alpha_min", alpha_min},
          {"alpha_points", alpha_points},
          {"beta_points", beta_points},
          {"threads", std::int64_t{0}}};
}

Params loss(std::int64_t k, double p, std::int64_t n, std::int64_t alpha_points) {
  return {{"ks", Ints{k}},
          {"mode", std::string("sweep")},
          {"p", p},
          {"n", n},
          {"samples", std::int64_t{5000}},
          {"seed", std::int64_t{1}},
          {"alpha_min", 0.05},
          {"alpha_points", alpha_points},
          {"thresholds", Reals{0.9, 0.99}},
          {"families", Strings{"swap", "iswap"}},
          {"threads", std::int64_t{0}}};
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> c;
  const Experiment sc = Experiment::kSingleCopy;
  c.push_back(entry("fig2a", "single-copy", "k=1 partial SWAP, pure init theta x alpha, delta=0",
                    "1 s", sc, single_copy(1, "swap")));
  c.push_back(entry("fig2b", "single-copy", "k=1 partial iSWAP, pure init theta x alpha, delta=0",
                    "1 s", sc, single_copy(1, "iswap")));
  c.push_back(entry("fig3a", "single-copy", "single SWAP-type pass from all-|0>, k=1..4, E vs alpha",
                    "10 s", sc,
                    {{"ks", Ints{1, 2, 3, 4}},
                     {"family", std::string("swap")},
                     {"init", std::string("zero")},
                     {"theta_points", std::int64_t{1}},
                     {"alpha_points", std::int64_t{101}},
                     {"threads", std::int64_t{0}}}));
  c.push_back(entry("fig3b", "single-copy",
                    "repeated weak iSWAP passes on one source pair: n_star and scaled time vs k",
                    "1 s", Experiment::kMultiPass,
                    {{"ks", Ints{1, 2, 3, 4}},
                     {"alpha", 0.02},
                     {"family", std::string("iswap")},
                     {"max_passes", std::int64_t{100000}}}));
  c.push_back(entry("fig4a", "steady-state", "k=1 steady-state E over (alpha, beta)", "1 s",
                    Experiment::kSteadyGrid, steady(1, 50, 50, 0.02)));
  c.push_back(entry("fig4b", "caching-channel", "k=1 E over n iSWAP caching steps from |00>",
                    "1 s", Experiment::kMultiCopyTrace,
                    {{"k", std::int64_t{1}},
                     {"alphas", Reals{0.05, 0.1, 0.2, 0.3, 0.5, 1.0}},
                     {"family", std::string("iswap")},
                     {"steps", std::int64_t{60}}}));
  c.push_back(entry("fig5a", "steady-state", "k=2 steady-state E over (alpha, beta) with 1-ebit contour",
                    "2 min", Experiment::kSteadyGrid, steady(2, 30, 30, 0.05), {"out/fig5a_contour.csv"}));
  c.push_back(entry("fig5b", "steady-state", "k=3 steady-state E over (alpha, beta) with 1-ebit contour",
                    "1 min", Experiment::kSteadyGrid, steady(3, 12, 12, 0.2), {"out/fig5b_contour.csv"}));
  c.push_back(entry("fig6a", "loss-engine", "q_10(E), p=0.5, k=1, SWAP and iSWAP", "2 s",
                    Experiment::kLossSweep, loss(1, 0.5, 10, 20)));
  c.push_back(entry("fig6b", "loss-engine", "q_10(E), p=0.5, k=2, SWAP and iSWAP", "10 s",
                    Experiment::kLossSweep, loss(2, 0.5, 10, 20)));

  const double quarter[] = {0.25, 0.5, 0.75, 1.0};
  const char* iswap_ids[] = {"appendix-fig7a", "appendix-fig7b", "appendix-fig7c", "appendix-fig7d"};
  for (int i = 0; i < 4; ++i) {
    c.push_back(entry(iswap_ids[i], "single-copy", "k=1 iSWAP, E over (theta, delta)", "1 s",
                      Experiment::kPureSweep, pure_sweep(quarter[i], quarter[i])));
  }
  const double betas[] = {0.0, 0.1875, 0.375, 0.5625};
  const char* beta_ids[] = {"appendix-fig7e", "appendix-fig7f", "appendix-fig7g", "appendix-fig7h"};
  for (int i = 0; i < 4; ++i) {
    c.push_back(entry(beta_ids[i], "single-copy", "k=1, alpha=0.75 pi, rising beta, E over (theta, delta)",
                      "1 s", Experiment::kPureSweep, pure_sweep(0.75, betas[i])));
  }
  c.push_back(entry("appendix-fig8a", "single-copy", "k=2 partial SWAP, pure init theta x alpha",
                    "1 s", sc, single_copy(2, "swap")));
  c.push_back(entry("appendix-fig8b", "single-copy", "k=2 partial iSWAP, pure init theta x alpha",
                    "1 s", sc, single_copy(2, "iswap")));
  c.push_back(entry("appendix-fig10a", "loss-engine", "q_10(E), p=0.5, k=1", "2 s",
                    Experiment::kLossSweep, loss(1, 0.5, 10, 20)));
  c.push_back(entry("appendix-fig10b", "loss-engine", "q_10(E), p=0.5, k=2", "10 s",
                    Experiment::kLossSweep, loss(2, 0.5, 10, 20)));
  c.push_back(entry("appendix-fig10c", "loss-engine", "q_10(E), p=0.5, k=4", "65 min",
                    Experiment::kLossSweep, loss(4, 0.5, 10, 10)));
  Params conv = loss(1, 0.5, 20, 1);
  conv["ks"] = Ints{1, 2, 3, 4};
  conv["mode"] = std::string("convergence");
  conv["thresholds"] = Reals{1.0};
  c.push_back(entry("appendix-fig10d", "loss-engine",
                    "exact 1-ebit rate vs n at alpha=pi, SWAP and iSWAP, k=1..4", "2 min",
                    Experiment::kLossSweep, conv));
  c.push_back(entry("appendix-fig11a", "loss-engine", "q_66(E), p=0.1, k=1", "5 s",
                    Experiment::kLossSweep, loss(1, 0.1, 66, 20)));
  c.push_back(entry("appendix-fig11b", "loss-engine", "q_66(E), p=0.1, k=2", "20 s",
                    Experiment::kLossSweep, loss(2, 0.1, 66, 20)));
  c.push_back(entry("appendix-fig11c", "loss-engine", "q_66(E), p=0.1, k=4", "70 min",
                    Experiment::kLossSweep, loss(4, 0.1, 66, 6)));
  return c;
}

}  // namespace

const std::vector<CatalogEntry>& figure_catalog() {
  static const std::vector<CatalogEntry> catalog = build();
  return catalog;
}

const CatalogEntry& find_figure(const std::string& figure_id) {
  const auto& cat = figure_catalog();
  auto it = std::find_if(cat.begin(), cat.end(),
                         [&](const CatalogEntry& e) { return e.figure_id == figure_id; });
  if (it == cat.end()) throw ConfigError("unknown figure_id '" + figure_id + "'");
  return *it;
}

}  // namespace entbuffer
