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


#ifndef ENTBUFFER_EXPERIMENT_H
#define ENTBUFFER_EXPERIMENT_H

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace entbuffer {

enum class Experiment {
  kSingleCopy,
  kPureSweep,
  kMultiPass,
  kSteadyGrid,
  kMultiCopyTrace,
  kLossSweep,
  kOracles,
};

const char* to_string(Experiment e);
/// Accepts the names printed by to_string; throws ConfigError otherwise.
Experiment experiment_from_string(const std::string& name);

/// Invalid configuration: unknown or missing keys, bad types or values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ParamType { kInt, kReal, kString, kBool, kInts, kReals, kStrings };

const char* to_string(ParamType t);

using ParamValue = std::variant<std::int64_t, double, std::string, bool, std::vector<std::int64_t>,
                                std::vector<double>, std::vector<std::string>>;

ParamType type_of(const ParamValue& v);
/// Text form used by the config format, e.g. "0.5" or "1, 2, 4".
std::string format_param(const ParamValue& v);
ParamValue parse_param(ParamType type, const std::string& text);

struct ParamSpec {
  std::string name;
  ParamType type;
  std::string help;
};

/// Keys accepted by an experiment. All of them are required.
const std::vector<ParamSpec>& param_schema(Experiment e);

/// A fully specified run. Angles are in units of pi.
struct ExperimentConfig {
  Experiment experiment = Experiment::kOracles;
  std::map<std::string, ParamValue> params;
  std::string output_path;

  /// Throws ConfigError on unknown, missing or mistyped keys and on values
  /// out of range.
  void validate() const;

  std::int64_t get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  const std::vector<std::int64_t>& get_ints(const std::string& key) const;
  const std::vector<double>& get_reals(const std::string& key) const;
  const std::vector<std::string>& get_strings(const std::string& key) const;

  /// Replaces an existing key's value, parsing `text` with the key's type.
  void set_from_text(const std::string& key, const std::string& text);
  bool has(const std::string& key) const { return params.count(key) > 0; }
};

/// Flat text format, one "key:type = value" per line; '#' starts a comment.
/// The reserved keys "experiment:string" and "output:string" set the
/// experiment and output path. An optional "figure_id:string" is returned
/// through `figure_id`.
ExperimentConfig parse_config(const std::string& text, std::string* figure_id = nullptr);
ExperimentConfig load_config(const std::string& path, std::string* figure_id = nullptr);
std::string format_config(const ExperimentConfig& cfg, const std::string& figure_id = "");

struct CatalogEntry {
  std::string figure_id;
  std::string module;
  std::string description;
  std::string runtime;
  ExperimentConfig config;
  /// Extra outputs besides the main CSV, e.g. the contour polyline.
  std::vector<std::string> extra_outputs;
};

const std::vector<CatalogEntry>& figure_catalog();
/// Throws ConfigError for an unknown id.
const CatalogEntry& find_figure(const std::string& figure_id);

struct RunManifest {
  std::string figure_id;
  ExperimentConfig config;
  std::string tool_version;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;

  /// One JSON object on a single line.
  std::string to_json_line() const;
};

const char* tool_version();

/// Validates, runs, writes the CSV (and any extra outputs) atomically and
/// appends the manifest line to manifest.jsonl beside the CSV.
RunManifest run(const ExperimentConfig& config, const std::string& figure_id = "");

/// Path of the manifest file that run() appends to for `csv_path`.
std::string manifest_path_for(const std::string& csv_path);

}  // namespace entbuffer

#endif  // ENTBUFFER_EXPERIMENT_H
