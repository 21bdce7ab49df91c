// Copyright 2026 The nomafl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment harness: config ingestion, seeded sweeps and result tables.
//
// Config files are flat `key = value` text; '#' starts a comment. Physical
// keys carry their unit in the name (dBm, dB, MHz, GHz, kbit) and are
// converted to SI once, at load time. Every key is optional.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nomafl/allocator.hpp"
#include "nomafl/model.hpp"
#include "nomafl/pairing.hpp"

namespace nomafl::bench {

enum class SweepVariable { None, PMax, FMax, Gamma };
enum class Algorithm { Proposed, Random, Greedy };
enum class OutputFormat { Csv, Json };

std::string_view to_string(SweepVariable v);
std::string_view to_string(Algorithm a);

struct PairingChoice {
  bool best = true;  // try every scheme, keep the lowest objective
  PairingScheme scheme = PairingScheme::NearestUser;
};

struct ExperimentSpec {
  SystemParams base = SystemParams::defaults();
  TopologyConfig topology;
  DeviceParamRanges device_ranges;
  SweepVariable sweep = SweepVariable::None;
  // In config units: dBm for p_max, GHz for f_max.
  std::vector<double> sweep_values;
  // Empty: a single triple taken from base.weights. Triples whose alpha and
  // beta do not sum to one are divided through by alpha + beta.
  std::vector<Weights> weights;
  std::vector<std::uint64_t> seeds{1};
  std::vector<Algorithm> algorithms{Algorithm::Proposed, Algorithm::Random,
                                    Algorithm::Greedy};
  PairingChoice pairing;
  // nullopt: baselines follow `pairing`.
  std::optional<PairingChoice> baseline_pairing;
  SolveConfig solve;
  // Replay these devices instead of generating one topology per seed.
  std::optional<std::vector<LinkedDevice>> fixed_devices;
  std::string output_path = "-";
  OutputFormat format = OutputFormat::Csv;
  bool record_wall_time = false;
  int threads = 0;  // 0: hardware concurrency

  // Throws ConfigError.
  void validate() const;
};

// Applies one `key = value` setting; throws ConfigError naming the key.
void apply_setting(ExperimentSpec& spec, std::string_view key,
                   std::string_view value);

ExperimentSpec parse_config(std::string_view text);
ExperimentSpec load_config(const std::string& path);

struct ResultRow {
  std::optional<std::uint64_t> seed;  // nullopt: mean over seeds
  std::string sweep_variable = "none";
  double sweep_value = 0.0;
  std::string algorithm;
  std::string pairing;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double energy_j = 0.0;
  double time_s = 0.0;
  double accuracy = 0.0;
  double cost = 0.0;       // alpha E + beta T
  double objective = 0.0;  // cost - gamma A
  // ok | not_converged | infeasible | unreachable | error
  std::string status = "ok";
  int iterations = 0;
  std::string resolutions;  // per device id, ';'-separated
  std::optional<double> wall_time_s;

  bool flagged() const {
    return status == "infeasible" || status == "unreachable" || status == "error";
  }
  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;  // per-seed rows, then summary rows

  std::size_t flagged_count() const;
};

// Runs every (sweep value, weights, seed, algorithm) combination. Rows are
// handed to `on_row` in a fixed order regardless of thread scheduling, then
// one summary row per (sweep value, weights, algorithm) is appended.
ResultTable run_experiment(const ExperimentSpec& spec,
                           const std::function<void(const ResultRow&)>& on_row = {});

// Parameters of one sweep point.
SystemParams params_at(const ExperimentSpec& spec, double sweep_value,
                       const Weights& weights);

// Devices for one seed (generated or replayed).
std::vector<LinkedDevice> devices_for(const ExperimentSpec& spec,
                                      std::uint64_t seed);

inline constexpr std::string_view kCsvHeader =
    "seed,sweep_variable,sweep_value,algorithm,pairing,alpha,beta,gamma,"
    "energy_j,time_s,accuracy,cost,objective,status,iterations,resolutions,"
    "wall_time_s";
inline constexpr std::string_view kJsonSchema = "nomafl.results";
inline constexpr int kJsonSchemaVersion = 1;

// 9 significant digits.
std::string format_number(double v);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ResultRow& row);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_json(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_json(std::istream& in);

}  // namespace nomafl::bench
