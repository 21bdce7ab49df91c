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

// Command-line front end. Talks to the solver only through the C API.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nomafl/nomafl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFlagged = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::string pairing;
  std::string topology;
  std::optional<int> threads;
};

struct Failure {
  std::string message;
};

void check(nomafl_status status, const std::string& what) {
  if (status != NOMAFL_OK) {
    throw Failure{what + ": " + nomafl_status_name(status) + ": " + nomafl_last_error()};
  }
}

using ExperimentPtr = std::unique_ptr<nomafl_experiment, decltype(&nomafl_experiment_free)>;
using DevicesPtr = std::unique_ptr<nomafl_devices, decltype(&nomafl_devices_free)>;
using ResultsPtr = std::unique_ptr<nomafl_results, decltype(&nomafl_results_free)>;

void set(nomafl_experiment* exp, const char* key, const std::string& value) {
  check(nomafl_experiment_set(exp, key, value.c_str()), std::string("--") + key);
}

ExperimentPtr load(const Options& o) {
  nomafl_experiment* raw = nullptr;
  check(nomafl_experiment_load(o.config.c_str(), &raw), "loading config");
  ExperimentPtr exp(raw, nomafl_experiment_free);
  if (o.seed) set(exp.get(), "seeds", std::to_string(*o.seed));
  if (!o.format.empty()) set(exp.get(), "format", o.format);
  if (!o.pairing.empty()) set(exp.get(), "pairing", o.pairing);
  if (o.threads) set(exp.get(), "threads", std::to_string(*o.threads));
  if (!o.out.empty()) set(exp.get(), "output", o.out);
  return exp;
}

int run_and_write(nomafl_experiment* exp) {
  nomafl_results* raw = nullptr;
  check(nomafl_run(exp, &raw), "running experiment");
  ResultsPtr results(raw, nomafl_results_free);
  check(nomafl_results_write(results.get(), nomafl_experiment_output(exp),
                             nomafl_experiment_format(exp)),
        "writing results");
  const std::size_t flagged = nomafl_results_flagged(results.get());
  if (flagged > 0) {
    std::fprintf(stderr, "nomafl: %zu run(s) flagged infeasible or unreachable\n", flagged);
    return kExitFlagged;
  }
  return kExitOk;
}

int cmd_topology(const Options& o) {
  ExperimentPtr exp = load(o);
  nomafl_devices* raw = nullptr;
  check(nomafl_devices_generate(exp.get(), o.seed.value_or(1), &raw), "generating topology");
  DevicesPtr devices(raw, nomafl_devices_free);
  check(nomafl_devices_save(devices.get(), o.out.empty() ? "-" : o.out.c_str()),
        "saving topology");
  return kExitOk;
}

int cmd_solve(const Options& o, const char* algorithms) {
  ExperimentPtr exp = load(o);
  set(exp.get(), "sweep", "none");
  set(exp.get(), "algorithms", algorithms);
  if (!o.topology.empty()) {
    nomafl_devices* raw = nullptr;
    check(nomafl_devices_load(o.topology.c_str(), &raw), "loading topology");
    DevicesPtr devices(raw, nomafl_devices_free);
    check(nomafl_experiment_set_devices(exp.get(), devices.get()), "--topology");
  }
  return run_and_write(exp.get());
}

int cmd_sweep(const Options& o) {
  ExperimentPtr exp = load(o);
  return run_and_write(exp.get());
}

int cmd_baselines(const Options& o) {
  ExperimentPtr exp = load(o);
  set(exp.get(), "algorithms", "random,greedy");
  if (!o.topology.empty()) {
    nomafl_devices* raw = nullptr;
    check(nomafl_devices_load(o.topology.c_str(), &raw), "loading topology");
    DevicesPtr devices(raw, nomafl_devices_free);
    check(nomafl_experiment_set_devices(exp.get(), devices.get()), "--topology");
  }
  return run_and_write(exp.get());
}

void common_flags(CLI::App* cmd, Options& o, bool results) {
  cmd->add_option("--config", o.config, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed (overrides the config seed list)");
  cmd->add_option("--out", o.out, "output path, '-' for stdout");
  if (!results) return;
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--pairing", o.pairing, "random, nearest, nearest-farthest or best")
      ->check(CLI::IsMember({"random", "nearest", "nearest-farthest", "best"}));
  cmd->add_option("--threads", o.threads, "worker threads, 0 for all cores");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOMA federated-learning resource allocation solver", "nomafl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nomafl_version()));

  Options o;
  CLI::App* topology = app.add_subcommand("topology", "generate and save a device topology");
  common_flags(topology, o, false);

  CLI::App* solve = app.add_subcommand("solve", "solve one instance with the proposed allocator");
  common_flags(solve, o, true);
  solve->add_option("--topology", o.topology, "replay a saved topology")
      ->check(CLI::ExistingFile);

  CLI::App* sweep = app.add_subcommand("sweep", "run the experiment described by --config");
  common_flags(sweep, o, true);

  CLI::App* baselines = app.add_subcommand("baselines", "run the random and greedy baselines");
  common_flags(baselines, o, true);
  baselines->add_option("--topology", o.topology, "replay a saved topology")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (topology->parsed()) return cmd_topology(o);
    if (solve->parsed()) return cmd_solve(o, "proposed");
    if (sweep->parsed()) return cmd_sweep(o);
    if (baselines->parsed()) return cmd_baselines(o);
  } catch (const Failure& f) {
    std::fprintf(stderr, "nomafl: %s\n", f.message.c_str());
    return kExitError;
  }
  return kExitError;
}
