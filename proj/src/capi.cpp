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

#include "nomafl/nomafl.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>

#include "nomafl/bench.hpp"

struct nomafl_experiment {
  nomafl::bench::ExperimentSpec spec;
};

struct nomafl_devices {
  std::vector<nomafl::LinkedDevice> devices;
};

struct nomafl_results {
  nomafl::bench::ResultTable table;
};

namespace {

using namespace nomafl;

thread_local std::string g_last_error;

nomafl_status fail(nomafl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Maps exceptions escaping the C++ core onto status codes.
template <typename F>
nomafl_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return NOMAFL_OK;
  } catch (const ConfigError& e) {
    return fail(NOMAFL_ERR_CONFIG, e.what());
  } catch (const UnreachableDevice& e) {
    return fail(NOMAFL_ERR_UNREACHABLE, e.what());
  } catch (const DeadlineInfeasible& e) {
    return fail(NOMAFL_ERR_INFEASIBLE, e.what());
  } catch (const Error& e) {
    return fail(NOMAFL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const IoError& e) {
    return fail(NOMAFL_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(NOMAFL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NOMAFL_ERR_INTERNAL, "unknown internal error");
  }
}

template <typename Write>
void write_to(const char* path, Write&& write) {
  if (std::string(path) == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw IoError(std::string("write to '") + path + "' failed");
}

}  // namespace

extern "C" {

const char* nomafl_version(void) { return "1.0.0"; }

const char* nomafl_last_error(void) { return g_last_error.c_str(); }

const char* nomafl_status_name(nomafl_status status) {
  switch (status) {
    case NOMAFL_OK: return "ok";
    case NOMAFL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NOMAFL_ERR_CONFIG: return "config error";
    case NOMAFL_ERR_IO: return "i/o error";
    case NOMAFL_ERR_INFEASIBLE: return "infeasible";
    case NOMAFL_ERR_UNREACHABLE: return "unreachable device";
    case NOMAFL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

nomafl_status nomafl_experiment_load(const char* path, nomafl_experiment** out) {
  if (!out) return fail(NOMAFL_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] {
    auto exp = std::make_unique<nomafl_experiment>();
    if (path && *path) exp->spec = bench::load_config(path);
    *out = exp.release();
  });
}

nomafl_status nomafl_experiment_parse(const char* text, nomafl_experiment** out) {
  if (!text || !out) return fail(NOMAFL_ERR_INVALID_ARGUMENT, "text or out is NULL");
  return guarded([&] {
    auto exp = std::make_unique<nomafl_experiment>();
    exp->spec = bench::parse_config(text);
    *out = exp.release();
  });
}

nomafl_status nomafl_experiment_set(nomafl_experiment* exp, const char* key,
                                    const char* value) {
  if (!exp || !key || !value) {
    return fail(NOMAFL_ERR_INVALID_ARGUMENT, "experiment, key or value is NULL");
  }
  return guarded([&] {
    bench::ExperimentSpec next = exp->spec;
    bench::apply_setting(next, key, value);
    next.validate();
    exp->spec = std::move(next);
  });
}

nomafl_status nomafl_experiment_set_devices(nomafl_experiment* exp,
                                            const nomafl_devices* devices) {
  if (!exp) return fail(NOMAFL_ERR_INVALID_ARGUMENT, "experiment is NULL");
  return guarded([&] {
    bench::ExperimentSpec next = exp->spec;
    if (devices) next.fixed_devices = devices->devices;
    else next.fixed_devices.reset();
    next.validate();
    exp->spec = std::move(next);
  });
}

const char* nomafl_experiment_output(const nomafl_experiment* exp) {
  return exp ? exp->spec.output_path.c_str() : "-";
}

const char* nomafl_experiment_format(const nomafl_experiment* exp) {
  return exp && exp->spec.format == bench::OutputFormat::Json ? "json" : "csv";
}

void nomafl_experiment_free(nomafl_experiment* exp) { delete exp; }

nomafl_status nomafl_devices_generate(const nomafl_experiment* exp, uint64_t seed,
                                      nomafl_devices** out) {
  if (!exp || !out) return fail(NOMAFL_ERR_INVALID_ARGUMENT, "experiment or out is NULL");
  return guarded([&] {
    bench::ExperimentSpec spec = exp->spec;
    spec.fixed_devices.reset();
    auto d = std::make_unique<nomafl_devices>();
    d->devices = bench::devices_for(spec, seed);
    *out = d.release();
  });
}

nomafl_status nomafl_devices_load(const char* path, nomafl_devices** out) {
  if (!path || !out) return fail(NOMAFL_ERR_INVALID_ARGUMENT, "path or out is NULL");
  std::ifstream in(path);
  if (!in) return fail(NOMAFL_ERR_IO, std::string("cannot open '") + path + "'");
  return guarded([&] {
    auto d = std::make_unique<nomafl_devices>();
    d->devices = load_topology(in);
    *out = d.release();
  });
}

nomafl_status nomafl_devices_save(const nomafl_devices* devices, const char* path) {
  if (!devices || !path) return fail(NOMAFL_ERR_INVALID_ARGUMENT, "devices or path is NULL");
  return guarded([&] {
    write_to(path, [&](std::ostream& os) { save_topology(os, devices->devices); });
  });
}

size_t nomafl_devices_count(const nomafl_devices* devices) {
  return devices ? devices->devices.size() : 0;
}

void nomafl_devices_free(nomafl_devices* devices) { delete devices; }

nomafl_status nomafl_run(const nomafl_experiment* exp, nomafl_results** out) {
  if (!exp || !out) return fail(NOMAFL_ERR_INVALID_ARGUMENT, "experiment or out is NULL");
  return guarded([&] {
    auto r = std::make_unique<nomafl_results>();
    r->table = bench::run_experiment(exp->spec);
    *out = r.release();
  });
}

size_t nomafl_results_count(const nomafl_results* results) {
  return results ? results->table.rows.size() : 0;
}

size_t nomafl_results_flagged(const nomafl_results* results) {
  return results ? results->table.flagged_count() : 0;
}

nomafl_status nomafl_results_row(const nomafl_results* results, size_t index,
                                 nomafl_row* out) {
  if (!results || !out) return fail(NOMAFL_ERR_INVALID_ARGUMENT, "results or out is NULL");
  if (index >= results->table.rows.size()) {
    return fail(NOMAFL_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  const bench::ResultRow& r = results->table.rows[index];
  nomafl_row row{};
  row.is_summary = r.seed ? 0 : 1;
  row.seed = r.seed.value_or(0);
  row.sweep_variable = r.sweep_variable.c_str();
  row.sweep_value = r.sweep_value;
  row.algorithm = r.algorithm.c_str();
  row.pairing = r.pairing.c_str();
  row.alpha = r.alpha;
  row.beta = r.beta;
  row.gamma = r.gamma;
  row.energy_j = r.energy_j;
  row.time_s = r.time_s;
  row.accuracy = r.accuracy;
  row.cost = r.cost;
  row.objective = r.objective;
  row.status = r.status.c_str();
  row.iterations = r.iterations;
  row.resolutions = r.resolutions.c_str();
  row.flagged = r.flagged() ? 1 : 0;
  *out = row;
  g_last_error.clear();
  return NOMAFL_OK;
}

nomafl_status nomafl_results_write(const nomafl_results* results, const char* path,
                                   const char* format) {
  if (!results || !path || !format) {
    return fail(NOMAFL_ERR_INVALID_ARGUMENT, "results, path or format is NULL");
  }
  const std::string fmt = format;
  if (fmt != "csv" && fmt != "json") {
    return fail(NOMAFL_ERR_INVALID_ARGUMENT, "format must be csv or json, got '" + fmt + "'");
  }
  return guarded([&] {
    write_to(path, [&](std::ostream& os) {
      if (fmt == "csv") bench::write_csv(os, results->table.rows);
      else bench::write_json(os, results->table.rows);
    });
  });
}

void nomafl_results_free(nomafl_results* results) { delete results; }

}  // extern "C"
