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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "nomafl/bench.hpp"

namespace nomafl::bench {

namespace {

std::string_view trim(std::string_view s) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad(std::string_view key, std::string_view what,
                      std::string_view value) {
  throw ConfigError("config key '" + std::string(key) + "': " + std::string(what) +
                    ", got '" + std::string(value) + "'");
}

double number(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() ||
      !std::isfinite(v)) {
    bad(key, "expected a number", text);
  }
  return v;
}

std::uint64_t unsigned_number(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    bad(key, "expected a non-negative integer", text);
  }
  return v;
}

int integer(std::string_view key, std::string_view text) {
  const std::uint64_t v = unsigned_number(key, text);
  if (v > 1'000'000'000ULL) bad(key, "value out of range", text);
  return static_cast<int>(v);
}

bool boolean(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  bad(key, "expected true or false", text);
}

std::vector<double> number_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  if (text.empty()) return out;
  for (std::string_view item : split(text, ',')) out.push_back(number(key, item));
  return out;
}

// "1,2,5" or "1..20".
std::vector<std::uint64_t> seed_list(std::string_view key, std::string_view text) {
  std::vector<std::uint64_t> out;
  if (text.empty()) return out;
  for (std::string_view item : split(text, ',')) {
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(unsigned_number(key, item));
      continue;
    }
    const std::uint64_t lo = unsigned_number(key, trim(item.substr(0, dots)));
    const std::uint64_t hi = unsigned_number(key, trim(item.substr(dots + 2)));
    if (hi < lo || hi - lo > 100000) bad(key, "expected a range lo..hi", item);
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

// "0.9:0.1:0, 0.5:0.5:1".
std::vector<Weights> weight_list(std::string_view key, std::string_view text) {
  std::vector<Weights> out;
  if (text.empty()) return out;
  for (std::string_view item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 3) bad(key, "expected alpha:beta:gamma", item);
    out.push_back({number(key, parts[0]), number(key, parts[1]), number(key, parts[2])});
  }
  return out;
}

PairingChoice pairing_choice(std::string_view key, std::string_view text) {
  if (text == "best") return {};
  try {
    return {false, parse_pairing_scheme(text)};
  } catch (const Error&) {
    bad(key, "expected random, nearest, nearest-farthest or best", text);
  }
}

}  // namespace

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::None: return "none";
    case SweepVariable::PMax: return "p_max_dbm";
    case SweepVariable::FMax: return "f_max_ghz";
    case SweepVariable::Gamma: return "gamma";
  }
  return "none";
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Proposed: return "proposed";
    case Algorithm::Random: return "random";
    case Algorithm::Greedy: return "greedy";
  }
  return "proposed";
}

void apply_setting(ExperimentSpec& spec, std::string_view key,
                   std::string_view value) {
  key = trim(key);
  value = trim(value);
  SystemParams& p = spec.base;
  if (key == "users") {
    spec.topology.user_count = integer(key, value);
  } else if (key == "channels") {
    spec.topology.channel_count = integer(key, value);
    p.channel_count = spec.topology.channel_count;
  } else if (key == "bandwidth_mhz") {
    p.total_bandwidth_hz = number(key, value) * 1e6;
  } else if (key == "noise_dbm_per_hz") {
    p.noise_psd_w_per_hz = dbm_to_watts(number(key, value));
  } else if (key == "kappa") {
    p.switched_capacitance = number(key, value);
  } else if (key == "local_iterations") {
    p.local_iterations = number(key, value);
  } else if (key == "s0") {
    p.std_resolution_px = number(key, value);
  } else if (key == "resolutions") {
    const auto r = number_list(key, value);
    if (r.size() != 3) bad(key, "expected three resolutions", value);
    p.resolution_set_px = {r[0], r[1], r[2]};
  } else if (key == "alpha") {
    p.weights.energy = number(key, value);
  } else if (key == "beta") {
    p.weights.time = number(key, value);
  } else if (key == "gamma") {
    p.weights.accuracy = number(key, value);
  } else if (key == "p_min_dbm") {
    p.p_min_w = dbm_to_watts(number(key, value));
  } else if (key == "p_max_dbm") {
    p.p_max_w = dbm_to_watts(number(key, value));
  } else if (key == "f_min_ghz") {
    p.f_min_hz = number(key, value) * 1e9;
  } else if (key == "f_max_ghz") {
    p.f_max_hz = number(key, value) * 1e9;
  } else if (key == "upload_kbits") {
    spec.device_ranges.upload_bits = number(key, value) * 1e3;
  } else if (key == "samples") {
    spec.device_ranges.sample_count = number(key, value);
  } else if (key == "cycles_min") {
    spec.device_ranges.cycles_min = number(key, value);
  } else if (key == "cycles_max") {
    spec.device_ranges.cycles_max = number(key, value);
  } else if (key == "cell_radius_km") {
    spec.topology.cell_radius_km = number(key, value);
  } else if (key == "min_distance_km") {
    spec.topology.min_distance_km = number(key, value);
  } else if (key == "shadow_sigma_db") {
    spec.topology.shadow_sigma_db = number(key, value);
  } else if (key == "sweep") {
    if (value == "none") spec.sweep = SweepVariable::None;
    else if (value == "p_max") spec.sweep = SweepVariable::PMax;
    else if (value == "f_max") spec.sweep = SweepVariable::FMax;
    else if (value == "gamma") spec.sweep = SweepVariable::Gamma;
    else bad(key, "expected none, p_max, f_max or gamma", value);
  } else if (key == "sweep_values") {
    spec.sweep_values = number_list(key, value);
  } else if (key == "weights") {
    spec.weights = weight_list(key, value);
  } else if (key == "seeds") {
    spec.seeds = seed_list(key, value);
  } else if (key == "algorithms") {
    spec.algorithms.clear();
    if (value.empty()) return;
    for (std::string_view a : split(value, ',')) {
      if (a == "proposed") spec.algorithms.push_back(Algorithm::Proposed);
      else if (a == "random") spec.algorithms.push_back(Algorithm::Random);
      else if (a == "greedy") spec.algorithms.push_back(Algorithm::Greedy);
      else bad(key, "expected proposed, random or greedy", a);
    }
  } else if (key == "pairing") {
    spec.pairing = pairing_choice(key, value);
  } else if (key == "baseline_pairing") {
    if (value == "same") spec.baseline_pairing.reset();
    else spec.baseline_pairing = pairing_choice(key, value);
  } else if (key == "outer_tolerance") {
    spec.solve.outer_tolerance = number(key, value);
  } else if (key == "max_outer_iterations") {
    spec.solve.max_outer_iterations = integer(key, value);
  } else if (key == "multi_start") {
    spec.solve.multi_start = integer(key, value);
  } else if (key == "output") {
    spec.output_path = std::string(value.empty() ? "-" : value);
  } else if (key == "format") {
    if (value == "csv") spec.format = OutputFormat::Csv;
    else if (value == "json") spec.format = OutputFormat::Json;
    else bad(key, "expected csv or json", value);
  } else if (key == "record_wall_time") {
    spec.record_wall_time = boolean(key, value);
  } else if (key == "threads") {
    spec.threads = integer(key, value);
  } else if (key == "topology_file") {
    if (value.empty()) {
      spec.fixed_devices.reset();
      return;
    }
    std::ifstream in{std::string(value)};
    if (!in) bad(key, "cannot open topology file", value);
    try {
      spec.fixed_devices = load_topology(in);
    } catch (const Error& e) {
      throw ConfigError("config key 'topology_file': " + std::string(e.what()));
    }
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

ExperimentSpec parse_config(std::string_view text) {
  ExperimentSpec spec;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    apply_setting(spec, line.substr(0, eq), line.substr(eq + 1));
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

SystemParams params_at(const ExperimentSpec& spec, double sweep_value,
                       const Weights& weights) {
  SystemParams p = spec.base;
  p.weights = weights;
  switch (spec.sweep) {
    case SweepVariable::None: break;
    case SweepVariable::PMax: p.p_max_w = dbm_to_watts(sweep_value); break;
    case SweepVariable::FMax: p.f_max_hz = sweep_value * 1e9; break;
    case SweepVariable::Gamma: p.weights.accuracy = sweep_value; break;
  }
  const double sum = p.weights.energy + p.weights.time;
  if (sum > 0.0 && std::abs(sum - 1.0) > 1e-12) {
    p.weights.energy /= sum;
    p.weights.time /= sum;
    p.weights.accuracy /= sum;
  }
  return p;
}

void ExperimentSpec::validate() const {
  try {
    topology.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (topology.channel_count != base.channel_count) {
    throw ConfigError("channel count of the topology and the system differ");
  }
  if (seeds.empty()) throw ConfigError("config key 'seeds': at least one seed is required");
  if (algorithms.empty()) {
    throw ConfigError("config key 'algorithms': at least one algorithm is required");
  }
  if (sweep != SweepVariable::None && sweep_values.empty()) {
    throw ConfigError("config key 'sweep_values': a sweep needs at least one value");
  }
  for (std::size_t i = 1; i < sweep_values.size(); ++i) {
    if (!(sweep_values[i] > sweep_values[i - 1])) {
      throw ConfigError("config key 'sweep_values': values must be strictly increasing");
    }
  }
  if (threads < 0) throw ConfigError("config key 'threads': must be non-negative");
  if (!(device_ranges.cycles_min > 0.0 && device_ranges.cycles_max >= device_ranges.cycles_min &&
        device_ranges.sample_count > 0.0 && device_ranges.upload_bits > 0.0)) {
    throw ConfigError("device parameter ranges must be positive with cycles_min <= cycles_max");
  }
  if (fixed_devices &&
      fixed_devices->size() != 2 * static_cast<std::size_t>(base.channel_count)) {
    throw ConfigError("config key 'topology_file': device count must be twice the channel count");
  }
  try {
    solve.validate();
    const std::vector<double> points =
        sweep == SweepVariable::None ? std::vector<double>{0.0} : sweep_values;
    const std::vector<Weights> triples = weights.empty() ? std::vector<Weights>{base.weights} : weights;
    for (double v : points) {
      for (const Weights& w : triples) {
        if (!(w.energy + w.time > 0.0)) {
          throw ConfigError("weights: alpha + beta must be positive");
        }
        params_at(*this, v, w).validate();
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace nomafl::bench
