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

// Cell topology generation and two-per-subchannel user pairing.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nomafl/model.hpp"

namespace nomafl {

struct TopologyConfig {
  int user_count = 50;
  int channel_count = 25;
  double cell_radius_km = 0.5;
  double min_distance_km = 0.01;
  double shadow_sigma_db = 8.0;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct DeviceParamRanges {
  double cycles_min = 1e4;
  double cycles_max = 3e4;
  double sample_count = 500.0;
  double upload_bits = 28.1e3;
};

enum class PairingScheme { Random, NearestUser, NearestFarthest };

inline constexpr PairingScheme kAllPairingSchemes[] = {
    PairingScheme::Random, PairingScheme::NearestUser,
    PairingScheme::NearestFarthest};

std::string_view to_string(PairingScheme scheme);
// Accepts "random", "nearest", "nearest-farthest".
PairingScheme parse_pairing_scheme(std::string_view name);

// Independent generator for one purpose (placement, shadowing, ...) derived
// from a master seed, so adding draws to one stream never shifts another.
enum class RngStream : std::uint64_t {
  Placement = 1,
  Shadowing = 2,
  Pairing = 3,
  RandomBaseline = 4,
  MultiStart = 5,
};
std::mt19937_64 make_rng(std::uint64_t master_seed, RngStream stream);

// Path loss 128.1 + 37.6 log10(d) dB plus a caller-supplied shadowing sample.
double channel_gain(double distance_km, double shadow_db);

// Places config.user_count devices uniformly (by area) in the annulus
// [min_distance, radius] and draws one shadowing sample per device.
std::vector<LinkedDevice> generate_topology(const TopologyConfig& config,
                                            const DeviceParamRanges& ranges);

// Groups 2K devices into K channel pairs. `rng` is only used by Random.
// Members inside a pair are ordered by ascending gain, ties by device id.
PairedTopology pair_users(const std::vector<LinkedDevice>& devices,
                          PairingScheme scheme, double subchannel_bandwidth_hz,
                          std::mt19937_64& rng);

// Line-oriented text format, one device per record:
//   id distance_km cycles_per_std_sample sample_count upload_bits gain
// Lines starting with '#' are comments. Values round-trip exactly.
void save_topology(std::ostream& out, const std::vector<LinkedDevice>& devices);
std::vector<LinkedDevice> load_topology(std::istream& in);

}  // namespace nomafl
