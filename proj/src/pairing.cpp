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

#include "nomafl/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace nomafl {

void TopologyConfig::validate() const {
  if (channel_count <= 0 || user_count != 2 * channel_count) {
    throw InvalidArgument("topology needs exactly two users per channel");
  }
  if (!(min_distance_km > 0.0) || !(cell_radius_km > min_distance_km)) {
    throw InvalidArgument("cell geometry needs radius > min_distance > 0");
  }
  if (!(shadow_sigma_db >= 0.0)) {
    throw InvalidArgument("shadow sigma must be non-negative");
  }
}

std::string_view to_string(PairingScheme scheme) {
  switch (scheme) {
    case PairingScheme::Random: return "random";
    case PairingScheme::NearestUser: return "nearest";
    case PairingScheme::NearestFarthest: return "nearest-farthest";
  }
  return "?";
}

PairingScheme parse_pairing_scheme(std::string_view name) {
  for (PairingScheme s : kAllPairingSchemes) {
    if (to_string(s) == name) return s;
  }
  throw InvalidArgument("unknown pairing scheme '" + std::string(name) + "'");
}

std::mt19937_64 make_rng(std::uint64_t master_seed, RngStream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

double channel_gain(double distance_km, double shadow_db) {
  const double loss_db = 128.1 + 37.6 * std::log10(distance_km) + shadow_db;
  return std::pow(10.0, -loss_db / 10.0);
}

std::vector<LinkedDevice> generate_topology(const TopologyConfig& config,
                                            const DeviceParamRanges& ranges) {
  config.validate();
  std::mt19937_64 place = make_rng(config.rng_seed, RngStream::Placement);
  std::mt19937_64 shadow = make_rng(config.rng_seed, RngStream::Shadowing);
  const double r0 = config.min_distance_km;
  const double r1 = config.cell_radius_km;
  std::uniform_real_distribution<double> area(r0 * r0, r1 * r1);
  std::uniform_real_distribution<double> cycles(ranges.cycles_min,
                                                ranges.cycles_max);
  std::normal_distribution<double> fading(0.0, 1.0);

  std::vector<LinkedDevice> out;
  out.reserve(config.user_count);
  for (int n = 0; n < config.user_count; ++n) {
    LinkedDevice ld;
    ld.device.id = n;
    ld.device.distance_km = std::clamp(std::sqrt(area(place)), r0, r1);
    ld.device.cycles_per_std_sample = cycles(place);
    ld.device.sample_count = ranges.sample_count;
    ld.device.upload_bits = ranges.upload_bits;
    const double x_db = config.shadow_sigma_db * fading(shadow);
    ld.gain = channel_gain(ld.device.distance_km, x_db);
    out.push_back(ld);
  }
  return out;
}

namespace {

bool gain_less(const LinkedDevice& a, const LinkedDevice& b) {
  if (a.gain != b.gain) return a.gain < b.gain;
  return a.device.id < b.device.id;
}

ChannelPair make_pair(int k, double bw, const LinkedDevice& a,
                      const LinkedDevice& b) {
  ChannelPair p;
  p.channel_index = k;
  p.bandwidth_hz = bw;
  p.members = gain_less(a, b) ? std::array{a, b} : std::array{b, a};
  return p;
}

}  // namespace

PairedTopology pair_users(const std::vector<LinkedDevice>& devices,
                          PairingScheme scheme, double subchannel_bandwidth_hz,
                          std::mt19937_64& rng) {
  if (devices.empty() || devices.size() % 2 != 0) {
    throw InvalidArgument("pairing needs a positive even number of devices");
  }
  std::vector<std::size_t> order(devices.size());
  std::iota(order.begin(), order.end(), 0);
  if (scheme == PairingScheme::Random) {
    std::shuffle(order.begin(), order.end(), rng);
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const Device& da = devices[a].device;
      const Device& db = devices[b].device;
      if (da.distance_km != db.distance_km) return da.distance_km < db.distance_km;
      return da.id < db.id;
    });
  }

  const std::size_t n = order.size();
  PairedTopology topo;
  topo.channels.reserve(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    std::size_t a = 0, b = 0;
    if (scheme == PairingScheme::NearestFarthest) {
      a = order[k];
      b = order[n - 1 - k];
    } else {
      a = order[2 * k];
      b = order[2 * k + 1];
    }
    topo.channels.push_back(make_pair(static_cast<int>(k),
                                      subchannel_bandwidth_hz, devices[a],
                                      devices[b]));
  }
  return topo;
}

void save_topology(std::ostream& out, const std::vector<LinkedDevice>& devices) {
  out << "# nomafl-topology v1\n"
      << "# id distance_km cycles_per_std_sample sample_count upload_bits gain\n";
  char buf[256];
  for (const LinkedDevice& ld : devices) {
    const Device& d = ld.device;
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g %.17g %.17g\n", d.id,
                  d.distance_km, d.cycles_per_std_sample, d.sample_count,
                  d.upload_bits, ld.gain);
    out << buf;
  }
}

std::vector<LinkedDevice> load_topology(std::istream& in) {
  std::vector<LinkedDevice> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    LinkedDevice ld;
    Device& d = ld.device;
    std::string extra;
    if (!(ss >> d.id >> d.distance_km >> d.cycles_per_std_sample >>
          d.sample_count >> d.upload_bits >> ld.gain) ||
        (ss >> extra)) {
      throw InvalidArgument("topology line " + std::to_string(lineno) +
                            ": expected 6 fields");
    }
    if (!(d.distance_km > 0.0 && d.cycles_per_std_sample > 0.0 &&
          d.sample_count > 0.0 && d.upload_bits > 0.0 && ld.gain > 0.0)) {
      throw InvalidArgument("topology line " + std::to_string(lineno) +
                            ": values must be positive");
    }
    out.push_back(ld);
  }
  return out;
}

}  // namespace nomafl
