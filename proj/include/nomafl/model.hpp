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

// Physical model of an uplink-NOMA federated-learning MAR cell.
//
// Every device trains locally on frames of resolution s x s, then uploads its
// model over a subchannel it shares with exactly one other device. The cost
// of one global round for device (k, i) is
//
//   rate      r = B_k log2(1 + p g / (B_k N + sum_{j<i} p_j g_j))
//   upload    T_trans = d / r,             E_trans = p T_trans
//   compute   T_cmp = eta xi s^2 c D / f,  E_cmp = kappa eta xi s^2 c D f^2
//   accuracy  A = 1 - 1.578 exp(-6.5e-3 s)
//
// and the system objective is alpha E + beta T - gamma A with E and A summed
// over all devices and T the slowest device's round time. All quantities in
// this header are SI: watts, hertz, bits, seconds, joules, linear gains.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "nomafl/errors.hpp"

namespace nomafl {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watts_to_dbm(double watts) {
  return 10.0 * std::log10(watts * 1e3);
}

struct Weights {
  double energy = 0.5;    // alpha
  double time = 0.5;      // beta
  double accuracy = 1.0;  // gamma
};

struct SystemParams {
  double total_bandwidth_hz = 20e6;
  int channel_count = 25;
  double noise_psd_w_per_hz = 0.0;  // set by defaults() / config ingestion
  double switched_capacitance = 1e-28;
  double local_iterations = 10.0;
  double std_resolution_px = 100.0;
  std::array<double, 3> resolution_set_px{160.0, 320.0, 640.0};
  Weights weights;
  double p_min_w = 0.0;
  double p_max_w = 0.0;
  double f_min_hz = 1e6;
  double f_max_hz = 2e9;

  // Defaults of the reference experiment, converted to SI.
  static SystemParams defaults();

  double subchannel_bandwidth_hz() const {
    return total_bandwidth_hz / channel_count;
  }
  // xi = 1 / s0^2, so a frame at the standard resolution costs c cycles.
  double std_sample_scale() const {
    return 1.0 / (std_resolution_px * std_resolution_px);
  }
  double s_min() const { return resolution_set_px[0]; }
  double s_max() const { return resolution_set_px[2]; }

  // Throws InvalidArgument naming the first violated invariant.
  void validate() const;
};

struct Device {
  int id = 0;
  double distance_km = 0.0;
  double cycles_per_std_sample = 0.0;
  double sample_count = 0.0;
  double upload_bits = 0.0;
};

// A device together with its linear channel gain to the base station.
struct LinkedDevice {
  Device device;
  double gain = 0.0;
};

// Two devices sharing subchannel k, ordered by ascending gain. Member 0 is
// decoded without interference, member 1 sees member 0 as interference.
struct ChannelPair {
  int channel_index = 0;
  double bandwidth_hz = 0.0;
  std::array<LinkedDevice, 2> members;
};

struct PairedTopology {
  std::vector<ChannelPair> channels;

  std::size_t device_count() const { return 2 * channels.size(); }
  const LinkedDevice& member(std::size_t flat) const {
    return channels[flat / 2].members[flat % 2];
  }
};

struct DeviceAllocation {
  double power_w = 0.0;
  double cpu_hz = 0.0;
  double resolution_px = 0.0;
};

// Per-device decision variables in channel-major order (index 2k + i) plus the
// round deadline.
struct Allocation {
  std::vector<DeviceAllocation> devices;
  double deadline_s = 0.0;

  DeviceAllocation& at(std::size_t k, int i) { return devices[2 * k + i]; }
  const DeviceAllocation& at(std::size_t k, int i) const {
    return devices[2 * k + i];
  }
};

struct DeviceCost {
  double rate_bps = 0.0;
  double t_trans_s = 0.0;
  double e_trans_j = 0.0;
  double t_cmp_s = 0.0;
  double e_cmp_j = 0.0;
  double accuracy = 0.0;

  double round_time_s() const { return t_trans_s + t_cmp_s; }
  double energy_j() const { return e_trans_j + e_cmp_j; }
};

struct CostBreakdown {
  std::vector<DeviceCost> devices;  // same order as Allocation::devices
  double total_energy_j = 0.0;
  double total_time_s = 0.0;
  double total_accuracy = 0.0;
  double objective = 0.0;

  // alpha E + beta T, the part of the objective the baselines optimize.
  double weighted_cost(const Weights& w) const {
    return w.energy * total_energy_j + w.time * total_time_s;
  }
};

struct TransmissionCost {
  double time_s = 0.0;
  double energy_j = 0.0;
};

struct ComputationCost {
  double time_s = 0.0;
  double energy_j = 0.0;
};

// Shannon rate of member `member` (0 or 1) given both members' powers.
double uplink_rate(const ChannelPair& pair, std::span<const double, 2> powers,
                   int member, double noise_psd_w_per_hz);

// Throws UnreachableDevice when rate_bps <= 0.
TransmissionCost transmission_cost(const Device& device, double rate_bps,
                                   double power_w);

// Throws InvalidArgument when cpu_hz < params.f_min_hz.
ComputationCost computation_cost(const SystemParams& params,
                                 const Device& device, double resolution_px,
                                 double cpu_hz);

double accuracy_of(double resolution_px);

// Full cost breakdown of an allocation. The deadline field of `allocation`
// is ignored; total_time_s is the max round time over devices.
CostBreakdown evaluate(const SystemParams& params,
                       const PairedTopology& topology,
                       const Allocation& allocation);

}  // namespace nomafl
