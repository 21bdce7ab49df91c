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

#include "nomafl/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nomafl {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(std::string("invalid system parameters: ") + what);
}

}  // namespace

SystemParams SystemParams::defaults() {
  SystemParams p;
  p.total_bandwidth_hz = 20e6;
  p.channel_count = 25;
  p.noise_psd_w_per_hz = dbm_to_watts(-174.0);
  // 1e-28, not 1e28: only the negative exponent gives millijoule-scale
  // computation energy.
  p.switched_capacitance = 1e-28;
  p.local_iterations = 10.0;
  p.std_resolution_px = 100.0;
  p.resolution_set_px = {160.0, 320.0, 640.0};
  p.weights = {0.5, 0.5, 1.0};
  p.p_min_w = dbm_to_watts(0.0);
  p.p_max_w = dbm_to_watts(12.0);
  // f_min = 0 would make computation time unbounded.
  p.f_min_hz = 1e6;
  p.f_max_hz = 2e9;
  return p;
}

void SystemParams::validate() const {
  const Weights& w = weights;
  require(w.energy >= 0.0 && w.energy <= 1.0, "alpha must lie in [0, 1]");
  require(w.time >= 0.0 && w.time <= 1.0, "beta must lie in [0, 1]");
  require(std::abs(w.energy + w.time - 1.0) <= 1e-9, "alpha + beta must equal 1");
  require(w.accuracy >= 0.0, "gamma must be non-negative");
  require(total_bandwidth_hz > 0.0, "bandwidth must be positive");
  require(channel_count > 0, "channel count must be positive");
  require(noise_psd_w_per_hz > 0.0, "noise PSD must be positive");
  require(switched_capacitance > 0.0, "kappa must be positive");
  require(local_iterations > 0.0, "eta must be positive");
  require(std_resolution_px > 0.0, "s0 must be positive");
  require(resolution_set_px[0] > 0.0 &&
              resolution_set_px[0] < resolution_set_px[1] &&
              resolution_set_px[1] < resolution_set_px[2],
          "resolutions must satisfy 0 < s1 < s2 < s3");
  require(p_min_w >= 0.0 && p_min_w <= p_max_w && p_max_w > 0.0,
          "power bounds must satisfy 0 <= p_min <= p_max, p_max > 0");
  require(f_min_hz > 0.0 && f_min_hz <= f_max_hz,
          "frequency bounds must satisfy 0 < f_min <= f_max");
}

double uplink_rate(const ChannelPair& pair, std::span<const double, 2> powers,
                   int member, double noise_psd_w_per_hz) {
  double interference = pair.bandwidth_hz * noise_psd_w_per_hz;
  for (int j = 0; j < member; ++j) interference += powers[j] * pair.members[j].gain;
  const double sinr = powers[member] * pair.members[member].gain / interference;
  return pair.bandwidth_hz * std::log2(1.0 + sinr);
}

TransmissionCost transmission_cost(const Device& device, double rate_bps,
                                   double power_w) {
  if (!(rate_bps > 0.0)) throw UnreachableDevice(device.id);
  const double t = device.upload_bits / rate_bps;
  return {t, power_w * t};
}

ComputationCost computation_cost(const SystemParams& params,
                                 const Device& device, double resolution_px,
                                 double cpu_hz) {
  if (!(cpu_hz >= params.f_min_hz)) {
    throw InvalidArgument("cpu frequency " + std::to_string(cpu_hz) +
                          " Hz is below f_min");
  }
  // Cycles for one round: eta local passes over D frames of s^2 pixels.
  const double cycles = params.local_iterations * params.std_sample_scale() *
                        resolution_px * resolution_px *
                        device.cycles_per_std_sample * device.sample_count;
  return {cycles / cpu_hz,
          params.switched_capacitance * cycles * cpu_hz * cpu_hz};
}

double accuracy_of(double resolution_px) {
  return 1.0 - 1.578 * std::exp(-6.5e-3 * resolution_px);
}

CostBreakdown evaluate(const SystemParams& params,
                       const PairedTopology& topology,
                       const Allocation& allocation) {
  if (allocation.devices.size() != topology.device_count()) {
    throw InvalidArgument("allocation size does not match topology");
  }
  CostBreakdown out;
  out.devices.resize(topology.device_count());
  for (std::size_t k = 0; k < topology.channels.size(); ++k) {
    const ChannelPair& pair = topology.channels[k];
    const std::array<double, 2> powers{allocation.at(k, 0).power_w,
                                       allocation.at(k, 1).power_w};
    for (int i = 0; i < 2; ++i) {
      const DeviceAllocation& a = allocation.at(k, i);
      const Device& dev = pair.members[i].device;
      DeviceCost& c = out.devices[2 * k + i];
      c.rate_bps = uplink_rate(pair, powers, i, params.noise_psd_w_per_hz);
      const TransmissionCost tx = transmission_cost(dev, c.rate_bps, a.power_w);
      const ComputationCost cmp =
          computation_cost(params, dev, a.resolution_px, a.cpu_hz);
      c.t_trans_s = tx.time_s;
      c.e_trans_j = tx.energy_j;
      c.t_cmp_s = cmp.time_s;
      c.e_cmp_j = cmp.energy_j;
      c.accuracy = accuracy_of(a.resolution_px);
      out.total_energy_j += c.energy_j();
      out.total_time_s = std::max(out.total_time_s, c.round_time_s());
      out.total_accuracy += c.accuracy;
    }
  }
  const Weights& w = params.weights;
  out.objective = out.weighted_cost(w) - w.accuracy * out.total_accuracy;
  return out;
}

}  // namespace nomafl
