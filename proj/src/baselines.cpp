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

#include <array>
#include <chrono>
#include <limits>
#include <random>

#include "nomafl/allocator.hpp"

namespace nomafl {

namespace {

using Clock = std::chrono::steady_clock;

SolveReport finish(const SystemParams& params, const PairedTopology& topology,
                   std::string algorithm, Allocation alloc,
                   Clock::time_point t0) {
  SolveReport r;
  r.algorithm = std::move(algorithm);
  r.topology = topology;
  r.costs = evaluate(params, topology, alloc);
  alloc.deadline_s = r.costs.total_time_s;
  r.allocation = alloc;
  r.relaxed = alloc;
  r.converged = true;
  r.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

}  // namespace

SolveReport random_baseline(const SystemParams& params,
                            const PairedTopology& topology, std::uint64_t seed) {
  params.validate();
  const auto t0 = Clock::now();
  std::mt19937_64 rng = make_rng(seed, RngStream::RandomBaseline);
  std::uniform_real_distribution<double> power(params.p_min_w, params.p_max_w);
  std::uniform_real_distribution<double> freq(params.f_min_hz, params.f_max_hz);
  Allocation a;
  a.devices.resize(topology.device_count());
  for (DeviceAllocation& d : a.devices) {
    d.power_w = power(rng);
    d.cpu_hz = freq(rng);
    d.resolution_px = params.s_min();
  }
  return finish(params, topology, "random", std::move(a), t0);
}

SolveReport greedy_baseline(const SystemParams& params,
                            const PairedTopology& topology) {
  params.validate();
  const auto t0 = Clock::now();
  constexpr int kGrid = 11;
  const double alpha = params.weights.energy;
  const double beta = params.weights.time;
  const double s = params.s_min();
  std::array<double, kGrid> P{}, F{};
  for (int i = 0; i < kGrid; ++i) {
    P[i] = grid_point(params.p_min_w, params.p_max_w, i);
    F[i] = grid_point(params.f_min_hz, params.f_max_hz, i);
  }

  Allocation a;
  a.devices.resize(topology.device_count());
  for (std::size_t k = 0; k < topology.channels.size(); ++k) {
    const ChannelPair& pair = topology.channels[k];
    // Computation cost only depends on each member's own frequency.
    std::array<std::array<ComputationCost, kGrid>, 2> cmp{};
    for (int m = 0; m < 2; ++m) {
      for (int i = 0; i < kGrid; ++i) {
        cmp[m][i] = computation_cost(params, pair.members[m].device, s, F[i]);
      }
    }
    double best = std::numeric_limits<double>::infinity();
    std::array<int, 4> arg{0, 0, 0, 0};
    for (int f1 = 0; f1 < kGrid; ++f1) {
      for (int f2 = 0; f2 < kGrid; ++f2) {
        for (int p1 = 0; p1 < kGrid; ++p1) {
          for (int p2 = 0; p2 < kGrid; ++p2) {
            const std::array<double, 2> pw{P[p1], P[p2]};
            double e = 0.0, t = 0.0;
            bool reachable = true;
            for (int m = 0; m < 2 && reachable; ++m) {
              const double r = uplink_rate(pair, pw, m, params.noise_psd_w_per_hz);
              if (!(r > 0.0)) { reachable = false; break; }
              const double tt = pair.members[m].device.upload_bits / r;
              const ComputationCost& c = cmp[m][m == 0 ? f1 : f2];
              e += pw[m] * tt + c.energy_j;
              t = std::max(t, tt + c.time_s);
            }
            if (!reachable) continue;
            const double cost = alpha * e + beta * t;
            if (cost < best) {
              best = cost;
              arg = {f1, f2, p1, p2};
            }
          }
        }
      }
    }
    a.at(k, 0) = {P[arg[2]], F[arg[0]], s};
    a.at(k, 1) = {P[arg[3]], F[arg[1]], s};
  }
  return finish(params, topology, "greedy", std::move(a), t0);
}

}  // namespace nomafl
