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

#include "nomafl/allocator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "nomafl/sp1.hpp"

namespace nomafl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double width_or_one(double lo, double hi) { return hi > lo ? hi - lo : 1.0; }

// Scale-free distance between successive iterates.
double variable_change(const SystemParams& params, const Allocation& a,
                       const Allocation& b) {
  const double wp = width_or_one(params.p_min_w, params.p_max_w);
  const double wf = width_or_one(params.f_min_hz, params.f_max_hz);
  const double ws = width_or_one(params.s_min(), params.s_max());
  double change = 0.0;
  for (std::size_t j = 0; j < a.devices.size(); ++j) {
    const DeviceAllocation& x = a.devices[j];
    const DeviceAllocation& y = b.devices[j];
    change = std::max({change, std::abs(x.power_w - y.power_w) / wp,
                       std::abs(x.cpu_hz - y.cpu_hz) / wf,
                       std::abs(x.resolution_px - y.resolution_px) / ws});
  }
  return change;
}

void finish_report(const SystemParams& params, const PairedTopology& topology,
                   SolveReport& report) {
  report.topology = topology;
  report.costs = evaluate(params, topology, report.allocation);
  report.allocation.deadline_s = report.costs.total_time_s;
}

}  // namespace

void SolveConfig::validate() const {
  if (!(outer_tolerance > 0.0)) throw InvalidArgument("outer tolerance must be positive");
  if (max_outer_iterations < 1) throw InvalidArgument("max outer iterations must be >= 1");
  if (schemes.empty()) throw InvalidArgument("at least one pairing scheme is required");
  if (multi_start < 0) throw InvalidArgument("multi_start must be non-negative");
}

Allocation initial_allocation(const SystemParams& params,
                              const PairedTopology& topology) {
  Allocation a;
  a.devices.assign(topology.device_count(),
                   {0.5 * (params.p_min_w + params.p_max_w),
                    0.5 * (params.f_min_hz + params.f_max_hz),
                    params.resolution_set_px[1]});
  a.deadline_s = sp1::deadline_of(params, topology, a);
  return a;
}

SolveReport allocate_from(const SystemParams& params,
                          const PairedTopology& topology,
                          const SolveConfig& config, const Allocation& start) {
  params.validate();
  config.validate();
  if (!(params.weights.energy > 0.0)) {
    throw InvalidArgument("the alternating allocator requires alpha > 0");
  }
  const auto t0 = Clock::now();
  const std::size_t n = topology.device_count();

  SolveReport report;
  report.algorithm = "proposed";
  Allocation current = start;
  current.deadline_s = sp1::deadline_of(params, topology, current);
  report.objective_trace.push_back(sp1::relaxed_objective(params, topology, current));

  bool rate_infeasible = false;
  for (int it = 1; it <= config.max_outer_iterations; ++it) {
    std::vector<double> powers(n);
    for (std::size_t j = 0; j < n; ++j) powers[j] = current.devices[j].power_w;

    const sp1::Sp1Solution s1 = sp1::solve_sp1(params, topology, powers);
    Allocation next = current;
    for (std::size_t j = 0; j < n; ++j) {
      next.devices[j].cpu_hz = s1.cpu_hz[j];
      next.devices[j].resolution_px = s1.resolution_continuous[j];
    }
    const sp2::Sp2Result s2 =
        sp2::solve_sp2(params, topology, next, s1.deadline_s, config.newton);
    for (std::size_t j = 0; j < n; ++j) next.devices[j].power_w = s2.powers[j];
    next.deadline_s = sp1::deadline_of(params, topology, next);
    rate_infeasible = s2.rate_infeasible;

    report.objective_trace.push_back(sp1::relaxed_objective(params, topology, next));
    report.iterations = it;
    const double change = variable_change(params, current, next);
    current = std::move(next);
    if (change <= config.outer_tolerance) {
      report.converged = true;
      break;
    }
  }

  report.relaxed = current;
  report.allocation = current;
  for (DeviceAllocation& d : report.allocation.devices) {
    d.resolution_px = sp1::round_resolution(params, d.resolution_px);
  }
  report.feasible = !rate_infeasible;
  finish_report(params, topology, report);
  report.wall_time_s = seconds_since(t0);
  return report;
}

SolveReport allocate(const SystemParams& params, const PairedTopology& topology,
                     const SolveConfig& config) {
  const auto t0 = Clock::now();
  SolveReport best = allocate_from(params, topology, config,
                                   initial_allocation(params, topology));
  if (config.multi_start > 0) {
    std::mt19937_64 rng = make_rng(config.rng_seed, RngStream::MultiStart);
    std::uniform_real_distribution<double> power(params.p_min_w, params.p_max_w);
    for (int r = 0; r < config.multi_start; ++r) {
      Allocation start = initial_allocation(params, topology);
      for (DeviceAllocation& d : start.devices) d.power_w = power(rng);
      SolveReport cand = allocate_from(params, topology, config, start);
      if (cand.objective_trace.back() < best.objective_trace.back()) best = std::move(cand);
    }
  }
  best.wall_time_s = seconds_since(t0);
  return best;
}

SolveReport allocate_best_pairing(const SystemParams& params,
                                  const std::vector<LinkedDevice>& devices,
                                  const SolveConfig& config) {
  config.validate();
  if (devices.size() != 2 * static_cast<std::size_t>(params.channel_count)) {
    throw InvalidArgument("device count must be twice the channel count");
  }
  const auto t0 = Clock::now();
  std::optional<SolveReport> best;
  std::vector<std::pair<PairingScheme, double>> tried;
  for (PairingScheme scheme : config.schemes) {
    std::mt19937_64 rng = make_rng(config.rng_seed, RngStream::Pairing);
    const PairedTopology topo =
        pair_users(devices, scheme, params.subchannel_bandwidth_hz(), rng);
    SolveReport r = allocate(params, topo, config);
    r.scheme = scheme;
    tried.emplace_back(scheme, r.costs.objective);
    if (!best || r.costs.objective < best->costs.objective) best = std::move(r);
  }
  best->scheme_objectives = std::move(tried);
  best->wall_time_s = seconds_since(t0);
  return std::move(*best);
}

}  // namespace nomafl
