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
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include "nomafl/bench.hpp"

namespace nomafl::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string resolutions_by_id(const SolveReport& r) {
  std::vector<std::pair<int, double>> by_id;
  for (std::size_t j = 0; j < r.topology.device_count(); ++j) {
    by_id.emplace_back(r.topology.member(j).device.id,
                       r.allocation.devices[j].resolution_px);
  }
  std::sort(by_id.begin(), by_id.end());
  std::string out;
  for (const auto& [id, s] : by_id) {
    if (!out.empty()) out += ';';
    out += format_number(s);
  }
  return out;
}

SolveReport run_baseline(Algorithm alg, const SystemParams& params,
                         const std::vector<LinkedDevice>& devices,
                         const PairingChoice& choice, std::uint64_t seed) {
  std::vector<PairingScheme> schemes;
  if (choice.best) {
    schemes.assign(std::begin(kAllPairingSchemes), std::end(kAllPairingSchemes));
  } else {
    schemes.push_back(choice.scheme);
  }
  std::optional<SolveReport> best;
  for (PairingScheme scheme : schemes) {
    std::mt19937_64 rng = make_rng(seed, RngStream::Pairing);
    const PairedTopology topo =
        pair_users(devices, scheme, params.subchannel_bandwidth_hz(), rng);
    SolveReport r = alg == Algorithm::Random ? random_baseline(params, topo, seed)
                                             : greedy_baseline(params, topo);
    r.scheme = scheme;
    if (!best || r.costs.objective < best->costs.objective) best = std::move(r);
  }
  return std::move(*best);
}

SolveReport run_one(Algorithm alg, const ExperimentSpec& spec,
                    const SystemParams& params,
                    const std::vector<LinkedDevice>& devices, std::uint64_t seed) {
  if (alg != Algorithm::Proposed) {
    return run_baseline(alg, params, devices,
                        spec.baseline_pairing.value_or(spec.pairing), seed);
  }
  SolveConfig cfg = spec.solve;
  cfg.rng_seed = seed;
  if (spec.pairing.best) {
    return allocate_best_pairing(params, devices, cfg);
  }
  std::mt19937_64 rng = make_rng(seed, RngStream::Pairing);
  const PairedTopology topo =
      pair_users(devices, spec.pairing.scheme, params.subchannel_bandwidth_hz(), rng);
  SolveReport r = allocate(params, topo, cfg);
  r.scheme = spec.pairing.scheme;
  return r;
}

struct Task {
  double sweep_value;
  Weights weights;
  std::uint64_t seed;
  Algorithm algorithm;
};

ResultRow run_task(const ExperimentSpec& spec, const Task& t,
                   const std::vector<LinkedDevice>& devices) {
  const SystemParams params = params_at(spec, t.sweep_value, t.weights);
  ResultRow row;
  row.seed = t.seed;
  row.sweep_variable = std::string(to_string(spec.sweep));
  row.sweep_value = spec.sweep == SweepVariable::None ? 0.0 : t.sweep_value;
  row.algorithm = std::string(to_string(t.algorithm));
  row.alpha = params.weights.energy;
  row.beta = params.weights.time;
  row.gamma = params.weights.accuracy;
  try {
    const SolveReport r = run_one(t.algorithm, spec, params, devices, t.seed);
    row.pairing = r.scheme ? std::string(to_string(*r.scheme)) : "";
    row.energy_j = r.costs.total_energy_j;
    row.time_s = r.costs.total_time_s;
    row.accuracy = r.costs.total_accuracy;
    row.cost = r.costs.weighted_cost(params.weights);
    row.objective = r.costs.objective;
    row.iterations = r.iterations;
    row.resolutions = resolutions_by_id(r);
    if (!r.feasible) row.status = "infeasible";
    else if (!r.converged) row.status = "not_converged";
    if (spec.record_wall_time) row.wall_time_s = r.wall_time_s;
    return row;
  } catch (const UnreachableDevice&) {
    row.status = "unreachable";
  } catch (const DeadlineInfeasible&) {
    row.status = "infeasible";
  } catch (const Error&) {
    row.status = "error";
  }
  row.energy_j = row.time_s = row.accuracy = row.cost = row.objective = kNaN;
  return row;
}

ResultRow summarize(const std::vector<const ResultRow*>& group) {
  ResultRow s = *group.front();
  s.seed.reset();
  s.resolutions.clear();
  s.iterations = 0;
  double e = 0, t = 0, a = 0, c = 0, o = 0, w = 0;
  int n = 0;
  bool all_ok = true;
  for (const ResultRow* r : group) {
    all_ok = all_ok && r->status == "ok";
    if (r->pairing != s.pairing) s.pairing.clear();
    s.iterations = std::max(s.iterations, r->iterations);
    if (!std::isfinite(r->objective)) continue;
    e += r->energy_j;
    t += r->time_s;
    a += r->accuracy;
    c += r->cost;
    o += r->objective;
    w += r->wall_time_s.value_or(0.0);
    ++n;
  }
  const double inv = n > 0 ? 1.0 / n : kNaN;
  s.energy_j = e * inv;
  s.time_s = t * inv;
  s.accuracy = a * inv;
  s.cost = c * inv;
  s.objective = o * inv;
  if (s.wall_time_s) s.wall_time_s = w * inv;
  s.status = all_ok ? "ok" : (n == 0 ? "error" : "partial");
  return s;
}

}  // namespace

std::size_t ResultTable::flagged_count() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return r.flagged(); }));
}

std::vector<LinkedDevice> devices_for(const ExperimentSpec& spec,
                                      std::uint64_t seed) {
  if (spec.fixed_devices) return *spec.fixed_devices;
  TopologyConfig cfg = spec.topology;
  cfg.rng_seed = seed;
  return generate_topology(cfg, spec.device_ranges);
}

ResultTable run_experiment(const ExperimentSpec& spec,
                           const std::function<void(const ResultRow&)>& on_row) {
  spec.validate();
  const std::vector<double> points =
      spec.sweep == SweepVariable::None ? std::vector<double>{0.0} : spec.sweep_values;
  const std::vector<Weights> triples =
      spec.weights.empty() ? std::vector<Weights>{spec.base.weights} : spec.weights;

  std::vector<std::vector<LinkedDevice>> devices;
  for (std::uint64_t seed : spec.seeds) devices.push_back(devices_for(spec, seed));

  std::vector<Task> tasks;
  std::vector<std::size_t> seed_index;
  for (double v : points) {
    for (const Weights& w : triples) {
      for (std::size_t si = 0; si < spec.seeds.size(); ++si) {
        for (Algorithm alg : spec.algorithms) {
          tasks.push_back({v, w, spec.seeds[si], alg});
          seed_index.push_back(si);
        }
      }
    }
  }

  ResultTable table;
  table.rows.resize(tasks.size());
  std::vector<bool> done(tasks.size(), false);
  std::size_t next_emit = 0;
  std::mutex mu;
  std::atomic<std::size_t> next_task{0};
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next_task.fetch_add(1);
      if (i >= tasks.size()) return;
      ResultRow row;
      try {
        row = run_task(spec, tasks[i], devices[seed_index[i]]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next_task = tasks.size();
        return;
      }
      std::lock_guard lock(mu);
      table.rows[i] = std::move(row);
      done[i] = true;
      while (next_emit < tasks.size() && done[next_emit]) {
        if (on_row && !failure) on_row(table.rows[next_emit]);
        ++next_emit;
      }
    }
  };

  unsigned n_threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, tasks.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // One summary per (sweep value, weights, algorithm), seeds averaged.
  const std::size_t A = spec.algorithms.size();
  const std::size_t S = spec.seeds.size();
  const std::size_t groups = points.size() * triples.size();
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t a = 0; a < A; ++a) {
      std::vector<const ResultRow*> members;
      for (std::size_t s = 0; s < S; ++s) members.push_back(&table.rows[(g * S + s) * A + a]);
      ResultRow summary = summarize(members);
      if (on_row) on_row(summary);
      table.rows.push_back(std::move(summary));
    }
  }
  return table;
}

}  // namespace nomafl::bench
