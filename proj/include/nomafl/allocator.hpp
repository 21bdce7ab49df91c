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

// Alternating resource allocation and the two reference baselines.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nomafl/model.hpp"
#include "nomafl/pairing.hpp"
#include "nomafl/sp2.hpp"

namespace nomafl {

struct SolveConfig {
  // Max-norm of the change in (p, f, s), each coordinate divided by the
  // width of its box.
  double outer_tolerance = 1e-4;
  int max_outer_iterations = 50;
  std::vector<PairingScheme> schemes{kAllPairingSchemes[0], kAllPairingSchemes[1],
                                     kAllPairingSchemes[2]};
  std::uint64_t rng_seed = 1;
  // Extra runs from random starting powers; the best run is kept.
  int multi_start = 0;
  sp2::NewtonOptions newton;

  void validate() const;
};

struct SolveReport {
  std::string algorithm;  // "proposed", "random" or "greedy"
  PairedTopology topology;
  Allocation allocation;  // discrete resolutions
  CostBreakdown costs;    // evaluated on `allocation`
  Allocation relaxed;     // continuous resolutions before rounding
  std::optional<PairingScheme> scheme;
  // Relaxed objective at the start and after every outer iteration.
  std::vector<double> objective_trace;
  // Objective of every pairing scheme tried, in the order tried.
  std::vector<std::pair<PairingScheme, double>> scheme_objectives;
  int iterations = 0;
  bool converged = false;
  bool feasible = true;
  double wall_time_s = 0.0;
};

// Box midpoints for f and p, s = s2.
Allocation initial_allocation(const SystemParams& params,
                              const PairedTopology& topology);

SolveReport allocate(const SystemParams& params, const PairedTopology& topology,
                     const SolveConfig& config = {});

// Same as allocate, starting from the powers of `start`.
SolveReport allocate_from(const SystemParams& params,
                          const PairedTopology& topology,
                          const SolveConfig& config, const Allocation& start);

// Runs allocate under every configured pairing scheme and keeps the lowest
// objective; ties go to the first scheme tried.
SolveReport allocate_best_pairing(const SystemParams& params,
                                  const std::vector<LinkedDevice>& devices,
                                  const SolveConfig& config = {});

// Uniform random power and frequency, s = s1.
SolveReport random_baseline(const SystemParams& params,
                            const PairedTopology& topology, std::uint64_t seed);

// Per-channel exhaustive search over an 11-point grid of each member's power
// and frequency at s = s1, minimizing alpha E_k + beta T_k.
SolveReport greedy_baseline(const SystemParams& params,
                            const PairedTopology& topology);

// Grid value i of 0..10 on [lo, hi].
inline double grid_point(double lo, double hi, int i) {
  return lo + 0.1 * i * (hi - lo);
}

}  // namespace nomafl
