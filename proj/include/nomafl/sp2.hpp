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

// Power block: transmission energy as a sum of ratios.
//
// With (f, s, T) fixed, each stage minimizes alpha sum_k p_k d_k / r_k(p_k)
// subject to a per-channel minimum rate. The first stage sets the weaker
// member of every channel (no interference), the second stage the stronger
// member, whose interference floor depends on the first stage's powers.
//
// A stage is solved in parametric form: for multipliers (nu_k, Gamma_k) the
// subtractive problem min nu_k (p d - Gamma_k r(p)) has a closed-form
// minimizer, and the optimal parameters are the root of
//
//   phi1_k = -p_k d_k + Gamma_k r_k,   phi2_k = -alpha + nu_k r_k
//
// found by a damped Newton iteration with a backtracking test on |phi|.

#pragma once

#include <span>
#include <vector>

#include "nomafl/model.hpp"

namespace nomafl::sp2 {

enum class Stage { First, Second };

struct RatioChannel {
  double upload_bits = 0.0;  // d
  double floor = 0.0;        // Lambda: (noise + interference) / own gain, in W
  double min_rate_bps = 0.0;
  double bandwidth_hz = 0.0;
};

struct RatioProblem {
  Stage stage = Stage::First;
  std::vector<RatioChannel> channels;
  double p_min_w = 0.0;
  double p_max_w = 0.0;
  double alpha = 0.5;
};

struct NewtonOptions {
  double step_shrink = 0.5;       // zeta
  double sufficient_decrease = 0.01;  // epsilon
  int max_iterations = 200;       // J
  int max_backtracks = 60;
  double tolerance = 1e-9;        // on max |phi|
};

// d / (T - t_cmp). Throws DeadlineInfeasible when T <= t_cmp.
double min_rate(double upload_bits, double deadline_s, double t_cmp_s);

// Stage rate B log2(1 + p / Lambda).
double stage_rate(const RatioChannel& ch, double power_w);

struct PowerUpdate {
  double power_w = 0.0;      // clamped to [p_min, p_max]
  double unclamped_w = 0.0;  // closed form before the box
  double mu = 0.0;           // multiplier of the rate constraint
  bool rate_infeasible = false;  // rate power above p_max
};

// Minimizer of nu (p d - Gamma r(p)) subject to r(p) >= r_min and the box.
PowerUpdate power_update(const RatioChannel& ch, double nu, double Gamma,
                         double p_min_w, double p_max_w);

struct Residual {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double jacobian = 0.0;  // d phi1 / d Gamma = d phi2 / d nu = r
};

Residual residual(const RatioChannel& ch, double power_w, double nu,
                  double Gamma, double alpha);

struct ChannelState {
  double power_w = 0.0;
  double nu = 0.0;
  double Gamma = 0.0;
  double rate_bps = 0.0;
  bool rate_infeasible = false;
};

struct StageResult {
  std::vector<ChannelState> channels;
  int iterations = 0;
  bool converged = false;
  // |phi| (Euclidean, all channels stacked) at the start and after every
  // accepted step.
  std::vector<double> residual_norms;
  double max_abs_residual = 0.0;
};

// Starting point of one channel: midpoint of [max(p_min, rate power), p_max],
// or p_max when the rate power does not fit.
double initial_power(const RatioChannel& ch, double p_min_w, double p_max_w);

StageResult solve_ratio_stage(const RatioProblem& problem,
                              const NewtonOptions& options = {});

struct Sp2Result {
  std::vector<double> powers;  // channel-major, as Allocation
  StageResult first;
  StageResult second;
  bool rate_infeasible = false;
  bool converged = false;
};

// Builds and solves both stages for the given frequencies, continuous
// resolutions and deadline. Only cpu_hz and resolution_px of `allocation`
// are read.
Sp2Result solve_sp2(const SystemParams& params, const PairedTopology& topology,
                    const Allocation& allocation, double deadline_s,
                    const NewtonOptions& options = {});

// Stage problem for the given stage; `first_stage_powers` (one per channel)
// is only read for Stage::Second.
RatioProblem build_stage(const SystemParams& params,
                         const PairedTopology& topology,
                         const Allocation& allocation, double deadline_s,
                         Stage stage, std::span<const double> first_stage_powers);

}  // namespace nomafl::sp2
