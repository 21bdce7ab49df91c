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

// Frequency / resolution / deadline block.
//
// With powers fixed, the upload times T_trans are constants and the block
// minimizes
//
//   alpha sum E_cmp(f, s) + beta T - gamma sum Ahat(s)
//   s.t. T_trans + T_cmp(f, s) <= T,  f in [f_min, f_max],  s in [s1, s3]
//
// where Ahat is the chord of the accuracy curve between s1 and s3. Dualizing
// the deadline rows with multipliers lambda (which must sum to beta) makes
// every device separable: for a given lambda the best f and s are closed
// forms, and the dual reduces to
//
//   max sum_i -C_i lambda_i^(-2/3) + T_trans_i lambda_i   s.t. sum lambda = beta
//
// which is a water-filling problem in a single scalar multiplier.

#pragma once

#include <span>
#include <vector>

#include "nomafl/model.hpp"

namespace nomafl::sp1 {

// Slope of the chord through (s1, A(s1)) and (s3, A(s3)).
double accuracy_slope(const SystemParams& params);
double linear_accuracy(const SystemParams& params, double s_hat);

struct DualCoefficients {
  double curvature = 0.0;  // C = gamma^2 k^2 / (4 h (2^-2/3 + 2^1/3))
  double linear = 0.0;     // upload time at the current powers
  double constant = 0.0;   // gamma k s1 - gamma A(s1)
};

DualCoefficients dual_coefficients(const SystemParams& params,
                                   const Device& device, double t_trans_s);

double dual_objective(std::span<const DualCoefficients> coeffs,
                      std::span<const double> lambda);
std::vector<double> dual_gradient(std::span<const DualCoefficients> coeffs,
                                  std::span<const double> lambda);

// Maximizes the dual over {sum lambda = beta, lambda >= 0} by bisection on
// the equality multiplier mu, using lambda_i(mu) = (2 C_i / 3 / (mu - T_i))^(3/5).
// Devices with C = 0 only take mass at mu = max T; when every C is zero the
// whole budget goes to the slowest uploads, split equally on ties.
std::vector<double> solve_dual(std::span<const DualCoefficients> coeffs,
                               double beta);

struct PrimalPoint {
  double cpu_hz = 0.0;         // unclamped cube-root solution
  double resolution_px = 0.0;  // computed with the clamped frequency
};

// Stationary point of the per-device Lagrangian for multiplier `lambda`.
// f is evaluated first; s uses clamp_frequency(f), so lambda = 0 yields
// f = 0 and s evaluated at f_min. Requires alpha > 0.
PrimalPoint recover_primal(double lambda, const SystemParams& params,
                           const Device& device);

double clamp_frequency(const SystemParams& params, double f_raw);
double clamp_resolution(const SystemParams& params, double s_raw);
// Maps a continuous resolution onto the discrete set with cut points
// (s1+s2)/2 and (s2+s3)/2; both cut points belong to the middle level.
double round_resolution(const SystemParams& params, double s_hat);

// Tight deadline: max over devices of T_trans + T_cmp.
double deadline_of(const SystemParams& params, const PairedTopology& topology,
                   const Allocation& allocation);

// Objective of the relaxed problem (continuous s, linearized accuracy) with
// T taken as the tight deadline.
double relaxed_objective(const SystemParams& params,
                         const PairedTopology& topology,
                         const Allocation& allocation);

// Water-filling with the frequency and resolution boxes folded into each
// device's response to its multiplier. Equals solve_dual whenever no box
// constraint is active at the optimum.
std::vector<double> solve_boxed_dual(const SystemParams& params,
                                     const PairedTopology& topology,
                                     std::span<const double> t_trans_s);

struct Sp1Solution {
  std::vector<double> lambda;
  std::vector<double> cpu_hz;
  std::vector<double> resolution_continuous;
  std::vector<double> resolution_rounded;
  double deadline_s = 0.0;
  bool box_active = false;  // the boxed water-filling was needed
};

// Solves the block for fixed powers (channel-major, as Allocation).
Sp1Solution solve_sp1(const SystemParams& params,
                      const PairedTopology& topology,
                      std::span<const double> powers);

}  // namespace nomafl::sp1
