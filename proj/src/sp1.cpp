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

#include "nomafl/sp1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nomafl::sp1 {

namespace {

// 2^(-2/3) + 2^(1/3): min over f of (a f^2 + lambda / f) is this times
// a^(1/3) lambda^(2/3).
const double kShapeConstant = std::pow(2.0, -2.0 / 3.0) + std::cbrt(2.0);

constexpr double kLambdaFloor = 1e-30;

// Cycles per squared pixel for one round: eta xi c D.
double cycle_weight(const SystemParams& params, const Device& d) {
  return params.local_iterations * params.std_sample_scale() *
         d.cycles_per_std_sample * d.sample_count;
}

std::vector<double> upload_times(const SystemParams& params,
                                 const PairedTopology& topology,
                                 std::span<const double> powers) {
  std::vector<double> t(topology.device_count());
  for (std::size_t k = 0; k < topology.channels.size(); ++k) {
    const ChannelPair& pair = topology.channels[k];
    const std::array<double, 2> p{powers[2 * k], powers[2 * k + 1]};
    for (int i = 0; i < 2; ++i) {
      const double r = uplink_rate(pair, p, i, params.noise_psd_w_per_hz);
      t[2 * k + i] = transmission_cost(pair.members[i].device, r, p[i]).time_s;
    }
  }
  return t;
}

// Per-device minimizer of the Lagrangian over the (f, s) box as a function of
// the multiplier, and the round time it induces.
class BoxedResponse {
 public:
  BoxedResponse(const SystemParams& params, const Device& device,
                double t_trans)
      : params_(params), device_(device), t_trans_(t_trans),
        weight_(cycle_weight(params, device)) {}

  double round_time(double lambda) const {
    const double f = clamp_frequency(params_, recover_primal(lambda, params_, device_).cpu_hz);
    const double s = resolution(lambda);
    return t_trans_ + weight_ * s * s / f;
  }

  double resolution(double lambda) const {
    return clamp_resolution(params_, recover_primal(lambda, params_, device_).resolution_px);
  }

  // Multiplier at which the round time crosses mu, capped to [0, cap].
  double multiplier_for(double mu, double cap, double curvature) const {
    if (round_time(0.0) <= mu) return 0.0;
    if (round_time(cap) >= mu) return cap;
    // Interior closed form when neither box binds there.
    if (curvature > 0.0 && mu > t_trans_) {
      const double lam = std::pow(2.0 * curvature / 3.0 / (mu - t_trans_), 0.6);
      if (lam > 0.0 && lam < cap && interior(lam)) return lam;
    }
    double lo = 0.0, hi = cap;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (round_time(mid) >= mu) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  bool interior(double lambda) const {
    const PrimalPoint pp = recover_primal(lambda, params_, device_);
    return pp.cpu_hz >= params_.f_min_hz && pp.cpu_hz <= params_.f_max_hz &&
           pp.resolution_px >= params_.s_min() &&
           pp.resolution_px <= params_.s_max();
  }

  const SystemParams& params_;
  const Device& device_;
  double t_trans_;
  double weight_;
};

}  // namespace

double accuracy_slope(const SystemParams& params) {
  const double s1 = params.s_min(), s3 = params.s_max();
  return (accuracy_of(s3) - accuracy_of(s1)) / (s3 - s1);
}

double linear_accuracy(const SystemParams& params, double s_hat) {
  return accuracy_slope(params) * (s_hat - params.s_min()) +
         accuracy_of(params.s_min());
}

DualCoefficients dual_coefficients(const SystemParams& params,
                                   const Device& device, double t_trans_s) {
  const double alpha = params.weights.energy;
  const double gamma = params.weights.accuracy;
  const double k = accuracy_slope(params);
  const double h = cycle_weight(params, device) *
                   std::cbrt(alpha * params.switched_capacitance);
  DualCoefficients c;
  c.curvature = gamma * gamma * k * k / (4.0 * h * kShapeConstant);
  c.linear = t_trans_s;
  c.constant = gamma * k * params.s_min() - gamma * accuracy_of(params.s_min());
  return c;
}

double dual_objective(std::span<const DualCoefficients> coeffs,
                      std::span<const double> lambda) {
  double v = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const DualCoefficients& c = coeffs[i];
    const double barrier =
        c.curvature > 0.0 ? c.curvature * std::pow(lambda[i], -2.0 / 3.0) : 0.0;
    v += -barrier + c.linear * lambda[i] + c.constant;
  }
  return v;
}

std::vector<double> dual_gradient(std::span<const DualCoefficients> coeffs,
                                  std::span<const double> lambda) {
  std::vector<double> g(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const DualCoefficients& c = coeffs[i];
    g[i] = 2.0 / 3.0 * c.curvature * std::pow(lambda[i], -5.0 / 3.0) + c.linear;
  }
  return g;
}

std::vector<double> solve_dual(std::span<const DualCoefficients> coeffs,
                               double beta) {
  const std::size_t n = coeffs.size();
  if (n == 0) throw InvalidArgument("dual needs at least one device");
  if (!(beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
  std::vector<double> lambda(n, 0.0);
  if (beta == 0.0) return lambda;

  double t_max = -std::numeric_limits<double>::infinity();
  for (const auto& c : coeffs) t_max = std::max(t_max, c.linear);
  bool curved_at_max = false;
  for (const auto& c : coeffs) {
    if (c.linear == t_max && c.curvature > 0.0) curved_at_max = true;
  }

  // Response of curved devices at mu = t_max + delta.
  auto fill = [&](double delta) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const DualCoefficients& c = coeffs[i];
      const double gap = t_max + delta - c.linear;
      lambda[i] = (c.curvature > 0.0 && gap > 0.0)
                      ? std::pow(2.0 * c.curvature / 3.0 / gap, 0.6)
                      : 0.0;
      sum += lambda[i];
    }
    return sum;
  };

  if (!curved_at_max) {
    // Flat devices at the top absorb whatever the curved ones leave at mu = t_max.
    const double curved_sum = fill(0.0);
    if (curved_sum <= beta) {
      std::size_t ties = 0;
      for (const auto& c : coeffs) ties += (c.linear == t_max && c.curvature == 0.0);
      const double share = (beta - curved_sum) / static_cast<double>(ties);
      for (std::size_t i = 0; i < n; ++i) {
        if (coeffs[i].linear == t_max && coeffs[i].curvature == 0.0) lambda[i] = share;
      }
      return lambda;
    }
  }

  // Bracket delta geometrically: sum(lo) >= beta >= sum(hi).
  double max_curv = 0.0;
  for (const auto& c : coeffs) max_curv = std::max(max_curv, c.curvature);
  double hi = 2.0 / 3.0 * max_curv * std::pow(static_cast<double>(n) / beta, 5.0 / 3.0);
  hi = std::max(hi, std::numeric_limits<double>::min());
  while (fill(hi) > beta) hi *= 2.0;
  double lo = hi;
  while (lo > std::numeric_limits<double>::min() && fill(lo) < beta) lo *= 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    const double s = fill(mid);
    if (std::abs(s - beta) <= 1e-15 * beta) { lo = hi = mid; break; }
    if (s > beta) lo = mid; else hi = mid;
  }
  const double sum = fill(std::sqrt(lo * hi));
  for (double& l : lambda) l *= beta / sum;
  return lambda;
}

PrimalPoint recover_primal(double lambda, const SystemParams& params,
                           const Device& device) {
  const double ak = params.weights.energy * params.switched_capacitance;
  if (!(ak > 0.0)) throw InvalidArgument("frequency recovery requires alpha > 0");
  PrimalPoint pp;
  pp.cpu_hz = lambda > 0.0 ? std::cbrt(std::max(lambda, kLambdaFloor) / (2.0 * ak)) : 0.0;
  const double f = clamp_frequency(params, pp.cpu_hz);
  const double gamma = params.weights.accuracy;
  pp.resolution_px = gamma * accuracy_slope(params) /
                     (2.0 * cycle_weight(params, device) * (ak * f * f + lambda / f));
  return pp;
}

double clamp_frequency(const SystemParams& params, double f_raw) {
  return std::min(params.f_max_hz, std::max(f_raw, params.f_min_hz));
}

double clamp_resolution(const SystemParams& params, double s_raw) {
  return std::clamp(s_raw, params.s_min(), params.s_max());
}

double round_resolution(const SystemParams& params, double s_hat) {
  const auto& s = params.resolution_set_px;
  if (s_hat > 0.5 * (s[1] + s[2])) return s[2];
  if (s_hat >= 0.5 * (s[0] + s[1])) return s[1];
  return s[0];
}

double deadline_of(const SystemParams& params, const PairedTopology& topology,
                   const Allocation& allocation) {
  return evaluate(params, topology, allocation).total_time_s;
}

double relaxed_objective(const SystemParams& params,
                         const PairedTopology& topology,
                         const Allocation& allocation) {
  const CostBreakdown cb = evaluate(params, topology, allocation);
  double acc = 0.0;
  for (const DeviceAllocation& a : allocation.devices) {
    acc += linear_accuracy(params, a.resolution_px);
  }
  return cb.weighted_cost(params.weights) - params.weights.accuracy * acc;
}

std::vector<double> solve_boxed_dual(const SystemParams& params,
                                     const PairedTopology& topology,
                                     std::span<const double> t_trans_s) {
  const std::size_t n = topology.device_count();
  const double beta = params.weights.time;
  std::vector<double> lambda(n, 0.0);
  if (beta == 0.0) return lambda;

  std::vector<BoxedResponse> resp;
  std::vector<double> curvature(n);
  resp.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Device& d = topology.member(j).device;
    resp.emplace_back(params, d, t_trans_s[j]);
    curvature[j] = dual_coefficients(params, d, t_trans_s[j]).curvature;
  }

  auto fill = [&](double mu, std::vector<double>& out) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = resp[j].multiplier_for(mu, beta, curvature[j]);
      sum += out[j];
    }
    return sum;
  };

  // Round times are non-increasing in the multiplier, so the total response
  // is non-increasing in mu.
  double mu_lo = 0.0, mu_hi = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mu_lo = std::max(mu_lo, resp[j].round_time(beta));
    mu_hi = std::max(mu_hi, resp[j].round_time(0.0));
  }
  std::vector<double> at_lo(n), at_hi(n);
  double sum_lo = fill(mu_lo, at_lo);
  double sum_hi = fill(mu_hi, at_hi);
  for (int it = 0; it < 200 && mu_hi - mu_lo > 1e-15 * mu_hi; ++it) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    if (mid <= mu_lo || mid >= mu_hi) break;
    std::vector<double> trial(n);
    const double s = fill(mid, trial);
    if (s >= beta) { mu_lo = mid; at_lo.swap(trial); sum_lo = s; }
    else { mu_hi = mid; at_hi.swap(trial); sum_hi = s; }
  }
  // Devices whose response jumps inside the final bracket share the rest.
  const double theta =
      sum_lo > sum_hi ? std::clamp((beta - sum_hi) / (sum_lo - sum_hi), 0.0, 1.0) : 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    lambda[j] = at_hi[j] + theta * (at_lo[j] - at_hi[j]);
  }
  return lambda;
}

Sp1Solution solve_sp1(const SystemParams& params,
                      const PairedTopology& topology,
                      std::span<const double> powers) {
  const std::size_t n = topology.device_count();
  if (powers.size() != n) throw InvalidArgument("power vector size mismatch");
  const std::vector<double> t_trans = upload_times(params, topology, powers);

  std::vector<DualCoefficients> coeffs(n);
  for (std::size_t j = 0; j < n; ++j) {
    coeffs[j] = dual_coefficients(params, topology.member(j).device, t_trans[j]);
  }

  Sp1Solution sol;
  sol.lambda = solve_dual(coeffs, params.weights.time);
  for (std::size_t j = 0; j < n && !sol.box_active; ++j) {
    const PrimalPoint pp = recover_primal(sol.lambda[j], params, topology.member(j).device);
    sol.box_active = pp.cpu_hz < params.f_min_hz || pp.cpu_hz > params.f_max_hz ||
                     pp.resolution_px < params.s_min() ||
                     pp.resolution_px > params.s_max();
  }
  if (sol.box_active) sol.lambda = solve_boxed_dual(params, topology, t_trans);

  Allocation alloc;
  alloc.devices.resize(n);
  sol.cpu_hz.resize(n);
  sol.resolution_continuous.resize(n);
  sol.resolution_rounded.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const PrimalPoint pp = recover_primal(sol.lambda[j], params, topology.member(j).device);
    sol.cpu_hz[j] = clamp_frequency(params, pp.cpu_hz);
    sol.resolution_continuous[j] = clamp_resolution(params, pp.resolution_px);
    sol.resolution_rounded[j] = round_resolution(params, sol.resolution_continuous[j]);
    alloc.devices[j] = {powers[j], sol.cpu_hz[j], sol.resolution_continuous[j]};
  }
  sol.deadline_s = deadline_of(params, topology, alloc);
  return sol;
}

}  // namespace nomafl::sp1
