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

#include "nomafl/sp2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nomafl::sp2 {

namespace {

using std::numbers::ln2;

// Power that meets the minimum rate with equality: (2^(r/B) - 1) Lambda.
double rate_power(const RatioChannel& ch) {
  return std::expm1(ch.min_rate_bps / ch.bandwidth_hz * ln2) * ch.floor;
}

struct Iterate {
  std::vector<double> nu, Gamma, power, rate;
  std::vector<bool> infeasible;
  double norm = 0.0;
  double max_abs = 0.0;
};

Iterate evaluate_at(const RatioProblem& prob, std::vector<double> nu,
                    std::vector<double> Gamma) {
  const std::size_t K = prob.channels.size();
  Iterate it;
  it.nu = std::move(nu);
  it.Gamma = std::move(Gamma);
  it.power.resize(K);
  it.rate.resize(K);
  it.infeasible.resize(K);
  double sq = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const RatioChannel& ch = prob.channels[k];
    const PowerUpdate pu =
        power_update(ch, it.nu[k], it.Gamma[k], prob.p_min_w, prob.p_max_w);
    it.power[k] = pu.power_w;
    it.infeasible[k] = pu.rate_infeasible;
    const Residual r = residual(ch, pu.power_w, it.nu[k], it.Gamma[k], prob.alpha);
    it.rate[k] = r.jacobian;
    sq += r.phi1 * r.phi1 + r.phi2 * r.phi2;
    it.max_abs = std::max({it.max_abs, std::abs(r.phi1), std::abs(r.phi2)});
  }
  it.norm = std::sqrt(sq);
  return it;
}

}  // namespace

double min_rate(double upload_bits, double deadline_s, double t_cmp_s) {
  if (!(deadline_s > t_cmp_s)) {
    throw DeadlineInfeasible("deadline " + std::to_string(deadline_s) +
                             " s leaves no upload time after " +
                             std::to_string(t_cmp_s) + " s of computation");
  }
  return upload_bits / (deadline_s - t_cmp_s);
}

double stage_rate(const RatioChannel& ch, double power_w) {
  return ch.bandwidth_hz * std::log1p(power_w / ch.floor) / ln2;
}

PowerUpdate power_update(const RatioChannel& ch, double nu, double Gamma,
                         double p_min_w, double p_max_w) {
  const double B = ch.bandwidth_hz;
  const double d = ch.upload_bits;
  PowerUpdate out;
  out.mu = std::max(0.0, std::exp2(ch.min_rate_bps / B) * ch.floor * ln2 * nu * d / B -
                             nu * Gamma);
  const double required = rate_power(ch);
  if (out.mu > 0.0) {
    out.unclamped_w = required;
  } else {
    // Stationary point of nu (p d - Gamma B log2(1 + p / Lambda)).
    out.unclamped_w = Gamma * B / (d * ln2) - ch.floor;
  }
  out.rate_infeasible = required > p_max_w * (1.0 + 1e-12);
  out.power_w = std::clamp(out.unclamped_w, p_min_w, p_max_w);
  return out;
}

Residual residual(const RatioChannel& ch, double power_w, double nu,
                  double Gamma, double alpha) {
  const double r = stage_rate(ch, power_w);
  return {-power_w * ch.upload_bits + Gamma * r, -alpha + nu * r, r};
}

double initial_power(const RatioChannel& ch, double p_min_w, double p_max_w) {
  const double lo = std::max(p_min_w, rate_power(ch));
  if (lo >= p_max_w) return p_max_w;
  return 0.5 * (lo + p_max_w);
}

StageResult solve_ratio_stage(const RatioProblem& problem,
                              const NewtonOptions& opt) {
  const std::size_t K = problem.channels.size();
  if (!(problem.p_min_w >= 0.0 && problem.p_max_w >= problem.p_min_w &&
        problem.p_max_w > 0.0)) {
    throw InvalidArgument("stage power bounds are invalid");
  }
  std::vector<double> nu(K), Gamma(K);
  for (std::size_t k = 0; k < K; ++k) {
    const RatioChannel& ch = problem.channels[k];
    if (!(ch.floor > 0.0) || !(ch.bandwidth_hz > 0.0) || !(ch.upload_bits > 0.0) ||
        !(ch.min_rate_bps >= 0.0) || !std::isfinite(ch.min_rate_bps)) {
      throw InvalidArgument("stage channel " + std::to_string(k) + " is malformed");
    }
    const double p0 = initial_power(ch, problem.p_min_w, problem.p_max_w);
    const double r0 = stage_rate(ch, p0);
    if (!(r0 > 0.0)) {
      throw InvalidArgument("stage channel " + std::to_string(k) +
                            " starts at zero rate; raise p_min or the min rate");
    }
    nu[k] = problem.alpha / r0;
    Gamma[k] = p0 * ch.upload_bits / r0;
  }

  StageResult res;
  Iterate cur = evaluate_at(problem, nu, Gamma);
  res.residual_norms.push_back(cur.norm);
  int j = 0;
  for (; j < opt.max_iterations; ++j) {
    if (cur.max_abs <= opt.tolerance) {
      res.converged = true;
      break;
    }
    // Newton directions: the Jacobians are diag(r), so sigma = -phi / r,
    // i.e. the gap to the fixed-point targets p d / r and alpha / r.
    std::vector<double> s1(K), s2(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double target_Gamma = cur.power[k] * problem.channels[k].upload_bits / cur.rate[k];
      const double target_nu = problem.alpha / cur.rate[k];
      s1[k] = target_Gamma - cur.Gamma[k];
      s2[k] = target_nu - cur.nu[k];
    }
    bool accepted = false;
    double step = 1.0;
    for (int i = 0; i <= opt.max_backtracks; ++i, step *= opt.step_shrink) {
      std::vector<double> tn(K), tg(K);
      for (std::size_t k = 0; k < K; ++k) {
        tg[k] = cur.Gamma[k] + step * s1[k];
        tn[k] = cur.nu[k] + step * s2[k];
      }
      Iterate trial = evaluate_at(problem, std::move(tn), std::move(tg));
      if (trial.norm <= (1.0 - opt.sufficient_decrease * step) * cur.norm) {
        cur = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    res.residual_norms.push_back(cur.norm);
  }
  if (!res.converged && cur.max_abs <= opt.tolerance) res.converged = true;
  res.iterations = j;
  res.max_abs_residual = cur.max_abs;
  res.channels.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    res.channels[k] = {cur.power[k], cur.nu[k], cur.Gamma[k], cur.rate[k],
                       static_cast<bool>(cur.infeasible[k])};
  }
  return res;
}

RatioProblem build_stage(const SystemParams& params,
                         const PairedTopology& topology,
                         const Allocation& allocation, double deadline_s,
                         Stage stage, std::span<const double> first_stage_powers) {
  RatioProblem prob;
  prob.stage = stage;
  prob.p_min_w = params.p_min_w;
  prob.p_max_w = params.p_max_w;
  prob.alpha = params.weights.energy;
  const int i = stage == Stage::First ? 0 : 1;
  for (std::size_t k = 0; k < topology.channels.size(); ++k) {
    const ChannelPair& pair = topology.channels[k];
    const LinkedDevice& m = pair.members[i];
    const DeviceAllocation& a = allocation.at(k, i);
    const double t_cmp =
        computation_cost(params, m.device, a.resolution_px, a.cpu_hz).time_s;
    double noise = pair.bandwidth_hz * params.noise_psd_w_per_hz;
    if (stage == Stage::Second) noise += first_stage_powers[k] * pair.members[0].gain;
    RatioChannel ch;
    ch.upload_bits = m.device.upload_bits;
    ch.floor = noise / m.gain;
    ch.min_rate_bps = min_rate(m.device.upload_bits, deadline_s, t_cmp);
    ch.bandwidth_hz = pair.bandwidth_hz;
    prob.channels.push_back(ch);
  }
  return prob;
}

Sp2Result solve_sp2(const SystemParams& params, const PairedTopology& topology,
                    const Allocation& allocation, double deadline_s,
                    const NewtonOptions& options) {
  const std::size_t K = topology.channels.size();
  Sp2Result out;
  out.powers.assign(2 * K, 0.0);

  const RatioProblem first =
      build_stage(params, topology, allocation, deadline_s, Stage::First, {});
  out.first = solve_ratio_stage(first, options);
  std::vector<double> p1(K);
  for (std::size_t k = 0; k < K; ++k) p1[k] = out.first.channels[k].power_w;

  const RatioProblem second =
      build_stage(params, topology, allocation, deadline_s, Stage::Second, p1);
  out.second = solve_ratio_stage(second, options);

  out.converged = out.first.converged && out.second.converged;
  for (std::size_t k = 0; k < K; ++k) {
    out.powers[2 * k] = out.first.channels[k].power_w;
    out.powers[2 * k + 1] = out.second.channels[k].power_w;
    out.rate_infeasible = out.rate_infeasible || out.first.channels[k].rate_infeasible ||
                          out.second.channels[k].rate_infeasible;
  }
  return out;
}

}  // namespace nomafl::sp2
