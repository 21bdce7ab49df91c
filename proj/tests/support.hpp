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

// Test-only generators and reference implementations. Nothing here calls
// into the solver beyond its data types, so the oracles stay independent.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "nomafl/model.hpp"
#include "nomafl/pairing.hpp"

namespace testing {

using namespace nomafl;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed * 0x9E3779B97F4A7C15ULL + 17) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

inline Device make_device(int id, double cycles = 2e4, double distance_km = 0.2) {
  Device d;
  d.id = id;
  d.distance_km = distance_km;
  d.cycles_per_std_sample = cycles;
  d.sample_count = 500;
  d.upload_bits = 28.1e3;
  return d;
}

inline ChannelPair make_pair(const SystemParams& p, int k, const Device& a, double ga,
                             const Device& b, double gb) {
  ChannelPair cp;
  cp.channel_index = k;
  cp.bandwidth_hz = p.subchannel_bandwidth_hz();
  cp.members = {LinkedDevice{a, ga}, LinkedDevice{b, gb}};
  if (gb < ga) std::swap(cp.members[0], cp.members[1]);
  return cp;
}

// Table I devices, paired by the given scheme.
inline PairedTopology default_topology(std::uint64_t seed, int channels = 25,
                                     PairingScheme scheme = PairingScheme::NearestUser) {
  TopologyConfig cfg;
  cfg.channel_count = channels;
  cfg.user_count = 2 * channels;
  cfg.rng_seed = seed;
  const auto devices = generate_topology(cfg, DeviceParamRanges{});
  SystemParams p = SystemParams::defaults();
  p.channel_count = channels;
  std::mt19937_64 rng = make_rng(seed, RngStream::Pairing);
  return pair_users(devices, scheme, p.subchannel_bandwidth_hz(), rng);
}

inline SystemParams default_params(int channels = 25, Weights w = {}) {
  SystemParams p = SystemParams::defaults();
  p.channel_count = channels;
  p.weights = w;
  return p;
}

namespace oracle {

constexpr double kLn2 = 0.69314718055994530942;

// Shannon rate with explicit noise and interference, in bit/s.
inline double rate(double bandwidth_hz, double noise_psd, double power, double gain,
                   double interference_w) {
  return bandwidth_hz * std::log2(1.0 + power * gain /
                                            (bandwidth_hz * noise_psd + interference_w));
}

inline double accuracy(double s) { return 1.0 - 1.578 * std::exp(-6.5e-3 * s); }

// Euclidean projection onto {x >= lo, sum x = total}.
inline std::vector<double> project_simplex(std::vector<double> v, double total, double lo) {
  const std::size_t n = v.size();
  for (double& x : v) x -= lo;
  const double z = total - lo * static_cast<double>(n);
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cumsum += u[i];
    const double t = (cumsum - z) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(x - theta, 0.0) + lo;
  return v;
}

// Projected gradient ascent on sum(-C l^-2/3 + T l) over the scaled simplex
// with an Armijo backtracking step.
inline std::vector<double> dual_by_projected_gradient(const std::vector<double>& C,
                                                      const std::vector<double>& T,
                                                      double beta) {
  const std::size_t n = C.size();
  const double floor = 1e-14 * beta;
  auto f = [&](const std::vector<double>& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += -C[i] * std::pow(l[i], -2.0 / 3.0) + T[i] * l[i];
    return s;
  };
  std::vector<double> l(n, beta / static_cast<double>(n));
  double step = 1e-3 * beta;
  for (int it = 0; it < 400000; ++it) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = (2.0 / 3.0) * C[i] * std::pow(l[i], -5.0 / 3.0) + T[i];
    }
    const double f0 = f(l);
    std::vector<double> next;
    double moved = 0.0;
    step *= 2.0;
    while (true) {
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = l[i] + step * g[i];
      next = project_simplex(trial, beta, floor);
      double lin = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        lin += g[i] * (next[i] - l[i]);
        sq += (next[i] - l[i]) * (next[i] - l[i]);
      }
      if (f(next) >= f0 + lin - sq / (2.0 * step) || step < 1e-300) {
        moved = std::sqrt(sq);
        break;
      }
      step *= 0.5;
    }
    l = std::move(next);
    if (moved <= 1e-16 * beta) break;
  }
  return l;
}

// Minimum of p d / r(p) over an evenly spaced grid of `points` powers in
// [p_min, p_max], with r = B log2(1 + p / Lambda).
struct GridMin {
  double power;
  double value;
};
inline GridMin ratio_grid(double d, double Lambda, double B, double p_min, double p_max,
                          int points) {
  GridMin best{p_max, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < points; ++i) {
    const double p = p_min + (p_max - p_min) * i / (points - 1);
    if (p <= 0.0) continue;
    const double r = B * std::log2(1.0 + p / Lambda);
    const double v = p * d / r;
    if (v < best.value) best = {p, v};
  }
  return best;
}

// Relaxed SP1 objective of one device pair at fixed powers, minimized by a
// zooming grid over (f1, f2, T); each resolution is optimal in closed form
// for given (f, T) because its objective is a 1-D quadratic on an interval.
struct Sp1Grid {
  double value;
  double f1, f2, T;
};
inline Sp1Grid sp1_pair_grid(const SystemParams& p, const ChannelPair& pair,
                             const std::array<double, 2>& t_trans, int points,
                             int zooms) {
  const double a = p.weights.energy, b = p.weights.time, g = p.weights.accuracy;
  const double s1 = p.resolution_set_px[0], s3 = p.resolution_set_px[2];
  const double k = (accuracy(s3) - accuracy(s1)) / (s3 - s1);
  const double xi = 1.0 / (p.std_resolution_px * p.std_resolution_px);
  std::array<double, 2> w{};
  for (int m = 0; m < 2; ++m) {
    const Device& d = pair.members[m].device;
    w[m] = p.local_iterations * xi * d.cycles_per_std_sample * d.sample_count;
  }
  // Best value of a kappa w s^2 f^2 - g (k (s - s1) + A(s1)) given f and T.
  auto device_part = [&](int m, double f, double T, bool& ok) {
    const double slack = T - t_trans[m];
    if (slack <= 0.0) { ok = false; return 0.0; }
    const double s_cap = std::min(s3, std::sqrt(slack * f / w[m]));
    if (s_cap < s1) { ok = false; return 0.0; }
    const double quad = a * p.switched_capacitance * w[m] * f * f;
    double s = quad > 0.0 ? g * k / (2.0 * quad) : s_cap;
    s = std::clamp(s, s1, s_cap);
    return quad * s * s - g * (k * (s - s1) + accuracy(s1));
  };
  double f_lo = p.f_min_hz, f_hi = p.f_max_hz;
  double g1_lo = f_lo, g1_hi = f_hi, g2_lo = f_lo, g2_hi = f_hi;
  double T_lo = std::max(t_trans[0], t_trans[1]);
  double T_hi = T_lo + 4.0 * (w[0] + w[1]) * s3 * s3 / p.f_min_hz;
  T_hi = std::min(T_hi, T_lo + 1e3);
  Sp1Grid best{std::numeric_limits<double>::infinity(), 0, 0, 0};
  for (int z = 0; z <= zooms; ++z) {
    const double d1 = (g1_hi - g1_lo) / (points - 1);
    const double d2 = (g2_hi - g2_lo) / (points - 1);
    const double dT = (T_hi - T_lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
      const double f1 = g1_lo + i * d1;
      for (int j = 0; j < points; ++j) {
        const double f2 = g2_lo + j * d2;
        for (int t = 0; t < points; ++t) {
          const double T = T_lo + t * dT;
          bool ok = true;
          const double v = b * T + device_part(0, f1, T, ok) + device_part(1, f2, T, ok);
          if (ok && v < best.value) best = {v, f1, f2, T};
        }
      }
    }
    g1_lo = std::max(f_lo, best.f1 - 2 * d1);
    g1_hi = std::min(f_hi, best.f1 + 2 * d1);
    g2_lo = std::max(f_lo, best.f2 - 2 * d2);
    g2_hi = std::min(f_hi, best.f2 + 2 * d2);
    const double T_floor = std::max(t_trans[0], t_trans[1]);
    T_lo = std::max(T_floor, best.T - 2 * dT);
    T_hi = best.T + 2 * dT;
  }
  return best;
}

}  // namespace oracle

}  // namespace testing
