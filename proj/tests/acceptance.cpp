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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "nomafl/allocator.hpp"
#include "nomafl/bench.hpp"
#include "nomafl/sp1.hpp"
#include "nomafl/sp2.hpp"
#include "support.hpp"

using namespace nomafl;
using namespace testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double work_of(const SystemParams& p, const Device& d) {
  return p.local_iterations * p.std_sample_scale() * d.cycles_per_std_sample * d.sample_count;
}

// Steps that go the wrong way by more than a relative hair.
int inversions(const std::vector<double>& v, bool increasing) {
  int n = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double slack = 1e-9 * std::max(std::abs(v[i]), std::abs(v[i - 1]));
    n += increasing ? v[i] < v[i - 1] - slack : v[i] > v[i - 1] + slack;
  }
  return n;
}

std::string series(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.4g", x);
  return s;
}

Outcome stationarity() {
  Gen gen(1001);
  const SystemParams base = SystemParams::defaults();
  double worst = 0.0;
  int checked = 0;
  for (int t = 0; checked < 100 && t < 100000; ++t) {
    SystemParams p = base;
    p.weights = {gen.uniform(0.1, 0.9), 0, gen.uniform(0.2, 3.0)};
    p.weights.time = 1 - p.weights.energy;
    const Device d = make_device(0, gen.uniform(1e4, 3e4));
    const double lambda = gen.uniform(0.01, 1.0) * p.weights.time;
    const auto pp = sp1::recover_primal(lambda, p, d);
    const double f = pp.cpu_hz, s = pp.resolution_px;
    if (f < p.f_min_hz || f > p.f_max_hz || s < p.s_min() || s > p.s_max()) continue;
    const double w = work_of(p, d), ak = p.weights.energy * p.switched_capacitance;
    const double k = (oracle::accuracy(p.s_max()) - oracle::accuracy(p.s_min())) /
                     (p.s_max() - p.s_min());
    auto L = [&](double ff, double ss) {
      return ak * w * ss * ss * ff * ff - p.weights.accuracy * k * ss + lambda * w * ss * ss / ff;
    };
    const double hf = 1e-5 * f, hs = 1e-5 * s;
    const double dLdf = (L(f + hf, s) - L(f - hf, s)) / (2 * hf);
    const double dLds = (L(f, s + hs) - L(f, s - hs)) / (2 * hs);
    worst = std::max({worst, std::abs(dLdf) / (lambda * w * s * s / (f * f)),
                      std::abs(dLds) / (p.weights.accuracy * k)});
    ++checked;
  }
  return {checked == 100 && worst <= 1e-6,
          fmt("%d interior instances, max relative gradient %.2e", checked, worst)};
}

Outcome dual_oracle() {
  Gen gen(1002);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    std::vector<sp1::DualCoefficients> c(8);
    std::vector<double> C, T;
    for (auto& x : c) {
      x.curvature = gen.uniform(0.05, 1.0);
      x.linear = gen.uniform(0.0, 0.5);
      C.push_back(x.curvature);
      T.push_back(x.linear);
    }
    const double beta = gen.uniform(0.1, 1.0);
    const auto l = sp1::solve_dual(c, beta);
    const auto ref = oracle::dual_by_projected_gradient(C, T, beta);
    for (int i = 0; i < 8; ++i) worst = std::max(worst, rel_diff(l[i], ref[i]));
  }
  return {worst <= 1e-6, fmt("50 instances, max coordinate difference %.2e", worst)};
}

Outcome sp2_grid() {
  Gen gen(1003);
  double worst = -1.0;
  bool converged = true;
  for (int t = 0; t < 50; ++t) {
    sp2::RatioProblem prob;
    const double d = gen.uniform(1e4, 1e5);
    const double B = gen.uniform(0.4e6, 2e6);
    prob.channels = {{d, gen.log_uniform(1e-6, 1e-1), 1.0, B}};
    prob.p_min_w = dbm_to_watts(gen.uniform(-5.0, 3.0));
    prob.p_max_w = dbm_to_watts(gen.uniform(6.0, 15.0));
    prob.alpha = gen.uniform(0.1, 0.9);
    const auto res = sp2::solve_ratio_stage(prob);
    converged = converged && res.converged;
    const auto& ch = prob.channels[0];
    const double pw = res.channels[0].power_w;
    const double mine = pw * d / (B * std::log2(1.0 + pw / ch.floor));
    const auto grid = oracle::ratio_grid(d, ch.floor, B, prob.p_min_w, prob.p_max_w, 1'000'000);
    worst = std::max(worst, (mine - grid.value) / grid.value);
  }
  return {converged && worst <= 1e-4,
          fmt("50 instances, max excess over grid %.2e", worst)};
}

Outcome parametric_fixed_point() {
  const SystemParams p = default_params();
  const PairedTopology topo = default_topology(1);
  const SolveReport rep = allocate(p, topo);
  const auto s = sp2::solve_sp2(p, topo, rep.relaxed, rep.relaxed.deadline_s);
  double worst = 0.0;
  int channels = 0;
  bool converged = s.first.converged && s.second.converged;
  std::vector<double> p1;
  for (const auto& c : s.first.channels) p1.push_back(c.power_w);
  for (auto stage : {sp2::Stage::First, sp2::Stage::Second}) {
    const auto& res = stage == sp2::Stage::First ? s.first : s.second;
    const auto prob = sp2::build_stage(p, topo, rep.relaxed, rep.relaxed.deadline_s, stage, p1);
    for (std::size_t k = 0; k < res.channels.size(); ++k) {
      const auto& c = res.channels[k];
      const auto& ch = prob.channels[k];
      const double r = ch.bandwidth_hz * std::log2(1.0 + c.power_w / ch.floor);
      worst = std::max({worst, rel_diff(c.nu, p.weights.energy / r),
                        rel_diff(c.Gamma, c.power_w * ch.upload_bits / r)});
      ++channels;
    }
  }
  return {converged && channels == 50 && worst <= 1e-8,
          fmt("%d channel stages, max relative gap %.2e", channels, worst)};
}

Outcome monotone_trace() {
  double worst = 0.0;
  int runs = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SystemParams p = default_params(25, {0.5, 0.5, seed % 2 ? 1.0 : 0.0});
    const SolveReport r = allocate(p, default_topology(seed));
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      worst = std::max(worst, r.objective_trace[i] - r.objective_trace[i - 1]);
    }
    ++runs;
  }
  return {worst <= 1e-9, fmt("%d instances, largest step up %.2e", runs, worst)};
}

bench::ExperimentSpec spec_of(const std::string& text) { return bench::parse_config(text); }

// Summary rows keyed by (sweep value, alpha, algorithm).
using Key = std::tuple<double, double, std::string>;
std::map<Key, bench::ResultRow> summaries(const bench::ResultTable& t) {
  std::map<Key, bench::ResultRow> out;
  for (const auto& r : t.rows) {
    if (!r.seed) out[{r.sweep_value, r.alpha, r.algorithm}] = r;
  }
  return out;
}

Outcome dominance() {
  const auto spec = spec_of("seeds = 1..20\nweights = 0.9:0.1:0, 0.5:0.5:0, 0.1:0.9:0\n");
  const auto t = bench::run_experiment(spec);
  const auto m = summaries(t);
  bool ok = t.flagged_count() == 0;
  std::string d;
  for (double a : {0.9, 0.5, 0.1}) {
    const double prop = m.at({0, a, "proposed"}).cost;
    const double greedy = m.at({0, a, "greedy"}).cost;
    const double rnd = m.at({0, a, "random"}).cost;
    ok = ok && prop <= greedy && prop <= rnd;
    d += fmt("%s(%.1f,%.1f) proposed %.4g greedy %.4g random %.4g", d.empty() ? "" : "; ", a,
             1 - a, prop, greedy, rnd);
  }
  // Full objective with accuracy priced in, for reference only.
  const auto acc = bench::run_experiment(spec_of("seeds = 1..20\nweights = 0.5:0.5:1\n"));
  const auto ma = summaries(acc);
  d += fmt("; gamma=1 objective proposed %.4g greedy %.4g random %.4g",
           ma.at({0, 0.5, "proposed"}).objective, ma.at({0, 0.5, "greedy"}).objective,
           ma.at({0, 0.5, "random"}).objective);
  return {ok, d};
}

Outcome trends() {
  const auto pt = bench::run_experiment(spec_of(
      "seeds = 1..10\nalgorithms = proposed\nsweep = p_max\nsweep_values = 6, 7, 8, 9, 10, 11, 12\n"
      "alpha = 0.5\nbeta = 0.5\ngamma = 1\n"));
  std::vector<double> T, C, E;
  for (const auto& r : pt.rows) {
    if (r.seed) continue;
    T.push_back(r.time_s);
    C.push_back(r.cost);
    E.push_back(r.energy_j);
  }
  const int iT = inversions(T, false), iC = inversions(C, false), iE = inversions(E, true);

  const auto ft = bench::run_experiment(spec_of(
      "seeds = 1..10\nalgorithms = proposed, greedy\nsweep = f_max\n"
      "sweep_values = 1.0, 1.2, 1.4, 1.6, 1.8, 2.0\nalpha = 0.5\nbeta = 0.5\ngamma = 1\n"));
  const auto m = summaries(ft);
  std::vector<double> fT, fC, gap;
  for (double v : {1.0, 1.2, 1.4, 1.6, 1.8, 2.0}) {
    const auto& pr = m.at({v, 0.5, "proposed"});
    fT.push_back(pr.time_s);
    fC.push_back(pr.cost);
    gap.push_back(m.at({v, 0.5, "greedy"}).energy_j - pr.energy_j);
  }
  const int jT = inversions(fT, false), jC = inversions(fC, false), jG = inversions(gap, true);
  const bool ok = pt.flagged_count() == 0 && ft.flagged_count() == 0 && iT <= 1 && iC <= 1 &&
                  iE <= 1 && jT <= 1 && jC <= 1 && jG <= 1;
  return {ok, fmt("p_max inversions T %d cost %d E %d [E: %s]; f_max inversions T %d cost %d "
                  "gap %d [gap: %s]",
                  iT, iC, iE, series(E).c_str(), jT, jC, jG, series(gap).c_str())};
}

Outcome resolution_thresholds() {
  const double levels[] = {160, 320, 640};
  const double expected[] = {0.4422485, 0.8028601, 0.9753713};
  bool monotone = true, progression = false;
  double worst = 0.0;
  int plateaus_seen = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto spec = spec_of("users = 4\nchannels = 2\nalpha = 0.5\nbeta = 0.5\n");
    const auto devs = bench::devices_for(spec, seed);
    std::map<int, std::vector<double>> path;  // device id -> resolution per gamma
    bool plateau[3] = {false, false, false};
    for (int g = 0; g <= 40; ++g) {
      const double gamma = 0.05 * g;
      SystemParams p = bench::params_at(spec, 0, {0.5, 0.5, gamma});
      SolveConfig cfg;
      cfg.rng_seed = seed;
      const SolveReport r = allocate_best_pairing(p, devs, cfg);
      const CostBreakdown cb = evaluate(p, r.topology, r.allocation);
      std::size_t j = 0;
      std::map<double, int> count;
      for (const auto& ch : r.topology.channels) {
        for (const auto& m : ch.members) {
          const double s = r.allocation.devices[j].resolution_px;
          path[m.device.id].push_back(s);
          ++count[s];
          for (int l = 0; l < 3; ++l) {
            if (s == levels[l]) worst = std::max(worst, std::abs(cb.devices[j].accuracy - expected[l]));
          }
          ++j;
        }
      }
      for (int l = 0; l < 3; ++l) {
        if (count[levels[l]] == 4) {
          plateau[l] = true;
          worst = std::max(worst, std::abs(cb.total_accuracy / 4 - expected[l]));
        }
      }
    }
    for (const auto& [id, v] : path) {
      if (inversions(v, true) > 0) monotone = false;
      bool seen[3] = {false, false, false};
      for (double s : v) {
        for (int l = 0; l < 3; ++l) seen[l] = seen[l] || s == levels[l];
      }
      progression = progression || (seen[0] && seen[1] && seen[2]);
    }
    plateaus_seen += plateau[0] + plateau[1] + plateau[2];
  }
  return {monotone && progression && worst <= 5e-5,
          fmt("monotone %s, full progression %s, %d uniform plateaus, max accuracy gap %.1e",
              monotone ? "yes" : "no", progression ? "yes" : "no", plateaus_seen, worst)};
}

Outcome determinism() {
  const auto spec = spec_of(
      "seeds = 1..2\nsweep = gamma\nsweep_values = 0, 1\nweights = 0.5:0.5:1, 0.9:0.1:0\n");
  auto csv = [&] {
    std::ostringstream os;
    bench::write_csv(os, bench::run_experiment(spec).rows);
    return os.str();
  };
  const std::string a = csv(), b = csv();
  return {a == b && !a.empty(), fmt("%zu bytes, identical %s", a.size(), a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "closed-form stationarity", 1, stationarity},
      {2, "dual solver vs projected gradient", 5, dual_oracle},
      {3, "power subproblem vs dense grid", 10, sp2_grid},
      {4, "fixed point of the ratio equivalence", 5, parametric_fixed_point},
      {5, "monotone descent", 60, monotone_trace},
      {6, "baseline dominance", 600, dominance},
      {7, "sweep trends", 600, trends},
      {8, "resolution thresholds", 60, resolution_thresholds},
      {9, "determinism", 30, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget_s;
    failed += !pass;
    std::printf("%s %d %s: %s (%.2f s of %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
