// Copyright 2026 The pvsizing Authors
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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "pvsizing/ccg_engine.hpp"
#include "pvsizing/experiment.hpp"
#include "pvsizing/robust_subproblem.hpp"
#include "pvsizing/scenario_forge.hpp"
#include "random_instance.hpp"

namespace {

using namespace pvsizing;
using Clock = std::chrono::steady_clock;

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    pass = false;
    detail << why << "; ";
  }
};

struct TracedRun {
  std::string label;
  CcgTrace trace;
  double epsilon = 1e-4;
  const PlanningInstance* fixture = nullptr;  // set for runs on a bundled fixture
};

// Every CCG trace produced during the run, for the bound-discipline check.
std::vector<TracedRun> g_traces;

std::vector<PlanningInstance> tiny_instances() {
  std::mt19937_64 rng(2024);
  std::vector<PlanningInstance> out;
  for (int i = 0; i < 50; ++i) out.push_back(testing::random_instance(rng));
  return out;
}

// Patterns with at most `budget` hours off nominal, each up or down, counted
// by walking all 3^T codes.
std::uint64_t count_patterns(int hours, int budget) {
  std::uint64_t total = 0, codes = 1;
  for (int t = 0; t < hours; ++t) codes *= 3;
  for (std::uint64_t c = 0; c < codes; ++c) {
    int off = 0;
    for (std::uint64_t x = c; x > 0; x /= 3) off += x % 3 != 0;
    total += off <= budget;
  }
  return total;
}

Verdict strong_duality(const std::vector<PlanningInstance>& instances) {
  Verdict v;
  std::mt19937_64 rng(99);
  const auto start = Clock::now();
  double worst = 0.0;
  int checked = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    std::vector<FirstStageDecision> decisions{empty_decision(inst.dims())};
    for (int k = 0; k < 3; ++k) decisions.push_back(testing::random_decision(inst, rng));
    for (const auto& fixed : decisions) {
      const auto dual = solve_dual_sp(inst, fixed);
      const auto primal = solve_primal_sp(inst, fixed, dual.worst.realization);
      const double gap = rel(primal.objective, dual.objective);
      worst = std::max({worst, gap, rel(primal.dual_objective, primal.objective)});
      if (gap > 1e-5) v.fail("instance " + std::to_string(i) + ": primal " + std::to_string(primal.objective) +
                             " vs dual " + std::to_string(dual.objective));
      ++checked;
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 120.0) v.fail("took " + std::to_string(elapsed) + " s");
  v.detail << checked << " first stages on " << instances.size() << " instances, max relative gap " << worst << ", "
           << elapsed << " s";
  return v;
}

Verdict brute_force_adversary(const std::vector<PlanningInstance>& instances) {
  Verdict v;
  if (vertex_count(4, 2) != 33 || count_patterns(4, 2) != 33) v.fail("vertex count T=4 budget 2 is not 33");
  for (auto [hours, budget] : {std::pair{3, 3}, {6, 3}, {5, 1}, {6, 0}, {5, 4}}) {
    if (vertex_count(hours, budget) != count_patterns(hours, budget)) {
      v.fail("vertex count T=" + std::to_string(hours) + " budget " + std::to_string(budget));
    }
  }
  std::mt19937_64 rng(7);
  double worst = 0.0;
  int checked = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    if (vertex_count(inst.hours(), inst.demand.budget) != count_patterns(inst.hours(), inst.demand.budget)) {
      v.fail("vertex count mismatch on instance " + std::to_string(i));
    }
    for (const auto& fixed : {empty_decision(inst.dims()), testing::random_decision(inst, rng)}) {
      const double milp = solve_dual_sp(inst, fixed).objective;
      const double brute = enumerate_worst_case(inst, fixed).objective;
      worst = std::max(worst, rel(milp, brute));
      if (rel(milp, brute) > 1e-5) {
        v.fail("instance " + std::to_string(i) + ": MILP " + std::to_string(milp) + " vs enumeration " +
               std::to_string(brute));
      }
      ++checked;
    }
  }
  v.detail << "vertex counts match enumeration (T=4, budget 2: 33); " << checked
           << " first stages, budgets <= 3, max relative gap " << worst;
  return v;
}

Verdict zero_budget_reduction(const std::vector<PlanningInstance>& instances) {
  Verdict v;
  std::vector<PlanningInstance> cases;
  for (const auto& inst : instances) cases.push_back(with_budget(inst, 0));
  cases.push_back(with_budget(testing::desk_fixture_cached(), 0));
  double worst = 0.0;
  int max_iters = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& inst = cases[i];
    CcgConfig cfg;
    const CcgTrace trace = run_ccg(inst, cfg);
    g_traces.push_back({"zero budget " + std::to_string(i), trace, cfg.epsilon});
    if (i + 1 == cases.size()) g_traces.back().fixture = &testing::desk_fixture_cached();
    const double ext = solve_extensive_stochastic(inst, inst.demand.nominal).objective;
    worst = std::max(worst, rel(trace.objective, ext));
    max_iters = std::max(max_iters, trace.iterations());
    if (rel(trace.objective, ext) > 1e-5) {
      v.fail("case " + std::to_string(i) + ": CCG " + std::to_string(trace.objective) + " vs extensive " +
             std::to_string(ext));
    }
    if (trace.iterations() > 2) v.fail("case " + std::to_string(i) + " took " + std::to_string(trace.iterations()));
  }
  v.detail << cases.size() << " instances incl. desk fixture, max relative gap " << worst << ", max iterations "
           << max_iters;
  return v;
}

Verdict trilevel_oracle(const std::vector<PlanningInstance>& instances) {
  Verdict v;
  double worst = 0.0;
  int total_iters = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    CcgConfig cfg;
    // Both runs stop within epsilon of the optimum, so a tight epsilon keeps
    // their difference well inside the comparison tolerance.
    cfg.epsilon = 1e-8;
    cfg.mip_gap = 1e-9;
    const CcgTrace milp = run_ccg(inst, cfg);
    const CcgTrace brute = run_ccg_bruteforce(inst, cfg);
    g_traces.push_back({"ccg " + std::to_string(i), milp, cfg.epsilon});
    g_traces.push_back({"brute force " + std::to_string(i), brute, cfg.epsilon});
    total_iters += milp.iterations();
    worst = std::max(worst, rel(milp.objective, brute.objective));
    if (!milp.converged || !brute.converged) v.fail("instance " + std::to_string(i) + " did not converge");
    if (rel(milp.objective, brute.objective) > 1e-5) {
      v.fail("instance " + std::to_string(i) + ": CCG " + std::to_string(milp.objective) + " vs brute force " +
             std::to_string(brute.objective));
    }
  }
  v.detail << instances.size() << " enumerable instances, max relative gap " << worst << ", " << total_iters
           << " CCG iterations in total";
  return v;
}

Verdict bound_discipline() {
  Verdict v;
  int records = 0, flagged = 0;
  for (const auto& run : g_traces) {
    const auto& r = run.trace.records;
    if (r.empty()) {
      v.fail(run.label + ": empty trace");
      continue;
    }
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double tol = 1e-9 * std::max(1.0, std::abs(r[k].ub));
      if (r[k].lb > r[k].ub + tol) v.fail(run.label + ": LB above UB at iteration " + std::to_string(k + 1));
      if (k > 0 && r[k].lb < r[k - 1].lb - tol) v.fail(run.label + ": LB decreased");
      if (k > 0 && r[k].ub > r[k - 1].ub + tol) v.fail(run.label + ": UB increased");
      ++records;
    }
    const bool within = r.back().gap <= run.epsilon;
    if (run.trace.converged != within) v.fail(run.label + ": converged flag disagrees with terminal gap");
    flagged += !run.trace.converged;
  }
  v.detail << g_traces.size() << " traces, " << records << " iterations, " << flagged << " flagged non-converged";
  return v;
}

experiment::SweepResult budget_sweep(const PlanningInstance& inst, const std::string& label) {
  // `inst` outlives the run: it is one of the fixtures owned by main.
  experiment::SweepSpec spec;
  for (int g = 0; g <= inst.hours(); ++g) spec.budgets.push_back(g);
  spec.scenario_counts = {inst.scenarios()};
  // Monotonicity is checked to 1e-6 relative; every point must be solved
  // well inside that.
  spec.ccg.epsilon = 1e-7;
  spec.ccg.mip_gap = 1e-9;
  spec.on_record = [&](const experiment::SweepRecord& r) {
    std::fprintf(stderr, "  %s budget %g: objective %.9g, pv %.4g, bess %.4g, %d iterations, %.1f s\n", label.c_str(),
                 r.budget, r.objective, r.pv_capacity,
                 r.selected_tech >= 0 ? r.bess_capacity[r.selected_tech] : 0.0, r.iterations, r.wall_seconds);
  };
  auto result = experiment::run_sweep(inst, spec);
  for (const auto& r : result.records) {
    if (r.ok) g_traces.push_back({label + " budget " + std::to_string(r.budget), r.trace, spec.ccg.epsilon, &inst});
  }
  return result;
}

double sweep_seconds(const experiment::SweepResult& result) {
  double total = 0.0;
  for (const auto& r : result.records) total += r.wall_seconds;
  return total;
}

Verdict monotone_robustness(const PlanningInstance& inst, const experiment::SweepResult& sweep) {
  Verdict v;
  if (!sweep.failures().empty()) {
    v.fail(std::to_string(sweep.failures().size()) + " sweep points failed");
    return v;
  }
  const auto series = experiment::marginal_cost_of_robustness(sweep, inst.scenarios());
  double worst_drop = 0.0, worst_rise = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double tol = 1e-6 * std::max(1.0, std::abs(series[i].objective));
    worst_drop = std::max(worst_drop, -series[i].mcr);
    if (series[i].mcr < -tol) v.fail("objective drops at budget " + std::to_string(i));
    // MCR(g) - MCR(g - 1) carries at most four endpoint errors of epsilon.
    if (series[i].budget >= 5) {
      const double rise = series[i].mcr - series[i - 1].mcr;
      worst_rise = std::max(worst_rise, rise);
      if (rise > 4 * tol) {
        v.fail("MCR rises from " + std::to_string(series[i - 1].mcr) + " to " + std::to_string(series[i].mcr) +
               " at budget " + std::to_string(i));
      }
    }
  }
  v.detail << "budgets 0.." << inst.hours() << ", objective " << series.front().objective << " -> "
           << series.back().objective << ", largest drop " << worst_drop << ", largest MCR rise past budget 4 "
           << worst_rise << ", sweep " << sweep_seconds(sweep) << " s";
  return v;
}

Verdict regime_shift(const experiment::SweepResult& sweep) {
  Verdict v;
  if (!sweep.failures().empty()) {
    v.fail("sweep points failed");
    return v;
  }
  const auto& r = sweep.records;
  auto bess = [](const experiment::SweepRecord& x) {
    return x.selected_tech >= 0 ? x.bess_capacity[x.selected_tech] : 0.0;
  };
  const double tol = 1e-3;
  int first_bess = -1, first_pv = -1;
  for (std::size_t g = 1; g < r.size(); ++g) {
    if (first_bess < 0 && bess(r[g]) > bess(r[0]) + tol) first_bess = static_cast<int>(g);
    if (first_pv < 0 && r[g].pv_capacity > r[0].pv_capacity + tol) first_pv = static_cast<int>(g);
  }
  if (first_bess < 0) v.fail("battery never grows");
  if (first_pv < 0) v.fail("PV never grows");
  if (first_bess >= 0 && first_pv >= 0 && first_bess >= first_pv) {
    v.fail("PV grows at budget " + std::to_string(first_pv) + " before the battery (" + std::to_string(first_bess) +
           ")");
  }
  v.detail << "battery first grows at budget " << first_bess << " with PV flat at " << r[0].pv_capacity
           << " kW, PV first grows at budget " << first_pv << "; battery " << bess(r[0]) << " -> " << bess(r.back())
           << " kWh, PV " << r[0].pv_capacity << " -> " << r.back().pv_capacity << " kW, sweep " << sweep_seconds(sweep)
           << " s";
  return v;
}

// Installed-capacity cost per usable kWh-year.
double cost_per_usable_kwh_year(const BatteryTech& b) {
  double usable = 0.0;
  for (double soh : b.soh_by_year) usable += soh * (b.soc_max_frac - b.soc_min_frac);
  return b.invest_cost / usable;
}

// Second-life technologies (initial SOH below 1) that some first-life
// technology beats on both cost per usable kWh-year and operating cost.
std::vector<int> dominated_second_life(const PlanningInstance& inst) {
  std::vector<int> dominated;
  for (int j = 0; j < inst.techs(); ++j) {
    const auto& sl = inst.batteries[j];
    if (sl.soh_by_year.front() >= 1.0) continue;
    for (const auto& fl : inst.batteries) {
      if (fl.soh_by_year.front() < 1.0) continue;
      if (cost_per_usable_kwh_year(fl) < cost_per_usable_kwh_year(sl) && fl.op_cost < sl.op_cost) {
        dominated.push_back(j);
        break;
      }
    }
  }
  return dominated;
}

Verdict one_technology(const std::vector<const PlanningInstance*>& fixtures) {
  Verdict v;
  for (const auto* inst : fixtures) {
    if (dominated_second_life(*inst).empty()) v.fail("a fixture has no dominated second-life technology");
  }
  int solutions = 0, with_battery = 0;
  for (const auto& run : g_traces) {
    if (!run.trace.converged) continue;
    const auto& d = run.trace.decision;
    ++solutions;
    const int selected = std::accumulate(d.tech_selected.begin(), d.tech_selected.end(), 0);
    if (selected > 1) v.fail(run.label + ": " + std::to_string(selected) + " technologies selected");
    const int j = d.selected_tech();
    if (run.fixture == nullptr || j < 0 || d.bess_capacity[j] <= 1e-6) continue;
    ++with_battery;
    const auto dominated = dominated_second_life(*run.fixture);
    if (std::find(dominated.begin(), dominated.end(), j) != dominated.end()) {
      v.fail(run.label + ": dominated second-life technology " + run.fixture->batteries[j].id + " selected");
    }
  }
  v.detail << solutions << " converged solutions with at most one technology, " << with_battery
           << " fixture solutions with a battery; dominated second-life:";
  for (const auto* inst : fixtures) {
    for (int j : dominated_second_life(*inst)) {
      v.detail << " " << inst->batteries[j].id << " (" << cost_per_usable_kwh_year(inst->batteries[j])
               << "/kWh-yr)";
    }
  }
  return v;
}

double sample_acf1(const std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + 1 < x.size()) num += (x[i] - mean) * (x[i + 1] - mean);
  }
  return num / den;
}

Verdict forecasting() {
  Verdict v;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> demand(1.0, 500.0);
  double worst_cagr = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double d0 = demand(rng), dn = demand(rng);
    const int n = 1 + static_cast<int>(rng() % 15);
    const double r = forge::fit_growth_rate({{0, d0}, {double(n), dn}});
    const double back = forge::project_demand({{d0}, r, n})(n - 1, 0);
    worst_cagr = std::max(worst_cagr, std::abs(back - dn) / dn);
  }
  if (worst_cagr > 1e-9) v.fail("CAGR round trip off by " + std::to_string(worst_cagr));

  // Analytic ARMA(1,1) lag-1 autocorrelation.
  const double phi = 0.7, theta = 0.2;
  const double analytic = (1 + phi * theta) * (phi + theta) / (1 + 2 * phi * theta + theta * theta);
  forge::ArmaSpec spec;
  spec.ar_coeffs = {phi};
  spec.ma_coeffs = {theta};
  spec.noise_std = 0.1;
  const double sample = sample_acf1(forge::arma_path(spec, 10000, 12345));
  if (std::abs(sample - analytic) > 0.05) v.fail("ACF " + std::to_string(sample) + " vs " + std::to_string(analytic));

  const auto base = forge::read_base_demand_csv(testing::fixture_path("desk/base_demand.csv"), 24);
  const auto history = forge::project_history(base, 0.02, 3);
  const auto intervals = forge::extract_demand_intervals(history);
  std::size_t observations = 0, outside = 0;
  for (int y = 0; y < 3; ++y) {
    for (const auto& day : history[y]) {
      for (int t = 0; t < 24; ++t) {
        ++observations;
        const double lo = intervals.nominal(y, t) - intervals.deviation(y, t);
        const double hi = intervals.nominal(y, t) + intervals.deviation(y, t);
        outside += day[t] < lo - 1e-12 || day[t] > hi + 1e-12;
      }
    }
  }
  if (outside > 0) v.fail(std::to_string(outside) + " observations outside their interval");
  v.detail << "CAGR round trip max error " << worst_cagr << "; lag-1 ACF " << sample << " vs analytic " << analytic
           << "; " << observations << " observations bracketed";
  return v;
}

Verdict determinism(const std::vector<PlanningInstance>& instances) {
  Verdict v;
  std::vector<PlanningInstance> cases(instances.begin(), instances.begin() + 5);
  cases.push_back(testing::desk_fixture_cached());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    CcgConfig cfg;
    cfg.full_rebuild = true;
    cfg.seed = 17;
    const CcgTrace a = run_ccg(cases[i], cfg);
    const CcgTrace b = run_ccg(cases[i], cfg);
    g_traces.push_back({"determinism " + std::to_string(i), a, cfg.epsilon});
    if (i + 1 == cases.size()) g_traces.back().fixture = &testing::desk_fixture_cached();
    if (trace_csv(a, false) != trace_csv(b, false)) v.fail("case " + std::to_string(i) + " traces differ");
  }
  v.detail << cases.size() << " instances incl. desk fixture at budget 5, byte-identical trace CSVs";
  return v;
}

}  // namespace

int main() {
  const auto instances = tiny_instances();
  const PlanningInstance& desk = testing::desk_fixture_cached();
  const PlanningInstance regime = testing::regime_fixture();

  std::vector<Verdict> verdicts(11);
  std::vector<double> elapsed(11, 0.0);
  auto run = [&](int n, const std::function<Verdict()>& check) {
    const auto start = Clock::now();
    try {
      verdicts[n] = check();
    } catch (const std::exception& e) {
      verdicts[n].fail(std::string("exception: ") + e.what());
    }
    elapsed[n] = seconds_since(start);
    std::fprintf(stderr, "criterion %d done in %.1f s\n", n, elapsed[n]);
  };

  // Criteria 5 and 8 inspect every trace the other checks produce, so they
  // run last; the report below is printed in criterion order.
  run(1, [&] { return strong_duality(instances); });
  run(2, [&] { return brute_force_adversary(instances); });
  run(3, [&] { return zero_budget_reduction(instances); });
  run(4, [&] { return trilevel_oracle(instances); });
  run(6, [&] { return monotone_robustness(desk, budget_sweep(desk, "desk")); });
  run(7, [&] { return regime_shift(budget_sweep(regime, "regime")); });
  run(9, [&] { return forecasting(); });
  run(10, [&] { return determinism(instances); });
  run(5, [&] { return bound_discipline(); });
  run(8, [&] { return one_technology({&desk, &regime}); });

  const char* names[] = {"",
                         "strong duality",
                         "brute-force adversary",
                         "zero-budget reduction",
                         "tri-level oracle",
                         "bound discipline",
                         "monotone robustness",
                         "regime shift",
                         "one technology",
                         "forecasting",
                         "determinism"};
  int failures = 0;
  for (int n = 1; n <= 10; ++n) {
    failures += !verdicts[n].pass;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", verdicts[n].pass ? "PASS" : "FAIL", n, names[n],
                verdicts[n].detail.str().c_str(), elapsed[n]);
  }
  return failures == 0 ? 0 : 1;
}
