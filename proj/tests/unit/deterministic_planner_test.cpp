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

#include "pvsizing/deterministic_planner.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "random_instance.hpp"

namespace pvsizing {
namespace {

using testing::flat_instance;

// Every DispatchPlan invariant for a single-scenario solution.
void expect_plan_invariants(const PlanningInstance& inst, const HourlyMatrix& demand, const HourlyMatrix& pv,
                            const PlanningSolution& sol) {
  const Dims& d = sol.plan.dims;
  const auto& x = sol.plan;
  for (int y = 0; y < d.years; ++y) {
    for (int t = 0; t < d.hours; ++t) {
      const int i = d.tys(t, y, 0);
      double net = 0.0;
      for (int j = 0; j < d.techs; ++j) net += x.ds[d.jtys(j, t, y, 0)] - x.ch[d.jtys(j, t, y, 0)];
      EXPECT_NEAR(x.pg[i] - demand(y, t) - x.psg[i] + x.pbg[i] + net, 0.0, 1e-6);
      EXPECT_LE(x.pg[i], sol.decision.pv_capacity * pv(y, t) + 1e-6);
      for (int j = 0; j < d.techs; ++j) {
        const BatteryTech& b = inst.batteries[j];
        const int k = d.jtys(j, t, y, 0);
        const double cap = b.soh_by_year[y] * sol.decision.bess_capacity[j];
        EXPECT_GE(x.soc[k], b.soc_min_frac * cap - 1e-6);
        EXPECT_LE(x.soc[k], b.soc_max_frac * cap + 1e-6);
        const int w = sol.decision.charge(j, t, y, 0);
        EXPECT_LE(x.ch[k], b.power_rate * w + 1e-6);
        EXPECT_LE(x.ds[k], b.power_rate * (sol.decision.tech_selected[j] - w) + 1e-6);
        EXPECT_LE(std::min(x.ch[k], x.ds[k]), 1e-6);
      }
    }
  }
}

TEST(FirstStageDecision, InstalledTechNeedsCapacity) {
  FirstStageDecision d = empty_decision({2, 1, 1, 3});
  EXPECT_EQ(d.selected_tech(), -1);
  EXPECT_EQ(d.installed_tech(), -1);
  d.tech_selected[1] = 1;
  EXPECT_EQ(d.selected_tech(), 1);
  EXPECT_EQ(d.installed_tech(), -1);
  d.bess_capacity[1] = 3.0;
  EXPECT_EQ(d.installed_tech(), 1);
}

TEST(BuildDeterministic, ExactVariableCount) {
  PlanningInstance inst = flat_instance(24, 10, 1.0, 0.2, 0.1);
  inst.batteries.push_back(inst.batteries[0]);
  inst.batteries[1].id = "NMC";
  // gamma_pv; gamma_bt and nu per tech; pg, pbg, psg per hour; ch, ds, soc, w per tech-hour.
  const int J = 2, T = 24, Y = 10;
  const PlanningModel pm = build_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
  EXPECT_EQ(pm.model.num_variables(), 1 + 2 * J + (3 + 4 * J) * T * Y);
  EXPECT_EQ(pm.model.num_variables(), 2645);
  EXPECT_EQ(pm.model.num_integral(), J + J * T * Y);
}

TEST(BuildDeterministic, ShapeMismatch) {
  const PlanningInstance inst = flat_instance(4, 2, 1.0, 0.2, 0.1);
  EXPECT_THROW(build_deterministic(inst, HourlyMatrix(1, 4), inst.pv.profiles[0]), std::invalid_argument);
  EXPECT_THROW(build_deterministic(inst, inst.demand.nominal, HourlyMatrix(2, 3)), std::invalid_argument);
}

TEST(SolveDeterministic, NothingToServe) {
  // Last-hour sell price below the discharge cost: nothing is worth doing.
  PlanningInstance inst = flat_instance(6, 2, 0.0, 0.2, 0.1);
  inst.tariff.sell_price.back() = 0.005;
  const auto sol = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
  EXPECT_NEAR(sol.decision.pv_capacity, 0.0, 1e-9);
  EXPECT_NEAR(sol.decision.total_bess_capacity(), 0.0, 1e-9);
}

TEST(SolveDeterministic, LastHourFlowsBypassSoc) {
  // The last-hour SOC row pins soc to its boundary value without the
  // charge/discharge terms, so a selected zero-capacity battery can still
  // discharge PB there. With zero demand the optimum sells that energy in
  // every year: objective = -Y * PB * (sell - op).
  const PlanningInstance inst = flat_instance(6, 2, 0.0, 0.2, 0.1);
  const BatteryTech& b = inst.batteries[0];
  const auto sol = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
  EXPECT_NEAR(sol.objective, -2 * b.power_rate * (0.1 - b.op_cost), 1e-9);
  EXPECT_NEAR(sol.decision.total_bess_capacity(), 0.0, 1e-9);
}

TEST(SolveDeterministic, FreeGridMeansNoInvestment) {
  PlanningInstance inst = flat_instance(6, 1, 2.0, 0.0, 0.0);
  inst.pv.profiles[0] = HourlyMatrix(1, 6, 0.5);
  const auto sol = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
  EXPECT_NEAR(sol.decision.pv_capacity, 0.0, 1e-9);
  EXPECT_NEAR(sol.decision.total_bess_capacity(), 0.0, 1e-9);
  for (int t = 0; t < 6; ++t) EXPECT_NEAR(sol.plan.pbg[t], 2.0, 1e-6);
}

TEST(SolveDeterministic, TwoHourToy) {
  // Demand 1 kWh in the sunny first hour, grid at 100/kWh, PV at 0.1/kW and
  // a prohibitively expensive battery. Candidates: gamma in [0, 1] costs
  // 0.1 gamma + 100 (1 - gamma), minimized at gamma = 1; gamma > 1 only adds
  // investment since export earns nothing.
  PlanningInstance inst = flat_instance(2, 1, 0.0, 100.0, 0.0);
  inst.demand.nominal(0, 0) = 1.0;
  inst.pv.profiles[0](0, 0) = 1.0;
  inst.batteries[0].invest_cost = 1000.0;
  inst.config.pv_invest_cost = 0.1;
  const auto sol = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
  EXPECT_NEAR(sol.decision.pv_capacity, 1.0, 1e-6);
  EXPECT_NEAR(sol.objective, 0.1, 1e-6);
}

TEST(SolveDeterministic, RandomPlansSatisfyInvariants) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const PlanningInstance inst = testing::random_instance(rng);
    const auto sol = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
    expect_plan_invariants(inst, inst.demand.nominal, inst.pv.profiles[0], sol);
    EXPECT_LE(std::accumulate(sol.decision.tech_selected.begin(), sol.decision.tech_selected.end(), 0), 1);
    const double one = 1.0;
    EXPECT_NEAR(evaluate_objective(inst, sol.decision, sol.plan, std::span(&one, 1)), sol.objective,
                1e-5 * std::max(1.0, std::abs(sol.objective)));
  }
}

TEST(SolveDeterministic, DeskFixtureSelectsOneTechnology) {
  const PlanningInstance inst = testing::desk_fixture();
  const auto sol = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
  EXPECT_EQ(std::accumulate(sol.decision.tech_selected.begin(), sol.decision.tech_selected.end(), 0), 1);
  expect_plan_invariants(inst, inst.demand.nominal, inst.pv.profiles[0], sol);
}

TEST(SolveDeterministic, RelaxingCapsNeverHurts) {
  const PlanningInstance base = with_years(testing::desk_fixture(), 1);
  double previous = INFINITY;
  for (double scale : {0.25, 0.5, 1.0}) {
    PlanningInstance inst = base;
    inst.config.pv_cap_max *= scale;
    inst.config.bess_cap_max *= scale;
    const double obj = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]).objective;
    EXPECT_LE(obj, previous + 1e-6);
    previous = obj;
  }
}

TEST(SolveDeterministic, ExportWithoutRevenueIsOptional) {
  PlanningInstance inst = with_years(testing::desk_fixture(), 1);
  std::fill(inst.tariff.sell_price.begin(), inst.tariff.sell_price.end(), 0.0);
  const double free_export = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]).objective;
  PlanningModel pm = build_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
  for (const lp::VarId v : pm.recourse.psg) pm.model.set_variable_bounds(v, 0.0, 0.0);
  const auto out = lp::solve(pm.model);
  ASSERT_EQ(out.status, lp::SolveStatus::kOptimal);
  EXPECT_NEAR(out.objective, free_export, 1e-5 * std::max(1.0, std::abs(free_export)));
}

PlanningInstance sunny_day() {
  PlanningInstance inst = flat_instance(24, 1, 0.2, 0.1, 0.0);
  for (int t = 17; t < 23; ++t) {
    inst.demand.nominal(0, t) = 1.0;
    inst.tariff.buy_price[t] = 0.5;
  }
  for (int t = 8; t < 17; ++t) inst.pv.profiles[0](0, t) = 1.0 - std::abs(t - 12) / 5.0;
  return inst;
}

TEST(SelfConsumption, ZeroBatteryGivesZeroTrace) {
  const PlanningInstance inst = sunny_day();
  const HourlyMatrix soc =
      solve_self_consumption(inst, inst.demand.nominal, inst.pv.profiles[0], 3.0, 0.0, inst.batteries[0]);
  for (double v : soc.data()) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(SelfConsumption, ChargesAtMiddayAndDrainsInEvening) {
  const PlanningInstance inst = sunny_day();
  const BatteryTech& b = inst.batteries[0];
  const HourlyMatrix soc = solve_self_consumption(inst, inst.demand.nominal, inst.pv.profiles[0], 4.0, 5.0, b);
  EXPECT_GT(soc(0, 15), soc(0, 7) + 1.0);
  EXPECT_LT(soc(0, 22), soc(0, 16) - 1.0);
  for (double v : soc.data()) {
    EXPECT_LE(v, b.soc_max_frac * 5.0 + 1e-6);
    EXPECT_GE(v, b.soc_min_frac * 5.0 - 1e-6);
  }
}

TEST(SelfConsumption, IgnoresDegradation) {
  PlanningInstance inst = sunny_day();
  BatteryTech worn = inst.batteries[0];
  worn.soh_by_year = {0.5};
  const HourlyMatrix a = solve_self_consumption(inst, inst.demand.nominal, inst.pv.profiles[0], 4.0, 5.0, worn);
  EXPECT_GT(*std::max_element(a.data().begin(), a.data().end()), 0.5 * 0.9 * 5.0 + 0.1);
}

TEST(SelfConsumption, UndispatchableSizingRejected) {
  PlanningInstance inst = sunny_day();
  BatteryTech b = inst.batteries[0];
  b.power_rate = 0.0;
  b.soc_initial_frac = 0.95;  // above the usable ceiling, and nothing can drain it
  EXPECT_THROW(solve_self_consumption(inst, inst.demand.nominal, inst.pv.profiles[0], 1.0, 5.0, b),
               std::runtime_error);
  EXPECT_THROW(solve_self_consumption(inst, inst.demand.nominal, inst.pv.profiles[0], -1.0, 5.0, b),
               std::invalid_argument);
}

TEST(SocTrace, CsvIsOneBased) {
  HourlyMatrix soc(1, 2);
  soc(0, 1) = 2.5;
  EXPECT_EQ(soc_trace_csv(soc), "year,hour,soc_kwh\n1,1,0\n1,2,2.5\n");
}

}  // namespace
}  // namespace pvsizing
