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

#include "pvsizing/harso_master.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "pvsizing/deterministic_planner.hpp"
#include "random_instance.hpp"

namespace pvsizing {
namespace {

WorstCaseDemand fixed_demand(const HourlyMatrix& demand) {
  WorstCaseDemand wc;
  wc.realization = demand;
  wc.v_plus = HourlyMatrix(demand.years(), demand.hours());
  wc.v_minus = wc.v_plus;
  return wc;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(InitMaster, BinaryCount) {
  PlanningInstance inst = testing::flat_instance(24, 10, 1.0, 0.2, 0.1);
  for (const char* id : {"NMC", "LMO", "LTO"}) {
    inst.batteries.push_back(inst.batteries[0]);
    inst.batteries.back().id = id;
  }
  inst.pv.profiles.assign(4, inst.pv.profiles[0]);
  inst.pv.probabilities.assign(4, 0.25);
  const MasterState state = init_master(inst);
  const int J = 4, T = 24, Y = 10, S = 4;
  EXPECT_EQ(state.model.num_integral(), J + J * T * Y * S);
  EXPECT_EQ(state.model.num_integral(), 3844);
  EXPECT_TRUE(state.blocks.empty());
}

TEST(InitMaster, ThetaBoundOnFixture) {
  const PlanningInstance inst = testing::desk_fixture();
  double max_rate = 0.0;
  for (const auto& b : inst.batteries) max_rate = std::max(max_rate, b.power_rate);
  double expected = 0.0;
  for (int s = 0; s < inst.scenarios(); ++s)
    for (int y = 0; y < inst.years(); ++y)
      for (int t = 0; t < inst.hours(); ++t)
        expected -= inst.pv.probabilities[s] * inst.tariff.sell_price[t] *
                    (inst.pv.profiles[s](y, t) * inst.config.pv_cap_max + max_rate);
  const double bound = theta_lower_bound(inst);
  EXPECT_TRUE(std::isfinite(bound));
  EXPECT_LT(bound, 0.0);
  EXPECT_NEAR(bound, expected, 1e-12);
}

TEST(InitMaster, RejectsInvalidInstanceAndBound) {
  PlanningInstance inst = testing::flat_instance(4, 1, 1.0, 0.2, 0.1);
  MasterOptions options;
  options.theta_min = -INFINITY;
  EXPECT_THROW(init_master(inst, options), std::invalid_argument);
  inst.demand.budget = 9;
  EXPECT_THROW(init_master(inst), std::invalid_argument);
}

TEST(SolveMaster, ZeroBlocksSitsAtThetaMin) {
  MasterState state = init_master(testing::desk_fixture());
  const auto sol = solve_master(state);
  EXPECT_NEAR(sol.theta, state.theta_min, 1e-9);
  EXPECT_NEAR(sol.objective, state.theta_min, 1e-9);
  EXPECT_NEAR(sol.decision.pv_capacity, 0.0, 1e-9);
  EXPECT_NEAR(sol.decision.total_bess_capacity(), 0.0, 1e-9);
}

TEST(SolveMaster, OneBlockEqualsDeterministic) {
  std::mt19937_64 rng(29);
  testing::RandomShape shape;
  shape.max_scenarios = 1;
  for (int trial = 0; trial < 10; ++trial) {
    const PlanningInstance inst = testing::random_instance(rng, shape);
    MasterState state = init_master(inst);
    add_cut_block(state, fixed_demand(inst.demand.nominal));
    const auto master = solve_master(state);
    const auto det = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
    EXPECT_LT(rel(master.objective, det.objective), 1e-6) << "trial " << trial;
  }
}

TEST(SolveMaster, OneBlockEqualsExtensiveForm) {
  std::mt19937_64 rng(31);
  testing::RandomShape shape;
  shape.max_scenarios = 3;
  for (int trial = 0; trial < 10; ++trial) {
    const PlanningInstance inst = testing::random_instance(rng, shape);
    MasterState state = init_master(inst);
    add_cut_block(state, fixed_demand(inst.demand.nominal));
    const auto master = solve_master(state);
    const auto ext = solve_planning(inst, inst.demand.nominal, inst.pv.profiles, inst.pv.probabilities);
    EXPECT_LT(rel(master.objective, ext.objective), 1e-6) << "trial " << trial;
  }
}

TEST(SolveMaster, DuplicateBlockIsRedundant) {
  const PlanningInstance inst = with_years(testing::desk_fixture(), 1);
  MasterState state = init_master(inst);
  EXPECT_TRUE(add_cut_block(state, fixed_demand(inst.demand.nominal)));
  const double once = solve_master(state).objective;
  EXPECT_FALSE(add_cut_block(state, fixed_demand(inst.demand.nominal)));
  ASSERT_EQ(state.warnings.size(), 1u);
  EXPECT_NE(state.warnings[0].find("repeats block 1"), std::string::npos);
  EXPECT_EQ(state.blocks.size(), 2u);
  EXPECT_LT(rel(solve_master(state).objective, once), 1e-6);
}

TEST(SolveMaster, ZeroDemandBlockAllowsSelling) {
  const PlanningInstance inst = with_years(testing::desk_fixture(), 1);
  MasterState state = init_master(inst);
  add_cut_block(state, fixed_demand(HourlyMatrix(1, inst.hours())));
  EXPECT_LE(solve_master(state).theta, 1e-9);
}

TEST(SolveMaster, ZeroCapsMeansPureGridPurchase) {
  std::mt19937_64 rng(37);
  PlanningInstance inst = testing::flat_instance(6, 2, 0.0, 0.2, 0.1);
  inst.pv.profiles[0] = HourlyMatrix(2, 6, 0.6);
  // Discharge dearer than any purchase, so no flow through the battery pays.
  inst.batteries[0].op_cost = 0.3;
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (double& v : inst.demand.nominal.data()) v = u(rng);
  for (double& p : inst.tariff.buy_price) p = u(rng) / 20.0 + 0.1;
  MasterState state = init_master(inst);
  state.model.set_variable_bounds(state.first.pv_capacity.var, 0.0, 0.0);
  state.model.set_variable_bounds(state.first.bess_capacity[0].var, 0.0, 0.0);
  add_cut_block(state, fixed_demand(inst.demand.nominal));
  double expected = 0.0;
  for (int y = 0; y < 2; ++y)
    for (int t = 0; t < 6; ++t) expected += inst.tariff.buy_price[t] * inst.demand.nominal(y, t);
  const auto sol = solve_master(state);
  EXPECT_NEAR(sol.theta, expected, 1e-6);
  EXPECT_NEAR(sol.objective, expected, 1e-6);
}

TEST(SolveMaster, CutsOnlyTighten) {
  std::mt19937_64 rng(41);
  const PlanningInstance inst = testing::random_instance(rng);
  MasterState state = init_master(inst);
  double previous = solve_master(state).objective;
  for (int k = 0; k < 4; ++k) {
    HourlyMatrix demand = inst.demand.nominal;
    for (int y = 0; y < inst.years(); ++y) {
      const int t = static_cast<int>(rng() % inst.hours());
      demand(y, t) += inst.demand.deviation(y, t);
    }
    add_cut_block(state, fixed_demand(demand));
    const auto sol = solve_master(state);
    EXPECT_GE(sol.objective, previous - 1e-7);
    previous = sol.objective;
    // Every cut holds at the optimum and the first stage is consistent.
    EXPECT_LE(std::accumulate(sol.decision.tech_selected.begin(), sol.decision.tech_selected.end(), 0), 1);
    for (int j = 0; j < inst.techs(); ++j) {
      EXPECT_LE(sol.decision.bess_capacity[j], sol.decision.tech_selected[j] * inst.config.bess_cap_max + 1e-6);
    }
  }
}

TEST(SolveMaster, IncrementalMatchesFullRebuild) {
  std::mt19937_64 rng(43);
  const PlanningInstance inst = testing::random_instance(rng);
  MasterOptions incremental;
  incremental.split_by_technology = false;
  MasterOptions rebuild = incremental;
  rebuild.full_rebuild = true;
  MasterState a = init_master(inst, incremental), b = init_master(inst, rebuild);
  for (int k = 0; k < 3; ++k) {
    HourlyMatrix demand = inst.demand.nominal;
    demand(0, k % inst.hours()) += inst.demand.deviation(0, k % inst.hours());
    add_cut_block(a, fixed_demand(demand));
    add_cut_block(b, fixed_demand(demand));
    EXPECT_LT(rel(solve_master(a).objective, solve_master(b).objective), 1e-7);
  }
}

TEST(SolveMaster, SplitMatchesSingleMilp) {
  std::mt19937_64 rng(44);
  std::bernoulli_distribution coin(0.5);
  MasterOptions single;
  single.split_by_technology = false;
  for (int trial = 0; trial < 25; ++trial) {
    SCOPED_TRACE("trial " + std::to_string(trial));
    const PlanningInstance inst = testing::random_instance(rng);
    MasterState split = init_master(inst), whole = init_master(inst, single);
    std::vector<HourlyMatrix> demands;
    for (int k = 0; k < 3; ++k) {
      HourlyMatrix v_plus(inst.years(), inst.hours()), v_minus = v_plus;
      for (double& v : v_plus.data()) v = coin(rng) ? 1.0 : 0.0;
      const auto wc = make_worst_case(inst.demand, v_plus, v_minus);
      demands.push_back(wc.realization);
      add_cut_block(split, wc);
      add_cut_block(whole, wc);
    }
    const auto a = solve_master(split);
    const auto b = solve_master(whole);
    EXPECT_LT(rel(a.objective, b.objective), 1e-6);
    EXPECT_LT(rel(a.best_bound, b.best_bound), 1e-6);
    // The rounded charge modes must support the recourse the master priced.
    double worst = -lp::kInfinity;
    for (const auto& d : demands) worst = std::max(worst, solve_primal_sp(inst, a.decision, d).objective);
    EXPECT_LT(rel(model::investment_cost(inst, a.decision) + worst, a.objective), 1e-6);
  }
}

}  // namespace
}  // namespace pvsizing
