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

#include "pvsizing/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "pvsizing/csv.hpp"
#include "random_instance.hpp"

namespace pvsizing::experiment {
namespace {

// One day of 24 hours, four PV scenarios, demand deviating by a third.
PlanningInstance small_day() {
  PlanningInstance inst = testing::flat_instance(24, 1, 1.0, 0.2, 0.02);
  inst.pv.profiles.clear();
  for (int s = 0; s < 4; ++s) {
    HourlyMatrix p(1, 24);
    for (int t = 7; t < 18; ++t) p(0, t) = (0.4 + 0.15 * s) * (1.0 - std::abs(t - 12) / 6.0);
    inst.pv.profiles.push_back(p);
  }
  inst.pv.probabilities.assign(4, 0.25);
  for (int t = 0; t < 24; ++t) {
    inst.demand.nominal(0, t) = 0.6 + 0.05 * t;
    inst.demand.deviation(0, t) = inst.demand.nominal(0, t) / 3.0;
    if (t >= 17 && t < 22) inst.tariff.buy_price[t] = 0.4;
  }
  inst.tariff.sell_price.back() = 0.0;
  return inst;
}

std::vector<double> grid(int from, int to) {
  std::vector<double> g;
  for (int b = from; b <= to; ++b) g.push_back(b);
  return g;
}

TEST(Mcr, FiniteDifferences) {
  const auto series = marginal_cost_of_robustness({0, 1, 2, 3}, {10, 14, 16, 17});
  ASSERT_EQ(series.size(), 4u);
  EXPECT_EQ(series[0].mcr, 0.0);
  EXPECT_EQ(series[1].mcr, 4.0);
  EXPECT_EQ(series[2].mcr, 2.0);
  EXPECT_EQ(series[3].mcr, 1.0);
}

TEST(Mcr, ConstantSeries) {
  for (const auto& p : marginal_cost_of_robustness({2, 3, 4, 5}, {7, 7, 7, 7})) EXPECT_EQ(p.mcr, 0.0);
}

TEST(Mcr, MissingGridPoint) {
  EXPECT_THROW(marginal_cost_of_robustness({0, 1, 3}, {1, 2, 3}), std::invalid_argument);
  SweepResult result;
  for (double b : {0.0, 1.0, 2.0}) {
    SweepRecord r;
    r.budget = b;
    r.scenarios = 1;
    r.ok = b != 1.0;
    result.records.push_back(r);
  }
  EXPECT_THROW(marginal_cost_of_robustness(result, 1), std::invalid_argument);
}

TEST(Summary, EmptySweep) { EXPECT_NE(sweep_summary(SweepResult{}).find("no runs"), std::string::npos); }

TEST(Summary, FailedPointListed) {
  SweepResult result;
  result.tech_ids = {"LFP"};
  SweepRecord good;
  good.budget = 0;
  good.scenarios = 1;
  good.ok = true;
  good.bess_capacity = {0.0};
  SweepRecord bad = good;
  bad.budget = 3;
  bad.ok = false;
  bad.error = "master problem: solver returned time limit";
  result.records = {good, bad};
  const std::string text = sweep_summary(result);
  const auto at = text.find("failures:");
  ASSERT_NE(at, std::string::npos);
  EXPECT_NE(text.find("time limit", at), std::string::npos);
  EXPECT_EQ(result.failures().size(), 1u);
}

TEST(Sweep, RejectsInvalidSpec) {
  SweepSpec spec;
  spec.budgets = {25};
  EXPECT_THROW(run_sweep(small_day(), spec), std::invalid_argument);
  spec.budgets = {0};
  spec.scenario_counts = {5};
  EXPECT_THROW(run_sweep(small_day(), spec), std::invalid_argument);
}

// One 25-point sweep shared by every check below; it is the slow part of
// this suite.
TEST(FullSweep, BudgetGridZeroToTwentyFour) {
  SweepSpec spec;
  spec.budgets = grid(0, 24);
  spec.scenario_counts = {4};
  const SweepResult result = run_sweep(small_day(), spec);

  ASSERT_EQ(result.records.size(), 25u);
  EXPECT_TRUE(result.failures().empty());
  for (std::size_t i = 0; i < result.records.size(); ++i) EXPECT_EQ(result.records[i].budget, double(i));

  const auto series = marginal_cost_of_robustness(result, 4);
  ASSERT_EQ(series.size(), 25u);
  for (std::size_t i = 1; i < series.size(); ++i) {
    EXPECT_GE(series[i].mcr, -1e-4 * std::max(1.0, std::abs(series[i].objective))) << "budget " << i;
  }

  EXPECT_NE(solution_summary(small_day(), result.records[5].trace).find("LFP"), std::string::npos);

  const csv::Table t = csv::parse(sweep_csv(result));
  ASSERT_EQ(t.rows.size(), 25u);
  const auto obj = t.column("objective"), pv = t.column("pv_kw"), per_day = t.column("per_day");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const SweepRecord& r = result.records[i];
    EXPECT_NEAR(t.number(i, obj), r.objective, 1e-12 * std::max(1.0, std::abs(r.objective)));
    EXPECT_NEAR(t.number(i, pv), r.pv_capacity, 1e-12);
    EXPECT_NEAR(t.number(i, per_day), r.objective / result.years, 1e-12 * std::max(1.0, std::abs(r.objective)));
    EXPECT_EQ(t.rows[i][t.column("status")], "ok");
  }

  const auto dir = std::filesystem::temp_directory_path() / "pvsizing_bundle_test";
  std::filesystem::remove_all(dir);
  write_sweep_bundle(result, dir.string(), false);
  for (const char* name : {"sweep.csv", "summary.txt", "plot_runtime.csv", "plot_objective_S4.csv",
                           "plot_capacity_S4.csv", "plot_mcr_S4.csv", "trace_G0_S4.csv", "trace_G24_S4.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  EXPECT_EQ(csv::read((dir / "plot_mcr_S4.csv").string()).rows.size(), 24u);
  const csv::Table runtime = csv::read((dir / "plot_runtime.csv").string());
  for (std::size_t i = 0; i < runtime.rows.size(); ++i) EXPECT_EQ(runtime.number(i, runtime.column("wall_sec")), 0.0);
  std::filesystem::remove_all(dir);
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
  SweepSpec spec;
  spec.budgets = {0, 2, 4};
  spec.scenario_counts = {1, 2};
  spec.workers = 1;
  const std::string one = sweep_csv(run_sweep(small_day(), spec), false);
  spec.workers = 3;
  EXPECT_EQ(sweep_csv(run_sweep(small_day(), spec), false), one);
}

}  // namespace
}  // namespace pvsizing::experiment
