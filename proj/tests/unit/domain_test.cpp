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

#include "pvsizing/domain.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "random_instance.hpp"

namespace pvsizing {
namespace {

using testing::flat_instance;

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

TEST(Validate, DeskFixtureIsClean) {
  const auto violations = validate(testing::desk_fixture());
  EXPECT_TRUE(violations.empty()) << violations.front();
}

TEST(Validate, RandomInstancesAreClean) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) EXPECT_TRUE(validate(testing::random_instance(rng)).empty());
}

TEST(Validate, ProbabilitySum) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.pv.profiles.assign(3, HourlyMatrix(1, 4, 0.0));
  inst.pv.probabilities = {0.5, 0.5, 0.1};
  EXPECT_TRUE(mentions(validate(inst), "probabilities sum 1.1 ≠ 1"));
}

TEST(Validate, BudgetAboveHours) {
  PlanningInstance inst = flat_instance(24, 1, 1.0, 0.2, 0.1);
  inst.demand.budget = 30;
  EXPECT_TRUE(mentions(validate(inst), "budget exceeds hours_per_day"));
}

TEST(Validate, GridTooShort) {
  PlanningInstance inst = flat_instance(1, 1, 1.0, 0.2, 0.1);
  EXPECT_TRUE(mentions(validate(inst), "grid.hours_per_day"));
}

TEST(Validate, SellAboveBuy) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.tariff.sell_price[2] = 0.3;
  EXPECT_TRUE(mentions(validate(inst), "buy price below sell price at hour 2"));
}

TEST(Validate, TariffLength) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.tariff.buy_price.pop_back();
  EXPECT_TRUE(mentions(validate(inst), "tariff.buy_price: length 3"));
}

TEST(Validate, PvOutsideUnitInterval) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.pv.profiles[0](0, 1) = 1.5;
  EXPECT_TRUE(mentions(validate(inst), "outside [0, 1]"));
}

TEST(Validate, NightHourNonzero) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.pv.night_hours = {0};
  inst.pv.profiles[0](0, 0) = 0.1;
  EXPECT_TRUE(mentions(validate(inst), "night hour 0"));
}

TEST(Validate, NonPositiveProbability) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.pv.profiles.assign(2, HourlyMatrix(1, 4, 0.0));
  inst.pv.probabilities = {1.0, 0.0};
  EXPECT_TRUE(mentions(validate(inst), "pv.probabilities[1]"));
}

TEST(Validate, NegativeLowerDemand) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.demand.deviation(0, 3) = 1.5;
  EXPECT_TRUE(mentions(validate(inst), "nominal - deviation negative at (year 0, hour 3)"));
}

TEST(Validate, ShapeMismatch) {
  PlanningInstance inst = flat_instance(4, 2, 1.0, 0.2, 0.1);
  inst.demand.deviation = HourlyMatrix(1, 4);
  EXPECT_TRUE(mentions(validate(inst), "demand.deviation: shape"));
}

TEST(Validate, BatteryRules) {
  PlanningInstance inst = flat_instance(4, 2, 1.0, 0.2, 0.1);
  BatteryTech& b = inst.batteries[0];
  b.efficiency = 0.0;
  b.soh_by_year = {0.9, 0.95};
  b.soc_initial_frac = 0.95;
  const auto v = validate(inst);
  EXPECT_TRUE(mentions(v, "batteries[0].efficiency"));
  EXPECT_TRUE(mentions(v, "soh_by_year: increases at year 1"));
  EXPECT_TRUE(mentions(v, "soc_initial_frac"));
}

TEST(Validate, DuplicateAndMissingBatteries) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.batteries.push_back(inst.batteries[0]);
  EXPECT_TRUE(mentions(validate(inst), "duplicate id 'LFP'"));
  inst.batteries.clear();
  EXPECT_TRUE(mentions(validate(inst), "at least one technology"));
}

TEST(Validate, ConfigCaps) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.config.pv_cap_max = 0.0;
  EXPECT_TRUE(mentions(validate(inst), "config.pv_cap_max"));
}

TEST(Validate, IsPure) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.demand.budget = 9;
  const PlanningInstance before = inst;
  const auto a = validate(inst);
  const auto b = validate(inst);
  EXPECT_EQ(a, b);
  EXPECT_EQ(inst.demand.nominal, before.demand.nominal);
  EXPECT_EQ(inst.demand.budget, before.demand.budget);
}

TEST(Validate, RequireValidListsEveryViolation) {
  PlanningInstance inst = flat_instance(4, 1, 1.0, 0.2, 0.1);
  inst.demand.budget = 9;
  inst.config.bess_cap_max = 0.0;
  try {
    require_valid(inst);
    FAIL();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("demand.budget"), std::string::npos);
    EXPECT_NE(msg.find("config.bess_cap_max"), std::string::npos);
  }
}

TEST(Dims, IndexingIsDense) {
  const Dims d{2, 3, 2, 4};
  std::vector<int> seen(d.jtys_size(), 0);
  for (int j = 0; j < 2; ++j)
    for (int s = 0; s < 3; ++s)
      for (int y = 0; y < 2; ++y)
        for (int t = 0; t < 4; ++t) ++seen[d.jtys(j, t, y, s)];
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

TEST(Copies, WithYearsAndScenarios) {
  std::mt19937_64 rng(2);
  testing::RandomShape shape;
  shape.max_years = 2;
  PlanningInstance inst;
  do inst = testing::random_instance(rng, shape);
  while (inst.years() < 2 || inst.scenarios() < 2);
  const PlanningInstance one = with_years(inst, 1);
  EXPECT_TRUE(validate(one).empty());
  EXPECT_EQ(one.demand.nominal(0, 1), inst.demand.nominal(0, 1));
  const PlanningInstance first = with_scenarios(inst, 1);
  EXPECT_DOUBLE_EQ(first.pv.probabilities[0], 1.0);
  EXPECT_THROW(with_years(inst, 3), std::invalid_argument);
  EXPECT_EQ(with_budget(inst, 2).demand.budget, 2);
}

}  // namespace
}  // namespace pvsizing
