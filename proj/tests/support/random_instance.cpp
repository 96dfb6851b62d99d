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

#include "random_instance.hpp"

#include <algorithm>

namespace pvsizing::testing {
namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

PlanningInstance random_instance(std::mt19937_64& rng, const RandomShape& shape) {
  PlanningInstance inst;
  const int T = pick(rng, shape.min_hours, shape.max_hours);
  const int Y = pick(rng, 1, shape.max_years);
  const int S = pick(rng, 1, shape.max_scenarios);
  const int J = pick(rng, 1, shape.max_techs);
  inst.grid = {T, Y};
  for (int t = 0; t < T; ++t) {
    const double sell = uniform(rng, 0.0, 0.1);
    inst.tariff.sell_price.push_back(sell);
    inst.tariff.buy_price.push_back(sell + uniform(rng, 0.0, 0.3));
  }
  double total = 0.0;
  for (int s = 0; s < S; ++s) {
    HourlyMatrix p(Y, T);
    for (double& v : p.data()) v = uniform(rng, 0.0, 1.0);
    inst.pv.profiles.push_back(p);
    inst.pv.probabilities.push_back(uniform(rng, 0.2, 1.0));
    total += inst.pv.probabilities.back();
  }
  for (double& p : inst.pv.probabilities) p /= total;
  inst.demand.nominal = HourlyMatrix(Y, T);
  inst.demand.deviation = HourlyMatrix(Y, T);
  for (int y = 0; y < Y; ++y) {
    for (int t = 0; t < T; ++t) {
      inst.demand.nominal(y, t) = uniform(rng, 0.5, 5.0);
      inst.demand.deviation(y, t) = uniform(rng, 0.0, inst.demand.nominal(y, t));
    }
  }
  inst.demand.budget = pick(rng, 0, std::min(T, shape.max_budget));
  for (int j = 0; j < J; ++j) {
    BatteryTech b;
    b.id = "B" + std::to_string(j + 1);
    b.invest_cost = uniform(rng, 0.05, 0.5);
    b.op_cost = uniform(rng, 0.0, 0.05);
    double soh = uniform(rng, 0.7, 1.0);
    for (int y = 0; y < Y; ++y) {
      b.soh_by_year.push_back(soh);
      soh *= uniform(rng, 0.95, 1.0);
    }
    b.soc_min_frac = uniform(rng, 0.0, 0.2);
    b.soc_max_frac = uniform(rng, 0.8, 1.0);
    b.efficiency = uniform(rng, 0.85, 1.0);
    b.power_rate = uniform(rng, 0.5, 3.0);
    inst.batteries.push_back(b);
  }
  inst.config.pv_invest_cost = uniform(rng, 0.05, 0.5);
  inst.config.pv_op_cost = uniform(rng, 0.0, 0.02);
  inst.config.pv_cap_max = uniform(rng, 2.0, 10.0);
  inst.config.bess_cap_max = uniform(rng, 2.0, 10.0);
  return inst;
}

FirstStageDecision random_decision(const PlanningInstance& instance, std::mt19937_64& rng) {
  FirstStageDecision d = empty_decision(instance.dims());
  d.pv_capacity = uniform(rng, 0.0, instance.config.pv_cap_max);
  const int j = pick(rng, -1, instance.techs() - 1);
  if (j >= 0) {
    d.tech_selected[j] = 1;
    d.bess_capacity[j] = uniform(rng, 0.0, instance.config.bess_cap_max);
    const Dims& dims = d.dims;
    for (int i = 0; i < dims.tys_size(); ++i) d.charge_mode[j * dims.tys_size() + i] = pick(rng, 0, 1);
  }
  return d;
}

PlanningInstance flat_instance(int hours, int years, double demand, double buy, double sell) {
  PlanningInstance inst;
  inst.grid = {hours, years};
  inst.tariff.buy_price.assign(hours, buy);
  inst.tariff.sell_price.assign(hours, sell);
  inst.pv.profiles = {HourlyMatrix(years, hours, 0.0)};
  inst.pv.probabilities = {1.0};
  inst.demand.nominal = HourlyMatrix(years, hours, demand);
  inst.demand.deviation = HourlyMatrix(years, hours, 0.0);
  BatteryTech b;
  b.id = "LFP";
  b.invest_cost = 0.2;
  b.op_cost = 0.01;
  b.soh_by_year.assign(years, 1.0);
  b.soc_min_frac = 0.1;
  b.soc_max_frac = 0.9;
  b.efficiency = 0.95;
  b.power_rate = 2.0;
  inst.batteries = {b};
  inst.config = {0.3, 0.0, 10.0, 10.0};
  return inst;
}

}  // namespace pvsizing::testing
