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

// Instance generators shared by the unit and acceptance suites.

#pragma once

#include <random>

#include "pvsizing/domain.hpp"
#include "pvsizing/planning_model.hpp"

namespace pvsizing::testing {

struct RandomShape {
  int min_hours = 3, max_hours = 6;
  int max_years = 2;
  int max_scenarios = 2;
  int max_techs = 2;
  int max_budget = 3;
};

// Small valid instance with random tariffs, PV, demand and batteries.
PlanningInstance random_instance(std::mt19937_64& rng, const RandomShape& shape = {});

// Random first stage consistent with the instance: at most one technology,
// w only on the selected one.
FirstStageDecision random_decision(const PlanningInstance& instance, std::mt19937_64& rng);

// Hand-sized instance: T hours, Y years, one scenario of constant PV
// fraction, flat tariff, one battery.
PlanningInstance flat_instance(int hours, int years, double demand, double buy, double sell);

}  // namespace pvsizing::testing
