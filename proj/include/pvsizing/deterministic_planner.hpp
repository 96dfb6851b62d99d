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

// The deterministic sizing MILP: one demand matrix, one PV profile (or a
// probability-weighted set of them for the extensive stochastic form), and
// the investment plus operating cost as objective. Also the self-consumption
// variant that dispatches a fixed system to produce SOC traces for an
// external aging simulator.

#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "pvsizing/planning_model.hpp"

namespace pvsizing {

struct PlanningModel {
  lp::Model model;
  model::FirstStageOperands first;
  model::RecourseBlock recourse;
};

struct PlanningSolution {
  FirstStageDecision decision;
  DispatchPlan plan;
  double objective = 0.0;
  double best_bound = 0.0;
  lp::SolveStatus status = lp::SolveStatus::kOptimal;
  double wall_seconds = 0.0;
};

// Balance rows cannot all be met. Carries the hour with the largest elastic
// slack (zero-based indices).
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, int year, int hour, int scenario, double slack)
      : std::runtime_error(what), year(year), hour(hour), scenario(scenario), slack(slack) {}
  int year;
  int hour;
  int scenario;
  double slack;
};

// First stage plus one recourse block over the given scenarios; objective is
// investment + probability-weighted operating cost.
PlanningModel build_planning_model(const PlanningInstance& instance, const HourlyMatrix& demand,
                                   std::span<const HourlyMatrix> pv, std::span<const double> probabilities,
                                   const model::RecourseOptions& options = {});

// Single-scenario model. Throws std::invalid_argument on shape mismatch.
PlanningModel build_deterministic(const PlanningInstance& instance, const HourlyMatrix& demand,
                                  const HourlyMatrix& pv_profile);

// Solves a model from build_planning_model. Throws InfeasibleError after an
// elastic re-solve when the model is infeasible, std::runtime_error on other
// solver failures.
PlanningSolution solve_planning(const PlanningInstance& instance, const HourlyMatrix& demand,
                                std::span<const HourlyMatrix> pv, std::span<const double> probabilities,
                                const lp::SolveParams& params = {});

PlanningSolution solve_deterministic(const PlanningInstance& instance, const HourlyMatrix& demand,
                                     const HourlyMatrix& pv_profile, const lp::SolveParams& params = {});

// Investment plus probability-weighted operating cost of a given plan.
double evaluate_objective(const PlanningInstance& instance, const FirstStageDecision& decision,
                          const DispatchPlan& plan, std::span<const double> probabilities);

// Dispatch of a fixed PV size and a fixed single battery with DG == 1.
// Returns soc(year, hour) in kWh.
HourlyMatrix solve_self_consumption(const PlanningInstance& instance, const HourlyMatrix& demand,
                                    const HourlyMatrix& pv_profile, double fixed_pv_kw, double fixed_bess_kwh,
                                    const BatteryTech& tech, const lp::SolveParams& params = {});

// year,hour,soc_kwh with one-based year and hour.
std::string soc_trace_csv(const HourlyMatrix& soc);

}  // namespace pvsizing
