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

// The adversarial stage. For a fixed first stage the adversary picks the
// demand realization inside the budget-of-uncertainty set that maximizes
// the optimal operating cost. The inner minimization is replaced by its LP
// dual, whose objective contains the bilinear products demand * a; with
// demand at an extreme point these become a * V and are linearized with
// index-specific Big-M constants.
//
// Dual variables per (t, y, s): a (balance, free), b <= 0 (PV cap),
// p+ / p- (a * V+ / a * V-). Per (j, t, y, s): c (SOC equation, free),
// d- >= 0 / d+ <= 0 (SOC bounds), f <= 0 (charge cap), g <= 0 (discharge
// cap). V+ / V- are binaries per (t, y), shared by all scenarios.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvsizing/planning_model.hpp"

namespace pvsizing {

using FixedFirstStage = FirstStageDecision;

struct WorstCaseDemand {
  HourlyMatrix realization;
  HourlyMatrix v_plus;   // 0/1
  HourlyMatrix v_minus;  // 0/1
  double objective = 0.0;
};

// nominal + deviation * (v_plus - v_minus)
WorstCaseDemand make_worst_case(const DemandUncertainty& demand, const HourlyMatrix& v_plus,
                                const HourlyMatrix& v_minus);

struct DualSolution {
  Dims dims;
  std::vector<double> a, b, p_plus, p_minus;  // Dims::tys
  std::vector<double> c, d_minus, d_plus, f, g;  // Dims::jtys
};

struct DualSubproblem {
  lp::Model model;
  Dims dims;
  std::vector<lp::VarId> a, b, p_plus, p_minus;
  std::vector<lp::VarId> c, d_minus, d_plus, f, g;
  std::vector<lp::VarId> v_plus, v_minus;  // Dims::ty
};

// Maximization MILP. Throws std::invalid_argument when the decision does not
// match the instance dimensions.
DualSubproblem build_dual_sp(const PlanningInstance& instance, const FixedFirstStage& fixed);

// Big-M for the index: rho_s * buy_price_t.
double dual_big_m(const PlanningInstance& instance, int t, int s);

struct DualSpResult {
  WorstCaseDemand worst;
  DualSolution dual;
  double objective = 0.0;
  double best_bound = 0.0;
  lp::SolveStatus status = lp::SolveStatus::kOptimal;
  double wall_seconds = 0.0;
};

// Throws std::runtime_error if the dual is unbounded (the fixed first stage
// admits no dispatch) or the solver fails without an incumbent.
DualSpResult solve_dual_sp(const PlanningInstance& instance, const FixedFirstStage& fixed,
                           const lp::SolveParams& params = {});

// Largest violation of the dual rows and sign restrictions at `dual`.
double dual_infeasibility(const PlanningInstance& instance, const DualSolution& dual);

// Dual objective at fixed demand, i.e. with PL~ = realization.
double dual_objective(const PlanningInstance& instance, const FixedFirstStage& fixed, const HourlyMatrix& demand,
                      const DualSolution& dual);

struct PrimalSpResult {
  DispatchPlan plan;
  double objective = 0.0;
  double dual_objective = 0.0;  // from the LP duals of the primal solve
};

// Operating-cost LP with every first-stage quantity frozen. Throws
// std::logic_error if it is not optimal; grid purchase is uncapped, so this
// only happens on inconsistent data.
PrimalSpResult solve_primal_sp(const PlanningInstance& instance, const FixedFirstStage& fixed,
                               const HourlyMatrix& demand, const lp::SolveParams& params = {});

// Deviation patterns per year: sum_{k <= budget} C(hours, k) 2^k.
std::uint64_t vertex_count(int hours, double budget);

inline constexpr std::uint64_t kEnumerationLimit = 100000;

// Exhaustive adversary. Years are independent, so each year is enumerated
// on its own; among equal values the lexicographically smallest pattern
// wins, with hours coded 0 = nominal, 1 = up, 2 = down. Throws
// std::invalid_argument above the per-year limit.
WorstCaseDemand enumerate_worst_case(const PlanningInstance& instance, const FixedFirstStage& fixed,
                                     const lp::SolveParams& params = {},
                                     std::uint64_t limit = kEnumerationLimit);

// year,hour,nominal,realization,v_plus,v_minus
std::string worst_case_csv(const DemandUncertainty& demand, const WorstCaseDemand& worst);

// Copy of the instance (and matching decision) restricted to year `y`.
PlanningInstance slice_year(const PlanningInstance& instance, int y);
FirstStageDecision slice_year(const FirstStageDecision& decision, int y);

}  // namespace pvsizing
