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

// Shared building blocks for every model in the library. The investment
// decisions and the operational recourse of one demand realization are the
// same rows whether they live in the deterministic planner, the extensive
// stochastic form, a master cut block or the primal subproblem; only which
// first-stage quantities are variables and which are fixed values changes.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "pvsizing/domain.hpp"
#include "pvsizing/solver_bridge.hpp"

namespace pvsizing {

struct FirstStageDecision {
  Dims dims;  // charge_mode layout; scenarios may be 1 for scenario-free models
  double pv_capacity = 0.0;
  std::vector<double> bess_capacity;  // per technology
  std::vector<int> tech_selected;     // per technology, 0/1
  std::vector<int> charge_mode;       // Dims::jtys, 0/1

  [[nodiscard]] int charge(int j, int t, int y, int s) const { return charge_mode[dims.jtys(j, t, y, s)]; }
  // Index of the selected technology, -1 if none.
  [[nodiscard]] int selected_tech() const;
  // Selected technology with nonzero capacity, -1 if none.
  [[nodiscard]] int installed_tech() const;
  [[nodiscard]] double total_bess_capacity() const;
};

// Zero investment, no technology, every w = 0.
FirstStageDecision empty_decision(const Dims& dims);

struct DispatchPlan {
  Dims dims;
  std::vector<double> pg, pbg, psg;  // Dims::tys
  std::vector<double> ch, ds, soc;   // Dims::jtys
  std::vector<double> slack;         // balance slack (up - down), elastic models only
};

namespace model {

// Either a model variable or a fixed number.
struct Operand {
  lp::VarId var;
  double value = 0.0;

  static Operand of(lp::VarId v) { return {v, 0.0}; }
  static Operand fixed(double v) { return {lp::VarId{}, v}; }
  [[nodiscard]] bool is_var() const { return var.index >= 0; }
};

// expr += coef * operand
void accumulate(lp::LinearExpr& expr, const Operand& operand, double coef);

struct FirstStageOperands {
  Dims dims;
  Operand pv_capacity;
  std::vector<Operand> bess_capacity;
  std::vector<Operand> tech_selected;
  std::vector<Operand> charge_mode;  // Dims::jtys

  [[nodiscard]] const Operand& w(int j, int t, int y, int s) const { return charge_mode[dims.jtys(j, t, y, s)]; }
};

// Adds gamma_pv, gamma_bt_j, nu_j and w_{j,t,y,s} with the rows
//   gamma_pv <= cap_pv (as a bound), gamma_bt_j <= nu_j * cap_bt,
//   sum_j nu_j <= 1, w <= nu.
FirstStageOperands add_first_stage(lp::Model& model, const PlanningInstance& instance, int scenarios,
                                   const std::string& prefix = "");

// Binary w_{j,t,y,s} <= nu_j over the given technology selection.
std::vector<Operand> add_charge_mode(lp::Model& model, const Dims& dims, const std::vector<Operand>& tech_selected,
                                     const std::string& prefix = "");

FirstStageOperands fixed_first_stage(const FirstStageDecision& decision);

// C_pv * gamma_pv + sum_j C_bt_j * gamma_bt_j
lp::LinearExpr investment_cost(const PlanningInstance& instance, const FirstStageOperands& first);
double investment_cost(const PlanningInstance& instance, const FirstStageDecision& decision);

struct RecourseOptions {
  std::string prefix;
  bool unit_degradation = false;  // DG == 1 instead of the SOH table
  bool elastic_balance = false;   // nonnegative slack pair on every balance row
};

struct RecourseBlock {
  Dims dims;
  std::vector<lp::VarId> pg, pbg, psg;  // Dims::tys
  std::vector<lp::VarId> ch, ds, soc;   // Dims::jtys
  std::vector<lp::RowId> balance;       // Dims::tys
  std::vector<lp::VarId> slack_up, slack_down;
  // Probability-weighted operating cost of the block.
  lp::LinearExpr cost;
};

// Operational rows for one demand realization and every PV scenario:
//   pg - psg + pbg + sum_j (ds - ch) = PL                      (balance)
//   pg <= PG_s * gamma_pv
//   soc_1 = SOCi * gamma + eff * ch - ds / eff
//   soc_t = soc_{t-1} + eff * ch - ds / eff                    1 < t < T
//   soc_T = SOCl * gamma
//   DG * SOCmin * gamma <= soc <= DG * SOCmax * gamma
//   ch <= PB * w,  ds <= PB * (nu - w)
// `pv` and `probabilities` give the scenarios; first.dims.scenarios must
// match their count.
RecourseBlock add_recourse_block(lp::Model& model, const PlanningInstance& instance, const HourlyMatrix& demand,
                                 std::span<const HourlyMatrix> pv, std::span<const double> probabilities,
                                 const FirstStageOperands& first, const RecourseOptions& options = {});

FirstStageDecision extract_first_stage(const FirstStageOperands& first, const lp::SolveOutcome& outcome);
DispatchPlan extract_dispatch(const RecourseBlock& block, const lp::SolveOutcome& outcome);

}  // namespace model
}  // namespace pvsizing
