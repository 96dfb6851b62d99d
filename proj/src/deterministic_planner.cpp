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

#include <cmath>
#include <sstream>

#include "pvsizing/csv.hpp"

namespace pvsizing {
namespace {

void check_shapes(const PlanningInstance& instance, const HourlyMatrix& demand, std::span<const HourlyMatrix> pv,
                  std::span<const double> probabilities) {
  auto fits = [&](const HourlyMatrix& m) { return m.years() == instance.years() && m.hours() == instance.hours(); };
  if (!fits(demand)) throw std::invalid_argument("demand matrix does not match years x hours_per_day");
  if (pv.empty() || pv.size() != probabilities.size()) {
    throw std::invalid_argument("PV profiles and probabilities must be non-empty and of equal length");
  }
  for (const auto& p : pv) {
    if (!fits(p)) throw std::invalid_argument("PV profile does not match years x hours_per_day");
  }
}

[[noreturn]] void diagnose_infeasible(const PlanningInstance& instance, const HourlyMatrix& demand,
                                      std::span<const HourlyMatrix> pv, std::span<const double> probabilities,
                                      const lp::SolveParams& params) {
  model::RecourseOptions options;
  options.elastic_balance = true;
  PlanningModel pm = build_planning_model(instance, demand, pv, probabilities, options);
  std::vector<lp::Term> slack;
  for (auto v : pm.recourse.slack_up) slack.push_back({v, 1.0});
  for (auto v : pm.recourse.slack_down) slack.push_back({v, 1.0});
  pm.model.set_objective(lp::ObjSense::kMinimize, std::move(slack));
  const auto out = lp::solve(pm.model, params);
  if (!out.has_primal()) {
    throw InfeasibleError("model infeasible beyond the balance rows (" + std::string(lp::to_string(out.status)) + ")",
                          -1, -1, -1, 0.0);
  }
  const Dims& d = pm.recourse.dims;
  int best = 0;
  double worst = -1.0;
  for (int i = 0; i < d.tys_size(); ++i) {
    const double s = out.value(pm.recourse.slack_up[i]) + out.value(pm.recourse.slack_down[i]);
    if (s > worst) {
      worst = s;
      best = i;
    }
  }
  const int t = best % d.hours;
  const int y = (best / d.hours) % d.years;
  const int s = best / d.ty_size();
  std::ostringstream msg;
  msg << "infeasible: balance at year " << y + 1 << ", hour " << t + 1 << ", scenario " << s + 1
      << " needs slack " << worst << " kWh";
  throw InfeasibleError(msg.str(), y, t, s, worst);
}

}  // namespace

PlanningModel build_planning_model(const PlanningInstance& instance, const HourlyMatrix& demand,
                                   std::span<const HourlyMatrix> pv, std::span<const double> probabilities,
                                   const model::RecourseOptions& options) {
  check_shapes(instance, demand, pv, probabilities);
  PlanningModel pm;
  pm.first = model::add_first_stage(pm.model, instance, static_cast<int>(pv.size()), options.prefix);
  pm.recourse = model::add_recourse_block(pm.model, instance, demand, pv, probabilities, pm.first, options);
  lp::LinearExpr objective = model::investment_cost(instance, pm.first);
  objective.add(pm.recourse.cost);
  pm.model.set_objective_expr(lp::ObjSense::kMinimize, objective);
  return pm;
}

PlanningModel build_deterministic(const PlanningInstance& instance, const HourlyMatrix& demand,
                                  const HourlyMatrix& pv_profile) {
  const double one = 1.0;
  return build_planning_model(instance, demand, std::span(&pv_profile, 1), std::span(&one, 1));
}

PlanningSolution solve_planning(const PlanningInstance& instance, const HourlyMatrix& demand,
                                std::span<const HourlyMatrix> pv, std::span<const double> probabilities,
                                const lp::SolveParams& params) {
  PlanningModel pm = build_planning_model(instance, demand, pv, probabilities);
  const auto out = lp::solve(pm.model, params);
  if (out.status == lp::SolveStatus::kInfeasible) diagnose_infeasible(instance, demand, pv, probabilities, params);
  if (!out.has_primal()) {
    throw std::runtime_error("planning model: solver returned " + std::string(lp::to_string(out.status)) +
                             (out.diagnostic.empty() ? "" : ": " + out.diagnostic));
  }
  PlanningSolution sol;
  sol.decision = model::extract_first_stage(pm.first, out);
  sol.plan = model::extract_dispatch(pm.recourse, out);
  sol.objective = out.objective;
  sol.best_bound = out.best_bound;
  sol.status = out.status;
  sol.wall_seconds = out.wall_seconds;
  return sol;
}

PlanningSolution solve_deterministic(const PlanningInstance& instance, const HourlyMatrix& demand,
                                     const HourlyMatrix& pv_profile, const lp::SolveParams& params) {
  const double one = 1.0;
  return solve_planning(instance, demand, std::span(&pv_profile, 1), std::span(&one, 1), params);
}

double evaluate_objective(const PlanningInstance& instance, const FirstStageDecision& decision,
                          const DispatchPlan& plan, std::span<const double> probabilities) {
  const Dims& d = plan.dims;
  double total = model::investment_cost(instance, decision);
  for (int s = 0; s < d.scenarios; ++s) {
    for (int y = 0; y < d.years; ++y) {
      for (int t = 0; t < d.hours; ++t) {
        const int i = d.tys(t, y, s);
        double op = instance.tariff.buy_price[t] * plan.pbg[i] - instance.tariff.sell_price[t] * plan.psg[i] +
                    instance.config.pv_op_cost * plan.pg[i];
        for (int j = 0; j < d.techs; ++j) op += instance.batteries[j].op_cost * plan.ds[d.jtys(j, t, y, s)];
        total += probabilities[s] * op;
      }
    }
  }
  return total;
}

HourlyMatrix solve_self_consumption(const PlanningInstance& instance, const HourlyMatrix& demand,
                                    const HourlyMatrix& pv_profile, double fixed_pv_kw, double fixed_bess_kwh,
                                    const BatteryTech& tech, const lp::SolveParams& params) {
  if (!(fixed_pv_kw >= 0.0) || !(fixed_bess_kwh >= 0.0)) {
    throw std::invalid_argument("self-consumption: fixed capacities must be >= 0");
  }
  PlanningInstance single = instance;
  single.batteries = {tech};
  const double one = 1.0;
  check_shapes(single, demand, std::span(&pv_profile, 1), std::span(&one, 1));

  lp::Model m;
  model::FirstStageOperands first;
  first.dims = single.dims();
  first.dims.scenarios = 1;
  first.pv_capacity = model::Operand::fixed(fixed_pv_kw);
  first.bess_capacity = {model::Operand::fixed(fixed_bess_kwh)};
  first.tech_selected = {model::Operand::fixed(1.0)};
  first.charge_mode = model::add_charge_mode(m, first.dims, first.tech_selected);
  model::RecourseOptions options;
  options.unit_degradation = true;
  const auto block = model::add_recourse_block(m, single, demand, std::span(&pv_profile, 1), std::span(&one, 1), first,
                                               options);
  m.set_objective_expr(lp::ObjSense::kMinimize, block.cost);
  const auto out = lp::solve(m, params);
  if (!out.has_primal()) {
    throw std::runtime_error("self-consumption: fixed sizing not dispatchable (" +
                             std::string(lp::to_string(out.status)) + ")");
  }
  HourlyMatrix soc(single.years(), single.hours());
  for (int y = 0; y < single.years(); ++y) {
    for (int t = 0; t < single.hours(); ++t) soc(y, t) = out.value(block.soc[block.dims.jtys(0, t, y, 0)]);
  }
  return soc;
}

std::string soc_trace_csv(const HourlyMatrix& soc) {
  csv::Writer w({"year", "hour", "soc_kwh"});
  for (int y = 0; y < soc.years(); ++y) {
    for (int t = 0; t < soc.hours(); ++t) w.row({double(y + 1), double(t + 1), soc(y, t)});
  }
  return w.str();
}

}  // namespace pvsizing
