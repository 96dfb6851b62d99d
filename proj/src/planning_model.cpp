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

#include "pvsizing/planning_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pvsizing {

int FirstStageDecision::selected_tech() const {
  for (std::size_t j = 0; j < tech_selected.size(); ++j) {
    if (tech_selected[j]) return static_cast<int>(j);
  }
  return -1;
}

int FirstStageDecision::installed_tech() const {
  const int j = selected_tech();
  return j >= 0 && bess_capacity[static_cast<std::size_t>(j)] > 0.0 ? j : -1;
}

double FirstStageDecision::total_bess_capacity() const {
  double total = 0.0;
  for (double c : bess_capacity) total += c;
  return total;
}

FirstStageDecision empty_decision(const Dims& dims) {
  FirstStageDecision d;
  d.dims = dims;
  d.bess_capacity.assign(static_cast<std::size_t>(dims.techs), 0.0);
  d.tech_selected.assign(static_cast<std::size_t>(dims.techs), 0);
  d.charge_mode.assign(static_cast<std::size_t>(dims.jtys_size()), 0);
  return d;
}

namespace model {
namespace {

std::string idx(const std::string& prefix, const char* base, int a) {
  return prefix + base + "_" + std::to_string(a);
}

std::string idx(const std::string& prefix, const char* base, int t, int y, int s) {
  return prefix + base + "_s" + std::to_string(s) + "_y" + std::to_string(y) + "_t" + std::to_string(t);
}

std::string idx(const std::string& prefix, const char* base, int j, int t, int y, int s) {
  return prefix + base + "_j" + std::to_string(j) + "_s" + std::to_string(s) + "_y" + std::to_string(y) + "_t" +
         std::to_string(t);
}

}  // namespace

void accumulate(lp::LinearExpr& expr, const Operand& operand, double coef) {
  if (operand.is_var()) {
    expr.add(operand.var, coef);
  } else {
    expr.add_constant(coef * operand.value);
  }
}

std::vector<Operand> add_charge_mode(lp::Model& model, const Dims& dims, const std::vector<Operand>& tech_selected,
                                     const std::string& prefix) {
  std::vector<Operand> w(static_cast<std::size_t>(dims.jtys_size()));
  for (int j = 0; j < dims.techs; ++j) {
    for (int s = 0; s < dims.scenarios; ++s) {
      for (int y = 0; y < dims.years; ++y) {
        for (int t = 0; t < dims.hours; ++t) {
          const lp::VarId v = model.add_binary(idx(prefix, "w", j, t, y, s));
          w[dims.jtys(j, t, y, s)] = Operand::of(v);
          lp::LinearExpr row;
          row.add(v, 1.0);
          accumulate(row, tech_selected[j], -1.0);
          model.add_expr_constraint(row, lp::RowSense::kLessEqual, 0.0, idx(prefix, "wlink", j, t, y, s));
        }
      }
    }
  }
  return w;
}

FirstStageOperands add_first_stage(lp::Model& model, const PlanningInstance& instance, int scenarios,
                                   const std::string& prefix) {
  FirstStageOperands first;
  first.dims = instance.dims();
  first.dims.scenarios = scenarios;
  const int J = instance.techs();
  first.pv_capacity = Operand::of(model.add_variable(0.0, instance.config.pv_cap_max, false, prefix + "gamma_pv"));
  for (int j = 0; j < J; ++j) {
    first.bess_capacity.push_back(Operand::of(model.add_variable(0.0, lp::kInfinity, false, idx(prefix, "gamma_bt", j))));
    first.tech_selected.push_back(Operand::of(model.add_binary(idx(prefix, "nu", j))));
    model.add_constraint({{first.bess_capacity[j].var, 1.0}, {first.tech_selected[j].var, -instance.config.bess_cap_max}},
                         lp::RowSense::kLessEqual, 0.0, idx(prefix, "btcap", j));
  }
  std::vector<lp::Term> one_tech;
  for (const auto& nu : first.tech_selected) one_tech.push_back({nu.var, 1.0});
  model.add_constraint(std::move(one_tech), lp::RowSense::kLessEqual, 1.0, prefix + "one_tech");
  first.charge_mode = add_charge_mode(model, first.dims, first.tech_selected, prefix);
  return first;
}

FirstStageOperands fixed_first_stage(const FirstStageDecision& decision) {
  FirstStageOperands first;
  first.dims = decision.dims;
  first.pv_capacity = Operand::fixed(decision.pv_capacity);
  for (double c : decision.bess_capacity) first.bess_capacity.push_back(Operand::fixed(c));
  for (int nu : decision.tech_selected) first.tech_selected.push_back(Operand::fixed(nu));
  for (int w : decision.charge_mode) first.charge_mode.push_back(Operand::fixed(w));
  return first;
}

lp::LinearExpr investment_cost(const PlanningInstance& instance, const FirstStageOperands& first) {
  lp::LinearExpr cost;
  accumulate(cost, first.pv_capacity, instance.config.pv_invest_cost);
  for (int j = 0; j < instance.techs(); ++j) accumulate(cost, first.bess_capacity[j], instance.batteries[j].invest_cost);
  return cost;
}

double investment_cost(const PlanningInstance& instance, const FirstStageDecision& decision) {
  return investment_cost(instance, fixed_first_stage(decision)).constant;
}

RecourseBlock add_recourse_block(lp::Model& model, const PlanningInstance& instance, const HourlyMatrix& demand,
                                 std::span<const HourlyMatrix> pv, std::span<const double> probabilities,
                                 const FirstStageOperands& first, const RecourseOptions& options) {
  const int T = instance.hours();
  const int Y = instance.years();
  const int J = instance.techs();
  const int S = static_cast<int>(pv.size());
  if (static_cast<int>(probabilities.size()) != S) throw std::invalid_argument("recourse: probability count mismatch");
  if (first.dims.scenarios != S || first.dims.years != Y || first.dims.hours != T || first.dims.techs != J) {
    throw std::invalid_argument("recourse: first-stage dimensions do not match the instance");
  }
  if (demand.years() != Y || demand.hours() != T) throw std::invalid_argument("recourse: demand shape mismatch");
  for (const auto& p : pv) {
    if (p.years() != Y || p.hours() != T) throw std::invalid_argument("recourse: PV profile shape mismatch");
  }

  const std::string& pre = options.prefix;
  RecourseBlock b;
  b.dims = {J, S, Y, T};
  const auto n_tys = static_cast<std::size_t>(b.dims.tys_size());
  const auto n_jtys = static_cast<std::size_t>(b.dims.jtys_size());
  b.pg.resize(n_tys);
  b.pbg.resize(n_tys);
  b.psg.resize(n_tys);
  b.balance.resize(n_tys);
  b.ch.resize(n_jtys);
  b.ds.resize(n_jtys);
  b.soc.resize(n_jtys);

  for (int s = 0; s < S; ++s) {
    const double rho = probabilities[s];
    for (int y = 0; y < Y; ++y) {
      for (int t = 0; t < T; ++t) {
        const int i = b.dims.tys(t, y, s);
        b.pg[i] = model.add_variable(0.0, lp::kInfinity, false, idx(pre, "pg", t, y, s));
        b.pbg[i] = model.add_variable(0.0, lp::kInfinity, false, idx(pre, "pbg", t, y, s));
        b.psg[i] = model.add_variable(0.0, lp::kInfinity, false, idx(pre, "psg", t, y, s));
        b.cost.add(b.pbg[i], rho * instance.tariff.buy_price[t]);
        b.cost.add(b.psg[i], -rho * instance.tariff.sell_price[t]);
        b.cost.add(b.pg[i], rho * instance.config.pv_op_cost);
      }
      for (int j = 0; j < J; ++j) {
        for (int t = 0; t < T; ++t) {
          const int k = b.dims.jtys(j, t, y, s);
          b.ch[k] = model.add_variable(0.0, lp::kInfinity, false, idx(pre, "ch", j, t, y, s));
          b.ds[k] = model.add_variable(0.0, lp::kInfinity, false, idx(pre, "ds", j, t, y, s));
          b.soc[k] = model.add_variable(0.0, lp::kInfinity, false, idx(pre, "soc", j, t, y, s));
          b.cost.add(b.ds[k], rho * instance.batteries[j].op_cost);
        }
      }
    }
  }

  for (int s = 0; s < S; ++s) {
    for (int y = 0; y < Y; ++y) {
      for (int t = 0; t < T; ++t) {
        const int i = b.dims.tys(t, y, s);
        std::vector<lp::Term> row{{b.pg[i], 1.0}, {b.psg[i], -1.0}, {b.pbg[i], 1.0}};
        for (int j = 0; j < J; ++j) {
          const int k = b.dims.jtys(j, t, y, s);
          row.push_back({b.ds[k], 1.0});
          row.push_back({b.ch[k], -1.0});
        }
        if (options.elastic_balance) {
          const lp::VarId up = model.add_variable(0.0, lp::kInfinity, false, idx(pre, "slack_up", t, y, s));
          const lp::VarId down = model.add_variable(0.0, lp::kInfinity, false, idx(pre, "slack_down", t, y, s));
          row.push_back({up, 1.0});
          row.push_back({down, -1.0});
          b.slack_up.push_back(up);
          b.slack_down.push_back(down);
        }
        b.balance[i] = model.add_constraint(std::move(row), lp::RowSense::kEqual, demand(y, t), idx(pre, "bal", t, y, s));

        lp::LinearExpr pv_cap;
        pv_cap.add(b.pg[i], 1.0);
        accumulate(pv_cap, first.pv_capacity, -pv[s](y, t));
        model.add_expr_constraint(pv_cap, lp::RowSense::kLessEqual, 0.0, idx(pre, "pvcap", t, y, s));
      }

      for (int j = 0; j < J; ++j) {
        const BatteryTech& tech = instance.batteries[j];
        const double dg = options.unit_degradation ? 1.0 : tech.soh_by_year[y];
        const double eff = tech.efficiency;
        const Operand& gamma = first.bess_capacity[j];
        for (int t = 0; t < T; ++t) {
          const int k = b.dims.jtys(j, t, y, s);
          lp::LinearExpr rec;
          rec.add(b.soc[k], 1.0);
          if (t == T - 1) {
            accumulate(rec, gamma, -tech.soc_final_frac);
          } else {
            rec.add(b.ch[k], -eff);
            rec.add(b.ds[k], 1.0 / eff);
            if (t == 0) {
              accumulate(rec, gamma, -tech.soc_initial_frac);
            } else {
              rec.add(b.soc[b.dims.jtys(j, t - 1, y, s)], -1.0);
            }
          }
          model.add_expr_constraint(rec, lp::RowSense::kEqual, 0.0, idx(pre, "socbal", j, t, y, s));

          lp::LinearExpr lo;
          lo.add(b.soc[k], 1.0);
          accumulate(lo, gamma, -dg * tech.soc_min_frac);
          model.add_expr_constraint(lo, lp::RowSense::kGreaterEqual, 0.0, idx(pre, "socmin", j, t, y, s));
          lp::LinearExpr hi;
          hi.add(b.soc[k], 1.0);
          accumulate(hi, gamma, -dg * tech.soc_max_frac);
          model.add_expr_constraint(hi, lp::RowSense::kLessEqual, 0.0, idx(pre, "socmax", j, t, y, s));

          const Operand& w = first.w(j, t, y, s);
          lp::LinearExpr chcap;
          chcap.add(b.ch[k], 1.0);
          accumulate(chcap, w, -tech.power_rate);
          model.add_expr_constraint(chcap, lp::RowSense::kLessEqual, 0.0, idx(pre, "chcap", j, t, y, s));
          lp::LinearExpr dscap;
          dscap.add(b.ds[k], 1.0);
          accumulate(dscap, first.tech_selected[j], -tech.power_rate);
          accumulate(dscap, w, tech.power_rate);
          model.add_expr_constraint(dscap, lp::RowSense::kLessEqual, 0.0, idx(pre, "dscap", j, t, y, s));
        }
      }
    }
  }
  return b;
}

FirstStageDecision extract_first_stage(const FirstStageOperands& first, const lp::SolveOutcome& outcome) {
  auto value = [&](const Operand& o) { return o.is_var() ? outcome.value(o.var) : o.value; };
  // Solver output is within tolerance of the integral/feasible point; snap it
  // so downstream models see exact data.
  auto binary = [&](const Operand& o) { return value(o) > 0.5 ? 1 : 0; };
  auto nonneg = [&](const Operand& o) { return std::max(0.0, value(o)); };
  FirstStageDecision d;
  d.dims = first.dims;
  d.pv_capacity = nonneg(first.pv_capacity);
  for (std::size_t j = 0; j < first.bess_capacity.size(); ++j) {
    d.tech_selected.push_back(binary(first.tech_selected[j]));
    d.bess_capacity.push_back(d.tech_selected.back() ? nonneg(first.bess_capacity[j]) : 0.0);
  }
  for (const auto& w : first.charge_mode) d.charge_mode.push_back(binary(w));
  for (int j = 0; j < first.dims.techs; ++j) {
    if (d.tech_selected[j]) continue;
    for (int i = 0; i < first.dims.tys_size(); ++i) d.charge_mode[static_cast<std::size_t>(j * first.dims.tys_size() + i)] = 0;
  }
  return d;
}

DispatchPlan extract_dispatch(const RecourseBlock& block, const lp::SolveOutcome& outcome) {
  auto take = [&](const std::vector<lp::VarId>& ids) {
    std::vector<double> out;
    out.reserve(ids.size());
    for (auto id : ids) out.push_back(outcome.value(id));
    return out;
  };
  DispatchPlan plan;
  plan.dims = block.dims;
  plan.pg = take(block.pg);
  plan.pbg = take(block.pbg);
  plan.psg = take(block.psg);
  plan.ch = take(block.ch);
  plan.ds = take(block.ds);
  plan.soc = take(block.soc);
  for (std::size_t i = 0; i < block.slack_up.size(); ++i) {
    plan.slack.push_back(outcome.value(block.slack_up[i]) - outcome.value(block.slack_down[i]));
  }
  return plan;
}

}  // namespace model
}  // namespace pvsizing
