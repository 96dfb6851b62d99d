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

#include "pvsizing/robust_subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "pvsizing/csv.hpp"

namespace pvsizing {
namespace {

using lp::RowSense;
using lp::VarId;

std::string name(const char* base, int t, int y, int s) {
  return std::string(base) + "_s" + std::to_string(s) + "_y" + std::to_string(y) + "_t" + std::to_string(t);
}

std::string name(const char* base, int j, int t, int y, int s) {
  return std::string(base) + "_j" + std::to_string(j) + "_s" + std::to_string(s) + "_y" + std::to_string(y) + "_t" +
         std::to_string(t);
}

void check_fixed(const PlanningInstance& instance, const FixedFirstStage& fixed) {
  Dims want = instance.dims();
  if (!(fixed.dims == want) || static_cast<int>(fixed.bess_capacity.size()) != want.techs ||
      static_cast<int>(fixed.tech_selected.size()) != want.techs ||
      static_cast<int>(fixed.charge_mode.size()) != want.jtys_size()) {
    throw std::invalid_argument("fixed first stage does not match the instance dimensions");
  }
}

// Right-hand sides of the primal rows that multiply each dual variable,
// excluding the demand term.
struct DualCosts {
  double b, c_first, c_last, d_minus, d_plus, f, g;
};

DualCosts dual_costs(const PlanningInstance& instance, const FixedFirstStage& fixed, int j, int t, int y, int s) {
  const BatteryTech& tech = instance.batteries[j];
  const double gamma = fixed.bess_capacity[j];
  const double dg = tech.soh_by_year[y];
  const int w = fixed.charge(j, t, y, s);
  DualCosts k{};
  k.c_first = tech.soc_initial_frac * gamma;
  k.c_last = tech.soc_final_frac * gamma;
  k.d_minus = dg * tech.soc_min_frac * gamma;
  k.d_plus = dg * tech.soc_max_frac * gamma;
  k.f = tech.power_rate * w;
  k.g = tech.power_rate * (fixed.tech_selected[j] - w);
  return k;
}

}  // namespace

WorstCaseDemand make_worst_case(const DemandUncertainty& demand, const HourlyMatrix& v_plus,
                                const HourlyMatrix& v_minus) {
  WorstCaseDemand w;
  w.realization = demand.nominal;
  w.v_plus = v_plus;
  w.v_minus = v_minus;
  for (int y = 0; y < demand.nominal.years(); ++y) {
    for (int t = 0; t < demand.nominal.hours(); ++t) {
      w.realization(y, t) = demand.nominal(y, t) + demand.deviation(y, t) * v_plus(y, t) -
                            demand.deviation(y, t) * v_minus(y, t);
    }
  }
  return w;
}

double dual_big_m(const PlanningInstance& instance, int t, int s) {
  return instance.pv.probabilities[s] * instance.tariff.buy_price[t];
}

DualSubproblem build_dual_sp(const PlanningInstance& instance, const FixedFirstStage& fixed) {
  check_fixed(instance, fixed);
  const int T = instance.hours();
  const int Y = instance.years();
  const int J = instance.techs();
  const int S = instance.scenarios();
  const double inf = lp::kInfinity;

  DualSubproblem sp;
  sp.dims = instance.dims();
  const Dims& d = sp.dims;
  auto& m = sp.model;
  sp.a.resize(d.tys_size());
  sp.b.resize(d.tys_size());
  sp.p_plus.resize(d.tys_size());
  sp.p_minus.resize(d.tys_size());
  for (auto* v : {&sp.c, &sp.d_minus, &sp.d_plus, &sp.f, &sp.g}) v->resize(d.jtys_size());
  sp.v_plus.resize(d.ty_size());
  sp.v_minus.resize(d.ty_size());

  lp::LinearExpr obj;
  for (int y = 0; y < Y; ++y) {
    for (int t = 0; t < T; ++t) {
      sp.v_plus[d.ty(t, y)] = m.add_binary(name("vp", t, y, 0));
      sp.v_minus[d.ty(t, y)] = m.add_binary(name("vm", t, y, 0));
    }
  }
  for (int s = 0; s < S; ++s) {
    for (int y = 0; y < Y; ++y) {
      for (int t = 0; t < T; ++t) {
        const int i = d.tys(t, y, s);
        const double M = dual_big_m(instance, t, s);
        sp.a[i] = m.add_variable(-inf, inf, false, name("a", t, y, s));
        sp.b[i] = m.add_variable(-inf, 0.0, false, name("b", t, y, s));
        sp.p_plus[i] = m.add_variable(0.0, M, false, name("pp", t, y, s));
        sp.p_minus[i] = m.add_variable(0.0, M, false, name("pm", t, y, s));
        obj.add(sp.a[i], instance.demand.nominal(y, t));
        obj.add(sp.p_plus[i], instance.demand.deviation(y, t));
        obj.add(sp.p_minus[i], -instance.demand.deviation(y, t));
        obj.add(sp.b[i], instance.pv.profiles[s](y, t) * fixed.pv_capacity);
        for (int j = 0; j < J; ++j) {
          const int k = d.jtys(j, t, y, s);
          const DualCosts cost = dual_costs(instance, fixed, j, t, y, s);
          sp.c[k] = m.add_variable(-inf, inf, false, name("c", j, t, y, s));
          sp.d_minus[k] = m.add_variable(0.0, inf, false, name("dm", j, t, y, s));
          sp.d_plus[k] = m.add_variable(-inf, 0.0, false, name("dp", j, t, y, s));
          sp.f[k] = m.add_variable(-inf, 0.0, false, name("f", j, t, y, s));
          sp.g[k] = m.add_variable(-inf, 0.0, false, name("g", j, t, y, s));
          if (t == 0) obj.add(sp.c[k], cost.c_first);
          if (t == T - 1) obj.add(sp.c[k], cost.c_last);
          obj.add(sp.d_minus[k], cost.d_minus);
          obj.add(sp.d_plus[k], cost.d_plus);
          obj.add(sp.f[k], cost.f);
          obj.add(sp.g[k], cost.g);
        }
      }
    }
  }
  m.set_objective_expr(lp::ObjSense::kMaximize, obj);

  // Dual feasibility: one row per primal column.
  for (int s = 0; s < S; ++s) {
    const double rho = instance.pv.probabilities[s];
    for (int y = 0; y < Y; ++y) {
      for (int t = 0; t < T; ++t) {
        const int i = d.tys(t, y, s);
        m.add_constraint({{sp.a[i], 1.0}, {sp.b[i], 1.0}}, RowSense::kLessEqual, rho * instance.config.pv_op_cost,
                         name("col_pg", t, y, s));
        m.add_constraint({{sp.a[i], 1.0}}, RowSense::kLessEqual, rho * instance.tariff.buy_price[t],
                         name("col_pbg", t, y, s));
        m.add_constraint({{sp.a[i], -1.0}}, RowSense::kLessEqual, -rho * instance.tariff.sell_price[t],
                         name("col_psg", t, y, s));
        for (int j = 0; j < J; ++j) {
          const BatteryTech& tech = instance.batteries[j];
          const double eff = tech.efficiency;
          const int k = d.jtys(j, t, y, s);
          const bool recursive = t < T - 1;
          std::vector<lp::Term> ch{{sp.a[i], -1.0}, {sp.f[k], 1.0}};
          std::vector<lp::Term> ds{{sp.a[i], 1.0}, {sp.g[k], 1.0}};
          if (recursive) {
            ch.push_back({sp.c[k], -eff});
            ds.push_back({sp.c[k], 1.0 / eff});
          }
          m.add_constraint(std::move(ch), RowSense::kLessEqual, 0.0, name("col_ch", j, t, y, s));
          m.add_constraint(std::move(ds), RowSense::kLessEqual, rho * tech.op_cost, name("col_ds", j, t, y, s));
          std::vector<lp::Term> soc{{sp.c[k], 1.0}, {sp.d_minus[k], 1.0}, {sp.d_plus[k], 1.0}};
          if (t + 1 <= T - 2) soc.push_back({sp.c[d.jtys(j, t + 1, y, s)], -1.0});
          m.add_constraint(std::move(soc), RowSense::kLessEqual, 0.0, name("col_soc", j, t, y, s));
        }
      }
    }
  }

  // p = a * V, exact because 0 <= rho * sell <= a <= M.
  for (int s = 0; s < S; ++s) {
    for (int y = 0; y < Y; ++y) {
      for (int t = 0; t < T; ++t) {
        const int i = d.tys(t, y, s);
        const double M = dual_big_m(instance, t, s);
        const VarId a = sp.a[i];
        for (int dir = 0; dir < 2; ++dir) {
          const VarId p = dir == 0 ? sp.p_plus[i] : sp.p_minus[i];
          const VarId v = dir == 0 ? sp.v_plus[d.ty(t, y)] : sp.v_minus[d.ty(t, y)];
          const char* tag = dir == 0 ? "lp" : "lm";
          m.add_constraint({{p, 1.0}, {v, -M}}, RowSense::kLessEqual, 0.0, name(tag, t, y, s) + "_1");
          m.add_constraint({{p, 1.0}, {a, -1.0}, {v, -M}}, RowSense::kGreaterEqual, -M, name(tag, t, y, s) + "_2");
          m.add_constraint({{p, 1.0}, {a, -1.0}, {v, M}}, RowSense::kLessEqual, M, name(tag, t, y, s) + "_3");
          m.add_constraint({{p, 1.0}, {v, M}}, RowSense::kGreaterEqual, 0.0, name(tag, t, y, s) + "_4");
        }
      }
    }
  }

  for (int y = 0; y < Y; ++y) {
    std::vector<lp::Term> budget;
    for (int t = 0; t < T; ++t) {
      const VarId vp = sp.v_plus[d.ty(t, y)];
      const VarId vm = sp.v_minus[d.ty(t, y)];
      budget.push_back({vp, 1.0});
      budget.push_back({vm, 1.0});
      m.add_constraint({{vp, 1.0}, {vm, 1.0}}, RowSense::kLessEqual, 1.0, name("onedir", t, y, 0));
    }
    m.add_constraint(std::move(budget), RowSense::kLessEqual, instance.demand.budget, "budget_y" + std::to_string(y));
  }
  return sp;
}

namespace {

DualSpResult solve_dual_sp_monolithic(const PlanningInstance& instance, const FixedFirstStage& fixed,
                                      const lp::SolveParams& params) {
  const DualSubproblem sp = build_dual_sp(instance, fixed);
  const auto out = lp::solve(sp.model, params);
  if (out.status == lp::SolveStatus::kUnbounded || out.status == lp::SolveStatus::kInfeasible) {
    std::string hint;
    try {
      solve_primal_sp(instance, fixed, instance.demand.nominal, params);
    } catch (const std::exception& e) {
      hint = std::string(": ") + e.what();
    }
    throw std::runtime_error("dual subproblem " + std::string(lp::to_string(out.status)) +
                             "; the fixed first stage admits no dispatch" + hint);
  }
  if (!out.has_primal()) {
    throw std::runtime_error("dual subproblem: solver returned " + std::string(lp::to_string(out.status)) +
                             (out.diagnostic.empty() ? "" : ": " + out.diagnostic));
  }
  const Dims& d = sp.dims;
  DualSpResult r;
  r.objective = out.objective;
  r.best_bound = out.best_bound;
  r.status = out.status;
  r.wall_seconds = out.wall_seconds;
  HourlyMatrix vp(d.years, d.hours), vm(d.years, d.hours);
  for (int y = 0; y < d.years; ++y) {
    for (int t = 0; t < d.hours; ++t) {
      vp(y, t) = out.value(sp.v_plus[d.ty(t, y)]) > 0.5 ? 1.0 : 0.0;
      vm(y, t) = out.value(sp.v_minus[d.ty(t, y)]) > 0.5 ? 1.0 : 0.0;
    }
  }
  r.worst = make_worst_case(instance.demand, vp, vm);
  r.worst.objective = out.objective;
  auto take = [&](const std::vector<VarId>& ids) {
    std::vector<double> v;
    v.reserve(ids.size());
    for (auto id : ids) v.push_back(out.value(id));
    return v;
  };
  r.dual.dims = d;
  r.dual.a = take(sp.a);
  r.dual.b = take(sp.b);
  r.dual.p_plus = take(sp.p_plus);
  r.dual.p_minus = take(sp.p_minus);
  r.dual.c = take(sp.c);
  r.dual.d_minus = take(sp.d_minus);
  r.dual.d_plus = take(sp.d_plus);
  r.dual.f = take(sp.f);
  r.dual.g = take(sp.g);
  return r;
}

// Copies the year-0 entries of a one-year vector into year `y` of `full`.
void place_year(std::vector<double>& full, const Dims& full_dims, const std::vector<double>& part,
                const Dims& part_dims, int y, bool per_tech) {
  const int techs = per_tech ? full_dims.techs : 1;
  for (int j = 0; j < techs; ++j) {
    for (int s = 0; s < full_dims.scenarios; ++s) {
      for (int t = 0; t < full_dims.hours; ++t) {
        const int to = per_tech ? full_dims.jtys(j, t, y, s) : full_dims.tys(t, y, s);
        const int from = per_tech ? part_dims.jtys(j, t, 0, s) : part_dims.tys(t, 0, s);
        full[to] = part[from];
      }
    }
  }
}

}  // namespace

// Years share no rows and the budget applies per year, so the dual
// separates into one MILP per year.
DualSpResult solve_dual_sp(const PlanningInstance& instance, const FixedFirstStage& fixed,
                           const lp::SolveParams& params) {
  if (instance.years() == 1) return solve_dual_sp_monolithic(instance, fixed, params);
  check_fixed(instance, fixed);
  const Dims d = instance.dims();
  DualSpResult r;
  r.dual.dims = d;
  for (auto* v : {&r.dual.a, &r.dual.b, &r.dual.p_plus, &r.dual.p_minus}) v->assign(d.tys_size(), 0.0);
  for (auto* v : {&r.dual.c, &r.dual.d_minus, &r.dual.d_plus, &r.dual.f, &r.dual.g}) v->assign(d.jtys_size(), 0.0);
  HourlyMatrix vp(d.years, d.hours), vm(d.years, d.hours);
  for (int y = 0; y < d.years; ++y) {
    const DualSpResult part = solve_dual_sp_monolithic(slice_year(instance, y), slice_year(fixed, y), params);
    r.objective += part.objective;
    r.best_bound += part.best_bound;
    r.wall_seconds += part.wall_seconds;
    if (part.status != lp::SolveStatus::kOptimal) r.status = part.status;
    for (int t = 0; t < d.hours; ++t) {
      vp(y, t) = part.worst.v_plus(0, t);
      vm(y, t) = part.worst.v_minus(0, t);
    }
    const Dims& pd = part.dual.dims;
    place_year(r.dual.a, d, part.dual.a, pd, y, false);
    place_year(r.dual.b, d, part.dual.b, pd, y, false);
    place_year(r.dual.p_plus, d, part.dual.p_plus, pd, y, false);
    place_year(r.dual.p_minus, d, part.dual.p_minus, pd, y, false);
    place_year(r.dual.c, d, part.dual.c, pd, y, true);
    place_year(r.dual.d_minus, d, part.dual.d_minus, pd, y, true);
    place_year(r.dual.d_plus, d, part.dual.d_plus, pd, y, true);
    place_year(r.dual.f, d, part.dual.f, pd, y, true);
    place_year(r.dual.g, d, part.dual.g, pd, y, true);
  }
  r.worst = make_worst_case(instance.demand, vp, vm);
  r.worst.objective = r.objective;
  return r;
}

double dual_infeasibility(const PlanningInstance& instance, const DualSolution& dual) {
  const Dims& d = dual.dims;
  double worst = 0.0;
  auto le = [&](double lhs, double rhs) { worst = std::max(worst, lhs - rhs); };
  for (int s = 0; s < d.scenarios; ++s) {
    const double rho = instance.pv.probabilities[s];
    for (int y = 0; y < d.years; ++y) {
      for (int t = 0; t < d.hours; ++t) {
        const int i = d.tys(t, y, s);
        le(dual.b[i], 0.0);
        le(dual.a[i] + dual.b[i], rho * instance.config.pv_op_cost);
        le(dual.a[i], rho * instance.tariff.buy_price[t]);
        le(-dual.a[i], -rho * instance.tariff.sell_price[t]);
        for (int j = 0; j < d.techs; ++j) {
          const int k = d.jtys(j, t, y, s);
          const double eff = instance.batteries[j].efficiency;
          const bool recursive = t < d.hours - 1;
          le(-dual.d_minus[k], 0.0);
          le(dual.d_plus[k], 0.0);
          le(dual.f[k], 0.0);
          le(dual.g[k], 0.0);
          le(-dual.a[i] - (recursive ? eff * dual.c[k] : 0.0) + dual.f[k], 0.0);
          le(dual.a[i] + (recursive ? dual.c[k] / eff : 0.0) + dual.g[k], rho * instance.batteries[j].op_cost);
          const double next = t + 1 <= d.hours - 2 ? dual.c[d.jtys(j, t + 1, y, s)] : 0.0;
          le(dual.c[k] - next + dual.d_minus[k] + dual.d_plus[k], 0.0);
        }
      }
    }
  }
  return worst;
}

double dual_objective(const PlanningInstance& instance, const FixedFirstStage& fixed, const HourlyMatrix& demand,
                      const DualSolution& dual) {
  const Dims& d = dual.dims;
  double z = 0.0;
  for (int s = 0; s < d.scenarios; ++s) {
    for (int y = 0; y < d.years; ++y) {
      for (int t = 0; t < d.hours; ++t) {
        const int i = d.tys(t, y, s);
        z += demand(y, t) * dual.a[i] + instance.pv.profiles[s](y, t) * fixed.pv_capacity * dual.b[i];
        for (int j = 0; j < d.techs; ++j) {
          const int k = d.jtys(j, t, y, s);
          const DualCosts cost = dual_costs(instance, fixed, j, t, y, s);
          if (t == 0) z += cost.c_first * dual.c[k];
          if (t == d.hours - 1) z += cost.c_last * dual.c[k];
          z += cost.d_minus * dual.d_minus[k] + cost.d_plus * dual.d_plus[k] + cost.f * dual.f[k] + cost.g * dual.g[k];
        }
      }
    }
  }
  return z;
}

PrimalSpResult solve_primal_sp(const PlanningInstance& instance, const FixedFirstStage& fixed,
                               const HourlyMatrix& demand, const lp::SolveParams& params) {
  check_fixed(instance, fixed);
  lp::Model m;
  const auto first = model::fixed_first_stage(fixed);
  const auto block =
      model::add_recourse_block(m, instance, demand, instance.pv.profiles, instance.pv.probabilities, first);
  m.set_objective_expr(lp::ObjSense::kMinimize, block.cost);
  lp::SolveParams p = params;
  p.want_duals = true;
  const auto out = lp::solve(m, p);
  if (!out.optimal()) {
    throw std::logic_error("primal subproblem not optimal (" + std::string(lp::to_string(out.status)) +
                           "); grid purchase is uncapped, so the data is inconsistent");
  }
  PrimalSpResult r;
  r.plan = model::extract_dispatch(block, out);
  r.objective = out.objective;
  r.dual_objective = lp::lp_dual_objective(m, out);
  return r;
}

std::uint64_t vertex_count(int hours, double budget) {
  const int kmax = std::min(hours, static_cast<int>(std::floor(budget + 1e-9)));
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(hours, k)
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) binom = binom * static_cast<std::uint64_t>(hours - k + 1) / static_cast<std::uint64_t>(k);
    total += binom << k;
  }
  return total;
}

PlanningInstance slice_year(const PlanningInstance& instance, int y) {
  PlanningInstance one = instance;
  one.grid.years = 1;
  auto row = [y](const HourlyMatrix& m) {
    HourlyMatrix out(1, m.hours());
    for (int t = 0; t < m.hours(); ++t) out(0, t) = m(y, t);
    return out;
  };
  for (std::size_t s = 0; s < one.pv.profiles.size(); ++s) one.pv.profiles[s] = row(instance.pv.profiles[s]);
  one.demand.nominal = row(instance.demand.nominal);
  one.demand.deviation = row(instance.demand.deviation);
  for (auto& b : one.batteries) b.soh_by_year = {b.soh_by_year.at(static_cast<std::size_t>(y))};
  return one;
}

FirstStageDecision slice_year(const FirstStageDecision& decision, int y) {
  FirstStageDecision one = decision;
  one.dims.years = 1;
  one.charge_mode.assign(static_cast<std::size_t>(one.dims.jtys_size()), 0);
  for (int j = 0; j < one.dims.techs; ++j) {
    for (int s = 0; s < one.dims.scenarios; ++s) {
      for (int t = 0; t < one.dims.hours; ++t) {
        one.charge_mode[one.dims.jtys(j, t, 0, s)] = decision.charge(j, t, y, s);
      }
    }
  }
  return one;
}

WorstCaseDemand enumerate_worst_case(const PlanningInstance& instance, const FixedFirstStage& fixed,
                                     const lp::SolveParams& params, std::uint64_t limit) {
  check_fixed(instance, fixed);
  const int T = instance.hours();
  const int Y = instance.years();
  const std::uint64_t count = vertex_count(T, instance.demand.budget);
  if (count > limit) {
    throw std::invalid_argument("enumerate_worst_case: " + std::to_string(count) + " patterns per year exceed the limit " +
                                std::to_string(limit));
  }
  const int kmax = std::min(T, static_cast<int>(std::floor(instance.demand.budget + 1e-9)));
  HourlyMatrix vp(Y, T), vm(Y, T);
  double total = 0.0;
  for (int y = 0; y < Y; ++y) {
    const PlanningInstance one = slice_year(instance, y);
    const FirstStageDecision fixed_one = slice_year(fixed, y);
    std::vector<int> code(static_cast<std::size_t>(T), 0), best_code;
    double best = -lp::kInfinity;
    std::function<void(int, int)> visit = [&](int t, int used) {
      if (t == T) {
        HourlyMatrix demand(1, T);
        for (int h = 0; h < T; ++h) {
          const double sign = code[h] == 1 ? 1.0 : code[h] == 2 ? -1.0 : 0.0;
          demand(0, h) = one.demand.nominal(0, h) + sign * one.demand.deviation(0, h);
        }
        const double z = solve_primal_sp(one, fixed_one, demand, params).objective;
        if (best_code.empty() || z > best + 1e-9 * std::max(1.0, std::abs(best))) {
          best = z;
          best_code = code;
        }
        return;
      }
      for (int c = 0; c < 3; ++c) {
        if (c > 0 && used == kmax) break;
        code[t] = c;
        visit(t + 1, used + (c > 0 ? 1 : 0));
      }
      code[t] = 0;
    };
    visit(0, 0);
    for (int t = 0; t < T; ++t) {
      vp(y, t) = best_code[t] == 1 ? 1.0 : 0.0;
      vm(y, t) = best_code[t] == 2 ? 1.0 : 0.0;
    }
    total += best;
  }
  WorstCaseDemand w = make_worst_case(instance.demand, vp, vm);
  w.objective = total;
  return w;
}

std::string worst_case_csv(const DemandUncertainty& demand, const WorstCaseDemand& worst) {
  csv::Writer w({"year", "hour", "nominal", "realization", "v_plus", "v_minus"});
  for (int y = 0; y < demand.nominal.years(); ++y) {
    for (int t = 0; t < demand.nominal.hours(); ++t) {
      w.row({double(y + 1), double(t + 1), demand.nominal(y, t), worst.realization(y, t), worst.v_plus(y, t),
             worst.v_minus(y, t)});
    }
  }
  return w.str();
}

}  // namespace pvsizing
