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

#include "pvsizing/harso_master.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pvsizing {

double theta_lower_bound(const PlanningInstance& instance) {
  double max_rate = 0.0;
  for (const auto& b : instance.batteries) max_rate = std::max(max_rate, b.power_rate);
  double bound = 0.0;
  for (int s = 0; s < instance.scenarios(); ++s) {
    for (int y = 0; y < instance.years(); ++y) {
      for (int t = 0; t < instance.hours(); ++t) {
        const double sellable = instance.pv.profiles[s](y, t) * instance.config.pv_cap_max + max_rate;
        bound -= instance.pv.probabilities[s] * instance.tariff.sell_price[t] * sellable;
      }
    }
  }
  return bound;
}

MasterState init_master(const PlanningInstance& instance, const MasterOptions& options) {
  require_valid(instance);
  MasterState state;
  state.instance = instance;
  state.session = lp::Session(options.full_rebuild);
  state.split_by_technology = options.split_by_technology;
  state.first = model::add_first_stage(state.model, instance, instance.scenarios());
  state.theta_min = std::isnan(options.theta_min) ? theta_lower_bound(instance) : options.theta_min;
  if (!std::isfinite(state.theta_min)) throw std::invalid_argument("init_master: theta_min must be finite");
  state.theta = state.model.add_variable(state.theta_min, lp::kInfinity, false, "theta");
  lp::LinearExpr objective = model::investment_cost(instance, state.first);
  objective.add(state.theta, 1.0);
  state.model.set_objective_expr(lp::ObjSense::kMinimize, objective);
  state.current = empty_decision(state.first.dims);
  return state;
}

bool add_cut_block(MasterState& state, const WorstCaseDemand& worst_case) {
  const int k = static_cast<int>(state.blocks.size()) + 1;
  bool fresh = true;
  for (const auto& b : state.blocks) {
    if (b.demand == worst_case.realization) {
      state.warnings.push_back("iteration " + std::to_string(k) + ": demand realization repeats block " +
                               std::to_string(b.iteration));
      fresh = false;
      break;
    }
  }
  CutBlock block;
  block.iteration = k;
  block.demand = worst_case.realization;
  model::RecourseOptions options;
  options.prefix = "k" + std::to_string(k) + "_";
  block.recourse = model::add_recourse_block(state.model, state.instance, block.demand, state.instance.pv.profiles,
                                             state.instance.pv.probabilities, state.first, options);
  lp::LinearExpr cut;
  cut.add(state.theta, 1.0);
  cut.add(block.recourse.cost, -1.0);
  block.cut = state.model.add_expr_constraint(cut, lp::RowSense::kGreaterEqual, 0.0, options.prefix + "cut");
  state.blocks.push_back(std::move(block));
  return fresh;
}

namespace {

[[noreturn]] void no_incumbent(const lp::SolveOutcome& out) {
  throw std::runtime_error("master problem: solver returned " + std::string(lp::to_string(out.status)) +
                           (out.diagnostic.empty() ? "" : ": " + out.diagnostic));
}

struct Restriction {
  lp::SolveOutcome incumbent;  // no primal when nothing beats the cutoff
  double bound = lp::kInfinity;
  bool limit = false;
};

// Master with nu_j = 1 and every other selection at 0. The charge modes start
// continuous. A slot (t, y, s) where one block charges while another
// discharges gets a binary w and the model is solved again. Once no
// continuous slot is in conflict, rounding w to the flow direction gives a
// point of the full restriction with the same objective.
Restriction solve_restriction(const MasterState& state, std::size_t j, const lp::SolveParams& params, double cutoff,
                              double& wall) {
  const auto& first = state.first;
  const Dims& dims = first.dims;
  lp::Model m = state.model;
  for (std::size_t k = 0; k < first.tech_selected.size(); ++k) {
    const double v = k == j ? 1.0 : 0.0;
    m.set_variable_bounds(first.tech_selected[k].var, v, v);
    m.set_integral(first.tech_selected[k].var, false);
  }
  for (const auto& w : first.charge_mode) m.set_integral(w.var, false);
  const double tol = params.feasibility_tol;
  const int jj = static_cast<int>(j);

  Restriction r;
  for (;;) {
    lp::SolveParams p = params;
    if (m.is_mip()) p.objective_cutoff = cutoff;
    auto out = lp::solve(m, p);
    wall += out.wall_seconds;
    if (out.status == lp::SolveStatus::kInfeasible) {
      // Infeasible outright or nothing below the cutoff.
      r.bound = std::isfinite(p.objective_cutoff) ? p.objective_cutoff : lp::kInfinity;
      return r;
    }
    if (!out.has_primal()) {
      r.limit = true;
      r.bound = -lp::kInfinity;
      return r;
    }
    if (!m.is_mip() && out.objective >= cutoff) {
      r.bound = out.objective;
      return r;
    }
    int added = 0;
    for (int s = 0; s < dims.scenarios; ++s) {
      for (int y = 0; y < dims.years; ++y) {
        for (int t = 0; t < dims.hours; ++t) {
          const lp::VarId w = first.w(jj, t, y, s).var;
          if (m.variable(w).integral) continue;
          const int idx = dims.jtys(jj, t, y, s);
          bool charge = false;
          bool discharge = false;
          for (const auto& b : state.blocks) {
            charge = charge || out.value(b.recourse.ch[idx]) > tol;
            discharge = discharge || out.value(b.recourse.ds[idx]) > tol;
          }
          if (charge && discharge) {
            m.set_integral(w, true);
            ++added;
          } else {
            out.primal[static_cast<std::size_t>(w.index)] = charge ? 1.0 : 0.0;
          }
        }
      }
    }
    if (added > 0) continue;
    for (std::size_t k = 0; k < first.tech_selected.size(); ++k) {
      if (k == j) continue;
      for (int i = 0; i < dims.tys_size(); ++i) {
        out.primal[static_cast<std::size_t>(first.charge_mode[k * dims.tys_size() + i].var.index)] = 0.0;
      }
    }
    r.limit = !out.optimal();
    r.bound = out.best_bound;
    r.incumbent = std::move(out);
    return r;
  }
}

// Solves the union of the per-technology restrictions, starting with the
// technology selected last time and using the incumbent as cutoff for the
// rest. The bound is the smallest bound proven for any restriction.
lp::SolveOutcome solve_split(const MasterState& state, const lp::SolveParams& params) {
  const auto& selected = state.first.tech_selected;
  std::vector<std::size_t> order(selected.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  const int previous = state.current.selected_tech();
  if (previous > 0) std::rotate(order.begin(), order.begin() + previous, order.begin() + previous + 1);

  lp::SolveOutcome best;
  double bound = lp::kInfinity;
  double wall = 0.0;
  bool any_limit = false;
  for (std::size_t j : order) {
    const double cutoff = best.has_primal() ? best.objective : lp::kInfinity;
    Restriction r = solve_restriction(state, j, params, cutoff, wall);
    any_limit = any_limit || r.limit;
    bound = std::min(bound, r.bound);
    if (r.incumbent.has_primal() && (!best.has_primal() || r.incumbent.objective < best.objective)) {
      best = std::move(r.incumbent);
    }
  }
  if (!best.has_primal()) {
    best.status = any_limit ? lp::SolveStatus::kLimit : lp::SolveStatus::kInfeasible;
    no_incumbent(best);
  }
  best.best_bound = bound;
  best.wall_seconds = wall;
  if (any_limit) best.status = lp::SolveStatus::kLimit;
  return best;
}

}  // namespace

MasterSolution solve_master(MasterState& state, const lp::SolveParams& params) {
  const bool split = state.split_by_technology;
  const auto out = split ? solve_split(state, params) : state.session.solve(state.model, params);
  if (!out.has_primal()) no_incumbent(out);
  MasterSolution sol;
  sol.decision = model::extract_first_stage(state.first, out);
  sol.theta = out.value(state.theta);
  sol.objective = out.objective;
  sol.best_bound = out.best_bound;
  sol.status = out.status;
  sol.wall_seconds = out.wall_seconds;
  state.current = sol.decision;
  return sol;
}

}  // namespace pvsizing
