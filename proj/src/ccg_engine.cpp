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

#include "pvsizing/ccg_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "pvsizing/csv.hpp"

namespace pvsizing {
namespace {

using Adversary = std::function<WorstCaseDemand(const FirstStageDecision&, double& seconds)>;

CcgTrace run_loop(const PlanningInstance& instance, const CcgConfig& config, const Adversary& adversary) {
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("ccg: epsilon must be > 0");
  if (config.max_iterations < 1) throw std::invalid_argument("ccg: max_iterations must be >= 1");
  require_valid(instance);

  lp::SolveParams mp_params;
  // A repeated worst case leaves only the master's own gap between LB and
  // UB, so the master must be solved tighter than epsilon.
  mp_params.mip_gap = std::min(config.mip_gap, config.epsilon / 4);
  mp_params.time_limit = config.master_time_limit;
  mp_params.random_seed = config.seed;

  MasterOptions mo;
  mo.full_rebuild = config.full_rebuild;
  MasterState master = init_master(instance, mo);
  if (config.seed_nominal_block) {
    add_cut_block(master, make_worst_case(instance.demand, HourlyMatrix(instance.years(), instance.hours()),
                                          HourlyMatrix(instance.years(), instance.hours())));
  }

  CcgTrace trace;
  double lb = -lp::kInfinity;
  double ub = lp::kInfinity;
  for (int k = 1; k <= config.max_iterations; ++k) {
    MasterSolution ms;
    WorstCaseDemand worst;
    double t_sp = 0.0;
    try {
      ms = solve_master(master, mp_params);
      worst = adversary(ms.decision, t_sp);
    } catch (const std::exception& e) {
      throw std::runtime_error("ccg iteration " + std::to_string(k) + ": " + e.what());
    }
    lb = std::max(lb, ms.best_bound);
    const double candidate = upper_bound_candidate(ms.objective, ms.theta, worst.objective);
    if (candidate < ub) {
      ub = candidate;
      trace.decision = ms.decision;
    }
    CcgRecord r;
    r.iteration = k;
    r.lb = lb;
    r.ub = ub;
    r.gap = relative_gap(lb, ub);
    r.z_mp = ms.objective;
    r.z_sp = worst.objective;
    r.theta = ms.theta;
    r.t_mp_sec = ms.wall_seconds;
    r.t_sp_sec = t_sp;
    trace.records.push_back(r);
    trace.worst_cases.push_back(worst);
    if (r.gap <= config.epsilon) {
      trace.converged = true;
      break;
    }
    add_cut_block(master, worst);
  }
  trace.objective = ub;
  trace.lower_bound = lb;
  trace.warnings = master.warnings;
  if (!trace.converged) {
    trace.warnings.push_back("not converged within " + std::to_string(config.max_iterations) + " iterations");
  }
  return trace;
}

}  // namespace

double upper_bound_candidate(double z_mp, double theta, double z_sp) { return z_mp - theta + z_sp; }

double relative_gap(double lb, double ub) {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return lp::kInfinity;
  return std::abs(ub - lb) / std::max(1.0, std::abs(ub));
}

CcgTrace run_ccg(const PlanningInstance& instance, const CcgConfig& config) {
  lp::SolveParams sp_params;
  sp_params.mip_gap = config.mip_gap;
  sp_params.time_limit = config.subproblem_time_limit;
  sp_params.random_seed = config.seed;
  return run_loop(instance, config, [&](const FirstStageDecision& d, double& seconds) {
    DualSpResult r = solve_dual_sp(instance, d, sp_params);
    seconds = r.wall_seconds;
    return r.worst;
  });
}

CcgTrace run_ccg_bruteforce(const PlanningInstance& instance, const CcgConfig& config) {
  const std::uint64_t count = vertex_count(instance.hours(), instance.demand.budget);
  if (count > kEnumerationLimit) {
    throw std::invalid_argument("run_ccg_bruteforce: " + std::to_string(count) + " patterns per year exceed the limit");
  }
  lp::SolveParams sp_params;
  sp_params.random_seed = config.seed;
  return run_loop(instance, config, [&](const FirstStageDecision& d, double& seconds) {
    const auto start = std::chrono::steady_clock::now();
    WorstCaseDemand w = enumerate_worst_case(instance, d, sp_params);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return w;
  });
}

PlanningSolution solve_extensive_stochastic(const PlanningInstance& instance, const HourlyMatrix& demand,
                                            const lp::SolveParams& params) {
  require_valid(instance);
  return solve_planning(instance, demand, instance.pv.profiles, instance.pv.probabilities, params);
}

std::string trace_csv(const CcgTrace& trace, bool with_timings) {
  csv::Writer w({"iter", "lb", "ub", "gap", "z_mp", "z_sp", "theta", "t_mp_sec", "t_sp_sec"});
  for (const auto& r : trace.records) {
    w.row({double(r.iteration), r.lb, r.ub, r.gap, r.z_mp, r.z_sp, r.theta, with_timings ? r.t_mp_sec : 0.0,
           with_timings ? r.t_sp_sec : 0.0});
  }
  return w.str();
}

}  // namespace pvsizing
