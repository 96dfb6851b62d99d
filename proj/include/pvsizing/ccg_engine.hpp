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

// Column-and-constraint generation: alternate the master problem with the
// adversarial subproblem until the bounds meet.

#pragma once

#include <string>
#include <vector>

#include "pvsizing/deterministic_planner.hpp"
#include "pvsizing/harso_master.hpp"
#include "pvsizing/robust_subproblem.hpp"

namespace pvsizing {

struct CcgConfig {
  double epsilon = 1e-4;
  int max_iterations = 50;
  double master_time_limit = lp::kInfinity;  // seconds per solve
  double subproblem_time_limit = lp::kInfinity;
  double mip_gap = 1e-6;
  int seed = 0;
  // Start the master with the nominal-demand block already present.
  bool seed_nominal_block = false;
  bool full_rebuild = false;
};

struct CcgRecord {
  int iteration = 0;
  double lb = 0.0;
  double ub = 0.0;
  double gap = 0.0;
  double z_mp = 0.0;
  double z_sp = 0.0;
  double theta = 0.0;
  double t_mp_sec = 0.0;
  double t_sp_sec = 0.0;
};

struct CcgTrace {
  std::vector<CcgRecord> records;
  FirstStageDecision decision;  // incumbent of the final upper bound
  std::vector<WorstCaseDemand> worst_cases;
  bool converged = false;
  double objective = 0.0;  // final upper bound
  double lower_bound = 0.0;
  std::vector<std::string> warnings;

  [[nodiscard]] int iterations() const { return static_cast<int>(records.size()); }
};

// z_mp - theta + z_sp: the investment part of the master objective plus the
// adversarial operating cost of the same first stage.
double upper_bound_candidate(double z_mp, double theta, double z_sp);

// |UB - LB| / max(1, |UB|), i.e. |1 - LB/UB| unless UB is near zero, where it
// falls back to the absolute gap.
double relative_gap(double lb, double ub);

// Throws std::invalid_argument on a bad config, std::runtime_error naming the
// iteration when a solve fails.
CcgTrace run_ccg(const PlanningInstance& instance, const CcgConfig& config = {});

// Same loop with enumerate_worst_case as the adversary.
CcgTrace run_ccg_bruteforce(const PlanningInstance& instance, const CcgConfig& config = {});

// Monolithic scenario-indexed model at one fixed demand matrix.
PlanningSolution solve_extensive_stochastic(const PlanningInstance& instance, const HourlyMatrix& demand,
                                            const lp::SolveParams& params = {});

// iter,lb,ub,gap,z_mp,z_sp,theta,t_mp_sec,t_sp_sec. Timing columns are
// written as 0 unless `with_timings`.
std::string trace_csv(const CcgTrace& trace, bool with_timings = true);

}  // namespace pvsizing
