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

// Master problem of the decomposition: investment variables, one shared set
// of charge-mode binaries, and theta bounding the worst-case operating cost.
// Every iteration appends a full copy of the operating rows for one demand
// realization, with its own recourse variables, plus the cut
// theta >= (operating cost of that copy).

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pvsizing/planning_model.hpp"
#include "pvsizing/robust_subproblem.hpp"

namespace pvsizing {

struct CutBlock {
  int iteration = 0;  // one-based
  HourlyMatrix demand;
  model::RecourseBlock recourse;
  lp::RowId cut;
};

struct MasterOptions {
  // Lower bound for theta; NaN selects theta_lower_bound(instance).
  double theta_min = std::numeric_limits<double>::quiet_NaN();
  // Fresh backend for every solve instead of incremental appends.
  bool full_rebuild = false;
  // At most one technology is installed, so the master can be solved as one
  // restriction per technology with its selection fixed to 1 and the others
  // to 0. Charge modes are made binary only where the blocks disagree on the
  // flow direction. False solves the single MILP through the session.
  bool split_by_technology = true;
};

struct MasterState {
  PlanningInstance instance;
  lp::Model model;
  model::FirstStageOperands first;
  lp::VarId theta;
  double theta_min = 0.0;
  bool split_by_technology = true;
  std::vector<CutBlock> blocks;
  FirstStageDecision current;
  std::vector<std::string> warnings;
  lp::Session session;
};

// Valid lower bound on the operating cost of any realization:
//   -sum_{t,y,s} rho_s * sell_t * (PG_{t,y,s} * cap_pv + max_j PB_j).
// Energy can only earn money by being sold; per hour at most the PV output
// plus one battery's discharge rate is available for sale.
double theta_lower_bound(const PlanningInstance& instance);

MasterState init_master(const PlanningInstance& instance, const MasterOptions& options = {});

// Appends block k = blocks.size() + 1. Returns false, and records a warning,
// when the same realization is already present.
bool add_cut_block(MasterState& state, const WorstCaseDemand& worst_case);

struct MasterSolution {
  FirstStageDecision decision;
  double theta = 0.0;
  double objective = 0.0;   // investment + theta at the incumbent
  double best_bound = 0.0;  // proven lower bound of the master
  lp::SolveStatus status = lp::SolveStatus::kOptimal;
  double wall_seconds = 0.0;
};

// Throws std::runtime_error when the solver returns no incumbent.
MasterSolution solve_master(MasterState& state, const lp::SolveParams& params = {});

}  // namespace pvsizing
