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

// Experiment harness: budget and scenario-count sweeps over the CCG solver,
// marginal cost of robustness and the CSV/plot-data bundle.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pvsizing/ccg_engine.hpp"

namespace pvsizing::experiment {

struct SweepRecord {
  double budget = 0.0;
  int scenarios = 0;
  bool ok = false;
  std::string error;
  double objective = 0.0;
  double pv_capacity = 0.0;
  std::vector<double> bess_capacity;
  int selected_tech = -1;  // technology with installed capacity, -1 if none
  int iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
  CcgTrace trace;
};

struct SweepSpec {
  std::vector<double> budgets;
  std::vector<int> scenario_counts;  // empty: the instance's own count
  CcgConfig ccg;
  int workers = 1;
  bool oracle = false;  // brute-force adversary
  // Called after each point finishes, one call at a time.
  std::function<void(const SweepRecord&)> on_record;
};

struct SweepResult {
  std::vector<std::string> tech_ids;
  int years = 1;
  std::vector<SweepRecord> records;  // scenario-major, budgets in spec order

  [[nodiscard]] std::vector<const SweepRecord*> failures() const;
};

// Throws std::invalid_argument on an invalid spec: budget outside [0, T] or
// a scenario count outside [1, S]. Solver failures are captured per record.
SweepResult run_sweep(const PlanningInstance& instance, const SweepSpec& spec);

struct McrPoint {
  double budget = 0.0;
  double objective = 0.0;
  double mcr = 0.0;  // objective(budget) - objective(budget - 1); 0 at the first point
};

// Finite differences over a unit-step budget grid. Throws
// std::invalid_argument if the budgets are not consecutive.
std::vector<McrPoint> marginal_cost_of_robustness(const std::vector<double>& budgets,
                                                  const std::vector<double>& objectives);

// Grid of successful records at `scenarios`. Throws std::invalid_argument if
// any budget between the smallest and the largest is missing or failed.
std::vector<McrPoint> marginal_cost_of_robustness(const SweepResult& result, int scenarios);

// Human-readable summary of one solve.
std::string solution_summary(const PlanningInstance& instance, const CcgTrace& trace);

// Human-readable summary of a sweep, including failures; "no runs" if empty.
std::string sweep_summary(const SweepResult& result);

// budget,scenarios,status,objective,per_day,pv_kw,bess_kwh,tech,iterations,
// converged,wall_sec,bess_<id>...,error
std::string sweep_csv(const SweepResult& result, bool with_timings = true);

// Writes sweep.csv, summary.txt, trace_G<budget>_S<count>.csv per point and
// plot-data files (objective, capacity and MCR against budget; objective
// against scenario count; runtime). Throws std::runtime_error on IO errors.
void write_sweep_bundle(const SweepResult& result, const std::string& dir, bool with_timings = true);

}  // namespace pvsizing::experiment
