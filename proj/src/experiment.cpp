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

#include "pvsizing/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pvsizing/csv.hpp"

namespace pvsizing::experiment {
namespace {

std::string clean_cell(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = c == ',' ? ';' : ' ';
  }
  return s;
}

void save(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path + "'");
}

std::string tag(const SweepRecord& r) {
  return "G" + csv::format_number(r.budget) + "_S" + std::to_string(r.scenarios);
}

SweepRecord run_point(const PlanningInstance& instance, const SweepSpec& spec, double budget, int scenarios) {
  SweepRecord rec;
  rec.budget = budget;
  rec.scenarios = scenarios;
  const auto start = std::chrono::steady_clock::now();
  try {
    const PlanningInstance point = with_budget(with_scenarios(instance, scenarios), budget);
    rec.trace = spec.oracle ? run_ccg_bruteforce(point, spec.ccg) : run_ccg(point, spec.ccg);
    rec.ok = true;
    rec.objective = rec.trace.objective;
    rec.pv_capacity = rec.trace.decision.pv_capacity;
    rec.bess_capacity = rec.trace.decision.bess_capacity;
    rec.selected_tech = rec.trace.decision.installed_tech();
    rec.iterations = rec.trace.iterations();
    rec.converged = rec.trace.converged;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

std::vector<const SweepRecord*> SweepResult::failures() const {
  std::vector<const SweepRecord*> out;
  for (const auto& r : records) {
    if (!r.ok) out.push_back(&r);
  }
  return out;
}

SweepResult run_sweep(const PlanningInstance& instance, const SweepSpec& spec) {
  require_valid(instance);
  std::vector<int> counts = spec.scenario_counts;
  if (counts.empty()) counts.push_back(instance.scenarios());
  for (double g : spec.budgets) {
    if (!(g >= 0.0 && g <= instance.hours())) {
      throw std::invalid_argument("sweep: budget " + csv::format_number(g) + " outside [0, hours_per_day]");
    }
  }
  for (int s : counts) {
    if (s < 1 || s > instance.scenarios()) {
      throw std::invalid_argument("sweep: scenario count " + std::to_string(s) + " outside [1, " +
                                  std::to_string(instance.scenarios()) + "]");
    }
  }

  SweepResult result;
  for (const auto& b : instance.batteries) result.tech_ids.push_back(b.id);
  result.years = instance.years();
  std::vector<std::pair<double, int>> points;
  for (int s : counts) {
    for (double g : spec.budgets) points.emplace_back(g, s);
  }
  result.records.resize(points.size());

  std::atomic<std::size_t> next{0};
  std::mutex progress;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      result.records[i] = run_point(instance, spec, points[i].first, points[i].second);
      if (spec.on_record) {
        std::lock_guard lock(progress);
        spec.on_record(result.records[i]);
      }
    }
  };
  const int n = std::max(1, std::min<int>(spec.workers, static_cast<int>(points.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return result;
}

std::vector<McrPoint> marginal_cost_of_robustness(const std::vector<double>& budgets,
                                                  const std::vector<double>& objectives) {
  if (budgets.size() != objectives.size()) throw std::invalid_argument("mcr: length mismatch");
  std::vector<McrPoint> out;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (i > 0 && std::abs(budgets[i] - budgets[i - 1] - 1.0) > 1e-9) {
      throw std::invalid_argument("mcr: missing grid point after budget " + csv::format_number(budgets[i - 1]));
    }
    out.push_back({budgets[i], objectives[i], i == 0 ? 0.0 : objectives[i] - objectives[i - 1]});
  }
  return out;
}

std::vector<McrPoint> marginal_cost_of_robustness(const SweepResult& result, int scenarios) {
  std::map<double, double> grid;
  for (const auto& r : result.records) {
    if (r.scenarios != scenarios) continue;
    if (!r.ok) throw std::invalid_argument("mcr: budget " + csv::format_number(r.budget) + " failed");
    grid[r.budget] = r.objective;
  }
  std::vector<double> budgets, objectives;
  for (const auto& [g, z] : grid) {
    budgets.push_back(g);
    objectives.push_back(z);
  }
  return marginal_cost_of_robustness(budgets, objectives);
}

std::string solution_summary(const PlanningInstance& instance, const CcgTrace& trace) {
  std::ostringstream os;
  const auto& d = trace.decision;
  os << "status: " << (trace.converged ? "converged" : "NOT converged") << " after " << trace.iterations()
     << " iterations\n";
  os << "PV capacity: " << d.pv_capacity << " kW\n";
  const int j = d.installed_tech();
  if (j >= 0) {
    os << "battery technology: " << instance.batteries[j].id << "\n";
    os << "battery capacity: " << d.bess_capacity[j] << " kWh\n";
  } else {
    os << "battery technology: none\n";
  }
  os << "objective: " << trace.objective << "\n";
  os << "per representative day: " << trace.objective / instance.years() << "\n";
  os << "lower bound: " << trace.lower_bound << "\n";
  if (!trace.records.empty()) os << "gap: " << trace.records.back().gap << "\n";
  for (const auto& w : trace.warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::string sweep_summary(const SweepResult& result) {
  std::ostringstream os;
  if (result.records.empty()) {
    os << "no runs\n";
    return os.str();
  }
  const auto failed = result.failures();
  os << result.records.size() << " runs, " << result.records.size() - failed.size() << " succeeded, " << failed.size()
     << " failed\n";
  for (const auto& r : result.records) {
    if (!r.ok) continue;
    os << "budget " << r.budget << ", scenarios " << r.scenarios << ": objective " << r.objective << " ("
       << r.objective / result.years << " per representative day), PV " << r.pv_capacity << " kW, battery ";
    if (r.selected_tech >= 0) {
      os << result.tech_ids[r.selected_tech] << " " << r.bess_capacity[r.selected_tech] << " kWh";
    } else {
      os << "none";
    }
    os << ", " << r.iterations << " iterations" << (r.converged ? "" : " (not converged)") << "\n";
  }
  if (!failed.empty()) {
    os << "failures:\n";
    for (const auto* r : failed) os << "  budget " << r->budget << ", scenarios " << r->scenarios << ": " << r->error << "\n";
  }
  return os.str();
}

std::string sweep_csv(const SweepResult& result, bool with_timings) {
  std::vector<std::string> header{"budget", "scenarios", "status", "objective", "per_day", "pv_kw", "bess_kwh",
                                  "tech", "iterations", "converged", "wall_sec"};
  for (const auto& id : result.tech_ids) header.push_back("bess_" + id);
  header.push_back("error");
  csv::Writer w(header);
  for (const auto& r : result.records) {
    std::vector<std::string> cells{csv::format_number(r.budget), std::to_string(r.scenarios), r.ok ? "ok" : "failed"};
    auto num = [&](double v) { cells.push_back(r.ok ? csv::format_number(v) : ""); };
    num(r.objective);
    num(r.objective / result.years);
    num(r.pv_capacity);
    num(r.ok && r.selected_tech >= 0 ? r.bess_capacity[r.selected_tech] : 0.0);
    cells.push_back(r.ok && r.selected_tech >= 0 ? result.tech_ids[r.selected_tech] : (r.ok ? "none" : ""));
    num(r.iterations);
    num(r.converged ? 1.0 : 0.0);
    cells.push_back(csv::format_number(with_timings ? r.wall_seconds : 0.0));
    for (std::size_t j = 0; j < result.tech_ids.size(); ++j) num(r.ok ? r.bess_capacity[j] : 0.0);
    cells.push_back(clean_cell(r.error));
    w.row(cells);
  }
  return w.str();
}

void write_sweep_bundle(const SweepResult& result, const std::string& dir, bool with_timings) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  save((root / "sweep.csv").string(), sweep_csv(result, with_timings));
  save((root / "summary.txt").string(), sweep_summary(result));

  std::map<int, std::vector<const SweepRecord*>> by_count;
  std::map<double, std::vector<const SweepRecord*>> by_budget;
  csv::Writer runtime({"budget", "scenarios", "wall_sec", "iterations"});
  for (const auto& r : result.records) {
    if (!r.ok) continue;
    by_count[r.scenarios].push_back(&r);
    by_budget[r.budget].push_back(&r);
    save((root / ("trace_" + tag(r) + ".csv")).string(), trace_csv(r.trace, with_timings));
    runtime.row({r.budget, double(r.scenarios), with_timings ? r.wall_seconds : 0.0, double(r.iterations)});
  }
  runtime.save((root / "plot_runtime.csv").string());

  for (const auto& [s, recs] : by_count) {
    const std::string suffix = "_S" + std::to_string(s) + ".csv";
    csv::Writer objective({"budget", "objective"});
    csv::Writer capacity({"budget", "pv_kw", "bess_kwh"});
    for (const auto* r : recs) {
      objective.row({r->budget, r->objective});
      capacity.row({r->budget, r->pv_capacity, r->selected_tech >= 0 ? r->bess_capacity[r->selected_tech] : 0.0});
    }
    objective.save((root / ("plot_objective" + suffix)).string());
    capacity.save((root / ("plot_capacity" + suffix)).string());
    try {
      csv::Writer mcr({"budget", "mcr"});
      const auto series = marginal_cost_of_robustness(result, s);
      for (std::size_t i = 1; i < series.size(); ++i) mcr.row({series[i].budget, series[i].mcr});
      mcr.save((root / ("plot_mcr" + suffix)).string());
    } catch (const std::invalid_argument&) {
      // Not a contiguous grid; no MCR curve for this count.
    }
  }
  for (const auto& [g, recs] : by_budget) {
    if (recs.size() < 2) continue;
    csv::Writer sens({"scenarios", "objective"});
    for (const auto* r : recs) sens.row({double(r->scenarios), r->objective});
    sens.save((root / ("plot_scenarios_G" + csv::format_number(g) + ".csv")).string());
  }
}

}  // namespace pvsizing::experiment
