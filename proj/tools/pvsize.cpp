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

// pvsize: command-line front end.
//
//   pvsize validate INSTANCE
//   pvsize solve INSTANCE [--budget G] [--scenarios S] [--years Y] [--oracle] [--extensive] ...
//   pvsize sweep INSTANCE --budget-sweep 0:24 [--scenarios 1,2,4] [--workers N] ...
//   pvsize forge --base-demand F --growth R --horizon Y --pv-shapes F --out DIR ...
//   pvsize self-consumption INSTANCE --pv-kw X --bess-kwh E --tech ID --out soc.csv
//
// Exit status: 0 success, 2 partial sweep failure, 1 fatal error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pvsizing/ccg_engine.hpp"
#include "pvsizing/csv.hpp"
#include "pvsizing/deterministic_planner.hpp"
#include "pvsizing/experiment.hpp"
#include "pvsizing/instance_io.hpp"
#include "pvsizing/scenario_forge.hpp"

namespace {

using namespace pvsizing;

struct RunFlags {
  std::string instance;
  double budget = -1.0;
  std::string budget_sweep;
  std::string scenarios;
  int years = 0;
  double epsilon = 1e-4;
  int max_iters = 50;
  int seed = 0;
  std::string out;
  bool oracle = false;
  bool extensive = false;
  bool deterministic = false;
  bool seed_nominal = false;
  int workers = 1;
};

void save(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw std::runtime_error("cannot write '" + path.string() + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

// "a:b" or "a:b:step" or "a,b,c".
std::vector<double> parse_budgets(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto p = split(text, ':');
    if (p.size() < 2 || p.size() > 3) throw std::invalid_argument("--budget-sweep: expected a:b or a:b:step");
    const double lo = std::stod(p[0]), hi = std::stod(p[1]), step = p.size() == 3 ? std::stod(p[2]) : 1.0;
    if (!(step > 0.0)) throw std::invalid_argument("--budget-sweep: step must be > 0");
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i) out.push_back(lo + i * step);
  } else {
    for (const auto& s : split(text, ',')) out.push_back(std::stod(s));
  }
  return out;
}

PlanningInstance load(const RunFlags& f) {
  PlanningInstance inst = io::load_instance(f.instance);
  if (f.years > 0) inst = with_years(inst, f.years);
  require_valid(inst);
  return inst;
}

CcgConfig ccg_config(const RunFlags& f) {
  CcgConfig c;
  c.epsilon = f.epsilon;
  c.max_iterations = f.max_iters;
  c.seed = f.seed;
  c.full_rebuild = f.deterministic;
  c.seed_nominal_block = f.seed_nominal;
  return c;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("instance", f.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--years", f.years, "Use only the first Y years");
  cmd->add_option("--epsilon", f.epsilon, "Relative gap tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", f.max_iters, "CCG iteration limit")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Solver random seed");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_flag("--oracle", f.oracle, "Brute-force adversary (tiny instances)");
  cmd->add_flag("--deterministic", f.deterministic, "Full-rebuild master and zeroed timings in CSV output");
  cmd->add_flag("--seed-nominal", f.seed_nominal, "Start the master with the nominal-demand block");
}

int cmd_validate(const RunFlags& f) {
  const PlanningInstance inst = io::load_instance(f.instance);
  const auto problems = validate(inst);
  for (const auto& p : problems) std::cout << p << "\n";
  if (!problems.empty()) return 1;
  std::cout << "ok: " << inst.hours() << " hours, " << inst.years() << " years, " << inst.scenarios()
            << " scenarios, " << inst.techs() << " battery technologies\n";
  return 0;
}

int cmd_solve(const RunFlags& f) {
  PlanningInstance inst = load(f);
  if (!f.scenarios.empty()) inst = with_scenarios(inst, std::stoi(f.scenarios));
  if (f.budget >= 0.0) inst = with_budget(inst, f.budget);
  require_valid(inst);
  const bool timings = !f.deterministic;

  if (f.extensive) {
    lp::SolveParams p;
    p.random_seed = f.seed;
    const PlanningSolution sol = solve_extensive_stochastic(inst, inst.demand.nominal, p);
    std::cout << "extensive form at nominal demand\n";
    std::cout << "PV capacity: " << sol.decision.pv_capacity << " kW\n";
    const int j = sol.decision.installed_tech();
    std::cout << "battery technology: " << (j >= 0 ? inst.batteries[j].id : "none") << "\n";
    if (j >= 0) std::cout << "battery capacity: " << sol.decision.bess_capacity[j] << " kWh\n";
    std::cout << "objective: " << sol.objective << "\n";
    std::cout << "per representative day: " << sol.objective / inst.years() << "\n";
    return 0;
  }

  const CcgConfig cfg = ccg_config(f);
  const CcgTrace trace = f.oracle ? run_ccg_bruteforce(inst, cfg) : run_ccg(inst, cfg);
  const std::string summary = experiment::solution_summary(inst, trace);
  std::cout << summary;
  if (!f.out.empty()) {
    const std::filesystem::path dir(f.out);
    std::filesystem::create_directories(dir);
    save(dir / "trace.csv", trace_csv(trace, timings));
    save(dir / "summary.txt", summary);
    if (!trace.worst_cases.empty()) save(dir / "worst_case.csv", worst_case_csv(inst.demand, trace.worst_cases.back()));
  }
  return trace.converged ? 0 : 1;
}

int cmd_sweep(const RunFlags& f) {
  const PlanningInstance inst = load(f);
  experiment::SweepSpec spec;
  spec.budgets = parse_budgets(f.budget_sweep.empty() ? "0:" + std::to_string(inst.hours()) : f.budget_sweep);
  for (const auto& s : split(f.scenarios, ',')) spec.scenario_counts.push_back(std::stoi(s));
  spec.ccg = ccg_config(f);
  spec.workers = f.workers;
  spec.oracle = f.oracle;
  const std::size_t total = spec.budgets.size() * std::max<std::size_t>(1, spec.scenario_counts.size());
  std::size_t done = 0;
  spec.on_record = [&](const experiment::SweepRecord& r) {
    std::cerr << "[" << ++done << "/" << total << "] budget " << r.budget << ", " << r.scenarios << " scenarios: ";
    if (r.ok) {
      std::cerr << "objective " << r.objective << ", " << r.iterations << " iterations, " << r.wall_seconds << " s\n";
    } else {
      std::cerr << "failed: " << r.error << "\n";
    }
  };
  const auto result = experiment::run_sweep(inst, spec);
  std::cout << experiment::sweep_summary(result);
  if (!f.out.empty()) experiment::write_sweep_bundle(result, f.out, !f.deterministic);
  return result.failures().empty() ? 0 : 2;
}

struct ForgeFlags {
  std::string base_demand;
  double growth = 0.0;
  std::vector<double> anchors;
  int horizon = 10;
  int hours = 24;
  std::string pv_shapes;
  std::vector<double> ar{0.7};
  std::vector<double> ma{0.2};
  double noise_std = 0.1;
  std::uint64_t seed = 1;
  std::vector<int> night_hours;
  std::string out;
};

int cmd_forge(const ForgeFlags& f) {
  const std::filesystem::path dir(f.out);
  std::filesystem::create_directories(dir);
  double r = f.growth;
  if (!f.anchors.empty()) {
    if (f.anchors.size() % 2 != 0) throw std::invalid_argument("--anchors expects year,demand pairs");
    std::vector<forge::GrowthAnchor> a;
    for (std::size_t i = 0; i < f.anchors.size(); i += 2) a.push_back({f.anchors[i], f.anchors[i + 1]});
    r = forge::fit_growth_rate(a);
    std::cout << "fitted growth rate: " << r << "\n";
  }
  if (!f.base_demand.empty()) {
    const auto days = forge::read_base_demand_csv(f.base_demand, f.hours);
    const auto demand = forge::extract_demand_intervals(forge::project_history(days, r, f.horizon));
    save(dir / "demand_intervals.csv", forge::demand_intervals_csv(demand));
    std::cout << "wrote demand_intervals.csv (" << f.horizon << " years)\n";
  }
  if (!f.pv_shapes.empty()) {
    forge::ArmaSpec spec;
    spec.ar_coeffs = f.ar;
    spec.ma_coeffs = f.ma;
    spec.noise_std = f.noise_std;
    spec.seed = f.seed;
    spec.night_hours.clear();
    for (int h : f.night_hours) spec.night_hours.push_back(h - 1);
    const auto shapes = forge::read_pv_shapes_csv(f.pv_shapes, f.hours);
    const auto pv = forge::sample_pv_scenarios(spec, shapes, TimeGrid{f.hours, f.horizon});
    save(dir / "pv_scenarios.csv", forge::pv_scenarios_csv(pv));
    save(dir / "pv_probabilities.csv", forge::pv_probabilities_csv(pv));
    std::cout << "wrote pv_scenarios.csv (" << pv.size() << " scenarios)\n";
  }
  return 0;
}

struct SelfConsumptionFlags {
  std::string instance;
  double pv_kw = 0.0;
  double bess_kwh = 0.0;
  std::string tech;
  int scenario = 1;
  std::string out;
};

int cmd_self_consumption(const SelfConsumptionFlags& f) {
  const PlanningInstance inst = io::load_instance(f.instance);
  require_valid(inst);
  const BatteryTech* tech = nullptr;
  for (const auto& b : inst.batteries) {
    if (b.id == f.tech) tech = &b;
  }
  if (!tech) throw std::invalid_argument("unknown battery technology '" + f.tech + "'");
  if (f.scenario < 1 || f.scenario > inst.scenarios()) throw std::invalid_argument("--scenario out of range");
  const HourlyMatrix soc = solve_self_consumption(inst, inst.demand.nominal, inst.pv.profiles[f.scenario - 1], f.pv_kw,
                                                  f.bess_kwh, *tech);
  const std::string text = soc_trace_csv(soc);
  if (f.out.empty()) {
    std::cout << text;
  } else {
    save(f.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PV and battery sizing under uncertain demand and PV output"};
  app.require_subcommand(1);

  RunFlags run;
  auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
  validate_cmd->add_option("instance", run.instance, "Instance JSON")->required()->check(CLI::ExistingFile);

  auto* solve_cmd = app.add_subcommand("solve", "Solve one budget of uncertainty");
  add_run_flags(solve_cmd, run);
  solve_cmd->add_option("--budget", run.budget, "Budget of uncertainty (default: from the instance)");
  solve_cmd->add_option("--scenarios", run.scenarios, "Use only the first S PV scenarios");
  solve_cmd->add_flag("--extensive", run.extensive, "Extensive stochastic form at nominal demand");

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep budgets and scenario counts");
  add_run_flags(sweep_cmd, run);
  sweep_cmd->add_option("--budget-sweep", run.budget_sweep, "Budgets as a:b[:step] or a,b,c (default 0:T)");
  sweep_cmd->add_option("--scenarios", run.scenarios, "Scenario counts, comma separated");
  sweep_cmd->add_option("--workers", run.workers, "Parallel sweep points")->check(CLI::PositiveNumber);

  ForgeFlags forge_flags;
  auto* forge_cmd = app.add_subcommand("forge", "Generate demand intervals and PV scenarios");
  forge_cmd->add_option("--base-demand", forge_flags.base_demand, "CSV hour,kwh (optionally day,hour,kwh)");
  forge_cmd->add_option("--growth", forge_flags.growth, "Annual demand growth rate");
  forge_cmd->add_option("--anchors", forge_flags.anchors, "Fit the growth rate to year,demand pairs")->delimiter(',');
  forge_cmd->add_option("--horizon", forge_flags.horizon, "Years")->check(CLI::PositiveNumber);
  forge_cmd->add_option("--hours", forge_flags.hours, "Hours per day")->check(CLI::PositiveNumber);
  forge_cmd->add_option("--pv-shapes", forge_flags.pv_shapes, "CSV scenario,hour,frac");
  forge_cmd->add_option("--ar", forge_flags.ar, "AR coefficients")->delimiter(',');
  forge_cmd->add_option("--ma", forge_flags.ma, "MA coefficients")->delimiter(',');
  forge_cmd->add_option("--noise-std", forge_flags.noise_std, "Noise standard deviation");
  forge_cmd->add_option("--seed", forge_flags.seed, "Random seed");
  forge_cmd->add_option("--night-hours", forge_flags.night_hours, "One-based hours with zero PV")->delimiter(',');
  forge_cmd->add_option("--out", forge_flags.out, "Output directory")->required();

  SelfConsumptionFlags sc;
  auto* sc_cmd = app.add_subcommand("self-consumption", "SOC trace of a fixed system");
  sc_cmd->add_option("instance", sc.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  sc_cmd->add_option("--pv-kw", sc.pv_kw, "PV capacity")->required();
  sc_cmd->add_option("--bess-kwh", sc.bess_kwh, "Battery capacity")->required();
  sc_cmd->add_option("--tech", sc.tech, "Battery technology id")->required();
  sc_cmd->add_option("--scenario", sc.scenario, "PV scenario (one-based)");
  sc_cmd->add_option("--out", sc.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*validate_cmd) return cmd_validate(run);
    if (*solve_cmd) return cmd_solve(run);
    if (*sweep_cmd) return cmd_sweep(run);
    if (*forge_cmd) return cmd_forge(forge_flags);
    if (*sc_cmd) return cmd_self_consumption(sc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
