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

#include "pvsizing/solver_bridge.hpp"

#include <Highs.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pvsizing::lp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kLimit: return "limit";
  }
  return "unknown";
}

LinearExpr& LinearExpr::add(const LinearExpr& other, double scale) {
  for (const Term& t : other.terms) add(t.var, t.coef * scale);
  constant += other.constant * scale;
  return *this;
}

// ---------------------------------------------------------------------------
// Model

VarId Model::add_variable(double lb, double ub, bool integral, std::string name) {
  if (std::isnan(lb) || std::isnan(ub)) throw ModelError("variable '" + name + "': NaN bound");
  if (lb > ub) {
    std::ostringstream msg;
    msg << "variable '" << name << "': lower bound " << lb << " exceeds upper bound " << ub;
    throw ModelError(msg.str());
  }
  const int index = num_variables();
  if (!name.empty()) {
    auto [it, inserted] = var_names_.emplace(name, index);
    if (!inserted) throw ModelError("duplicate variable name '" + name + "'");
  }
  variables_.push_back({lb, ub, integral, std::move(name)});
  if (integral) ++num_integral_;
  return VarId{index};
}

void Model::check_var(VarId var) const {
  if (var.index < 0 || var.index >= num_variables()) {
    throw ModelError("unknown variable id " + std::to_string(var.index));
  }
}

RowId Model::add_constraint(std::vector<Term> terms, RowSense sense, double rhs, std::string name) {
  for (const Term& t : terms) {
    check_var(t.var);
    if (!std::isfinite(t.coef)) throw ModelError("constraint '" + name + "': non-finite coefficient");
  }
  if (std::isnan(rhs)) throw ModelError("constraint '" + name + "': NaN right-hand side");
  const int index = num_constraints();
  if (!name.empty()) {
    auto [it, inserted] = row_names_.emplace(name, index);
    if (!inserted) throw ModelError("duplicate constraint name '" + name + "'");
  }
  constraints_.push_back({std::move(terms), sense, rhs, std::move(name)});
  return RowId{index};
}

RowId Model::add_expr_constraint(const LinearExpr& expr, RowSense sense, double rhs, std::string name) {
  return add_constraint(expr.terms, sense, rhs - expr.constant, std::move(name));
}

void Model::set_objective(ObjSense sense, std::vector<Term> terms, double constant) {
  for (const Term& t : terms) check_var(t.var);
  objective_ = Objective{sense, std::move(terms), constant};
  ++revision_;
}

void Model::set_objective_expr(ObjSense sense, const LinearExpr& expr) {
  set_objective(sense, expr.terms, expr.constant);
}

void Model::set_variable_bounds(VarId var, double lb, double ub) {
  check_var(var);
  if (lb > ub) throw ModelError("variable '" + variables_[var.index].name + "': lower bound exceeds upper bound");
  variables_[var.index].lb = lb;
  variables_[var.index].ub = ub;
  ++revision_;
}

void Model::set_integral(VarId var, bool integral) {
  check_var(var);
  Variable& v = variables_[var.index];
  if (v.integral == integral) return;
  v.integral = integral;
  num_integral_ += integral ? 1 : -1;
  ++revision_;
}

const Variable& Model::variable(VarId var) const {
  check_var(var);
  return variables_[var.index];
}

const Constraint& Model::constraint(RowId row) const {
  if (row.index < 0 || row.index >= num_constraints()) {
    throw ModelError("unknown constraint id " + std::to_string(row.index));
  }
  return constraints_[row.index];
}

const Objective& Model::objective() const {
  if (!objective_) throw ModelError("model has no objective");
  return *objective_;
}

std::optional<VarId> Model::find_variable(std::string_view name) const {
  auto it = var_names_.find(std::string(name));
  if (it == var_names_.end()) return std::nullopt;
  return VarId{it->second};
}

std::optional<RowId> Model::find_constraint(std::string_view name) const {
  auto it = row_names_.find(std::string(name));
  if (it == row_names_.end()) return std::nullopt;
  return RowId{it->second};
}

// ---------------------------------------------------------------------------
// HiGHS backend

namespace {

std::pair<double, double> row_bounds(const Constraint& row) {
  switch (row.sense) {
    case RowSense::kLessEqual: return {-kHighsInf, row.rhs};
    case RowSense::kEqual: return {row.rhs, row.rhs};
    case RowSense::kGreaterEqual: return {row.rhs, kHighsInf};
  }
  return {-kHighsInf, kHighsInf};
}

double to_highs(double bound) {
  if (bound == kInfinity) return kHighsInf;
  if (bound == -kInfinity) return -kHighsInf;
  return bound;
}

void append_columns(Highs& highs, const Model& model, int first) {
  const int count = model.num_variables() - first;
  if (count <= 0) return;
  std::vector<double> cost(count, 0.0), lower(count), upper(count);
  std::vector<HighsVarType> kinds(count, HighsVarType::kContinuous);
  bool any_integer = false;
  for (int k = 0; k < count; ++k) {
    const Variable& v = model.variables()[first + k];
    lower[k] = to_highs(v.lb);
    upper[k] = to_highs(v.ub);
    if (v.integral) {
      kinds[k] = HighsVarType::kInteger;
      any_integer = true;
    }
  }
  highs.addCols(count, cost.data(), lower.data(), upper.data(), 0, nullptr, nullptr, nullptr);
  if (any_integer) {
    highs.changeColsIntegrality(first, first + count - 1, kinds.data());
  }
}

void append_rows(Highs& highs, const Model& model, int first) {
  const int count = model.num_constraints() - first;
  if (count <= 0) return;
  std::vector<double> lower(count), upper(count);
  std::vector<HighsInt> starts(count);
  std::vector<HighsInt> indices;
  std::vector<double> values;
  for (int k = 0; k < count; ++k) {
    const Constraint& row = model.constraints()[first + k];
    std::tie(lower[k], upper[k]) = row_bounds(row);
    starts[k] = static_cast<HighsInt>(indices.size());
    for (const Term& t : row.terms) {
      indices.push_back(t.var.index);
      values.push_back(t.coef);
    }
  }
  highs.addRows(count, lower.data(), upper.data(), static_cast<HighsInt>(indices.size()), starts.data(),
                indices.data(), values.data());
}

void load_objective(Highs& highs, const Model& model) {
  const Objective& obj = model.objective();
  const int n = model.num_variables();
  std::vector<double> cost(n, 0.0);
  for (const Term& t : obj.terms) cost[t.var.index] += t.coef;
  if (n > 0) highs.changeColsCost(0, n - 1, cost.data());
  highs.changeObjectiveSense(obj.sense == ObjSense::kMinimize ? ::ObjSense::kMinimize : ::ObjSense::kMaximize);
  highs.changeObjectiveOffset(obj.constant);
}

void configure(Highs& highs, const SolveParams& params) {
  highs.setOptionValue("output_flag", false);
  highs.setOptionValue("mip_rel_gap", params.mip_gap);
  highs.setOptionValue("mip_abs_gap", 1e-9);
  highs.setOptionValue("primal_feasibility_tolerance", params.feasibility_tol);
  highs.setOptionValue("dual_feasibility_tolerance", params.feasibility_tol);
  highs.setOptionValue("mip_feasibility_tolerance", params.feasibility_tol);
  highs.setOptionValue("random_seed", params.random_seed);
  highs.setOptionValue("time_limit", std::isfinite(params.time_limit) ? params.time_limit : kHighsInf);
  highs.setOptionValue("presolve", "choose");
  highs.setOptionValue("solve_relaxation", params.relax_integrality);
  highs.setOptionValue("objective_bound", std::isfinite(params.objective_cutoff) ? params.objective_cutoff : kHighsInf);
}

SolveOutcome run_backend(Highs& highs, const Model& model, const SolveParams& params) {
  SolveOutcome out;
  configure(highs, params);
  const auto start = std::chrono::steady_clock::now();
  HighsStatus run_status = highs.run();
  HighsModelStatus status = highs.getModelStatus();
  if (status == HighsModelStatus::kUnboundedOrInfeasible) {
    // Presolve could not tell which; the unpresolved solve can.
    highs.setOptionValue("presolve", "off");
    run_status = highs.run();
    status = highs.getModelStatus();
    highs.setOptionValue("presolve", "choose");
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const HighsInfo& info = highs.getInfo();
  switch (status) {
    case HighsModelStatus::kOptimal:
      out.status = SolveStatus::kOptimal;
      break;
    case HighsModelStatus::kModelEmpty:
      out.status = SolveStatus::kOptimal;
      break;
    case HighsModelStatus::kInfeasible:
    case HighsModelStatus::kObjectiveBound:
      out.status = SolveStatus::kInfeasible;
      break;
    case HighsModelStatus::kUnbounded:
    case HighsModelStatus::kUnboundedOrInfeasible:
      out.status = SolveStatus::kUnbounded;
      break;
    default:
      out.status = SolveStatus::kLimit;
      out.diagnostic = "backend stopped with status '" + highs.modelStatusToString(status) + "'";
      break;
  }
  if (run_status == HighsStatus::kError && out.status == SolveStatus::kOptimal) {
    out.status = SolveStatus::kLimit;
    out.diagnostic = "backend reported an error";
  }

  const bool have_primal = info.primal_solution_status == kSolutionStatusFeasible ||
                           (status == HighsModelStatus::kModelEmpty);
  if (have_primal && (out.status == SolveStatus::kOptimal || out.status == SolveStatus::kLimit)) {
    const HighsSolution& sol = highs.getSolution();
    out.primal.assign(sol.col_value.begin(), sol.col_value.end());
    out.primal.resize(model.num_variables(), 0.0);
    out.objective = info.objective_function_value;
    if (status == HighsModelStatus::kModelEmpty) {
      // No columns: evaluate the constant objective directly.
      out.objective = model.objective().constant;
    }
    out.best_bound = model.is_mip() && !params.relax_integrality ? info.mip_dual_bound : out.objective;
    if (!std::isfinite(out.best_bound)) out.best_bound = out.objective;

    if (params.want_duals && !model.is_mip() && out.status == SolveStatus::kOptimal &&
        info.dual_solution_status == kSolutionStatusFeasible) {
      // HiGHS duals are d(objective)/d(rhs) for either sense.
      out.duals.assign(sol.row_dual.begin(), sol.row_dual.end());
      out.reduced_costs.assign(sol.col_dual.begin(), sol.col_dual.end());
    }
  } else if (out.status == SolveStatus::kLimit && out.diagnostic.empty()) {
    out.diagnostic = "no feasible point found before the limit";
  }
  return out;
}

void load_full(Highs& highs, const Model& model) {
  highs.clearModel();
  append_columns(highs, model, 0);
  append_rows(highs, model, 0);
  load_objective(highs, model);
}

}  // namespace

SolveOutcome solve(const Model& model, const SolveParams& params) {
  Session session(/*full_rebuild=*/true);
  return session.solve(model, params);
}

struct Session::Impl {
  bool full_rebuild = false;
  std::unique_ptr<Highs> highs;
  const Model* synced_model = nullptr;
  int synced_vars = 0;
  int synced_rows = 0;
  unsigned synced_revision = 0;
};

Session::Session(bool full_rebuild) : impl_(std::make_unique<Impl>()) { impl_->full_rebuild = full_rebuild; }
Session::~Session() = default;
Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;

SolveOutcome Session::solve(const Model& model, const SolveParams& params) {
  if (!model.has_objective()) throw ModelError("solve: model has no objective");
  Impl& s = *impl_;
  const bool can_append = !s.full_rebuild && s.highs && s.synced_model == &model &&
                          s.synced_revision == model.revision() && model.num_variables() >= s.synced_vars &&
                          model.num_constraints() >= s.synced_rows;
  if (can_append) {
    append_columns(*s.highs, model, s.synced_vars);
    append_rows(*s.highs, model, s.synced_rows);
  } else {
    s.highs = std::make_unique<Highs>();
    s.highs->setOptionValue("output_flag", false);
    load_full(*s.highs, model);
  }
  s.synced_model = &model;
  s.synced_vars = model.num_variables();
  s.synced_rows = model.num_constraints();
  s.synced_revision = model.revision();
  return run_backend(*s.highs, model, params);
}

// ---------------------------------------------------------------------------
// Checks and export

double lp_dual_objective(const Model& model, const SolveOutcome& outcome) {
  if (outcome.duals.size() != static_cast<std::size_t>(model.num_constraints()) ||
      outcome.reduced_costs.size() != static_cast<std::size_t>(model.num_variables())) {
    throw ModelError("lp_dual_objective: outcome carries no duals");
  }
  double total = model.objective().constant;
  for (int i = 0; i < model.num_constraints(); ++i) {
    total += outcome.duals[i] * model.constraints()[i].rhs;
  }
  for (int j = 0; j < model.num_variables(); ++j) {
    const double rc = outcome.reduced_costs[j];
    if (rc == 0.0) continue;
    const Variable& v = model.variables()[j];
    // A nonzero reduced cost sits on the bound the column is held at.
    const double x = outcome.primal[j];
    const bool at_lower = std::isfinite(v.lb) && (!std::isfinite(v.ub) || std::abs(x - v.lb) <= std::abs(x - v.ub));
    total += rc * (at_lower ? v.lb : v.ub);
  }
  return total;
}

double max_violation(const Model& model, const std::vector<double>& values) {
  double worst = 0.0;
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variables()[j];
    worst = std::max({worst, v.lb - values[j], values[j] - v.ub});
  }
  for (const Constraint& row : model.constraints()) {
    double activity = 0.0;
    for (const Term& t : row.terms) activity += t.coef * values[t.var.index];
    switch (row.sense) {
      case RowSense::kLessEqual: worst = std::max(worst, activity - row.rhs); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, row.rhs - activity); break;
      case RowSense::kEqual: worst = std::max(worst, std::abs(activity - row.rhs)); break;
    }
  }
  return worst;
}

namespace {

std::string lp_name(const Model& model, VarId var) {
  const std::string& name = model.variables()[var.index].name;
  return name.empty() ? "x" + std::to_string(var.index) : name;
}

void write_terms(std::ostream& os, const Model& model, const std::vector<Term>& terms) {
  if (terms.empty()) {
    os << " 0 " << lp_name(model, VarId{0});
    return;
  }
  for (const Term& t : terms) {
    os << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << ' ' << lp_name(model, t.var);
  }
}

}  // namespace

std::string to_lp_format(const Model& model) {
  std::ostringstream os;
  os.precision(17);
  const Objective& obj = model.objective();
  os << (obj.sense == ObjSense::kMinimize ? "Minimize\n" : "Maximize\n") << " obj:";
  if (obj.terms.empty() && model.num_variables() == 0) {
    os << " 0";
  } else {
    write_terms(os, model, obj.terms);
  }
  if (obj.constant != 0.0) os << (obj.constant < 0 ? " - " : " + ") << std::abs(obj.constant);
  os << "\nSubject To\n";
  for (int i = 0; i < model.num_constraints(); ++i) {
    const Constraint& row = model.constraints()[i];
    os << ' ' << (row.name.empty() ? "c" + std::to_string(i) : row.name) << ':';
    write_terms(os, model, row.terms);
    switch (row.sense) {
      case RowSense::kLessEqual: os << " <= "; break;
      case RowSense::kEqual: os << " = "; break;
      case RowSense::kGreaterEqual: os << " >= "; break;
    }
    os << row.rhs << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variables()[j];
    const std::string name = lp_name(model, VarId{j});
    if (std::isinf(v.lb) && std::isinf(v.ub)) {
      os << ' ' << name << " free\n";
    } else {
      os << ' ';
      if (std::isinf(v.lb)) os << "-inf"; else os << v.lb;
      os << " <= " << name << " <= ";
      if (std::isinf(v.ub)) os << "+inf"; else os << v.ub;
      os << '\n';
    }
  }
  if (model.is_mip()) {
    os << "General\n";
    for (int j = 0; j < model.num_variables(); ++j) {
      if (model.variables()[j].integral) os << ' ' << lp_name(model, VarId{j}) << '\n';
    }
  }
  os << "End\n";
  return os.str();
}

void write_lp_file(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << to_lp_format(model);
}

}  // namespace pvsizing::lp
