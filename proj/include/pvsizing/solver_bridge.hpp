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

// Backend-agnostic construction and solution of linear and mixed-integer
// linear programs.
//
// A Model is a plain container of variables, rows and an objective. Nothing
// in it knows about the solver; `solve` hands a snapshot to the backend
// (HiGHS) and translates the answer back. A Session keeps one backend
// instance alive between solves so that rows and columns appended to a
// model are passed incrementally instead of re-sending the whole model.

#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pvsizing::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct VarId {
  int index = -1;
  friend bool operator==(VarId, VarId) = default;
};

struct RowId {
  int index = -1;
  friend bool operator==(RowId, RowId) = default;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class ObjSense { kMinimize, kMaximize };
enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kLimit };

std::string_view to_string(SolveStatus status);

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sum of terms plus a constant. Used by model builders to collect the
// variable part of a row while folding fixed quantities into the constant.
struct LinearExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  LinearExpr& add(VarId var, double coef) {
    if (coef != 0.0) terms.push_back({var, coef});
    return *this;
  }
  LinearExpr& add_constant(double value) {
    constant += value;
    return *this;
  }
  LinearExpr& add(const LinearExpr& other, double scale = 1.0);
};

struct Variable {
  double lb = 0.0;
  double ub = kInfinity;
  bool integral = false;
  std::string name;
};

struct Constraint {
  std::vector<Term> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

struct Objective {
  ObjSense sense = ObjSense::kMinimize;
  std::vector<Term> terms;
  double constant = 0.0;
};

class Model {
 public:
  // Throws ModelError on lb > ub, NaN bounds or a duplicate name.
  VarId add_variable(double lb, double ub, bool integral, std::string name);
  VarId add_binary(std::string name) { return add_variable(0.0, 1.0, true, std::move(name)); }

  // Stored verbatim. Throws ModelError on an unknown variable id, a
  // non-finite coefficient or a duplicate name.
  RowId add_constraint(std::vector<Term> terms, RowSense sense, double rhs, std::string name);
  // `expr sense rhs`, with the expression constant moved to the right side.
  RowId add_expr_constraint(const LinearExpr& expr, RowSense sense, double rhs, std::string name);

  void set_objective(ObjSense sense, std::vector<Term> terms, double constant = 0.0);
  void set_objective_expr(ObjSense sense, const LinearExpr& expr);
  void set_variable_bounds(VarId var, double lb, double ub);
  void set_integral(VarId var, bool integral);

  [[nodiscard]] int num_variables() const { return static_cast<int>(variables_.size()); }
  [[nodiscard]] int num_constraints() const { return static_cast<int>(constraints_.size()); }
  [[nodiscard]] int num_integral() const { return num_integral_; }
  [[nodiscard]] bool is_mip() const { return num_integral_ > 0; }
  [[nodiscard]] bool has_objective() const { return objective_.has_value(); }

  [[nodiscard]] const Variable& variable(VarId var) const;
  [[nodiscard]] const Constraint& constraint(RowId row) const;
  [[nodiscard]] const std::vector<Variable>& variables() const { return variables_; }
  [[nodiscard]] const std::vector<Constraint>& constraints() const { return constraints_; }
  // Throws ModelError when no objective was set.
  [[nodiscard]] const Objective& objective() const;

  [[nodiscard]] std::optional<VarId> find_variable(std::string_view name) const;
  [[nodiscard]] std::optional<RowId> find_constraint(std::string_view name) const;

  // Bumped whenever existing data changes (objective, bounds). Appends do
  // not bump it; a Session uses this to decide between append and resend.
  [[nodiscard]] unsigned revision() const { return revision_; }

 private:
  void check_var(VarId var) const;

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::optional<Objective> objective_;
  std::unordered_map<std::string, int> var_names_;
  std::unordered_map<std::string, int> row_names_;
  int num_integral_ = 0;
  unsigned revision_ = 0;
};

struct SolveParams {
  double mip_gap = 1e-6;
  double time_limit = kInfinity;  // seconds
  bool want_duals = false;
  double feasibility_tol = 1e-6;
  int random_seed = 0;
  // Solve the continuous relaxation of a MIP; best_bound is its optimum.
  bool relax_integrality = false;
  // MIP only: prune every node whose bound is not below this value. When no
  // such point exists the outcome is kInfeasible.
  double objective_cutoff = kInfinity;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::kLimit;
  double objective = 0.0;
  // Proven bound on the optimum (equals `objective` for LPs).
  double best_bound = 0.0;
  std::vector<double> primal;
  // Row duals as d(objective)/d(rhs); empty unless requested on a pure LP.
  std::vector<double> duals;
  // Column reduced costs as d(objective)/d(bound), same availability.
  std::vector<double> reduced_costs;
  double wall_seconds = 0.0;
  std::string diagnostic;

  [[nodiscard]] bool optimal() const { return status == SolveStatus::kOptimal; }
  [[nodiscard]] bool has_primal() const { return !primal.empty(); }
  [[nodiscard]] double value(VarId var) const { return primal.at(static_cast<std::size_t>(var.index)); }
  [[nodiscard]] double dual(RowId row) const { return duals.at(static_cast<std::size_t>(row.index)); }
};

// One-shot solve. Throws ModelError when the model has no objective.
SolveOutcome solve(const Model& model, const SolveParams& params = {});

// Keeps a backend instance across solves of one growing model. With
// `full_rebuild` every solve starts from a fresh backend, which is slower
// but independent of the previous solve history.
class Session {
 public:
  explicit Session(bool full_rebuild = false);
  ~Session();
  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  SolveOutcome solve(const Model& model, const SolveParams& params = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Objective of the LP dual reconstructed from rhs, duals and reduced costs.
// Equals the primal objective at an optimal primal-dual pair.
double lp_dual_objective(const Model& model, const SolveOutcome& outcome);

// Largest violation of any row or bound of `model` at `values`.
double max_violation(const Model& model, const std::vector<double>& values);

// CPLEX LP text rendering, used for inspection and golden files.
std::string to_lp_format(const Model& model);
void write_lp_file(const Model& model, const std::string& path);

}  // namespace pvsizing::lp
