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

#include <gtest/gtest.h>

#include <random>

namespace pvsizing::lp {
namespace {

TEST(Model, FirstVariableGetsIdZero) {
  Model m;
  EXPECT_EQ(m.add_variable(0, kInfinity, false, "x").index, 0);
  EXPECT_EQ(m.find_variable("x")->index, 0);
}

TEST(Model, BinaryEncoding) {
  Model m;
  const VarId b = m.add_binary("b");
  EXPECT_TRUE(m.variable(b).integral);
  EXPECT_EQ(m.variable(b).lb, 0.0);
  EXPECT_EQ(m.variable(b).ub, 1.0);
  EXPECT_TRUE(m.is_mip());
}

TEST(Model, RejectsBadBoundsAndDuplicates) {
  Model m;
  EXPECT_THROW(m.add_variable(3, 2, false, "x"), ModelError);
  m.add_variable(0, 1, false, "x");
  EXPECT_THROW(m.add_variable(0, 1, false, "x"), ModelError);
}

TEST(Model, ConstraintStoredVerbatim) {
  Model m;
  const VarId x = m.add_variable(0, kInfinity, false, "x");
  const VarId y = m.add_variable(0, kInfinity, false, "y");
  const RowId r = m.add_constraint({{x, 1}, {y, 1}, {x, 2}}, RowSense::kLessEqual, 5, "cap");
  EXPECT_EQ(m.constraint(r).terms.size(), 3u);
  EXPECT_EQ(m.find_constraint("cap")->index, r.index);
}

TEST(Model, RejectsUnknownVariable) {
  Model m;
  m.add_variable(0, 1, false, "x");
  EXPECT_THROW(m.add_constraint({{VarId{3}, 1}}, RowSense::kLessEqual, 1, "r"), ModelError);
}

TEST(Model, ExpressionConstantMovesToRhs) {
  Model m;
  const VarId x = m.add_variable(0, kInfinity, false, "x");
  LinearExpr e;
  e.add(x, 2).add_constant(3);
  const RowId r = m.add_expr_constraint(e, RowSense::kGreaterEqual, 7, "r");
  EXPECT_DOUBLE_EQ(m.constraint(r).rhs, 4);
}

TEST(Solve, RequiresObjective) {
  Model m;
  m.add_variable(0, 1, false, "x");
  EXPECT_THROW(solve(m), ModelError);
}

TEST(Solve, OneVariableLpWithDual) {
  Model m;
  const VarId x = m.add_variable(-kInfinity, kInfinity, false, "x");
  const RowId r = m.add_constraint({{x, 1}}, RowSense::kGreaterEqual, 3, "lo");
  m.set_objective(ObjSense::kMinimize, {{x, 1}});
  SolveParams p;
  p.want_duals = true;
  const auto out = solve(m, p);
  ASSERT_EQ(out.status, SolveStatus::kOptimal);
  EXPECT_NEAR(out.objective, 3, 1e-9);
  EXPECT_NEAR(out.dual(r), 1, 1e-9);
  EXPECT_NEAR(lp_dual_objective(m, out), 3, 1e-9);
}

TEST(Solve, IntegralityRoundsUp) {
  Model m;
  const VarId x = m.add_variable(0, kInfinity, true, "x");
  m.add_constraint({{x, 1}}, RowSense::kLessEqual, 5, "hi");
  m.add_constraint({{x, 1}}, RowSense::kGreaterEqual, 4.2, "lo");
  m.set_objective(ObjSense::kMaximize, {{x, 1}});
  const auto out = solve(m);
  ASSERT_EQ(out.status, SolveStatus::kOptimal);
  EXPECT_NEAR(out.objective, 5, 1e-9);
}

Model integer_floor_model() {
  Model m;
  const VarId x = m.add_variable(0, kInfinity, true, "x");
  m.add_constraint({{x, 1}}, RowSense::kGreaterEqual, 4.2, "lo");
  m.set_objective(ObjSense::kMinimize, {{x, 1}});
  return m;
}

TEST(Model, SetIntegralTogglesCount) {
  Model m = integer_floor_model();
  const VarId x{0};
  const unsigned rev = m.revision();
  m.set_integral(x, false);
  EXPECT_FALSE(m.is_mip());
  EXPECT_GT(m.revision(), rev);
  m.set_integral(x, true);
  m.set_integral(x, true);
  EXPECT_EQ(m.num_integral(), 1);
}

TEST(Solve, RelaxIntegrality) {
  const Model m = integer_floor_model();
  EXPECT_NEAR(solve(m).objective, 5, 1e-9);
  SolveParams p;
  p.relax_integrality = true;
  const auto out = solve(m, p);
  ASSERT_EQ(out.status, SolveStatus::kOptimal);
  EXPECT_NEAR(out.objective, 4.2, 1e-9);
  EXPECT_NEAR(out.best_bound, 4.2, 1e-9);
}

TEST(Solve, ObjectiveCutoff) {
  const Model m = integer_floor_model();
  SolveParams p;
  p.objective_cutoff = 4.5;
  const auto pruned = solve(m, p);
  EXPECT_EQ(pruned.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(pruned.has_primal());
  p.objective_cutoff = 6;
  const auto out = solve(m, p);
  ASSERT_TRUE(out.has_primal());
  EXPECT_NEAR(out.objective, 5, 1e-9);
}

TEST(Solve, InfeasibleBound) {
  Model m;
  const VarId x = m.add_variable(0, kInfinity, false, "x");
  m.add_constraint({{x, 1}}, RowSense::kLessEqual, -1, "r");
  m.set_objective(ObjSense::kMinimize, {});
  EXPECT_EQ(solve(m).status, SolveStatus::kInfeasible);
}

TEST(Solve, VacuousRowIsInfeasible) {
  Model m;
  m.add_variable(0, 1, false, "x");
  m.add_constraint({}, RowSense::kLessEqual, -1, "empty");
  m.set_objective(ObjSense::kMinimize, {});
  EXPECT_EQ(solve(m).status, SolveStatus::kInfeasible);
}

TEST(Solve, Unbounded) {
  Model m;
  const VarId x = m.add_variable(0, kInfinity, false, "x");
  m.set_objective(ObjSense::kMaximize, {{x, 1}});
  EXPECT_EQ(solve(m).status, SolveStatus::kUnbounded);
}

// Random feasible LPs: box-bounded variables, rows built around a known
// interior point, so every instance is feasible and bounded.
Model random_lp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Model m;
  const int n = 3 + static_cast<int>(rng() % 5), rows = 2 + static_cast<int>(rng() % 6);
  std::vector<double> point;
  for (int j = 0; j < n; ++j) {
    m.add_variable(-2 - u(rng), 2 + u(rng), false, "x" + std::to_string(j));
    point.push_back(0.5 * u(rng));
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<Term> terms;
    double act = 0;
    for (int j = 0; j < n; ++j) {
      const double c = u(rng);
      terms.push_back({VarId{j}, c});
      act += c * point[j];
    }
    const int kind = static_cast<int>(rng() % 3);
    const RowSense sense = kind == 0 ? RowSense::kLessEqual : kind == 1 ? RowSense::kGreaterEqual : RowSense::kEqual;
    const double rhs = sense == RowSense::kLessEqual ? act + std::abs(u(rng)) : sense == RowSense::kGreaterEqual ? act - std::abs(u(rng)) : act;
    m.add_constraint(std::move(terms), sense, rhs, "r" + std::to_string(i));
  }
  std::vector<Term> obj;
  for (int j = 0; j < n; ++j) obj.push_back({VarId{j}, u(rng)});
  m.set_objective(rng() % 2 ? ObjSense::kMinimize : ObjSense::kMaximize, std::move(obj), u(rng));
  return m;
}

TEST(Solve, StrongDualitySelfTest) {
  std::mt19937_64 rng(3);
  SolveParams p;
  p.want_duals = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Model m = random_lp(rng);
    const auto out = solve(m, p);
    ASSERT_EQ(out.status, SolveStatus::kOptimal);
    EXPECT_LE(max_violation(m, out.primal), 1e-6);
    EXPECT_NEAR(lp_dual_objective(m, out), out.objective, 1e-5 * std::max(1.0, std::abs(out.objective)));
  }
}

TEST(Solve, ResolveIsStable) {
  std::mt19937_64 rng(5);
  const Model m = random_lp(rng);
  EXPECT_NEAR(solve(m).objective, solve(m).objective, 1e-9);
}

TEST(Session, IncrementalAppendMatchesFreshSolve) {
  Model m;
  const VarId x = m.add_variable(0, 10, false, "x");
  const VarId y = m.add_variable(0, 10, true, "y");
  m.add_constraint({{x, 1}, {y, 1}}, RowSense::kGreaterEqual, 2.5, "r0");
  m.set_objective(ObjSense::kMinimize, {{x, 1}, {y, 1.5}});
  Session inc, fresh(true);
  EXPECT_NEAR(inc.solve(m).objective, 2.5, 1e-9);
  const VarId z = m.add_variable(0, 10, false, "z");
  m.add_constraint({{x, 1}, {z, -1}}, RowSense::kLessEqual, 0.5, "r1");
  m.add_constraint({{z, 1}}, RowSense::kLessEqual, 0.0, "r2");
  const double a = inc.solve(m).objective, b = fresh.solve(m).objective, c = solve(m).objective;
  EXPECT_NEAR(a, c, 1e-9);
  EXPECT_NEAR(b, c, 1e-9);
  EXPECT_NEAR(c, 0.5 + 1.5 * 2, 1e-9);
}

TEST(LpFormat, Golden) {
  Model m;
  const VarId x = m.add_variable(0, kInfinity, false, "x");
  const VarId y = m.add_binary("y");
  m.add_constraint({{x, 1}, {y, -2.5}}, RowSense::kLessEqual, 4, "cap");
  m.add_constraint({{x, 1}}, RowSense::kGreaterEqual, 1, "lo");
  m.set_objective(ObjSense::kMinimize, {{x, 1}, {y, 3}}, 2);
  EXPECT_EQ(to_lp_format(m),
            "Minimize\n obj: + 1 x + 3 y + 2\nSubject To\n cap: + 1 x - 2.5 y <= 4\n lo: + 1 x >= 1\n"
            "Bounds\n 0 <= x <= +inf\n 0 <= y <= 1\nGeneral\n y\nEnd\n");
}

}  // namespace
}  // namespace pvsizing::lp
