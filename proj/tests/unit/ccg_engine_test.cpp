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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "random_instance.hpp"

namespace pvsizing {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

void expect_bound_discipline(const CcgTrace& trace, const CcgConfig& cfg) {
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    EXPECT_LE(r.lb, r.ub + 1e-6 * std::max(1.0, std::abs(r.ub)));
    if (i > 0) {
      EXPECT_GE(r.lb, trace.records[i - 1].lb - 1e-9);
      EXPECT_LE(r.ub, trace.records[i - 1].ub + 1e-9);
    }
  }
  if (trace.converged) {
    EXPECT_LE(trace.records.back().gap, cfg.epsilon);
  }
}

TEST(CcgFormulas, UpperBoundCandidate) { EXPECT_DOUBLE_EQ(upper_bound_candidate(100, 40, 45), 105); }

TEST(CcgFormulas, RelativeGap) {
  EXPECT_DOUBLE_EQ(relative_gap(95, 100), 0.05);
  EXPECT_DOUBLE_EQ(relative_gap(-0.2, 0.1), 0.30000000000000004);  // absolute near zero
}

TEST(Ccg, RejectsBadConfig) {
  const auto inst = testing::flat_instance(3, 1, 1.0, 0.3, 0.1);
  CcgConfig cfg;
  cfg.epsilon = 0;
  EXPECT_THROW(run_ccg(inst, cfg), std::invalid_argument);
  cfg.epsilon = 1e-4;
  cfg.max_iterations = 0;
  EXPECT_THROW(run_ccg(inst, cfg), std::invalid_argument);
}

TEST(Ccg, ZeroBudgetMatchesExtensiveFormInTwoIterations) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = with_budget(testing::random_instance(rng), 0);
    const auto trace = run_ccg(inst);
    const auto ext = solve_extensive_stochastic(inst, inst.demand.nominal);
    ASSERT_TRUE(trace.converged);
    EXPECT_LE(trace.iterations(), 2);
    EXPECT_LE(rel(trace.objective, ext.objective), 1e-5);
  }
}

TEST(Ccg, MatchesBruteForceAdversary) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = testing::random_instance(rng);
    CcgConfig cfg;
    const auto a = run_ccg(inst, cfg);
    const auto b = run_ccg_bruteforce(inst, cfg);
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_LE(rel(a.objective, b.objective), 1e-5) << "trial " << trial;
    expect_bound_discipline(a, cfg);
    expect_bound_discipline(b, cfg);
    EXPECT_LE(static_cast<std::uint64_t>(b.iterations()),
              static_cast<std::uint64_t>(std::pow(vertex_count(inst.hours(), inst.demand.budget), inst.years())) + 1);
  }
}

TEST(Ccg, FullBudgetNotCheaperThanZeroBudget) {
  std::mt19937_64 rng(41);
  testing::RandomShape shape;
  shape.max_hours = 4;
  shape.max_years = 1;
  auto inst = testing::random_instance(rng, shape);
  const auto zero = run_ccg(with_budget(inst, 0));
  const auto full = run_ccg_bruteforce(with_budget(inst, inst.hours()));
  const auto full_milp = run_ccg(with_budget(inst, inst.hours()));
  EXPECT_GE(full.objective, zero.objective - 1e-6);
  EXPECT_LE(rel(full.objective, full_milp.objective), 1e-5);
}

TEST(Ccg, IterationLimitFlagsIncomplete) {
  std::mt19937_64 rng(43);
  testing::RandomShape shape;
  shape.min_hours = 6;
  auto inst = with_budget(testing::random_instance(rng, shape), 3);
  CcgConfig cfg;
  cfg.max_iterations = 1;
  const auto trace = run_ccg(inst, cfg);
  EXPECT_EQ(trace.iterations(), 1);
  if (!trace.converged) {
    EXPECT_FALSE(trace.warnings.empty());
  }
}

TEST(Ccg, SeededNominalBlockConvergesToSameObjective) {
  std::mt19937_64 rng(47);
  const auto inst = testing::random_instance(rng);
  CcgConfig seeded;
  seeded.seed_nominal_block = true;
  EXPECT_LE(rel(run_ccg(inst, seeded).objective, run_ccg(inst).objective), 1e-5);
}

TEST(Ccg, DeterministicTraces) {
  std::mt19937_64 rng(53);
  const auto inst = testing::random_instance(rng);
  CcgConfig cfg;
  cfg.full_rebuild = true;
  cfg.seed = 5;
  EXPECT_EQ(trace_csv(run_ccg(inst, cfg), false), trace_csv(run_ccg(inst, cfg), false));
}

TEST(Extensive, SingleScenarioEqualsDeterministic) {
  std::mt19937_64 rng(59);
  testing::RandomShape shape;
  shape.max_scenarios = 1;
  const auto inst = testing::random_instance(rng, shape);
  const auto ext = solve_extensive_stochastic(inst, inst.demand.nominal);
  const auto det = solve_deterministic(inst, inst.demand.nominal, inst.pv.profiles[0]);
  EXPECT_LE(rel(ext.objective, det.objective), 1e-6);
}

TEST(Extensive, DuplicatedScenariosDoNotChangeObjective) {
  std::mt19937_64 rng(61);
  testing::RandomShape shape;
  shape.max_scenarios = 1;
  auto inst = testing::random_instance(rng, shape);
  const double once = solve_extensive_stochastic(inst, inst.demand.nominal).objective;
  inst.pv.profiles.push_back(inst.pv.profiles[0]);
  inst.pv.probabilities = {0.5, 0.5};
  EXPECT_LE(rel(solve_extensive_stochastic(inst, inst.demand.nominal).objective, once), 1e-6);
}

TEST(TraceCsv, HeaderAndZeroedTimings) {
  CcgTrace t;
  t.records.push_back({1, 1.5, 2.5, 0.4, 1.5, 2, 1, 0.25, 0.125});
  EXPECT_EQ(trace_csv(t), "iter,lb,ub,gap,z_mp,z_sp,theta,t_mp_sec,t_sp_sec\n1,1.5,2.5,0.4,1.5,2,1,0.25,0.125\n");
  EXPECT_EQ(trace_csv(t, false), "iter,lb,ub,gap,z_mp,z_sp,theta,t_mp_sec,t_sp_sec\n1,1.5,2.5,0.4,1.5,2,1,0,0\n");
}

}  // namespace
}  // namespace pvsizing
