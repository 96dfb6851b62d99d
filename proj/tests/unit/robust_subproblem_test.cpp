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

#include "pvsizing/robust_subproblem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "random_instance.hpp"

namespace pvsizing {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(VertexCount, MatchesClosedForm) {
  EXPECT_EQ(vertex_count(4, 2), 33u);  // 1 + 8 + 24
  EXPECT_EQ(vertex_count(3, 3), 27u);  // 1 + 6 + 12 + 8
  EXPECT_EQ(vertex_count(24, 0), 1u);
  EXPECT_EQ(vertex_count(3, 2.5), 19u);
}

TEST(DualSp, BigMReadsOffBuyPriceRow) {
  auto inst = testing::flat_instance(4, 1, 1.0, 0.20, 0.05);
  inst.pv.profiles.push_back(inst.pv.profiles[0]);
  inst.pv.probabilities = {0.25, 0.75};
  EXPECT_DOUBLE_EQ(dual_big_m(inst, 2, 0), 0.05);
  const auto sp = build_dual_sp(inst, empty_decision(inst.dims()));
  const auto& pp = sp.model.variable(sp.p_plus[sp.dims.tys(2, 0, 0)]);
  EXPECT_DOUBLE_EQ(pp.ub, 0.05);
}

TEST(DualSp, ZeroBudgetIsNominalRecourse) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = with_budget(testing::random_instance(rng), 0);
    const auto fixed = testing::random_decision(inst, rng);
    const auto dual = solve_dual_sp(inst, fixed);
    EXPECT_EQ(dual.worst.realization, inst.demand.nominal);
    const auto primal = solve_primal_sp(inst, fixed, inst.demand.nominal);
    EXPECT_LE(rel(dual.objective, primal.objective), 1e-5);
  }
}

TEST(DualSp, NoAssetsFullBudgetBuysPeakDemand) {
  auto inst = testing::flat_instance(4, 2, 2.0, 0.3, 0.1);
  inst.demand.deviation = HourlyMatrix(2, 4, 0.5);
  inst.demand.budget = 4;
  const auto r = solve_dual_sp(inst, empty_decision(inst.dims()));
  EXPECT_NEAR(r.objective, 2 * 4 * 0.3 * 2.5, 1e-7);
}

TEST(DualSp, CoveredDemandCostsNothing) {
  auto inst = testing::flat_instance(4, 1, 2.0, 0.3, 0.0);
  inst.pv.profiles[0] = HourlyMatrix(1, 4, 1.0);
  inst.demand.deviation = HourlyMatrix(1, 4, 1.0);
  inst.demand.budget = 2;
  auto fixed = empty_decision(inst.dims());
  fixed.pv_capacity = 10.0;
  EXPECT_NEAR(solve_dual_sp(inst, fixed).objective, 0.0, 1e-9);
}

TEST(DualSp, StrongDualityAndDualFeasibility) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = testing::random_instance(rng);
    const auto fixed = testing::random_decision(inst, rng);
    const auto r = solve_dual_sp(inst, fixed);
    const auto primal = solve_primal_sp(inst, fixed, r.worst.realization);
    EXPECT_LE(rel(primal.objective, r.objective), 1e-5) << "trial " << trial;
    EXPECT_LE(dual_infeasibility(inst, r.dual), 1e-6);
    EXPECT_LE(rel(dual_objective(inst, fixed, r.worst.realization, r.dual), r.objective), 1e-6);
  }
}

TEST(DualSp, BigMIsExactAndRealizationIsExtreme) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = testing::random_instance(rng);
    const auto fixed = testing::random_decision(inst, rng);
    const auto r = solve_dual_sp(inst, fixed);
    const Dims& d = r.dual.dims;
    for (int s = 0; s < d.scenarios; ++s) {
      for (int y = 0; y < d.years; ++y) {
        for (int t = 0; t < d.hours; ++t) {
          const int i = d.tys(t, y, s);
          EXPECT_NEAR(r.dual.p_plus[i], r.dual.a[i] * r.worst.v_plus(y, t), 1e-6);
          EXPECT_NEAR(r.dual.p_minus[i], r.dual.a[i] * r.worst.v_minus(y, t), 1e-6);
        }
      }
    }
    for (int y = 0; y < d.years; ++y) {
      double used = 0.0;
      for (int t = 0; t < d.hours; ++t) {
        const double nom = inst.demand.nominal(y, t), dev = inst.demand.deviation(y, t), v = r.worst.realization(y, t);
        EXPECT_TRUE(v == nom || v == nom + dev || v == nom - dev);
        EXPECT_LE(r.worst.v_plus(y, t) + r.worst.v_minus(y, t), 1.0);
        used += r.worst.v_plus(y, t) + r.worst.v_minus(y, t);
      }
      EXPECT_LE(used, inst.demand.budget);
    }
  }
}

TEST(DualSp, MonotoneInBudget) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = testing::random_instance(rng);
    const auto fixed = testing::random_decision(inst, rng);
    double prev = -lp::kInfinity;
    for (int g = 0; g <= inst.hours(); ++g) {
      const double z = solve_dual_sp(with_budget(inst, g), fixed).objective;
      EXPECT_GE(z, prev - 1e-7);
      prev = z;
    }
  }
}

TEST(DualSp, FourHourToyMatchesEnumeration) {
  std::mt19937_64 rng(19);
  testing::RandomShape shape;
  shape.min_hours = shape.max_hours = 4;
  shape.max_years = 1;
  shape.max_scenarios = 1;
  auto inst = with_budget(testing::random_instance(rng, shape), 2);
  const auto fixed = testing::random_decision(inst, rng);
  const auto brute = enumerate_worst_case(inst, fixed);
  EXPECT_LE(rel(solve_dual_sp(inst, fixed).objective, brute.objective), 1e-5);
}

TEST(PrimalSp, ZeroDemandZeroPvCostsNothing) {
  auto inst = testing::flat_instance(3, 1, 0.0, 0.3, 0.1);
  EXPECT_NEAR(solve_primal_sp(inst, empty_decision(inst.dims()), inst.demand.nominal).objective, 0.0, 1e-12);
}

TEST(PrimalSp, SinglePurchase) {
  auto inst = testing::flat_instance(3, 1, 0.0, 0.3, 0.1);
  HourlyMatrix demand(1, 3);
  demand(0, 1) = 1.0;
  EXPECT_NEAR(solve_primal_sp(inst, empty_decision(inst.dims()), demand).objective, 0.3, 1e-9);
}

TEST(PrimalSp, LpDualsCloseTheGap) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = testing::random_instance(rng);
    const auto r = solve_primal_sp(inst, testing::random_decision(inst, rng), inst.demand.nominal);
    EXPECT_LE(rel(r.dual_objective, r.objective), 1e-6);
  }
}

TEST(Enumerate, TiesGoToSmallestPattern) {
  // No assets and zero prices: every pattern costs 0, so the nominal one wins.
  auto inst = testing::flat_instance(3, 1, 1.0, 0.0, 0.0);
  inst.demand.deviation = HourlyMatrix(1, 3, 0.5);
  inst.demand.budget = 2;
  const auto w = enumerate_worst_case(inst, empty_decision(inst.dims()));
  EXPECT_EQ(w.realization, inst.demand.nominal);
}

TEST(Enumerate, RejectsLargeBudgets) {
  auto inst = testing::flat_instance(24, 1, 1.0, 0.3, 0.1);
  inst.demand.budget = 5;
  EXPECT_THROW(enumerate_worst_case(inst, empty_decision(inst.dims())), std::invalid_argument);
}

TEST(WorstCaseCsv, Columns) {
  auto inst = testing::flat_instance(2, 1, 1.0, 0.3, 0.1);
  inst.demand.deviation = HourlyMatrix(1, 2, 0.5);
  HourlyMatrix vp(1, 2), vm(1, 2);
  vp(0, 1) = 1;
  const auto w = make_worst_case(inst.demand, vp, vm);
  EXPECT_EQ(worst_case_csv(inst.demand, w),
            "year,hour,nominal,realization,v_plus,v_minus\n1,1,1,1,0,0\n1,2,1,1.5,1,0\n");
}

}  // namespace
}  // namespace pvsizing
