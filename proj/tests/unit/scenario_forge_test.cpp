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

#include "pvsizing/scenario_forge.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "fixtures.hpp"

namespace pvsizing::forge {
namespace {

// Lag-k autocorrelation of an ARMA(1,1) process from its MA(inf) weights,
// psi_0 = 1, psi_1 = phi + theta, psi_k = phi psi_{k-1}.
double psi_acf(double phi, double theta, int lag) {
  std::vector<double> psi{1.0, phi + theta};
  while (psi.size() < 4000) psi.push_back(phi * psi.back());
  double g0 = 0.0, gk = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    g0 += psi[i] * psi[i];
    if (i + lag < psi.size()) gk += psi[i] * psi[i + lag];
  }
  return gk / g0;
}

double sample_acf(const std::vector<double>& x, int lag) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + lag < x.size()) num += (x[i] - mean) * (x[i + lag] - mean);
  }
  return num / den;
}

TEST(ProjectDemand, CompoundGrowthAtYearTen) {
  const HourlyMatrix m = project_demand({{100.0}, 0.02, 10});
  EXPECT_NEAR(m(9, 0), 121.899, 1e-3);
}

TEST(ProjectDemand, ZeroGrowthIsIdentity) {
  const HourlyMatrix m = project_demand({{1.0, 2.5, 3.0}, 0.0, 4});
  for (int y = 0; y < 4; ++y) {
    EXPECT_EQ(m(y, 0), 1.0);
    EXPECT_EQ(m(y, 1), 2.5);
  }
}

TEST(ProjectDemand, BackSolvedRateRoundTrips) {
  const double r = fit_growth_rate({{0, 100}, {5, 110}});
  EXPECT_NEAR(r, 0.01924, 1e-5);
  EXPECT_NEAR(project_demand({{100.0}, r, 5})(4, 0), 110.0, 1e-9);
}

TEST(ProjectDemand, Multiplicative) {
  const HourlyMatrix a = project_demand({{1.0, 3.0}, 0.03, 3});
  const HourlyMatrix b = project_demand({{4.0, 12.0}, 0.03, 3});
  for (int y = 0; y < 3; ++y)
    for (int t = 0; t < 2; ++t) EXPECT_DOUBLE_EQ(b(y, t), 4.0 * a(y, t));
}

TEST(ProjectDemand, RejectsBadRate) { EXPECT_THROW(project_demand({{1.0}, -1.0, 2}), DataError); }

TEST(FitGrowthRate, ClosedForms) {
  EXPECT_NEAR(fit_growth_rate({{0, 100}, {10, 200}}), std::pow(2.0, 0.1) - 1.0, 1e-12);
  EXPECT_NEAR(fit_growth_rate({{0, 100}, {5, 100}, {10, 100}}), 0.0, 1e-12);
}

TEST(FitGrowthRate, MatchesGridSearch) {
  const std::vector<GrowthAnchor> anchors{{0, 100}, {5, 115}, {15, 160}};
  auto sse = [&](double r) {
    // Best intercept for a fixed slope is the mean residual.
    double a = 0.0;
    for (const auto& p : anchors) a += std::log(p.demand) - p.year * std::log1p(r);
    a /= static_cast<double>(anchors.size());
    double s = 0.0;
    for (const auto& p : anchors) {
      const double e = std::log(p.demand) - a - p.year * std::log1p(r);
      s += e * e;
    }
    return s;
  };
  double best = 0.0, best_sse = INFINITY;
  for (double lo = 0.0, hi = 0.1, step = 1e-3; step > 1e-10; step /= 10) {
    for (double r = lo; r <= hi; r += step) {
      if (const double s = sse(r); s < best_sse) best_sse = s, best = r;
    }
    lo = best - step;
    hi = best + step;
  }
  EXPECT_NEAR(fit_growth_rate(anchors), best, 1e-8);
}

TEST(FitGrowthRate, Errors) {
  EXPECT_THROW(fit_growth_rate({{0, 100}}), DataError);
  EXPECT_THROW(fit_growth_rate({{0, 100}, {1, 0}}), DataError);
  EXPECT_THROW(fit_growth_rate({{1, 100}, {1, 120}}), DataError);
}

TEST(Arma, Stationarity) {
  EXPECT_TRUE(is_stationary({0.7}));
  EXPECT_FALSE(is_stationary({1.0}));
  EXPECT_FALSE(is_stationary({1.2}));
  EXPECT_TRUE(is_stationary({0.5, 0.3}));
  EXPECT_FALSE(is_stationary({0.5, 0.6}));
  ArmaSpec bad;
  bad.ar_coeffs = {1.1};
  EXPECT_THROW(arma_path(bad, 10, 1), DataError);
}

TEST(Arma, LagOneAutocorrelation) {
  const double analytic = (1 + 0.7 * 0.2) * (0.7 + 0.2) / (1 + 2 * 0.7 * 0.2 + 0.2 * 0.2);
  EXPECT_NEAR(analytic, psi_acf(0.7, 0.2, 1), 1e-9);
  ArmaSpec spec;
  spec.ar_coeffs = {0.7};
  spec.ma_coeffs = {0.2};
  spec.noise_std = 0.1;
  for (std::uint64_t seed : {1, 2, 3}) {
    EXPECT_NEAR(sample_acf(arma_path(spec, 10000, seed), 1), analytic, 0.05) << "seed " << seed;
  }
}

TEST(Arma, HigherLagsFollowAr) {
  ArmaSpec spec;
  spec.ar_coeffs = {0.7};
  spec.ma_coeffs = {0.2};
  const auto path = arma_path(spec, 10000, 4);
  EXPECT_NEAR(sample_acf(path, 2), psi_acf(0.7, 0.2, 2), 0.05);
  EXPECT_NEAR(sample_acf(path, 3), psi_acf(0.7, 0.2, 3), 0.05);
}

std::vector<std::vector<double>> two_shapes() {
  std::vector<double> a(6, 0.0), b(6, 0.0);
  a[2] = 0.5, a[3] = 0.95, a[4] = 0.4;
  b[2] = 0.2, b[3] = 0.6, b[4] = 0.3;
  return {a, b};
}

TEST(PvScenarios, ZeroNoiseReproducesShapes) {
  ArmaSpec spec;
  spec.noise_std = 0.0;
  const PvScenarioSet pv = sample_pv_scenarios(spec, two_shapes(), {6, 2});
  ASSERT_EQ(pv.size(), 2);
  for (int s = 0; s < 2; ++s)
    for (int y = 0; y < 2; ++y)
      for (int t = 0; t < 6; ++t) EXPECT_EQ(pv.profiles[s](y, t), two_shapes()[s][t]);
  EXPECT_EQ(pv.probabilities, (std::vector<double>{0.5, 0.5}));
}

TEST(PvScenarios, DeterministicUnderSeed) {
  ArmaSpec spec;
  spec.seed = 42;
  const auto a = sample_pv_scenarios(spec, two_shapes(), {6, 3});
  const auto b = sample_pv_scenarios(spec, two_shapes(), {6, 3});
  EXPECT_EQ(a.profiles, b.profiles);
  spec.seed = 43;
  EXPECT_NE(sample_pv_scenarios(spec, two_shapes(), {6, 3}).profiles, a.profiles);
}

TEST(PvScenarios, ClipFuzzAndNightHours) {
  ArmaSpec spec;
  spec.noise_std = 0.8;
  spec.night_hours = {0, 1, 5};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    spec.seed = seed;
    const PvScenarioSet pv = sample_pv_scenarios(spec, two_shapes(), {6, 2});
    for (const auto& p : pv.profiles) {
      for (double v : p.data()) ASSERT_TRUE(v >= 0.0 && v <= 1.0) << "seed " << seed;
      for (int y = 0; y < 2; ++y)
        for (int h : spec.night_hours) ASSERT_EQ(p(y, h), 0.0);
    }
  }
}

TEST(PvScenarios, RejectsBadShapes) {
  ArmaSpec spec;
  auto shapes = two_shapes();
  shapes[0][3] = 1.2;
  EXPECT_THROW(sample_pv_scenarios(spec, shapes, {6, 1}), DataError);
  EXPECT_THROW(sample_pv_scenarios(spec, two_shapes(), {5, 1}), DataError);
}

TEST(DemandIntervals, Arithmetic) {
  const DemandUncertainty d = extract_demand_intervals({{{2.0}, {4.0}, {9.0}}});
  EXPECT_DOUBLE_EQ(d.nominal(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(d.deviation(0, 0), 4.0);
  EXPECT_EQ(d.budget, 0.0);
}

TEST(DemandIntervals, ConstantHistoryHasNoDeviation) {
  const DemandUncertainty d = extract_demand_intervals({{{1.0, 2.0}, {1.0, 2.0}}, {{3.0, 3.0}}});
  for (double v : d.deviation.data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(d.nominal(1, 0), 3.0);
}

TEST(DemandIntervals, FixtureBracketsEveryObservation) {
  const auto base = read_base_demand_csv(testing::fixture_path("desk/base_demand.csv"), 24);
  const auto history = project_history(base, 0.02, 3);
  const DemandUncertainty d = extract_demand_intervals(history);
  for (int y = 0; y < 3; ++y) {
    for (const auto& day : history[y]) {
      for (int t = 0; t < 24; ++t) {
        EXPECT_LE(d.nominal(y, t) - d.deviation(y, t), day[t] + 1e-12);
        EXPECT_GE(d.nominal(y, t) + d.deviation(y, t), day[t] - 1e-12);
      }
    }
  }
}

TEST(DemandIntervals, Errors) {
  EXPECT_THROW(extract_demand_intervals({}), DataError);
  EXPECT_THROW(extract_demand_intervals({{{1.0}}, {}}), DataError);
}

TEST(Degradation, SecondAndFirstLifeAccepted) {
  const auto table = ingest_degradation(
      {{"SL", 1, 0.70}, {"SL", 2, 0.68}, {"FL", 2, 0.98}, {"FL", 1, 1.00}, {"SL", 3, 0.66}, {"FL", 3, 0.96}});
  EXPECT_EQ(table.at("SL"), (std::vector<double>{0.70, 0.68, 0.66}));
  EXPECT_EQ(table.at("FL"), (std::vector<double>{1.00, 0.98, 0.96}));
}

TEST(Degradation, Rejections) {
  EXPECT_THROW(ingest_degradation({{"A", 1, 0.9}, {"A", 2, 0.88}, {"A", 3, 0.86}, {"A", 4, 0.87}}), DataError);
  EXPECT_THROW(ingest_degradation({{"A", 1, 1.1}}), DataError);
  EXPECT_THROW(ingest_degradation({{"A", 1, 0.0}}), DataError);
  EXPECT_THROW(ingest_degradation({{"A", 1, 0.9}, {"A", 3, 0.8}}), DataError);
  EXPECT_THROW(ingest_degradation({{"A", 1, 0.9}, {"A", 1, 0.8}}), DataError);
}

TEST(Degradation, AttachRequiresEverySeries) {
  std::vector<BatteryTech> batteries(2);
  batteries[0].id = "A";
  batteries[1].id = "B";
  const auto table = ingest_degradation({{"A", 1, 0.9}});
  EXPECT_THROW(attach_degradation(batteries, table), DataError);
  batteries.pop_back();
  attach_degradation(batteries, table);
  EXPECT_EQ(batteries[0].soh_by_year, (std::vector<double>{0.9}));
}

TEST(Csv, WriteReadRoundTrips) {
  const auto dir = std::filesystem::temp_directory_path() / "pvsizing_forge_test";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  ArmaSpec spec;
  spec.night_hours = {0, 5};
  PvScenarioSet pv = sample_pv_scenarios(spec, two_shapes(), {6, 2});
  pv.probabilities = {0.25, 0.75};
  const PvScenarioSet pv_back =
      read_pv_scenarios_csv(write("pv.csv", pv_scenarios_csv(pv)), write("prob.csv", pv_probabilities_csv(pv)));
  EXPECT_EQ(pv_back.profiles, pv.profiles);
  EXPECT_EQ(pv_back.probabilities, pv.probabilities);

  DemandUncertainty d = extract_demand_intervals({{{2.0, 1.0}, {4.0, 1.5}}, {{9.0, 0.25}}});
  const DemandUncertainty d_back = read_demand_intervals_csv(write("d.csv", demand_intervals_csv(d)));
  EXPECT_EQ(d_back.nominal, d.nominal);
  EXPECT_EQ(d_back.deviation, d.deviation);

  const Tariff tariff{{0.2, 0.3}, {0.1, 0.05}};
  const Tariff t_back = read_tariff_csv(write("t.csv", tariff_csv(tariff)));
  EXPECT_EQ(t_back.buy_price, tariff.buy_price);
  EXPECT_EQ(t_back.sell_price, tariff.sell_price);
  std::filesystem::remove_all(dir);
}

TEST(Csv, MissingHeaderOrFileRejected) {
  EXPECT_ANY_THROW(read_tariff_csv("/nonexistent/tariff.csv"));
}

}  // namespace
}  // namespace pvsizing::forge
