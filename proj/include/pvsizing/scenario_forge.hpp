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

// Input data pipeline: compound-growth demand projection, ARMA-perturbed PV
// scenarios, demand uncertainty intervals and state-of-health tables, plus
// the CSV formats they are exchanged in.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pvsizing/domain.hpp"

namespace pvsizing::forge {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DemandForecast {
  std::vector<double> base_profile;  // D0 per hour, kWh
  double growth_rate = 0.0;          // fraction per year, > -1
  int horizon = 1;                   // years
};

// nominal(y, t) = base[t] * (1 + r)^(y + 1) for zero-based year y.
HourlyMatrix project_demand(const DemandForecast& forecast);

struct GrowthAnchor {
  double year = 0.0;
  double demand = 0.0;
};

// Least-squares slope of log(demand) against year, returned as a rate.
// Two anchors reproduce the closed-form compound growth rate.
double fit_growth_rate(const std::vector<GrowthAnchor>& anchors);

struct ArmaSpec {
  std::vector<double> ar_coeffs{0.7};
  std::vector<double> ma_coeffs{0.2};
  double noise_std = 0.1;
  std::uint64_t seed = 1;
  std::vector<int> night_hours;
};

// True when every root of 1 - phi_1 z - ... - phi_p z^p lies outside the
// unit circle.
bool is_stationary(const std::vector<double>& ar_coeffs);

// Zero-mean ARMA path of the given length after a burn-in.
std::vector<double> arma_path(const ArmaSpec& spec, int length, std::uint64_t seed);

// One scenario per daily shape; each follows
// clip(shape[t] * (1 + noise), 0, 1) along a continuous noise path over the
// horizon, with night hours held at zero. Probabilities are uniform.
PvScenarioSet sample_pv_scenarios(const ArmaSpec& spec, const std::vector<std::vector<double>>& seasonal_shapes,
                                  const TimeGrid& grid);

// `history[y]` holds the observed days of year y, each a vector of hourly
// values. Nominal is the hourly mean and the deviation the wider of the two
// one-sided ranges. The budget is left at zero.
DemandUncertainty extract_demand_intervals(const std::vector<std::vector<std::vector<double>>>& history);

// Scales every observed base day by (1 + r)^(y + 1) for each projected year.
std::vector<std::vector<std::vector<double>>> project_history(const std::vector<std::vector<double>>& base_days,
                                                              double growth_rate, int horizon);

struct DegradationRow {
  std::string tech;
  int year = 0;  // one-based
  double soh = 0.0;
};

// Groups rows by technology and checks the per-technology series: years
// contiguous from 1, SOH in (0, 1], nonincreasing.
std::map<std::string, std::vector<double>> ingest_degradation(const std::vector<DegradationRow>& rows);

// Copies the ingested series onto matching batteries. Throws DataError if a
// battery has no series.
void attach_degradation(std::vector<BatteryTech>& batteries, const std::map<std::string, std::vector<double>>& table);

// ---- CSV formats -----------------------------------------------------------

// hour,kwh  (optionally day,hour,kwh for several observed days)
std::vector<std::vector<double>> read_base_demand_csv(const std::string& path, int hours_per_day);
// scenario,hour,frac
std::vector<std::vector<double>> read_pv_shapes_csv(const std::string& path, int hours_per_day);
// tech,year,soh
std::vector<DegradationRow> read_degradation_csv(const std::string& path);
// hour,buy,sell
Tariff read_tariff_csv(const std::string& path);
// year,hour,nominal,deviation
DemandUncertainty read_demand_intervals_csv(const std::string& path);
// scenario,year,hour,frac ; probabilities in scenario,probability
PvScenarioSet read_pv_scenarios_csv(const std::string& path, const std::string& probabilities_path = {});

std::string demand_intervals_csv(const DemandUncertainty& demand);
std::string pv_scenarios_csv(const PvScenarioSet& pv);
std::string pv_probabilities_csv(const PvScenarioSet& pv);
std::string tariff_csv(const Tariff& tariff);
std::string degradation_csv(const std::vector<BatteryTech>& batteries);

}  // namespace pvsizing::forge
