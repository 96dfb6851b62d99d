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

// Problem data for household PV and battery sizing.
//
// Every day of the horizon is one representative day per year, so hourly
// quantities are (year, hour) matrices and scenario-dependent ones add a
// scenario index. All indices are zero-based in code; the CSV files use
// one-based years, hours and scenarios.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pvsizing {

// Dense years x hours matrix, row-major by year.
class HourlyMatrix {
 public:
  HourlyMatrix() = default;
  HourlyMatrix(int years, int hours, double fill = 0.0)
      : years_(years), hours_(hours), data_(static_cast<std::size_t>(years) * hours, fill) {}

  double& operator()(int year, int hour) { return data_[index(year, hour)]; }
  double operator()(int year, int hour) const { return data_[index(year, hour)]; }

  [[nodiscard]] int years() const { return years_; }
  [[nodiscard]] int hours() const { return hours_; }
  [[nodiscard]] bool empty() const { return data_.empty(); }
  [[nodiscard]] std::span<const double> year_row(int year) const {
    return {data_.data() + index(year, 0), static_cast<std::size_t>(hours_)};
  }
  [[nodiscard]] const std::vector<double>& data() const { return data_; }
  [[nodiscard]] std::vector<double>& data() { return data_; }

  friend bool operator==(const HourlyMatrix&, const HourlyMatrix&) = default;

 private:
  [[nodiscard]] std::size_t index(int year, int hour) const {
    return static_cast<std::size_t>(year) * hours_ + hour;
  }

  int years_ = 0;
  int hours_ = 0;
  std::vector<double> data_;
};

// Index algebra for (tech, scenario, year, hour) quantities.
struct Dims {
  int techs = 0;
  int scenarios = 0;
  int years = 0;
  int hours = 0;

  [[nodiscard]] int tys_size() const { return scenarios * years * hours; }
  [[nodiscard]] int jtys_size() const { return techs * tys_size(); }
  [[nodiscard]] int ty_size() const { return years * hours; }
  [[nodiscard]] int tys(int t, int y, int s) const { return (s * years + y) * hours + t; }
  [[nodiscard]] int jtys(int j, int t, int y, int s) const { return j * tys_size() + tys(t, y, s); }
  [[nodiscard]] int ty(int t, int y) const { return y * hours + t; }

  friend bool operator==(const Dims&, const Dims&) = default;
};

struct TimeGrid {
  int hours_per_day = 24;
  int years = 1;
};

struct Tariff {
  std::vector<double> buy_price;   // currency/kWh, per hour
  std::vector<double> sell_price;  // currency/kWh, per hour
};

struct PvScenarioSet {
  // Per scenario, output per kW installed for each (year, hour), in [0, 1].
  std::vector<HourlyMatrix> profiles;
  std::vector<double> probabilities;
  // Hours at which every profile must be exactly zero.
  std::vector<int> night_hours;

  [[nodiscard]] int size() const { return static_cast<int>(profiles.size()); }
};

struct DemandUncertainty {
  HourlyMatrix nominal;    // kWh
  HourlyMatrix deviation;  // kWh, symmetric half-width
  double budget = 0.0;     // hours per year allowed to deviate
};

inline constexpr double kDefaultBoundarySoc = 0.25;

struct BatteryTech {
  std::string id;
  double invest_cost = 0.0;  // currency/kWh installed
  double op_cost = 0.0;      // currency/kWh discharged
  std::vector<double> soh_by_year;
  double soc_min_frac = 0.0;
  double soc_max_frac = 1.0;
  double efficiency = 1.0;
  double power_rate = 0.0;  // kW
  double soc_initial_frac = kDefaultBoundarySoc;
  double soc_final_frac = kDefaultBoundarySoc;
};

struct SystemConfig {
  double pv_invest_cost = 0.0;  // currency/kW
  double pv_op_cost = 0.0;      // currency/kWh generated
  double pv_cap_max = 0.0;      // kW
  double bess_cap_max = 0.0;    // kWh
};

struct PlanningInstance {
  TimeGrid grid;
  Tariff tariff;
  PvScenarioSet pv;
  DemandUncertainty demand;
  std::vector<BatteryTech> batteries;
  SystemConfig config;

  [[nodiscard]] int hours() const { return grid.hours_per_day; }
  [[nodiscard]] int years() const { return grid.years; }
  [[nodiscard]] int scenarios() const { return pv.size(); }
  [[nodiscard]] int techs() const { return static_cast<int>(batteries.size()); }
  [[nodiscard]] Dims dims() const { return {techs(), scenarios(), years(), hours()}; }
};

// Every broken invariant as "<field>: <rule>". Empty means valid.
std::vector<std::string> validate(const PlanningInstance& instance);

// Throws std::invalid_argument listing the violations, if any.
void require_valid(const PlanningInstance& instance);

// Copy with a different budget of uncertainty.
PlanningInstance with_budget(const PlanningInstance& instance, double budget);

// Copy restricted to the first `years` years.
PlanningInstance with_years(const PlanningInstance& instance, int years);

// Copy keeping the first `count` PV scenarios with renormalized
// probabilities.
PlanningInstance with_scenarios(const PlanningInstance& instance, int count);

}  // namespace pvsizing
