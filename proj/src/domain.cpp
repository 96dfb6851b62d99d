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

#include "pvsizing/domain.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pvsizing {
namespace {

class Violations {
 public:
  template <typename... Parts>
  void add(const Parts&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    list_.push_back(os.str());
  }
  std::vector<std::string> take() { return std::move(list_); }

 private:
  std::vector<std::string> list_;
};

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void check_matrix_shape(Violations& out, const char* field, const HourlyMatrix& m, const TimeGrid& grid) {
  if (m.years() != grid.years || m.hours() != grid.hours_per_day) {
    out.add(field, ": shape ", m.years(), "x", m.hours(), " does not match years x hours_per_day ", grid.years, "x",
            grid.hours_per_day);
  }
}

void validate_grid(Violations& out, const TimeGrid& grid) {
  if (grid.hours_per_day < 2) out.add("grid.hours_per_day: must be at least 2, got ", grid.hours_per_day);
  if (grid.years < 1) out.add("grid.years: must be at least 1, got ", grid.years);
}

void validate_tariff(Violations& out, const Tariff& tariff, const TimeGrid& grid) {
  const auto T = static_cast<std::size_t>(grid.hours_per_day);
  if (tariff.buy_price.size() != T) out.add("tariff.buy_price: length ", tariff.buy_price.size(), " != hours_per_day ", T);
  if (tariff.sell_price.size() != T) {
    out.add("tariff.sell_price: length ", tariff.sell_price.size(), " != hours_per_day ", T);
  }
  const std::size_t n = std::min(tariff.buy_price.size(), tariff.sell_price.size());
  for (std::size_t t = 0; t < tariff.buy_price.size(); ++t) {
    if (!finite_nonneg(tariff.buy_price[t])) out.add("tariff.buy_price[", t, "]: must be >= 0");
  }
  for (std::size_t t = 0; t < tariff.sell_price.size(); ++t) {
    if (!finite_nonneg(tariff.sell_price[t])) out.add("tariff.sell_price[", t, "]: must be >= 0");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (tariff.buy_price[t] < tariff.sell_price[t]) {
      out.add("tariff: buy price below sell price at hour ", t, " (", tariff.buy_price[t], " < ", tariff.sell_price[t],
              ")");
    }
  }
}

void validate_pv(Violations& out, const PvScenarioSet& pv, const TimeGrid& grid) {
  if (pv.profiles.empty()) out.add("pv.profiles: at least one scenario required");
  if (pv.probabilities.size() != pv.profiles.size()) {
    out.add("pv.probabilities: length ", pv.probabilities.size(), " != scenario count ", pv.profiles.size());
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < pv.probabilities.size(); ++s) {
    const double p = pv.probabilities[s];
    if (!(p > 0.0) || !std::isfinite(p)) out.add("pv.probabilities[", s, "]: must be strictly positive");
    sum += p;
  }
  if (!pv.probabilities.empty() && std::abs(sum - 1.0) > 1e-9) {
    out.add("pv.probabilities: probabilities sum ", sum, " ≠ 1");
  }
  for (int h : pv.night_hours) {
    if (h < 0 || h >= grid.hours_per_day) out.add("pv.night_hours: hour ", h, " outside the day");
  }
  for (std::size_t s = 0; s < pv.profiles.size(); ++s) {
    const HourlyMatrix& prof = pv.profiles[s];
    const std::string field = "pv.profiles[" + std::to_string(s) + "]";
    check_matrix_shape(out, field.c_str(), prof, grid);
    if (prof.years() != grid.years || prof.hours() != grid.hours_per_day) continue;
    for (int y = 0; y < prof.years(); ++y) {
      for (int t = 0; t < prof.hours(); ++t) {
        const double v = prof(y, t);
        if (!(v >= 0.0 && v <= 1.0)) out.add(field, ": entry (year ", y, ", hour ", t, ") = ", v, " outside [0, 1]");
      }
      for (int h : pv.night_hours) {
        if (h >= 0 && h < prof.hours() && prof(y, h) != 0.0) {
          out.add(field, ": night hour ", h, " of year ", y, " must be 0");
        }
      }
    }
  }
}

void validate_demand(Violations& out, const DemandUncertainty& demand, const TimeGrid& grid) {
  check_matrix_shape(out, "demand.nominal", demand.nominal, grid);
  check_matrix_shape(out, "demand.deviation", demand.deviation, grid);
  if (demand.nominal.years() == demand.deviation.years() && demand.nominal.hours() == demand.deviation.hours()) {
    for (int y = 0; y < demand.nominal.years(); ++y) {
      for (int t = 0; t < demand.nominal.hours(); ++t) {
        const double dev = demand.deviation(y, t);
        const double nom = demand.nominal(y, t);
        if (!finite_nonneg(dev)) out.add("demand.deviation: negative at (year ", y, ", hour ", t, ")");
        if (!std::isfinite(nom) || nom - dev < 0.0) {
          out.add("demand.nominal: nominal - deviation negative at (year ", y, ", hour ", t, ")");
        }
      }
    }
  }
  if (!(demand.budget >= 0.0)) out.add("demand.budget: must be >= 0, got ", demand.budget);
  if (demand.budget > grid.hours_per_day) {
    out.add("demand.budget: budget exceeds hours_per_day (", demand.budget, " > ", grid.hours_per_day, ")");
  }
}

void validate_battery(Violations& out, const BatteryTech& b, std::size_t j, const TimeGrid& grid) {
  const std::string field = "batteries[" + std::to_string(j) + "]";
  if (b.id.empty()) out.add(field, ".id: must not be empty");
  if (!finite_nonneg(b.invest_cost)) out.add(field, ".invest_cost: must be >= 0");
  if (!finite_nonneg(b.op_cost)) out.add(field, ".op_cost: must be >= 0");
  if (!(b.efficiency > 0.0 && b.efficiency <= 1.0)) out.add(field, ".efficiency: must lie in (0, 1]");
  if (!(b.soc_min_frac >= 0.0 && b.soc_min_frac < b.soc_max_frac && b.soc_max_frac <= 1.0)) {
    out.add(field, ": requires 0 <= soc_min_frac < soc_max_frac <= 1");
  }
  if (!(b.soc_initial_frac >= b.soc_min_frac && b.soc_initial_frac <= b.soc_max_frac)) {
    out.add(field, ".soc_initial_frac: must lie in [soc_min_frac, soc_max_frac]");
  }
  if (!(b.soc_final_frac >= b.soc_min_frac && b.soc_final_frac <= b.soc_max_frac)) {
    out.add(field, ".soc_final_frac: must lie in [soc_min_frac, soc_max_frac]");
  }
  if (!finite_nonneg(b.power_rate)) out.add(field, ".power_rate: must be >= 0");
  if (b.soh_by_year.size() != static_cast<std::size_t>(grid.years)) {
    out.add(field, ".soh_by_year: length ", b.soh_by_year.size(), " != years ", grid.years);
  }
  for (std::size_t y = 0; y < b.soh_by_year.size(); ++y) {
    const double soh = b.soh_by_year[y];
    if (!(soh > 0.0 && soh <= 1.0)) out.add(field, ".soh_by_year[", y, "]: must lie in (0, 1]");
    if (y > 0 && soh > b.soh_by_year[y - 1]) out.add(field, ".soh_by_year: increases at year ", y);
    // The day must be able to start and end at the boundary SOC.
    const double ceiling = soh * b.soc_max_frac;
    if (std::max(b.soc_initial_frac, b.soc_final_frac) > ceiling + 1e-12) {
      out.add(field, ": boundary SOC above usable ceiling soh*soc_max_frac = ", ceiling, " in year ", y);
    }
  }
}

void validate_config(Violations& out, const SystemConfig& c) {
  if (!finite_nonneg(c.pv_invest_cost)) out.add("config.pv_invest_cost: must be >= 0");
  if (!finite_nonneg(c.pv_op_cost)) out.add("config.pv_op_cost: must be >= 0");
  if (!(c.pv_cap_max > 0.0) || !std::isfinite(c.pv_cap_max)) out.add("config.pv_cap_max: must be > 0");
  if (!(c.bess_cap_max > 0.0) || !std::isfinite(c.bess_cap_max)) out.add("config.bess_cap_max: must be > 0");
}

}  // namespace

std::vector<std::string> validate(const PlanningInstance& instance) {
  Violations out;
  validate_grid(out, instance.grid);
  validate_tariff(out, instance.tariff, instance.grid);
  validate_pv(out, instance.pv, instance.grid);
  validate_demand(out, instance.demand, instance.grid);
  if (instance.batteries.empty()) out.add("batteries: at least one technology required");
  for (std::size_t j = 0; j < instance.batteries.size(); ++j) {
    validate_battery(out, instance.batteries[j], j, instance.grid);
    for (std::size_t k = 0; k < j; ++k) {
      if (instance.batteries[k].id == instance.batteries[j].id) {
        out.add("batteries[", j, "].id: duplicate id '", instance.batteries[j].id, "'");
      }
    }
  }
  validate_config(out, instance.config);
  return out.take();
}

void require_valid(const PlanningInstance& instance) {
  const auto violations = validate(instance);
  if (violations.empty()) return;
  std::string msg = "invalid planning instance:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw std::invalid_argument(msg);
}

PlanningInstance with_budget(const PlanningInstance& instance, double budget) {
  PlanningInstance copy = instance;
  copy.demand.budget = budget;
  return copy;
}

PlanningInstance with_years(const PlanningInstance& instance, int years) {
  if (years < 1 || years > instance.years()) {
    throw std::invalid_argument("with_years: requested " + std::to_string(years) + " of " +
                                std::to_string(instance.years()) + " years");
  }
  auto truncate = [years](const HourlyMatrix& m) {
    HourlyMatrix out(years, m.hours());
    for (int y = 0; y < years; ++y) {
      for (int t = 0; t < m.hours(); ++t) out(y, t) = m(y, t);
    }
    return out;
  };
  PlanningInstance copy = instance;
  copy.grid.years = years;
  for (auto& p : copy.pv.profiles) p = truncate(p);
  copy.demand.nominal = truncate(instance.demand.nominal);
  copy.demand.deviation = truncate(instance.demand.deviation);
  for (auto& b : copy.batteries) b.soh_by_year.resize(static_cast<std::size_t>(years));
  return copy;
}

PlanningInstance with_scenarios(const PlanningInstance& instance, int count) {
  if (count < 1 || count > instance.scenarios()) {
    throw std::invalid_argument("with_scenarios: requested " + std::to_string(count) + " of " +
                                std::to_string(instance.scenarios()) + " scenarios");
  }
  PlanningInstance copy = instance;
  copy.pv.profiles.resize(static_cast<std::size_t>(count));
  copy.pv.probabilities.resize(static_cast<std::size_t>(count));
  const double total = std::accumulate(copy.pv.probabilities.begin(), copy.pv.probabilities.end(), 0.0);
  for (double& p : copy.pv.probabilities) p /= total;
  return copy;
}

}  // namespace pvsizing
