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

// JSON instance files.
//
//   {
//     "grid":      {"hours_per_day": 24, "years": 3},
//     "tariff":    {"buy_price": [...], "sell_price": [...]}   | {"csv": "tariff.csv"},
//     "pv":        {"profiles": [[[...] per year] per scenario],
//                   "probabilities": [...], "night_hours": [...]}
//                | {"csv": "pv_scenarios.csv", "probabilities_csv": "...", "night_hours": [...]},
//     "demand":    {"nominal": [[...] per year], "deviation": [[...]], "budget": 5}
//                | {"csv": "demand_intervals.csv", "budget": 5},
//     "batteries": [{"id", "invest_cost", "op_cost", "soh_by_year", "soc_min_frac",
//                    "soc_max_frac", "efficiency", "power_rate",
//                    "soc_initial_frac", "soc_final_frac"}],
//     "degradation": {"csv": "degradation.csv"},               (optional)
//     "config":    {"pv_invest_cost", "pv_op_cost", "pv_cap_max", "bess_cap_max"}
//   }
//
// CSV paths are relative to the instance file. "soh_by_year" may be omitted
// when a degradation table is given; "soc_initial_frac"/"soc_final_frac"
// default to 0.25 and missing probabilities default to uniform. Writing
// always produces the inline form with keys in sorted order.

#pragma once

#include <string>

#include "pvsizing/domain.hpp"

namespace pvsizing::io {

PlanningInstance parse_instance(const std::string& json_text, const std::string& base_dir = ".");
PlanningInstance load_instance(const std::string& path);

std::string serialize_instance(const PlanningInstance& instance);
void save_instance(const PlanningInstance& instance, const std::string& path);

}  // namespace pvsizing::io
