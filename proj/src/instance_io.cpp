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

#include "pvsizing/instance_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "pvsizing/scenario_forge.hpp"

namespace pvsizing::io {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

HourlyMatrix matrix_from_json(const json& rows, const char* field) {
  if (!rows.is_array() || rows.empty()) throw std::runtime_error(std::string(field) + ": expected [[...] per year]");
  const int years = static_cast<int>(rows.size());
  const int hours = static_cast<int>(rows.front().size());
  HourlyMatrix m(years, hours);
  for (int y = 0; y < years; ++y) {
    if (static_cast<int>(rows[y].size()) != hours) throw std::runtime_error(std::string(field) + ": ragged rows");
    for (int t = 0; t < hours; ++t) m(y, t) = rows[y][t].get<double>();
  }
  return m;
}

json matrix_to_json(const HourlyMatrix& m) {
  json rows = json::array();
  for (int y = 0; y < m.years(); ++y) {
    const auto row = m.year_row(y);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

std::string resolve(const std::string& base_dir, const std::string& rel) {
  const fs::path p(rel);
  return p.is_absolute() ? rel : (fs::path(base_dir) / p).string();
}

BatteryTech battery_from_json(const json& j) {
  BatteryTech b;
  b.id = j.at("id").get<std::string>();
  b.invest_cost = j.at("invest_cost").get<double>();
  b.op_cost = j.at("op_cost").get<double>();
  if (j.contains("soh_by_year")) b.soh_by_year = j.at("soh_by_year").get<std::vector<double>>();
  b.soc_min_frac = j.at("soc_min_frac").get<double>();
  b.soc_max_frac = j.at("soc_max_frac").get<double>();
  b.efficiency = j.at("efficiency").get<double>();
  b.power_rate = j.at("power_rate").get<double>();
  b.soc_initial_frac = j.value("soc_initial_frac", kDefaultBoundarySoc);
  b.soc_final_frac = j.value("soc_final_frac", kDefaultBoundarySoc);
  return b;
}

}  // namespace

PlanningInstance parse_instance(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("instance: malformed JSON: ") + e.what());
  }
  try {
    PlanningInstance inst;
    const json& grid = doc.at("grid");
    inst.grid.hours_per_day = grid.value("hours_per_day", 24);
    inst.grid.years = grid.at("years").get<int>();

    const json& tariff = doc.at("tariff");
    if (tariff.contains("csv")) {
      inst.tariff = forge::read_tariff_csv(resolve(base_dir, tariff.at("csv")));
    } else {
      inst.tariff.buy_price = tariff.at("buy_price").get<std::vector<double>>();
      inst.tariff.sell_price = tariff.at("sell_price").get<std::vector<double>>();
    }

    const json& pv = doc.at("pv");
    if (pv.contains("csv")) {
      inst.pv = forge::read_pv_scenarios_csv(resolve(base_dir, pv.at("csv")),
                                             pv.contains("probabilities_csv")
                                                 ? resolve(base_dir, pv.at("probabilities_csv"))
                                                 : std::string());
    } else {
      for (const auto& prof : pv.at("profiles")) inst.pv.profiles.push_back(matrix_from_json(prof, "pv.profiles"));
      if (pv.contains("probabilities")) {
        inst.pv.probabilities = pv.at("probabilities").get<std::vector<double>>();
      } else {
        inst.pv.probabilities.assign(inst.pv.profiles.size(), 1.0 / static_cast<double>(inst.pv.profiles.size()));
      }
    }
    if (pv.contains("night_hours")) inst.pv.night_hours = pv.at("night_hours").get<std::vector<int>>();

    const json& demand = doc.at("demand");
    if (demand.contains("csv")) {
      inst.demand = forge::read_demand_intervals_csv(resolve(base_dir, demand.at("csv")));
    } else {
      inst.demand.nominal = matrix_from_json(demand.at("nominal"), "demand.nominal");
      inst.demand.deviation = matrix_from_json(demand.at("deviation"), "demand.deviation");
    }
    inst.demand.budget = demand.value("budget", 0.0);

    for (const auto& b : doc.at("batteries")) inst.batteries.push_back(battery_from_json(b));
    if (doc.contains("degradation")) {
      const auto rows = forge::read_degradation_csv(resolve(base_dir, doc.at("degradation").at("csv")));
      forge::attach_degradation(inst.batteries, forge::ingest_degradation(rows));
    }

    const json& cfg = doc.at("config");
    inst.config.pv_invest_cost = cfg.at("pv_invest_cost").get<double>();
    inst.config.pv_op_cost = cfg.at("pv_op_cost").get<double>();
    inst.config.pv_cap_max = cfg.at("pv_cap_max").get<double>();
    inst.config.bess_cap_max = cfg.at("bess_cap_max").get<double>();
    return inst;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("instance: ") + e.what());
  }
}

PlanningInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto parent = fs::path(path).parent_path();
  return parse_instance(buf.str(), parent.empty() ? "." : parent.string());
}

std::string serialize_instance(const PlanningInstance& inst) {
  json doc;
  doc["grid"] = {{"hours_per_day", inst.grid.hours_per_day}, {"years", inst.grid.years}};
  doc["tariff"] = {{"buy_price", inst.tariff.buy_price}, {"sell_price", inst.tariff.sell_price}};
  json profiles = json::array();
  for (const auto& p : inst.pv.profiles) profiles.push_back(matrix_to_json(p));
  doc["pv"] = {{"profiles", profiles}, {"probabilities", inst.pv.probabilities}, {"night_hours", inst.pv.night_hours}};
  doc["demand"] = {{"nominal", matrix_to_json(inst.demand.nominal)},
                   {"deviation", matrix_to_json(inst.demand.deviation)},
                   {"budget", inst.demand.budget}};
  json batteries = json::array();
  for (const auto& b : inst.batteries) {
    batteries.push_back({{"id", b.id},
                         {"invest_cost", b.invest_cost},
                         {"op_cost", b.op_cost},
                         {"soh_by_year", b.soh_by_year},
                         {"soc_min_frac", b.soc_min_frac},
                         {"soc_max_frac", b.soc_max_frac},
                         {"efficiency", b.efficiency},
                         {"power_rate", b.power_rate},
                         {"soc_initial_frac", b.soc_initial_frac},
                         {"soc_final_frac", b.soc_final_frac}});
  }
  doc["batteries"] = batteries;
  doc["config"] = {{"pv_invest_cost", inst.config.pv_invest_cost},
                   {"pv_op_cost", inst.config.pv_op_cost},
                   {"pv_cap_max", inst.config.pv_cap_max},
                   {"bess_cap_max", inst.config.bess_cap_max}};
  return doc.dump(1) + "\n";
}

void save_instance(const PlanningInstance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << serialize_instance(instance);
}

}  // namespace pvsizing::io
