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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "random_instance.hpp"

namespace pvsizing::io {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(InstanceIo, DeskFixtureShape) {
  const PlanningInstance inst = testing::desk_fixture();
  EXPECT_EQ(inst.hours(), 24);
  EXPECT_EQ(inst.years(), 3);
  EXPECT_EQ(inst.scenarios(), 4);
  EXPECT_EQ(inst.techs(), 4);
  EXPECT_EQ(inst.demand.budget, 5);
  // Degradation comes from the CSV table referenced by the instance file.
  EXPECT_DOUBLE_EQ(inst.batteries[1].soh_by_year[0], 0.70);
  EXPECT_DOUBLE_EQ(inst.batteries[0].soc_initial_frac, kDefaultBoundarySoc);
}

TEST(InstanceIo, CanonicalRoundTripIsByteIdentical) {
  const std::string once = serialize_instance(testing::desk_fixture());
  const std::string twice = serialize_instance(parse_instance(once));
  EXPECT_EQ(once, twice);
}

TEST(InstanceIo, RandomRoundTrip) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    const PlanningInstance inst = testing::random_instance(rng);
    const std::string text = serialize_instance(inst);
    const PlanningInstance back = parse_instance(text);
    EXPECT_EQ(serialize_instance(back), text);
    EXPECT_EQ(back.demand.nominal, inst.demand.nominal);
    EXPECT_EQ(back.pv.profiles, inst.pv.profiles);
    EXPECT_EQ(back.batteries[0].soh_by_year, inst.batteries[0].soh_by_year);
  }
}

TEST(InstanceIo, SaveThenLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "pvsizing_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "inst.json").string();
  const PlanningInstance inst = testing::flat_instance(4, 2, 1.5, 0.2, 0.05);
  save_instance(inst, path);
  EXPECT_EQ(read_file(path), serialize_instance(inst));
  EXPECT_EQ(serialize_instance(load_instance(path)), serialize_instance(inst));
  std::filesystem::remove_all(dir);
}

TEST(InstanceIo, DefaultsApplied) {
  const std::string text = R"({
    "grid": {"hours_per_day": 2, "years": 1},
    "tariff": {"buy_price": [0.2, 0.3], "sell_price": [0.1, 0.1]},
    "pv": {"profiles": [[[0.0, 0.5]], [[0.0, 0.7]]]},
    "demand": {"nominal": [[1.0, 2.0]], "deviation": [[0.5, 0.5]], "budget": 1},
    "batteries": [{"id": "A", "invest_cost": 0.1, "op_cost": 0.0, "soh_by_year": [1.0],
                   "soc_min_frac": 0.1, "soc_max_frac": 0.9, "efficiency": 0.9, "power_rate": 1.0}],
    "config": {"pv_invest_cost": 0.1, "pv_op_cost": 0.0, "pv_cap_max": 5, "bess_cap_max": 5}
  })";
  const PlanningInstance inst = parse_instance(text);
  EXPECT_EQ(inst.pv.probabilities, (std::vector<double>{0.5, 0.5}));
  EXPECT_DOUBLE_EQ(inst.batteries[0].soc_final_frac, 0.25);
  EXPECT_TRUE(validate(inst).empty());
}

TEST(InstanceIo, MalformedJson) { EXPECT_THROW(parse_instance("{\"grid\": "), std::runtime_error); }

TEST(InstanceIo, MissingSection) { EXPECT_THROW(parse_instance(R"({"grid": {"hours_per_day": 2, "years": 1}})"), std::runtime_error); }

TEST(InstanceIo, RaggedRows) {
  const std::string text = R"({
    "grid": {"hours_per_day": 2, "years": 1},
    "tariff": {"buy_price": [0.2, 0.3], "sell_price": [0.1, 0.1]},
    "pv": {"profiles": [[[0.0, 0.5]]]},
    "demand": {"nominal": [[1.0, 2.0], [1.0]], "deviation": [[0.5, 0.5]], "budget": 1},
    "batteries": [],
    "config": {"pv_invest_cost": 0.1, "pv_op_cost": 0.0, "pv_cap_max": 5, "bess_cap_max": 5}
  })";
  EXPECT_THROW(parse_instance(text), std::runtime_error);
}

TEST(InstanceIo, MissingFile) { EXPECT_THROW(load_instance("/nonexistent/instance.json"), std::runtime_error); }

}  // namespace
}  // namespace pvsizing::io
