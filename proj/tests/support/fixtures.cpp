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

#include "fixtures.hpp"

#include "pvsizing/instance_io.hpp"

namespace pvsizing::testing {

std::string fixture_path(const std::string& relative) { return std::string(PVSIZING_FIXTURE_DIR) + "/" + relative; }

PlanningInstance desk_fixture() { return io::load_instance(fixture_path("desk/instance.json")); }

const PlanningInstance& desk_fixture_cached() {
  static const PlanningInstance instance = desk_fixture();
  return instance;
}

PlanningInstance regime_fixture() { return io::load_instance(fixture_path("regime/instance.json")); }

}  // namespace pvsizing::testing
