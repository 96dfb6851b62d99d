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

// Paths to the bundled fixture instances.

#pragma once

#include <string>

#include "pvsizing/domain.hpp"

namespace pvsizing::testing {

std::string fixture_path(const std::string& relative);

// fixtures/desk/instance.json: T=24, Y=3, S=4, J=4.
PlanningInstance desk_fixture();
// Loaded once and shared.
const PlanningInstance& desk_fixture_cached();

// fixtures/regime/instance.json: storage-versus-generation trade-off.
PlanningInstance regime_fixture();

}  // namespace pvsizing::testing
