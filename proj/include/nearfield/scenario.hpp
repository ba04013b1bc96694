// SPDX-License-Identifier: Apache-2.0
//
// nearfield: near-field channel modelling and beamforming toolkit
// Copyright (C) 2026 The nearfield authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NEARFIELD_SCENARIO_HPP
#define NEARFIELD_SCENARIO_HPP

#include "nearfield/geometry.hpp"
#include "nearfield/propagation.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nearfield
{
    struct ScenarioConfig
    {
        std::map<std::string, ArrayGeometryd> arrays;
        CarrierConfigd carrier;
        std::vector<PolarPointd> users;
        std::vector<PathComponentd> paths;
        std::uint64_t seed = 0;
        AmplitudeModel amplitude_model = AmplitudeModel::UNIT;

        // Throws ConfigError naming `key` when the array is missing.
        const ArrayGeometryd &array(const std::string &key) const;
    };

    // YAML scenario file. Angles are stored in degrees, distances in meters, r: .inf marks
    // the far-field sentinel. Arrays are given either as explicit `elements: [[x, y, z], ...]`
    // or through the `ula: {n, spacing}` / `upa: {nx, ny, spacing_x, spacing_y}` generators.
    ScenarioConfig parse_scenario(const std::string &text);
    ScenarioConfig load_scenario(const std::filesystem::path &path);

    // Always writes explicit element lists.
    std::string dump_scenario(const ScenarioConfig &scenario);
    void save_scenario(const ScenarioConfig &scenario, const std::filesystem::path &path);

    const char *to_string(AmplitudeModel model) noexcept;
} // namespace nearfield

#endif // NEARFIELD_SCENARIO_HPP
