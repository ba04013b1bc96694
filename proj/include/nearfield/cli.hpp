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

#ifndef NEARFIELD_CLI_HPP
#define NEARFIELD_CLI_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace nearfield::cli
{
    inline constexpr const char *kToolVersion = "0.1.0";

    // Exit codes.
    inline constexpr int kOk = 0;
    inline constexpr int kNumericFailure = 1;
    inline constexpr int kConfigFailure = 2;

    struct RunManifest
    {
        std::string subcommand;
        std::string config_path;
        std::uint64_t seed = 0;
        std::vector<std::filesystem::path> outputs;
        std::string tool_version = kToolVersion;
        double wall_clock_seconds = 0;
        unsigned threads = 1;
    };

    std::string manifest_json(const RunManifest &manifest);

    // Runs one subcommand; args excludes the program name.
    int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
    int dispatch(int argc, char **argv);
} // namespace nearfield::cli

#endif // NEARFIELD_CLI_HPP
