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

#ifndef NEARFIELD_CSV_HPP
#define NEARFIELD_CSV_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace nearfield
{
    using CsvCell = std::variant<double, std::int64_t, std::string>;

    struct CsvTable
    {
        std::vector<std::string> header;
        std::vector<std::vector<CsvCell>> rows;
    };

    // Floats use 12 significant digits ("%.12g"); inf/nan print as inf/-inf/nan.
    std::string format_double(double value);

    // RFC-4180 text with LF line endings. Throws InvalidArgument on ragged rows.
    std::string to_csv(const CsvTable &table);

    // Throws IoError if the file cannot be written.
    void emit_csv(const CsvTable &table, const std::filesystem::path &path);

    // Parsed cells are returned as text; the header row is split off.
    struct CsvText
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;
    };
    CsvText parse_csv(const std::string &text);
    CsvText read_csv(const std::filesystem::path &path);

    double parse_double(const std::string &cell);
} // namespace nearfield

#endif // NEARFIELD_CSV_HPP
