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

#include "nearfield/csv.hpp"
#include "nearfield/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nearfield
{
    namespace
    {
        std::string quote(const std::string &s)
        {
            if (s.find_first_of(",\"\n\r") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s)
            {
                if (c == '"')
                    out += '"';
                out += c;
            }
            out += '"';
            return out;
        }

        std::string render(const CsvCell &cell)
        {
            if (const auto *d = std::get_if<double>(&cell))
                return format_double(*d);
            if (const auto *i = std::get_if<std::int64_t>(&cell))
                return std::to_string(*i);
            return quote(std::get<std::string>(cell));
        }
    } // namespace

    std::string format_double(double value)
    {
        if (std::isnan(value))
            return "nan";
        if (std::isinf(value))
            return value > 0 ? "inf" : "-inf";
        if (value == 0.0)
            return "0"; // folds -0
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", value);
        return buf;
    }

    std::string to_csv(const CsvTable &table)
    {
        if (table.header.empty())
            throw InvalidArgument("to_csv: header row required");
        std::string out;
        for (std::size_t c = 0; c < table.header.size(); ++c)
            out += (c ? "," : "") + quote(table.header[c]);
        out += '\n';
        for (const auto &row : table.rows)
        {
            if (row.size() != table.header.size())
                throw InvalidArgument("to_csv: row width differs from header width");
            for (std::size_t c = 0; c < row.size(); ++c)
                out += (c ? "," : "") + render(row[c]);
            out += '\n';
        }
        return out;
    }

    void emit_csv(const CsvTable &table, const std::filesystem::path &path)
    {
        const std::string body = to_csv(table);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + path.string() + "' for writing");
        out << body;
        out.close();
        if (!out)
            throw IoError("failed writing '" + path.string() + "'");
    }

    CsvText parse_csv(const std::string &text)
    {
        std::vector<std::vector<std::string>> records;
        std::vector<std::string> record;
        std::string field;
        bool in_quotes = false;
        bool pending = false;
        for (std::size_t i = 0; i < text.size(); ++i)
        {
            const char c = text[i];
            if (in_quotes)
            {
                if (c == '"' && i + 1 < text.size() && text[i + 1] == '"')
                {
                    field += '"';
                    ++i;
                }
                else if (c == '"')
                    in_quotes = false;
                else
                    field += c;
                continue;
            }
            pending = true;
            if (c == '"')
                in_quotes = true;
            else if (c == ',')
            {
                record.push_back(std::move(field));
                field.clear();
            }
            else if (c == '\n')
            {
                record.push_back(std::move(field));
                field.clear();
                records.push_back(std::move(record));
                record.clear();
                pending = false;
            }
            else if (c != '\r')
                field += c;
        }
        if (in_quotes)
            throw InvalidArgument("parse_csv: unterminated quoted field");
        if (pending)
        {
            record.push_back(std::move(field));
            records.push_back(std::move(record));
        }

        CsvText out;
        if (records.empty())
            return out;
        out.header = std::move(records.front());
        out.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
        return out;
    }

    CsvText read_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open '" + path.string() + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_csv(buf.str());
    }

    double parse_double(const std::string &cell)
    {
        if (cell == "inf")
            return INFINITY;
        if (cell == "-inf")
            return -INFINITY;
        std::size_t used = 0;
        double v = 0;
        try
        {
            v = std::stod(cell, &used);
        }
        catch (const std::exception &)
        {
            throw InvalidArgument("parse_double: not a number: '" + cell + "'");
        }
        if (used != cell.size())
            throw InvalidArgument("parse_double: trailing characters in '" + cell + "'");
        return v;
    }
} // namespace nearfield
