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

#include "nearfield/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nearfield
{
    namespace
    {
        template <typename T>
        T read_scalar(const YAML::Node &node, const std::string &key)
        {
            if (!node)
                throw ConfigError(key, "missing");
            try
            {
                return node.as<T>();
            }
            catch (const YAML::Exception &e)
            {
                throw ConfigError(key, "cannot parse value (" + std::string(e.what()) + ")");
            }
        }

        template <typename T>
        T read_or(const YAML::Node &node, const std::string &key, T fallback)
        {
            return node ? read_scalar<T>(node, key) : fallback;
        }

        PolarPointd read_point(const YAML::Node &node, const std::string &key)
        {
            const double theta = deg2rad(read_scalar<double>(node["theta_deg"], key + ".theta_deg"));
            const double r = read_scalar<double>(node["r"], key + ".r");
            try
            {
                return PolarPointd(theta, r);
            }
            catch (const InvalidArgument &e)
            {
                throw ConfigError(key, e.what());
            }
        }

        ArrayGeometryd read_array(const YAML::Node &node, const std::string &name)
        {
            const std::string key = "arrays." + name;
            if (!node.IsMap())
                throw ConfigError(key, "expected a table");
            try
            {
                if (node["ula"])
                {
                    const auto &g = node["ula"];
                    return build_ula<double>(read_scalar<long>(g["n"], key + ".ula.n"),
                                             read_scalar<double>(g["spacing"], key + ".ula.spacing"), name);
                }
                if (node["upa"])
                {
                    const auto &g = node["upa"];
                    return build_upa<double>(read_scalar<long>(g["nx"], key + ".upa.nx"),
                                             read_scalar<long>(g["ny"], key + ".upa.ny"),
                                             read_scalar<double>(g["spacing_x"], key + ".upa.spacing_x"),
                                             read_scalar<double>(g["spacing_y"], key + ".upa.spacing_y"), name);
                }
                const YAML::Node elems = node["elements"];
                if (!elems || !elems.IsSequence())
                    throw ConfigError(key + ".elements", "expected a list of [x, y, z] positions");
                Positions<double> pos(3, static_cast<Eigen::Index>(elems.size()));
                for (std::size_t i = 0; i < elems.size(); ++i)
                {
                    const std::string ekey = key + ".elements[" + std::to_string(i) + "]";
                    if (!elems[i].IsSequence() || elems[i].size() != 3)
                        throw ConfigError(ekey, "expected [x, y, z]");
                    for (int c = 0; c < 3; ++c)
                        pos(c, static_cast<Eigen::Index>(i)) = read_scalar<double>(elems[i][c], ekey);
                }
                return ArrayGeometryd(std::move(pos), name);
            }
            catch (const InvalidArgument &e)
            {
                throw ConfigError(key, e.what());
            }
        }

        AmplitudeModel read_amplitude(const YAML::Node &node)
        {
            const auto text = read_or<std::string>(node, "amplitude_model", "UNIT");
            if (text == "UNIT")
                return AmplitudeModel::UNIT;
            if (text == "FREE_SPACE")
                return AmplitudeModel::FREE_SPACE;
            throw ConfigError("amplitude_model", "expected UNIT or FREE_SPACE, got '" + text + "'");
        }

        void emit_double(YAML::Emitter &out, double v)
        {
            if (std::isinf(v))
                out << (v > 0 ? ".inf" : "-.inf");
            else
                out << v;
        }
    } // namespace

    const ArrayGeometryd &ScenarioConfig::array(const std::string &key) const
    {
        const auto it = arrays.find(key);
        if (it == arrays.end())
            throw ConfigError("arrays." + key, "missing");
        return it->second;
    }

    const char *to_string(AmplitudeModel model) noexcept
    {
        return model == AmplitudeModel::FREE_SPACE ? "FREE_SPACE" : "UNIT";
    }

    ScenarioConfig parse_scenario(const std::string &text)
    {
        YAML::Node root;
        try
        {
            root = YAML::Load(text);
        }
        catch (const YAML::Exception &e)
        {
            throw ConfigError("<document>", e.what());
        }
        if (!root.IsMap())
            throw ConfigError("<document>", "expected a table at top level");

        ScenarioConfig sc;
        sc.seed = read_or<std::uint64_t>(root["seed"], "seed", 0);
        sc.amplitude_model = read_amplitude(root["amplitude_model"]);

        const YAML::Node carrier = root["carrier"];
        if (!carrier)
            throw ConfigError("carrier", "missing");
        sc.carrier.center_frequency = read_scalar<double>(carrier["center_frequency"], "carrier.center_frequency");
        sc.carrier.bandwidth = read_or<double>(carrier["bandwidth"], "carrier.bandwidth", 0.0);
        sc.carrier.num_subcarriers = read_or<long>(carrier["num_subcarriers"], "carrier.num_subcarriers", 1);
        sc.carrier.propagation_speed =
            read_or<double>(carrier["propagation_speed"], "carrier.propagation_speed", speed_of_light<double>);
        try
        {
            sc.carrier.validate();
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError("carrier", e.what());
        }

        const YAML::Node arrays = root["arrays"];
        if (arrays)
        {
            if (!arrays.IsMap())
                throw ConfigError("arrays", "expected a table of named arrays");
            for (const auto &kv : arrays)
            {
                const auto name = kv.first.as<std::string>();
                sc.arrays.emplace(name, read_array(kv.second, name));
            }
        }

        const YAML::Node users = root["users"];
        if (users)
        {
            if (!users.IsSequence())
                throw ConfigError("users", "expected a list");
            for (std::size_t i = 0; i < users.size(); ++i)
                sc.users.push_back(read_point(users[i], "users[" + std::to_string(i) + "]"));
        }

        const YAML::Node paths = root["paths"];
        if (paths)
        {
            if (!paths.IsSequence())
                throw ConfigError("paths", "expected a list");
            for (std::size_t i = 0; i < paths.size(); ++i)
            {
                const std::string key = "paths[" + std::to_string(i) + "]";
                const YAML::Node g = paths[i]["gain"];
                if (!g || !g.IsSequence() || g.size() != 2)
                    throw ConfigError(key + ".gain", "expected [re, im]");
                const std::complex<double> gain(read_scalar<double>(g[0], key + ".gain"),
                                                read_scalar<double>(g[1], key + ".gain"));
                sc.paths.push_back({gain, read_point(paths[i], key)});
            }
        }
        return sc;
    }

    ScenarioConfig load_scenario(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config", "cannot open scenario file '" + path.string() + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_scenario(buf.str());
    }

    std::string dump_scenario(const ScenarioConfig &sc)
    {
        YAML::Emitter out;
        out.SetDoublePrecision(17);
        out << YAML::BeginMap;
        out << YAML::Key << "seed" << YAML::Value << sc.seed;
        out << YAML::Key << "amplitude_model" << YAML::Value << to_string(sc.amplitude_model);

        out << YAML::Key << "carrier" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "center_frequency" << YAML::Value << sc.carrier.center_frequency;
        out << YAML::Key << "bandwidth" << YAML::Value << sc.carrier.bandwidth;
        out << YAML::Key << "num_subcarriers" << YAML::Value << static_cast<long>(sc.carrier.num_subcarriers);
        out << YAML::Key << "propagation_speed" << YAML::Value << sc.carrier.propagation_speed;
        out << YAML::EndMap;

        out << YAML::Key << "arrays" << YAML::Value << YAML::BeginMap;
        for (const auto &[name, geom] : sc.arrays)
        {
            out << YAML::Key << name << YAML::Value << YAML::BeginMap;
            out << YAML::Key << "elements" << YAML::Value << YAML::BeginSeq;
            for (Eigen::Index i = 0; i < geom.size(); ++i)
            {
                out << YAML::Flow << YAML::BeginSeq;
                for (int c = 0; c < 3; ++c)
                    out << geom.elements()(c, i);
                out << YAML::EndSeq;
            }
            out << YAML::EndSeq << YAML::EndMap;
        }
        out << YAML::EndMap;

        out << YAML::Key << "users" << YAML::Value << YAML::BeginSeq;
        for (const auto &u : sc.users)
        {
            out << YAML::Flow << YAML::BeginMap;
            out << YAML::Key << "theta_deg" << YAML::Value << rad2deg(u.theta());
            out << YAML::Key << "r" << YAML::Value;
            emit_double(out, u.r());
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;

        out << YAML::Key << "paths" << YAML::Value << YAML::BeginSeq;
        for (const auto &p : sc.paths)
        {
            out << YAML::Flow << YAML::BeginMap;
            out << YAML::Key << "gain" << YAML::Value << YAML::Flow << YAML::BeginSeq << p.gain.real()
                << p.gain.imag() << YAML::EndSeq;
            out << YAML::Key << "theta_deg" << YAML::Value << rad2deg(p.point.theta());
            out << YAML::Key << "r" << YAML::Value;
            emit_double(out, p.point.r());
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
        out << YAML::EndMap;
        return std::string(out.c_str()) + "\n";
    }

    void save_scenario(const ScenarioConfig &scenario, const std::filesystem::path &path)
    {
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot write scenario file '" + path.string() + "'");
        out << dump_scenario(scenario);
        if (!out)
            throw IoError("failed writing scenario file '" + path.string() + "'");
    }
} // namespace nearfield
