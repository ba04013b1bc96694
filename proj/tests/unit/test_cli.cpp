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

#include <catch_amalgamated.hpp>

#include "nearfield/cli.hpp"
#include "nearfield/csv.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nearfield;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace
{
    struct Run
    {
        int code;
        std::string out;
        std::string err;
    };

    Run run(std::vector<std::string> args)
    {
        std::ostringstream out, err;
        const int code = cli::dispatch(args, out, err);
        return {code, out.str(), err.str()};
    }

    fs::path fresh_dir(const std::string &name)
    {
        const auto dir = fs::temp_directory_path() / ("nearfield_cli_" + name);
        fs::remove_all(dir);
        return dir;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    nlohmann::json manifest(const fs::path &dir, const std::string &sub)
    {
        return nlohmann::json::parse(slurp(dir / (sub + ".manifest.json")));
    }
} // namespace

TEST_CASE("boundary subcommand prints the closed form", "[cli]")
{
    const auto dir = fresh_dir("boundary");
    const auto r = run({"--out-dir", dir.string(), "boundary", "--aperture", "0.36", "--freq", "28e9"});
    REQUIRE(r.code == cli::kOk);
    CHECK_THAT(r.out, ContainsSubstring("24.2"));
    const auto csv = read_csv(dir / "boundary.csv");
    REQUIRE(csv.rows.size() == 1);
    CHECK_THAT(parse_double(csv.rows[0][1]), WithinAbs(24.2, 0.05));

    const auto m = manifest(dir, "boundary");
    CHECK(m["subcommand"] == "boundary");
    CHECK(m["tool_version"] == cli::kToolVersion);
    REQUIRE(m["outputs"].size() == 2);
    for (const auto &o : m["outputs"])
        CHECK(fs::exists(o.get<std::string>()));
}

TEST_CASE("boundary ris prints the d2 threshold", "[cli]")
{
    const auto dir = fresh_dir("ris");
    const auto r = run({"--out-dir", dir.string(), "boundary", "ris", "--aperture", "0.36", "--freq", "28e9", "--d1", "50"});
    REQUIRE(r.code == cli::kOk);
    CHECK_THAT(r.out, ContainsSubstring("46.9"));
    const auto j = nlohmann::json::parse(slurp(dir / "boundary.json"));
    CHECK_THAT(j["closed_form_m"].get<double>(), WithinAbs(46.93, 0.01));
}

TEST_CASE("config and usage errors exit with code 2", "[cli]")
{
    const auto missing = run({"--config", "/nonexistent/dir/scenario.yaml", "boundary", "--aperture", "1"});
    CHECK(missing.code == cli::kConfigFailure);
    CHECK_THAT(missing.err, ContainsSubstring("/nonexistent/dir/scenario.yaml"));

    const auto unknown = run({"teleport"});
    CHECK(unknown.code == cli::kConfigFailure);
    CHECK_THAT(unknown.err, ContainsSubstring("boundary"));

    const auto none = run({});
    CHECK(none.code == cli::kConfigFailure);

    const auto dir = fresh_dir("badkey");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.yaml") << "carrier: {center_frequency: -5}\n";
    const auto bad = run({"--config", (dir / "bad.yaml").string(), "--out-dir", dir.string(), "boundary", "numeric"});
    CHECK(bad.code == cli::kConfigFailure);
    CHECK_THAT(bad.err, ContainsSubstring("carrier"));

    const auto mode = run({"--out-dir", dir.string(), "boundary", "sideways", "--aperture", "1"});
    CHECK(mode.code == cli::kConfigFailure);
    CHECK_THAT(mode.err, ContainsSubstring("mode"));
}

TEST_CASE("unwritable output exits with code 1", "[cli]")
{
    const auto r = run({"--out-dir", "/proc/nearfield_forbidden", "boundary", "--aperture", "0.36", "--freq", "28e9"});
    CHECK(r.code == cli::kNumericFailure);
}

TEST_CASE("fieldmap export dimensions", "[cli]")
{
    const auto dir = fresh_dir("fieldmap");
    const auto r = run({"--out-dir", dir.string(), "fieldmap", "--n", "64", "--freq", "28e9", "--design", "steer",
                        "--angles", "7", "--distances", "5"});
    REQUIRE(r.code == cli::kOk);
    const auto csv = read_csv(dir / "fieldmap.csv");
    CHECK(csv.header.size() == 6);
    CHECK(csv.rows.size() == 7);
    for (const auto &row : csv.rows)
        CHECK(row.size() == 6);
    CHECK(manifest(dir, "fieldmap")["outputs"].size() == 1);
}

TEST_CASE("codebook, beamsplit, dof and sdma write their outputs", "[cli]")
{
    const auto dir = fresh_dir("all");
    REQUIRE(run({"--out-dir", dir.string(), "codebook", "--n", "32", "--freq", "28e9", "--angles", "8", "--r-min", "0.2"}).code ==
            cli::kOk);
    CHECK(fs::exists(dir / "codebook_labels.csv"));
    CHECK(fs::exists(dir / "codebook_entries.csv"));

    REQUIRE(run({"--out-dir", dir.string(), "beamsplit", "--n", "64", "--subcarriers", "8", "--subarrays", "8"}).code ==
            cli::kOk);
    const auto split = read_csv(dir / "beamsplit.csv");
    CHECK(split.header == std::vector<std::string>{"frequency_hz", "ps_gain", "ttd_pdf_gain"});
    CHECK(split.rows.size() == 8);

    REQUIRE(run({"--out-dir", dir.string(), "dof", "--aperture", "0.3", "--points", "4", "--d-min", "1", "--d-max", "100"})
                .code == cli::kOk);
    const auto dof = read_csv(dir / "dof.csv");
    CHECK(dof.header[0] == "distance_m");
    CHECK(dof.header[1] == "dof");
    CHECK(dof.header[2] == "capacity_bps_hz");
    CHECK(dof.rows.size() == 4);

    REQUIRE(run({"--out-dir", dir.string(), "sdma", "--n", "64", "--r", "2", "--r", "6"}).code == cli::kOk);
    const auto s = nlohmann::json::parse(slurp(dir / "sdma.json"));
    CHECK(s["near_field_zf_rate_bps_hz"].get<double>() > s["far_field_steering_rate_bps_hz"].get<double>());

    for (const char *sub : {"codebook", "beamsplit", "dof", "sdma"})
        CHECK(fs::exists(dir / (std::string(sub) + ".manifest.json")));
}

TEST_CASE("estimate is reproducible across runs and thread counts", "[cli]")
{
    const auto dir = fresh_dir("estimate");
    fs::create_directories(dir);
    std::ofstream(dir / "sc.yaml") << "seed: 3\ncarrier: {center_frequency: 28.0e9}\n"
                                      "arrays: {bs: {ula: {n: 32, spacing: 0.00535343675}}}\n"
                                      "users: [{theta_deg: 5, r: 2}]\n";
    const auto cfg = (dir / "sc.yaml").string();
    std::string bodies[3];
    const char *threads[] = {"1", "1", "4"};
    for (int i = 0; i < 3; ++i)
    {
        const auto out = dir / ("run" + std::to_string(i));
        const auto r = run({"--config", cfg, "--out-dir", out.string(), "--threads", threads[i], "estimate", "--trials",
                            "4", "--r-min", "0.3"});
        REQUIRE(r.code == cli::kOk);
        bodies[i] = slurp(out / "nmse.csv");
        const auto m = manifest(out, "estimate");
        CHECK(m["seed"] == 3);
        CHECK(m["config_path"] == cfg);
    }
    CHECK(bodies[0] == bodies[1]);
    CHECK(bodies[0] == bodies[2]);
    CHECK(bodies[0].rfind("distance_m,snr_db,codebook,mean_nmse_db,trials\n", 0) == 0);
}

TEST_CASE("installed binary reports exit codes", "[cli]")
{
    const std::string exe = NEARFIELD_CLI_PATH;
    const auto dir = fresh_dir("binary");
    const int ok = std::system((exe + " --out-dir " + dir.string() + " boundary --aperture 0.36 --freq 28e9 > /dev/null").c_str());
    CHECK(WEXITSTATUS(ok) == 0);
    const int bad = std::system((exe + " --config /nonexistent.yaml boundary 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(bad) == 2);
}
