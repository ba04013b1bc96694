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

#include "nearfield/codebook.hpp"
#include "nearfield/estimation.hpp"
#include "nearfield/parallel.hpp"
#include "nearfield/scenario.hpp"

#include <cmath>
#include <numbers>

using namespace nearfield;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    constexpr double kC = 299792458.0;
    constexpr double kF = 28e9;
    const double kHalfWave = kC / kF / 2.0;

    const char *kSmallScenario = R"(
seed: 11
carrier: {center_frequency: 28.0e9}
arrays: {bs: {ula: {n: 64, spacing: 0.00535343675}}}
users: [{theta_deg: 10, r: 3}, {theta_deg: 10, r: 500}]
)";
} // namespace

TEST_CASE("pilot simulation", "[estimation]")
{
    const auto g = build_ula(32, kHalfWave);
    const CVectord h = spherical_steering(g, kF, PolarPointd(0.2, 2.0)).entries;

    const auto clean = simulate_pilots(h, 12, kNoiseless, 5);
    CHECK(clean.y == clean.system.sensing * h);
    CHECK(clean.system.sensing.rows() == 12);
    CHECK(clean.system.sensing.cwiseAbs().isApprox(Eigen::MatrixXd::Constant(12, 32, 1 / std::sqrt(32.0)), 1e-14));
    for (Eigen::Index p = 0; p < 12; ++p)
        CHECK_THAT(clean.system.sensing.row(p).norm(), WithinAbs(1.0, 1e-12));

    const auto a = simulate_pilots(h, 12, 10.0, 99);
    const auto b = simulate_pilots(h, 12, 10.0, 99);
    CHECK(a.y == b.y);
    CHECK(a.system.sensing == b.system.sensing);
    CHECK(a.y != simulate_pilots(h, 12, 10.0, 100).y);
    CHECK_THROWS_AS(simulate_pilots(h, 0, 10.0, 1), InvalidArgument);
}

TEST_CASE("empirical pilot SNR matches the target", "[estimation]")
{
    const auto g = build_ula(16, kHalfWave);
    const CVectord h = spherical_steering(g, kF, PolarPointd(-0.4, 1.0)).entries;
    const double target = GENERATE(0.0, 10.0, 20.0);
    double signal = 0, noise = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed)
    {
        const auto m = simulate_pilots(h, 8, target, seed);
        const CVectord clean = m.system.sensing * h;
        signal += clean.squaredNorm();
        noise += (m.y - clean).squaredNorm();
    }
    CHECK_THAT(10 * std::log10(signal / noise), WithinAbs(target, 0.2));
}

TEST_CASE("nmse", "[estimation]")
{
    const CVectord h = CVectord::LinSpaced(8, 1.0, 2.0);
    CHECK(nmse(h, h) <= -300.0);
    CHECK_THAT(nmse(h, CVectord::Zero(8)), WithinAbs(0.0, 1e-12));
    CHECK_THAT(nmse(h, h * 1.1), WithinAbs(-20.0, 1e-9));
    CHECK_THROWS_AS(nmse(CVectord::Zero(8), h), InvalidArgument);
    CHECK_THROWS_AS(nmse(h, CVectord::Zero(3)), InvalidArgument);

    const double phi = GENERATE(take(10, random(-3.0, 3.0)));
    const std::complex<double> rot = std::polar(1.0, phi);
    const CVectord est = h + CVectord::Constant(8, {0.01, -0.03});
    CHECK_THAT(nmse(h * rot, est * rot), WithinAbs(nmse(h, est), 1e-9));
}

TEST_CASE("OMP recovers a single on-grid codeword", "[estimation]")
{
    const auto g = build_ula(64, kHalfWave);
    const auto cb = angular_codebook(g, kF, 64);
    const CVectord h = 2.5 * cb.codewords().col(17);
    const auto m = simulate_pilots(h, 20, kNoiseless, 3);
    const auto res = omp(m.y, m.system, cb, 1);
    REQUIRE(res.support.size() == 1);
    CHECK(res.support[0] == 17);
    CHECK(nmse(h, res.estimated_channel) <= -80.0);
    CHECK(res.residual_norm >= 0.0);
}

TEST_CASE("OMP on a zero measurement returns a zero estimate", "[estimation]")
{
    const auto g = build_ula(16, kHalfWave);
    const auto cb = angular_codebook(g, kF, 16);
    PilotSystem sys;
    sys.sensing = random_phase_pilots(8, 16, 1);
    const auto res = omp(CVectord::Zero(8), sys, cb, 3);
    CHECK(res.support.empty());
    CHECK(res.estimated_channel.isZero());
    CHECK(res.residual_norm == 0.0);
    CHECK_THROWS_AS(omp(CVectord::Zero(8), sys, cb, 9), InvalidArgument);
    CHECK_THROWS_AS(omp(CVectord::Zero(8), sys, cb, 0), InvalidArgument);
}

TEST_CASE("OMP recovers a three-path polar channel", "[estimation]")
{
    const auto g = build_ula(256, kHalfWave);
    const auto cb = polar_codebook(g, kF, 256, 0.5, 3.0);
    // Atoms on far-apart spokes so pairwise coherence stays small.
    const Eigen::Index picks[] = {cb.size() / 8 + 2, cb.size() / 2 + 3, 7 * cb.size() / 8 + 1};
    for (auto a : picks)
        for (auto b : picks)
            if (a != b)
                REQUIRE(coherence(cb.codewords().col(a), cb.codewords().col(b)) <= 0.5);

    const CVectord h = cb.codewords().col(picks[0]) * std::complex<double>(1.0, 0.2) +
                       cb.codewords().col(picks[1]) * std::complex<double>(-0.6, 0.5) +
                       cb.codewords().col(picks[2]) * std::complex<double>(0.3, -0.8);
    const auto m = simulate_pilots(h, 64, kNoiseless, 21);
    const auto res = omp(m.y, m.system, cb, 3);
    CHECK(nmse(h, res.estimated_channel) <= -60.0);
    for (std::size_t i = 1; i < res.residual_history.size(); ++i)
        CHECK(res.residual_history[i] <= res.residual_history[i - 1] + 1e-12);
}

TEST_CASE("OMP residual is non-increasing on noisy data", "[estimation]")
{
    const auto g = build_ula(64, kHalfWave);
    const auto cb = polar_codebook(g, kF, 64, 0.5, 1.0);
    const std::uint64_t seed = GENERATE(take(5, random(0u, 100000u)));
    const CVectord h = spherical_steering(g, kF, PolarPointd(0.123, 4.0)).entries;
    const auto m = simulate_pilots(h, 24, 5.0, seed);
    const auto res = omp(m.y, m.system, cb, 6);
    REQUIRE(res.support.size() <= 6);
    for (std::size_t i = 1; i < res.residual_history.size(); ++i)
        CHECK(res.residual_history[i] <= res.residual_history[i - 1] + 1e-12);
}

TEST_CASE("codebook comparison with one trial is pinned", "[estimation]")
{
    const auto sc = parse_scenario(kSmallScenario);
    const auto &bs = sc.array("bs");
    const auto far = angular_codebook(bs, kF, 128);
    const auto pol = polar_codebook(bs, kF, 128, 0.5, 1.0);
    EstimationSweep sweep;
    sweep.pilots = 16;

    set_thread_count(1);
    const auto rows = compare_codebooks(sc, far, pol, 1, sweep);
    set_thread_count(4);
    const auto again = compare_codebooks(sc, far, pol, 1, sweep);
    set_thread_count(1);

    REQUIRE(rows.size() == 4);
    const struct
    {
        double distance;
        const char *codebook;
        double nmse_db;
    } pinned[] = {{3, "angular", 0.108884923982},
                  {3, "polar", -13.5189711941},
                  {500, "angular", -22.5834766568},
                  {500, "polar", -15.7107107957}};
    for (std::size_t i = 0; i < 4; ++i)
    {
        CHECK(rows[i].distance_m == pinned[i].distance);
        CHECK(rows[i].snr_db == 20.0);
        CHECK(rows[i].codebook == pinned[i].codebook);
        CHECK(rows[i].trials == 1);
        CHECK_THAT(rows[i].mean_nmse_db, WithinAbs(pinned[i].nmse_db, 1e-9));
        CHECK(rows[i].mean_nmse_db == again[i].mean_nmse_db);
    }
    CHECK_THROWS_AS(compare_codebooks(sc, far, pol, 0, sweep), InvalidArgument);
}
