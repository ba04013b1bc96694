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

#include "nearfield/boundaries.hpp"
#include "nearfield/codebook.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace nearfield;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    constexpr double kC = 299792458.0;
    constexpr double kF = 28e9;
    const double kHalfWave = kC / kF / 2.0;
} // namespace

TEST_CASE("coherence", "[codebook]")
{
    CVectord u = CVectord::Zero(4), v = CVectord::Zero(4);
    u(0) = 1.0;
    v(1) = 1.0;
    CHECK(coherence(u, u) == 1.0);
    CHECK(coherence(u, v) == 0.0);
    CHECK_THROWS_AS(coherence(u, CVectord::Ones(3)), InvalidArgument);

    const auto g = build_ula(64, kHalfWave);
    const double R = rayleigh_distance(g.aperture(), 2 * kHalfWave);
    const CVectord pl = planar_steering(g, kF, 0.3).entries.normalized();
    const CVectord sp = spherical_steering(g, kF, PolarPointd(0.3, R)).entries.normalized();
    const double c1 = coherence(pl, sp);
    CHECK(c1 > 0.0);
    CHECK(c1 < 1.0);
    CHECK(coherence(pl, sp) == c1);
}

TEST_CASE("angular codebook", "[codebook]")
{
    const auto g = build_ula(32, kHalfWave);
    const auto one = angular_codebook(g, kF, 1);
    REQUIRE(one.size() == 1);
    CHECK(one.labels()[0].theta() == 0.0);
    CHECK(one.labels()[0].is_far_field());
    CHECK(one.kind() == CodebookKind::ANGULAR);

    const auto cb = angular_codebook(g, kF, 32);
    const CMatrixd gram = cb.codewords().adjoint() * cb.codewords();
    CHECK((gram - CMatrixd::Identity(32, 32)).cwiseAbs().maxCoeff() <= 1e-9);

    // On-grid far-field path: exactly one codeword matches.
    const CVectord path = planar_steering(g, kF, cb.labels()[7].theta()).entries.normalized();
    int matches = 0;
    for (Eigen::Index q = 0; q < cb.size(); ++q)
    {
        const double c = coherence(cb.codewords().col(q), path);
        if (c > 1 - 1e-9)
            ++matches;
        else
            CHECK(c < 1e-9);
    }
    CHECK(matches == 1);

    const auto s = uniform_sine_angles(4);
    CHECK_THAT(std::sin(s[0]), WithinAbs(-0.75, 1e-15));
    CHECK_THAT(std::sin(s[3]), WithinAbs(0.75, 1e-15));
    CHECK_THROWS_AS(angular_codebook(g, kF, 0), InvalidArgument);
}

TEST_CASE("polar codebook on a small array has only the far-field ring", "[codebook]")
{
    const auto g = build_ula(4, kHalfWave);
    const double R = rayleigh_distance(g.aperture(), 2 * kHalfWave);
    const auto cb = polar_codebook(g, kF, 8, 0.5, 2.0 * R);
    CHECK(cb.size() == 8);
    for (Eigen::Index a = 0; a < cb.angle_count(); ++a)
    {
        const auto rings = cb.rings(a);
        REQUIRE(rings.size() == 1);
        CHECK(std::isinf(rings[0]));
    }
    const auto prof = codebook_coherence_profile(cb);
    CHECK(prof.adjacent_pairs == 0);
    CHECK(prof.max_adjacent_ring == 0.0);
}

TEST_CASE("polar codebook ring structure", "[codebook]")
{
    const auto g = build_ula(256, kHalfWave);
    const auto broadside = polar_codebook(g, kF, 1, 0.5, 3.0);
    const auto rings = broadside.rings(0);
    CHECK(rings.size() >= 4);
    CHECK(rings.size() == 12);
    CHECK_THAT(rings[1], WithinRel(36.214080205, 1e-9));
    CHECK_THAT(rings.back(), WithinRel(3.26560072994, 1e-9));

    const auto cb = polar_codebook(g, kF, 33, 0.5, 3.0);
    for (Eigen::Index a = 0; a < cb.angle_count(); ++a)
    {
        const auto r = cb.rings(a);
        CHECK(std::isinf(r[0]));
        for (std::size_t s = 1; s < r.size(); ++s)
        {
            CHECK(r[s] < r[s - 1]);
            CHECK(r[s] >= 3.0);
        }
        for (std::size_t s = 2; s + 1 < r.size(); ++s)
            CHECK(r[s] - r[s + 1] <= r[s - 1] - r[s]);
    }

    // Re-evaluate adjacent-ring coherence from freshly built responses.
    for (Eigen::Index q = 1; q < cb.size(); ++q)
    {
        if (cb.angle_index()[q] != cb.angle_index()[q - 1])
            continue;
        const CVectord prev = array_response(g, kF, cb.labels()[q - 1]).entries.normalized();
        const CVectord cur = array_response(g, kF, cb.labels()[q]).entries.normalized();
        CHECK(coherence(prev, cur) <= 0.5 + 1e-6);
    }
    const auto prof = codebook_coherence_profile(cb);
    CHECK(prof.max_adjacent_ring <= 0.5 + 1e-6);
    CHECK_FALSE(prof.exceeds_target);
    CHECK(prof.adjacent_pairs > 0);

    CHECK_THROWS_AS(polar_codebook(g, kF, 4, 0.0, 3.0), InvalidArgument);
    CHECK_THROWS_AS(polar_codebook(g, kF, 4, 1.0, 3.0), InvalidArgument);
    CHECK_THROWS_AS(polar_codebook(g, kF, 4, 0.5, g.aperture() / 2), DomainError);
    CHECK_THROWS_AS(codebook_coherence_profile(angular_codebook(g, kF, 4)), UnsupportedModel);
}

TEST_CASE("near-field energy spreads over angular codewords", "[codebook]")
{
    const auto g = build_ula(256, kHalfWave);
    const double R = rayleigh_distance(g.aperture(), 2 * kHalfWave);
    const auto ang = angular_codebook(g, kF, 256);
    const auto pol = polar_codebook(g, kF, 256, 0.5, 3.0);
    const PolarPointd user(ang.labels()[140].theta(), 0.05 * R);
    const CVectord h = spherical_steering(g, kF, user).entries.normalized();

    int spread = 0;
    for (Eigen::Index q = 0; q < ang.size(); ++q)
        if (coherence(ang.codewords().col(q), h) >= 0.3)
            ++spread;
    CHECK(spread >= 2);
    const double best = (pol.codewords().adjoint() * h).cwiseAbs().maxCoeff();
    CHECK(best >= 0.9);
}

TEST_CASE("duplicated codeword is flagged by the profile", "[codebook]")
{
    const auto g = build_ula(8, kHalfWave);
    CMatrixd words(8, 2);
    words.col(0) = planar_steering(g, kF, 0.0).entries.normalized();
    words.col(1) = words.col(0);
    const Codebook cb(words, {PolarPointd::far_field(0.0), PolarPointd(0.0, 5.0)}, {0, 0}, {0, 1},
                      CodebookKind::POLAR, kF, 0.5, "dup");
    const auto prof = codebook_coherence_profile(cb);
    CHECK_THAT(prof.max_adjacent_ring, WithinAbs(1.0, 1e-12));
    CHECK(prof.exceeds_target);
    CHECK(prof.histogram[9] == 1);

    CHECK_THROWS_AS(Codebook(words, {PolarPointd(0.0, 5.0), PolarPointd(0.0, 5.0)}, {0, 0}, {0, 1},
                             CodebookKind::ANGULAR, kF, 0.5, "x"),
                    InvalidArgument);
    CHECK_THROWS_AS(Codebook(words * 2.0, {PolarPointd::far_field(0.0), PolarPointd(0.0, 5.0)}, {0, 0}, {0, 1},
                             CodebookKind::POLAR, kF, 0.5, "x"),
                    InvalidArgument);
}

TEST_CASE("codebook export and import round trip", "[codebook]")
{
    const auto g = build_ula(32, kHalfWave);
    const auto cb = polar_codebook(g, kF, 9, 0.5, 0.2);
    const auto stem = std::filesystem::temp_directory_path() / "nearfield_cb_roundtrip";
    export_codebook(cb, stem);
    const auto back = import_codebook(stem);
    std::filesystem::remove(stem.string() + "_labels.csv");
    std::filesystem::remove(stem.string() + "_entries.csv");

    REQUIRE(back.size() == cb.size());
    CHECK(back.kind() == cb.kind());
    CHECK(back.angle_index() == cb.angle_index());
    CHECK(back.ring_index() == cb.ring_index());
    CHECK((back.codewords() - cb.codewords()).cwiseAbs().maxCoeff() < 1e-11);
    for (Eigen::Index q = 0; q < cb.size(); ++q)
    {
        CHECK_THAT(back.labels()[q].theta(), WithinAbs(cb.labels()[q].theta(), 1e-11));
        if (cb.labels()[q].is_far_field())
            CHECK(back.labels()[q].is_far_field());
        else
            CHECK_THAT(back.labels()[q].r(), WithinRel(cb.labels()[q].r(), 1e-11));
    }
    CHECK_THROWS_AS(import_codebook(std::filesystem::temp_directory_path() / "nearfield_missing_cb"), IoError);
}
