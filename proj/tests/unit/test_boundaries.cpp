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
#include "nearfield/beamforming.hpp"
#include "nearfield/propagation.hpp"

#include <cmath>
#include <numbers>

using namespace nearfield;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    constexpr double kC = 299792458.0;
    double lambda_at(double f) { return kC / f; }
} // namespace

TEST_CASE("Rayleigh distance", "[boundaries]")
{
    CHECK(rayleigh_distance(0.0, 0.1) == 0.0);
    const double panel = std::hypot(2.0, 3.0);
    CHECK_THAT(rayleigh_distance(panel, lambda_at(2.4e9)), WithinRel(200.0, 0.10));
    CHECK_THAT(rayleigh_distance(panel, lambda_at(2.4e9)), WithinRel(208.2, 0.002));
    CHECK_THAT(rayleigh_distance(0.36, lambda_at(28e9)), WithinRel(25.0, 0.10));
    CHECK_THAT(rayleigh_distance(0.36, lambda_at(28e9)), WithinRel(24.2, 0.002));
    CHECK_THROWS_AS(rayleigh_distance(1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(rayleigh_distance(-1.0, 0.1), InvalidArgument);
}

TEST_CASE("MIMO Rayleigh distance", "[boundaries]")
{
    const double l = lambda_at(28e9);
    CHECK(mimo_rayleigh_distance(0.7, 0.0, l) == rayleigh_distance(0.7, l));
    CHECK_THAT(mimo_rayleigh_distance(0.36, 0.36, l), WithinRel(100.0, 0.10));
    CHECK_THAT(mimo_rayleigh_distance(0.36, 0.36, l), WithinRel(96.8, 0.002));
    CHECK_THAT(mimo_rayleigh_distance(0.36, 0.36, l), WithinRel(4 * rayleigh_distance(0.36, l), 1e-14));
    CHECK_THROWS_AS(mimo_rayleigh_distance(0.1, 0.1, -1.0), InvalidArgument);
}

TEST_CASE("RIS effective distance and d2 boundary", "[boundaries]")
{
    CHECK_THAT(ris_effective_distance(30.0, 30.0), WithinRel(15.0, 1e-15));
    CHECK_THAT(ris_effective_distance(INFINITY, 7.0), WithinRel(7.0, 1e-15));
    CHECK_THAT(ris_effective_distance(1e12, 7.0), WithinRel(7.0, 1e-10));
    CHECK_THROWS_AS(ris_effective_distance(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ris_effective_distance(1.0, -1.0), InvalidArgument);

    const double l = lambda_at(28e9);
    const double R = rayleigh_distance(0.36, l);
    CHECK_THAT(*ris_boundary_d2(0.36, l, 2 * R), WithinRel(2 * R, 1e-12));
    CHECK_FALSE(ris_boundary_d2(0.36, l, R).has_value());
    CHECK_FALSE(ris_boundary_d2(0.36, l, 0.5 * R).has_value());

    const auto d2 = ris_boundary_d2(0.36, l, 50.0);
    REQUIRE(d2.has_value());
    CHECK_THAT(*d2, WithinRel(R * 50.0 / (50.0 - R), 1e-12));
    CHECK_THAT(*d2, WithinAbs(46.9, 0.05));
    CHECK(*d2 < 50.0);
    CHECK_THAT(ris_effective_distance(50.0, *d2), WithinRel(R, 1e-12));
    CHECK_THROWS_AS(ris_boundary_d2(0.36, l, 0.0), InvalidArgument);
}

TEST_CASE("numeric phase boundary", "[boundaries]")
{
    const double f = 28e9, l = lambda_at(f);
    const auto n = GENERATE(64, 256);
    const auto g = build_ula(n, l / 2);
    const auto rep = numeric_phase_boundary(g, f, 0.0);
    REQUIRE(rep.numeric.has_value());
    CHECK_THAT(*rep.numeric, WithinRel(rep.closed_form, 0.10));
    CHECK_THAT(rep.closed_form, WithinRel(rayleigh_distance(g.aperture(), l), 1e-14));
    CHECK_THAT(phase_discrepancy(g, f, PolarPointd(0.0, *rep.numeric)), WithinRel(kPhaseThreshold, 1e-5));
    CHECK(rep.criterion == BoundaryCriterion::PHASE_PI_OVER_8);

    const auto tilted = numeric_phase_boundary(g, f, std::numbers::pi / 4);
    REQUIRE(tilted.numeric.has_value());
    CHECK(std::abs(*tilted.numeric - *rep.numeric) > 1e-3 * *rep.numeric);
    CHECK_THAT(phase_discrepancy(g, f, PolarPointd(std::numbers::pi / 4, *tilted.numeric)),
               WithinRel(kPhaseThreshold, 1e-5));
}

TEST_CASE("numeric phase boundary on a two-element array", "[boundaries]")
{
    const double f = 28e9, l = lambda_at(f);
    const auto g = build_ula(2, l / 2);
    const auto rep = numeric_phase_boundary(g, f, 0.0);
    REQUIRE(rep.numeric.has_value());
    CHECK(std::isfinite(*rep.numeric));
    CHECK(*rep.numeric > g.aperture() / 2);
    CHECK(*rep.numeric < rep.closed_form);
    CHECK(phase_discrepancy(g, f, PolarPointd(0.0, *rep.numeric)) <= kPhaseThreshold * (1 + 1e-5));
    CHECK_THROWS_AS(numeric_phase_boundary(build_ula(1, 0.1), f, 0.0), InvalidArgument);
}

TEST_CASE("effective Rayleigh distance", "[boundaries]")
{
    const double f = 28e9, l = lambda_at(f);
    const auto g = build_ula(256, l / 2);
    const double R = rayleigh_distance(g.aperture(), l);
    const auto rep = effective_rayleigh_distance(g, f, 0.0);
    REQUIRE(rep.numeric.has_value());
    CHECK(*rep.numeric < R);
    CHECK(*rep.numeric > 0.0);
    CHECK(rep.criterion == BoundaryCriterion::GAIN_THRESHOLD);

    // Gain oracle: the planar beam reaches the floor at the reported distance.
    const auto w = steer_weights(g, f, 0.0);
    CHECK_THAT(gain(g, f, w, PolarPointd(0.0, *rep.numeric)), WithinAbs(0.95, 1e-5));
    for (double r = *rep.numeric * 1.01; r < 1e4 * R; r *= 1.7)
        CHECK(gain(g, f, w, PolarPointd(0.0, r)) >= 0.95 - 1e-9);

    double prev = 0.0;
    for (double floor : {0.5, 0.8, 0.95, 0.99, 0.999})
    {
        const double erd = *effective_rayleigh_distance(g, f, 0.0, floor).numeric;
        CHECK(erd > prev);
        prev = erd;
    }

    CHECK(*effective_rayleigh_distance(build_ula(1, 0.1), f, 0.0).numeric == 0.0);
    CHECK_THROWS_AS(effective_rayleigh_distance(g, f, 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(effective_rayleigh_distance(g, f, 0.0, 0.0), InvalidArgument);
}
