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

#ifndef NEARFIELD_BOUNDARIES_HPP
#define NEARFIELD_BOUNDARIES_HPP

#include "nearfield/geometry.hpp"

#include <numbers>
#include <optional>
#include <string>

namespace nearfield
{
    enum class BoundaryCriterion
    {
        PHASE_PI_OVER_8,
        GAIN_THRESHOLD
    };

    const char *to_string(BoundaryCriterion c) noexcept;

    inline constexpr double kPhaseThreshold = std::numbers::pi / 8.0;

    struct BoundaryReport
    {
        double closed_form = 0;          // meters
        std::optional<double> numeric;   // meters
        BoundaryCriterion criterion = BoundaryCriterion::PHASE_PI_OVER_8;

        // Inputs echo.
        double aperture = 0;
        double wavelength = 0;
        double theta = 0;
        double threshold = kPhaseThreshold; // radians for PHASE, gain fraction for GAIN
        std::string geometry;
    };

    // 2 D^2 / lambda.
    double rayleigh_distance(double aperture, double lambda);

    // 2 (D_tx + D_rx)^2 / lambda.
    double mimo_rayleigh_distance(double aperture_tx, double aperture_rx, double lambda);

    // d1 d2 / (d1 + d2). A RIS link is near-field when this falls below the RIS Rayleigh distance.
    double ris_effective_distance(double d1, double d2);

    // RIS-UE distance at which ris_effective_distance(d1, d2) equals 2 D^2 / lambda.
    // std::nullopt means unbounded: every d2 is near-field because d1 is already inside.
    std::optional<double> ris_boundary_d2(double aperture, double lambda, double d1);

    // Distance at which phase_discrepancy equals `threshold`, by bisection on
    // [aperture, 1e4 * 2D^2/lambda] with relative tolerance 1e-6.
    BoundaryReport numeric_phase_boundary(const ArrayGeometryd &geom, double frequency, double theta,
                                          double threshold = kPhaseThreshold,
                                          double speed = speed_of_light<double>);

    // Smallest r such that the planar beam towards theta keeps normalized gain >= gain_floor
    // against the true spherical response at every r' >= r.
    BoundaryReport effective_rayleigh_distance(const ArrayGeometryd &geom, double frequency, double theta,
                                               double gain_floor = 0.95,
                                               double speed = speed_of_light<double>);
} // namespace nearfield

#endif // NEARFIELD_BOUNDARIES_HPP
