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

#include "nearfield/boundaries.hpp"
#include "nearfield/propagation.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace nearfield
{
    namespace
    {
        constexpr double kBisectionRelTol = 1e-6;
        constexpr double kUpperBracketFactor = 1e4;
        constexpr int kGainCurveSamples = 4096;

        // Smallest admissible radius for a point source outside the array hull.
        double hull_floor(const ArrayGeometryd &geom) { return 0.5 * geom.aperture() * (1.0 + 1e-9); }

        double planar_gain_at(const ArrayGeometryd &geom, double frequency, double theta, double r, double speed)
        {
            const auto planar = planar_steering(geom, frequency, theta, speed).entries;
            const auto sph = spherical_steering(geom, frequency, PolarPointd(theta, r), speed).entries;
            return std::abs(planar.dot(sph)) / static_cast<double>(geom.size());
        }
    } // namespace

    const char *to_string(BoundaryCriterion c) noexcept
    {
        return c == BoundaryCriterion::GAIN_THRESHOLD ? "GAIN_THRESHOLD" : "PHASE_PI_OVER_8";
    }

    double rayleigh_distance(double aperture, double lambda)
    {
        detail::require(lambda > 0, "rayleigh_distance: wavelength must be positive");
        detail::require(aperture >= 0, "rayleigh_distance: aperture must be non-negative");
        return 2.0 * aperture * aperture / lambda;
    }

    double mimo_rayleigh_distance(double aperture_tx, double aperture_rx, double lambda)
    {
        detail::require(lambda > 0, "mimo_rayleigh_distance: wavelength must be positive");
        detail::require(aperture_tx >= 0 && aperture_rx >= 0, "mimo_rayleigh_distance: apertures must be non-negative");
        const double sum = aperture_tx + aperture_rx;
        return 2.0 * sum * sum / lambda;
    }

    double ris_effective_distance(double d1, double d2)
    {
        detail::require(d1 > 0 && d2 > 0, "ris_effective_distance: distances must be positive");
        if (std::isinf(d1))
            return d2;
        if (std::isinf(d2))
            return d1;
        return d1 * d2 / (d1 + d2);
    }

    std::optional<double> ris_boundary_d2(double aperture, double lambda, double d1)
    {
        detail::require(d1 > 0, "ris_boundary_d2: d1 must be positive");
        const double r = rayleigh_distance(aperture, lambda);
        if (d1 <= r)
            return std::nullopt;
        if (std::isinf(d1))
            return r;
        return r * d1 / (d1 - r);
    }

    BoundaryReport numeric_phase_boundary(const ArrayGeometryd &geom, double frequency, double theta,
                                          double threshold, double speed)
    {
        detail::require(geom.aperture() > 0, "numeric_phase_boundary: aperture must be positive");
        detail::require(frequency > 0, "numeric_phase_boundary: frequency must be positive");
        detail::require(threshold > 0, "numeric_phase_boundary: threshold must be positive");

        BoundaryReport rep;
        rep.criterion = BoundaryCriterion::PHASE_PI_OVER_8;
        rep.aperture = geom.aperture();
        rep.wavelength = speed / frequency;
        rep.theta = theta;
        rep.threshold = threshold;
        rep.geometry = geom.name();
        rep.closed_form = rayleigh_distance(rep.aperture, rep.wavelength);

        auto excess = [&](double r) {
            return phase_discrepancy(geom, frequency, PolarPointd(theta, r), speed) - threshold;
        };

        // Small arrays can already be under the threshold at r = aperture; fall back to the hull.
        double lo = std::max(rep.aperture, hull_floor(geom));
        if (excess(lo) < 0)
            lo = hull_floor(geom);
        double hi = kUpperBracketFactor * rep.closed_form;
        const double f_lo = excess(lo);
        const double f_hi = excess(hi);
        if (!(f_lo >= 0 && f_hi <= 0))
        {
            std::ostringstream msg;
            msg << "numeric_phase_boundary: bracket failure on [" << lo << ", " << hi
                << "] m, discrepancy - threshold = (" << f_lo << ", " << f_hi << ") rad";
            throw NumericError(msg.str());
        }

        while (hi - lo > kBisectionRelTol * hi)
        {
            const double mid = 0.5 * (lo + hi);
            if (excess(mid) >= 0)
                lo = mid;
            else
                hi = mid;
        }
        rep.numeric = 0.5 * (lo + hi);
        return rep;
    }

    BoundaryReport effective_rayleigh_distance(const ArrayGeometryd &geom, double frequency, double theta,
                                               double gain_floor, double speed)
    {
        detail::require(gain_floor > 0 && gain_floor < 1, "effective_rayleigh_distance: gain_floor must be in (0, 1)");
        detail::require(frequency > 0, "effective_rayleigh_distance: frequency must be positive");

        BoundaryReport rep;
        rep.criterion = BoundaryCriterion::GAIN_THRESHOLD;
        rep.aperture = geom.aperture();
        rep.wavelength = speed / frequency;
        rep.theta = theta;
        rep.threshold = gain_floor;
        rep.geometry = geom.name();
        rep.closed_form = rayleigh_distance(rep.aperture, rep.wavelength);

        // Single element: unit gain everywhere.
        if (rep.aperture == 0)
        {
            rep.numeric = 0.0;
            return rep;
        }

        auto gain = [&](double r) { return planar_gain_at(geom, frequency, theta, r, speed); };

        // Log-spaced scan from the hull out to deep far field.
        const double lo = hull_floor(geom);
        const double hi = kUpperBracketFactor * std::max(rep.closed_form, rep.aperture);
        std::vector<double> rs(kGainCurveSamples), gs(kGainCurveSamples);
        const double step = std::log(hi / lo) / (kGainCurveSamples - 1);
        for (int i = 0; i < kGainCurveSamples; ++i)
        {
            rs[i] = lo * std::exp(step * i);
            gs[i] = gain(rs[i]);
        }
        if (gs.back() < gain_floor)
            throw NumericError("effective_rayleigh_distance: gain floor not reached within the scan range");

        int last_below = -1;
        for (int i = 0; i < kGainCurveSamples; ++i)
            if (gs[i] < gain_floor)
                last_below = i;
        if (last_below < 0)
        {
            rep.numeric = lo;
            return rep;
        }

        // Beyond the crossing the curve must rise monotonically towards one.
        for (int i = last_below + 1; i + 1 < kGainCurveSamples; ++i)
            if (gs[i + 1] < gs[i] - 1e-9)
            {
                std::ostringstream msg;
                msg << "effective_rayleigh_distance: non-monotone gain curve: g(" << rs[i] << ") = " << gs[i]
                    << " > g(" << rs[i + 1] << ") = " << gs[i + 1];
                throw NumericError(msg.str());
            }

        double a = rs[last_below], b = rs[last_below + 1];
        while (b - a > kBisectionRelTol * b)
        {
            const double mid = 0.5 * (a + b);
            if (gain(mid) < gain_floor)
                a = mid;
            else
                b = mid;
        }
        rep.numeric = b;
        return rep;
    }
} // namespace nearfield
