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

#include "nearfield/beamforming.hpp"
#include "nearfield/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nearfield
{
    namespace
    {
        double response_gain(const CVectord &response, const CVectord &weights)
        {
            // Unnormalized weights are tolerated; the gain contract stays in [0, 1].
            const double wn = weights.norm();
            if (wn == 0)
                return 0.0;
            return std::abs(response.cwiseProduct(weights).sum()) / (std::sqrt(static_cast<double>(response.size())) * wn);
        }

        void require_grids(std::span<const double> angles, std::span<const double> distances)
        {
            detail::require(!angles.empty() && !distances.empty(), "gain grid: angle and distance grids must be non-empty");
        }
    } // namespace

    NarrowbandBeamformer focus_weights(const ArrayGeometryd &geom, double frequency, const PolarPointd &p, double speed)
    {
        NarrowbandBeamformer bf;
        const CVectord a = array_response(geom, frequency, p, speed).entries;
        bf.weights = a.conjugate() / a.norm();
        bf.design = p.is_far_field() ? BeamDesign::STEER : BeamDesign::FOCUS;
        bf.target = p;
        return bf;
    }

    NarrowbandBeamformer steer_weights(const ArrayGeometryd &geom, double frequency, double theta, double speed)
    {
        NarrowbandBeamformer bf;
        const CVectord a = planar_steering(geom, frequency, theta, speed).entries;
        bf.weights = a.conjugate() / a.norm();
        bf.design = BeamDesign::STEER;
        bf.target = PolarPointd::far_field(theta);
        return bf;
    }

    double gain(const ArrayGeometryd &geom, double frequency, const CVectord &weights, const PolarPointd &p,
                double speed)
    {
        if (weights.size() != geom.size())
            throw InvalidArgument("gain: weight length differs from the array size");
        return response_gain(array_response(geom, frequency, p, speed).entries, weights);
    }

    double gain(const ArrayGeometryd &geom, double frequency, const NarrowbandBeamformer &w, const PolarPointd &p,
                double speed)
    {
        return gain(geom, frequency, w.weights, p, speed);
    }

    Eigen::MatrixXd gain_map(const ArrayGeometryd &geom, double frequency, const CVectord &weights,
                             std::span<const double> angle_grid, std::span<const double> distance_grid, double speed)
    {
        require_grids(angle_grid, distance_grid);
        const auto rows = static_cast<Eigen::Index>(angle_grid.size());
        const auto cols = static_cast<Eigen::Index>(distance_grid.size());
        Eigen::MatrixXd map(rows, cols);
        parallel_for(angle_grid.size(), [&](std::size_t a) {
            for (Eigen::Index d = 0; d < cols; ++d)
                map(static_cast<Eigen::Index>(a), d) =
                    gain(geom, frequency, weights, PolarPointd(angle_grid[a], distance_grid[static_cast<std::size_t>(d)]),
                         speed);
        });
        return map;
    }

    CVectord WidebandBeamformer::weights_at(double frequency) const
    {
        CVectord w(ps_phases.size());
        for (const auto &sub : partition)
        {
            const double delay_phase = -2.0 * std::numbers::pi * frequency * ttd_delays(&sub - partition.data());
            for (Eigen::Index n = sub.begin; n < sub.begin + sub.size; ++n)
                w(n) = std::polar(1.0, ps_phases(n) + delay_phase);
        }
        return w / w.norm();
    }

    WidebandBeamformer ps_wideband(const ArrayGeometryd &geom, const CarrierConfigd &carrier, const PolarPointd &p)
    {
        carrier.validate();
        const CVectord a = array_response(geom, carrier.center_frequency, p, carrier.propagation_speed).entries;
        WidebandBeamformer wb;
        wb.ps_phases.resize(geom.size());
        for (Eigen::Index n = 0; n < geom.size(); ++n)
            wb.ps_phases(n) = -std::arg(a(n));
        wb.ttd_delays = Eigen::VectorXd::Zero(geom.size());
        for (Eigen::Index n = 0; n < geom.size(); ++n)
            wb.partition.push_back({n, 1});
        wb.target = p;
        return wb;
    }

    WidebandBeamformer ttd_pdf(const ArrayGeometryd &geom, const CarrierConfigd &carrier, const PolarPointd &p,
                               Eigen::Index num_subarrays)
    {
        carrier.validate();
        const Eigen::Index n = geom.size();
        if (num_subarrays < 1 || n % num_subarrays != 0)
            throw InvalidArgument("ttd_pdf: subarray count must divide the antenna count");
        if (p.is_far_field())
            throw UnsupportedModel("ttd_pdf: focusing target must be at a finite distance");
        if (!(p.r() > geom.aperture() / 2))
            throw DomainError("ttd_pdf: target lies inside the array hull");

        const double c = carrier.propagation_speed;
        const double k = 2.0 * std::numbers::pi * carrier.center_frequency / c;
        const Point3<double> target = p.cartesian();
        const Eigen::Index block = n / num_subarrays;

        WidebandBeamformer wb;
        wb.ps_phases.resize(n);
        wb.ttd_delays.resize(num_subarrays);
        wb.target = p;
        Eigen::VectorXd centre_dist(num_subarrays);
        for (Eigen::Index l = 0; l < num_subarrays; ++l)
        {
            const Eigen::Index begin = l * block;
            wb.partition.push_back({begin, block});
            const Point3<double> centre = geom.elements().middleCols(begin, block).rowwise().mean();
            const Point3<double> to_target = target - centre;
            centre_dist(l) = to_target.norm();
            const Point3<double> dir = to_target / centre_dist(l);
            // r_n - r_l ~= -(x_n - x_l) . dir; weights carry the conjugate phase.
            for (Eigen::Index i = begin; i < begin + block; ++i)
                wb.ps_phases(i) = -k * (geom.elements().col(i) - centre).dot(dir);
        }
        // Farther subarrays fire earlier: exp(-j 2 pi f t_l) must match exp(+j 2 pi f r_l / c).
        wb.ttd_delays = (centre_dist.maxCoeff() - centre_dist.array()) / c;
        return wb;
    }

    std::vector<FrequencyGain> gain_vs_frequency(const ArrayGeometryd &geom, const CarrierConfigd &carrier,
                                                 const WidebandBeamformer &wb, const PolarPointd &p)
    {
        const Eigen::VectorXd freqs = subcarrier_frequencies(carrier);
        std::vector<FrequencyGain> out(static_cast<std::size_t>(freqs.size()));
        parallel_for(out.size(), [&](std::size_t m) {
            const double f = freqs(static_cast<Eigen::Index>(m));
            out[m] = {f, gain(geom, f, wb.weights_at(f), p, carrier.propagation_speed)};
        });
        return out;
    }

    std::vector<FocalPoint> focal_point_map(const ArrayGeometryd &geom, const CarrierConfigd &carrier,
                                            const WidebandBeamformer &wb, std::span<const double> angle_grid,
                                            std::span<const double> distance_grid)
    {
        require_grids(angle_grid, distance_grid);
        const Eigen::VectorXd freqs = subcarrier_frequencies(carrier);
        std::vector<FocalPoint> out(static_cast<std::size_t>(freqs.size()));
        parallel_for(out.size(), [&](std::size_t m) {
            const double f = freqs(static_cast<Eigen::Index>(m));
            const CVectord w = wb.weights_at(f);
            FocalPoint best{f, 0, 0, angle_grid[0], distance_grid[0], -1.0};
            for (std::size_t a = 0; a < angle_grid.size(); ++a)
                for (std::size_t d = 0; d < distance_grid.size(); ++d)
                {
                    const double g =
                        gain(geom, f, w, PolarPointd(angle_grid[a], distance_grid[d]), carrier.propagation_speed);
                    if (g > best.gain)
                        best = {f, static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(d), angle_grid[a],
                                distance_grid[d], g};
                }
            out[m] = best;
        });
        return out;
    }
} // namespace nearfield
