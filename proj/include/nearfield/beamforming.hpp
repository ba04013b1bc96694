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

#ifndef NEARFIELD_BEAMFORMING_HPP
#define NEARFIELD_BEAMFORMING_HPP

#include "nearfield/geometry.hpp"
#include "nearfield/propagation.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace nearfield
{
    enum class BeamDesign
    {
        FOCUS,
        STEER
    };

    struct NarrowbandBeamformer
    {
        CVectord weights; // unit norm
        BeamDesign design = BeamDesign::FOCUS;
        PolarPointd target = PolarPointd::far_field(0.0); // STEER designs carry the far-field sentinel
    };

    // Conjugate spherical response at p, normalized: unit gain at the focal point.
    NarrowbandBeamformer focus_weights(const ArrayGeometryd &geom, double frequency, const PolarPointd &p,
                                       double speed = speed_of_light<double>);

    // Conjugate planar response towards theta, normalized.
    NarrowbandBeamformer steer_weights(const ArrayGeometryd &geom, double frequency, double theta,
                                       double speed = speed_of_light<double>);

    // |a(p)^T w| / sqrt(N); a is spherical, or planar for the far-field sentinel.
    double gain(const ArrayGeometryd &geom, double frequency, const CVectord &weights, const PolarPointd &p,
                double speed = speed_of_light<double>);
    double gain(const ArrayGeometryd &geom, double frequency, const NarrowbandBeamformer &w, const PolarPointd &p,
                double speed = speed_of_light<double>);

    // Rows follow angle_grid, columns follow distance_grid (meters, +inf allowed).
    Eigen::MatrixXd gain_map(const ArrayGeometryd &geom, double frequency, const CVectord &weights,
                             std::span<const double> angle_grid, std::span<const double> distance_grid,
                             double speed = speed_of_light<double>);

    struct Subarray
    {
        Eigen::Index begin = 0;
        Eigen::Index size = 0;
    };

    // Frequency-flat phase shifters plus one true-time delay per subarray.
    struct WidebandBeamformer
    {
        Eigen::VectorXd ps_phases;     // per antenna, radians
        Eigen::VectorXd ttd_delays;    // per subarray, seconds, min 0
        std::vector<Subarray> partition;
        PolarPointd target = PolarPointd::far_field(0.0);

        // w_n(f) = exp(j ps_n) exp(-j 2 pi f t_l(n)), normalized.
        CVectord weights_at(double frequency) const;
    };

    // Phase shifters matched to the response at the center frequency only.
    WidebandBeamformer ps_wideband(const ArrayGeometryd &geom, const CarrierConfigd &carrier, const PolarPointd &p);

    // Phase-delay focusing with L equal contiguous subarrays. Inside a subarray the phase shifters
    // undo the planar phase at fc towards p as seen from the subarray center; the TTDs undo the
    // subarray-center path differences.
    WidebandBeamformer ttd_pdf(const ArrayGeometryd &geom, const CarrierConfigd &carrier, const PolarPointd &p,
                               Eigen::Index num_subarrays);

    struct FrequencyGain
    {
        double frequency = 0;
        double gain = 0;
    };

    std::vector<FrequencyGain> gain_vs_frequency(const ArrayGeometryd &geom, const CarrierConfigd &carrier,
                                                 const WidebandBeamformer &wb, const PolarPointd &p);

    struct FocalPoint
    {
        double frequency = 0;
        Eigen::Index angle_index = 0;
        Eigen::Index distance_index = 0;
        double theta = 0;
        double r = 0;
        double gain = 0;
    };

    // Per subcarrier argmax of the gain map over the polar grid.
    std::vector<FocalPoint> focal_point_map(const ArrayGeometryd &geom, const CarrierConfigd &carrier,
                                            const WidebandBeamformer &wb, std::span<const double> angle_grid,
                                            std::span<const double> distance_grid);
} // namespace nearfield

#endif // NEARFIELD_BEAMFORMING_HPP
