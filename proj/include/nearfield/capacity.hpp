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

#ifndef NEARFIELD_CAPACITY_HPP
#define NEARFIELD_CAPACITY_HPP

#include "nearfield/geometry.hpp"
#include "nearfield/propagation.hpp"

#include <span>
#include <vector>

namespace nearfield
{
    // Relative singular-value threshold separating significant spatial modes.
    inline constexpr double kDefaultDofThreshold = 0.2;

    struct DofReport
    {
        double distance = 0;
        Eigen::VectorXd singular_values; // descending
        Eigen::Index effective_dof = 1;
        double capacity_bps_hz = 0;
        double snr_db = 0;
    };

    // Number of singular values >= rel_threshold * sigma_1.
    Eigen::Index effective_dof(const CMatrixd &h, double rel_threshold = kDefaultDofThreshold);
    Eigen::Index effective_dof(const ChannelMatrixd &h, double rel_threshold = kDefaultDofThreshold);

    // max(1, D_tx D_rx / (lambda d)).
    double dof_upper_bound(double aperture_tx, double aperture_rx, double lambda, double distance);

    // Capacity with optimal power allocation over the eigenmodes. Mode gains are
    // snr * sigma_i^2 / sigma_1^2, i.e. snr is the total transmit SNR seen through sigma_1.
    double waterfilling(std::span<const double> singular_values, double snr_db);
    double waterfilling(const Eigen::VectorXd &singular_values, double snr_db);

    // Broadside-parallel LoS link with free-space amplitudes at each distance.
    std::vector<DofReport> dof_vs_distance(const ArrayGeometryd &tx, const ArrayGeometryd &rx,
                                           const CarrierConfigd &carrier, std::span<const double> distances,
                                           double snr_db = 20.0, double rel_threshold = kDefaultDofThreshold);

    // Number of RF chains to activate: one per significant mode.
    Eigen::Index recommend_rf_chains(const DofReport &report);

    enum class PrecoderKind
    {
        ZF,
        MF
    };

    // Right pseudo-inverse of the K x N channel with unit-norm columns.
    CMatrixd zf_precoder(const CMatrixd &h);
    // Unscaled right pseudo-inverse, H * W = I.
    CMatrixd zf_precoder_unscaled(const CMatrixd &h);
    CMatrixd mf_precoder(const CMatrixd &h);

    // Sum of log2(1 + SINR_k); total power snr split equally over the K users, unit noise.
    double sum_rate(const CMatrixd &h, const CMatrixd &w, double snr_db);

    struct SdmaScenario
    {
        std::vector<PolarPointd> users;
        CMatrixd channels; // K x N, rows are user responses
        double snr_db = 10.0;
        PrecoderKind precoder = PrecoderKind::ZF;
    };

    SdmaScenario make_sdma_scenario(const ArrayGeometryd &geom, double frequency, std::vector<PolarPointd> users,
                                    double snr_db, PrecoderKind precoder = PrecoderKind::ZF,
                                    double speed = speed_of_light<double>);
    double evaluate(const SdmaScenario &scenario);

    struct SdmaReport
    {
        double near_field_zf_rate = 0;
        double far_field_steering_rate = 0;
        double channel_correlation = 0; // largest pairwise |<a_i, a_j>| / N
    };

    // |<a(p1), a(p2)>| / N with exact responses.
    double channel_correlation(const ArrayGeometryd &geom, double frequency, const PolarPointd &p1,
                               const PolarPointd &p2, double speed = speed_of_light<double>);

    // Users that share an angle (within 0.1 deg) but sit at different distances inside the
    // Rayleigh distance: exact spherical channels with ZF versus planar beams per user angle.
    SdmaReport sdma_compare(const ArrayGeometryd &geom, double frequency, std::span<const PolarPointd> users,
                            double snr_db, double speed = speed_of_light<double>);
} // namespace nearfield

#endif // NEARFIELD_CAPACITY_HPP
