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

#ifndef NEARFIELD_ESTIMATION_HPP
#define NEARFIELD_ESTIMATION_HPP

#include "nearfield/codebook.hpp"
#include "nearfield/scenario.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace nearfield
{
    inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

    struct PilotSystem
    {
        CMatrixd sensing;   // P x N, unit-modulus entries scaled by 1/sqrt(N)
        double snr_db = kNoiseless;
        std::uint64_t seed = 0;
    };

    struct PilotMeasurement
    {
        CVectord y;
        PilotSystem system;
    };

    struct EstimationResult
    {
        CVectord estimated_channel;
        std::vector<Eigen::Index> support;
        CVectord coefficients;
        double residual_norm = 0;
        std::vector<double> residual_history; // ||r|| after each selected atom, starting with ||y||
    };

    // Random-phase combining matrix for `antennas` elements; bit-identical for a given seed.
    CMatrixd random_phase_pilots(Eigen::Index pilots, Eigen::Index antennas, std::uint64_t seed);

    // y = A h + n with per-measurement SNR ||A h||^2 / (P sigma^2). snr_db = +inf is noiseless.
    PilotMeasurement simulate_pilots(const CVectord &h, Eigen::Index pilots, double snr_db, std::uint64_t seed);

    // Orthogonal matching pursuit over the dictionary A * codewords with a least-squares refit
    // each iteration. Stops after `sparsity` atoms or when ||r|| / ||y|| <= stop_residual.
    EstimationResult omp(const CVectord &y, const PilotSystem &system, const Codebook &cb, Eigen::Index sparsity,
                         double stop_residual = 0.0);

    // 10 log10(||h - h_est||^2 / ||h||^2), floored at -300 dB.
    double nmse(const CVectord &h_true, const CVectord &h_est);

    struct EstimationSweep
    {
        std::vector<double> distances;   // empty: take the scenario users' distances
        std::vector<double> snrs_db{20.0};
        Eigen::Index pilots = 64;
        Eigen::Index sparsity = 4;
        // Residual stop as a fraction of ||y||; negative selects the noise level 1/sqrt(1 + snr).
        double stop_residual = -1.0;
        std::string array = "bs";
    };

    struct NmseRow
    {
        double distance_m = 0;
        double snr_db = 0;
        std::string codebook;
        double mean_nmse_db = 0;
        std::size_t trials = 0;
    };

    // Monte-Carlo NMSE per (distance, snr) for both codebooks on identical channel and pilot draws.
    // Each trial places a single LoS user at the cell distance with an off-grid angle drawn uniformly
    // within one angular-grid cell of the nearest scenario user angle and a uniform random phase.
    // mean_nmse_db is 10 log10 of the trial-averaged linear NMSE.
    std::vector<NmseRow> compare_codebooks(const ScenarioConfig &scenario, const Codebook &cb_far,
                                           const Codebook &cb_polar, std::size_t trials,
                                           const EstimationSweep &sweep = {});
} // namespace nearfield

#endif // NEARFIELD_ESTIMATION_HPP
