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

#include "nearfield/estimation.hpp"
#include "nearfield/parallel.hpp"
#include "nearfield/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace nearfield
{
    CMatrixd random_phase_pilots(Eigen::Index pilots, Eigen::Index antennas, std::uint64_t seed)
    {
        detail::require(pilots >= 1, "random_phase_pilots: at least one pilot required");
        detail::require(antennas >= 1, "random_phase_pilots: at least one antenna required");
        auto gen = make_stream(seed, 0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        const double scale = 1.0 / std::sqrt(static_cast<double>(antennas));
        CMatrixd a(pilots, antennas);
        // Row-major fill order keeps draws independent of Eigen's storage order.
        for (Eigen::Index p = 0; p < pilots; ++p)
            for (Eigen::Index n = 0; n < antennas; ++n)
                a(p, n) = std::polar(scale, phase(gen));
        return a;
    }

    PilotMeasurement simulate_pilots(const CVectord &h, Eigen::Index pilots, double snr_db, std::uint64_t seed)
    {
        PilotMeasurement out;
        out.system.sensing = random_phase_pilots(pilots, h.size(), seed);
        out.system.snr_db = snr_db;
        out.system.seed = seed;
        out.y = out.system.sensing * h;

        if (std::isinf(snr_db) && snr_db > 0)
            return out;

        const double signal = out.y.squaredNorm() / static_cast<double>(pilots);
        const double noise_var = signal / std::pow(10.0, snr_db / 10.0);
        auto gen = make_stream(seed, 1);
        std::normal_distribution<double> gauss(0.0, std::sqrt(noise_var / 2.0));
        for (Eigen::Index p = 0; p < pilots; ++p)
        {
            const double re = gauss(gen);
            const double im = gauss(gen);
            out.y(p) += std::complex<double>(re, im);
        }
        return out;
    }

    EstimationResult omp(const CVectord &y, const PilotSystem &system, const Codebook &cb, Eigen::Index sparsity,
                         double stop_residual)
    {
        const Eigen::Index p = system.sensing.rows();
        if (sparsity < 1)
            throw InvalidArgument("omp: sparsity must be >= 1");
        if (sparsity > p)
            throw InvalidArgument("omp: sparsity exceeds the number of pilot measurements");
        if (y.size() != p)
            throw InvalidArgument("omp: measurement length differs from pilot count");
        if (system.sensing.cols() != cb.antennas())
            throw InvalidArgument("omp: codebook antenna count differs from sensing matrix width");

        const CMatrixd dict = system.sensing * cb.codewords();
        const Eigen::VectorXd atom_norm = dict.colwise().norm().transpose();

        EstimationResult res;
        res.estimated_channel = CVectord::Zero(cb.antennas());
        CVectord residual = y;
        const double y_norm = y.norm();
        res.residual_norm = y_norm;
        res.residual_history.push_back(y_norm);
        if (y_norm == 0)
            return res;

        std::vector<bool> used(static_cast<std::size_t>(dict.cols()), false);
        while (static_cast<Eigen::Index>(res.support.size()) < sparsity && res.residual_norm > stop_residual * y_norm)
        {
            const CVectord corr = dict.adjoint() * residual;
            Eigen::Index best = -1;
            double best_val = -1;
            for (Eigen::Index q = 0; q < dict.cols(); ++q)
            {
                if (used[static_cast<std::size_t>(q)] || atom_norm(q) == 0)
                    continue;
                const double v = std::abs(corr(q)) / atom_norm(q);
                if (v > best_val)
                {
                    best_val = v;
                    best = q;
                }
            }
            if (best < 0)
                break;
            used[static_cast<std::size_t>(best)] = true;
            res.support.push_back(best);

            const auto k = static_cast<Eigen::Index>(res.support.size());
            CMatrixd sub(p, k);
            for (Eigen::Index j = 0; j < k; ++j)
                sub.col(j) = dict.col(res.support[static_cast<std::size_t>(j)]);
            Eigen::ColPivHouseholderQR<CMatrixd> qr(sub);
            qr.setThreshold(1e-10);
            if (qr.rank() < k)
            {
                std::string msg = "omp: singular least-squares refit on support {";
                for (std::size_t j = 0; j < res.support.size(); ++j)
                    msg += (j ? "," : "") + std::to_string(res.support[j]);
                throw NumericError(msg + "}");
            }
            res.coefficients = qr.solve(y);
            residual = y - sub * res.coefficients;
            res.residual_norm = residual.norm();
            res.residual_history.push_back(res.residual_norm);
        }

        for (std::size_t j = 0; j < res.support.size(); ++j)
            res.estimated_channel += res.coefficients(static_cast<Eigen::Index>(j)) * cb.codewords().col(res.support[j]);
        return res;
    }

    double nmse(const CVectord &h_true, const CVectord &h_est)
    {
        if (h_true.size() != h_est.size())
            throw InvalidArgument("nmse: length mismatch");
        const double ref = h_true.squaredNorm();
        if (ref == 0)
            throw InvalidArgument("nmse: true channel is zero");
        const double err = (h_true - h_est).squaredNorm();
        if (err == 0)
            return -300.0;
        return std::max(-300.0, 10.0 * std::log10(err / ref));
    }

    std::vector<NmseRow> compare_codebooks(const ScenarioConfig &scenario, const Codebook &cb_far,
                                           const Codebook &cb_polar, std::size_t trials, const EstimationSweep &sweep)
    {
        detail::require(trials >= 1, "compare_codebooks: trials must be >= 1");
        detail::require(!sweep.snrs_db.empty(), "compare_codebooks: at least one SNR required");
        const ArrayGeometryd &geom = scenario.array(sweep.array);
        if (cb_far.antennas() != geom.size() || cb_polar.antennas() != geom.size())
            throw InvalidArgument("compare_codebooks: codebook antenna counts differ from the array");
        const double freq = scenario.carrier.center_frequency;
        const double speed = scenario.carrier.propagation_speed;

        struct Cell
        {
            double theta;
            double distance;
        };
        std::vector<Cell> cells;
        if (sweep.distances.empty())
        {
            if (scenario.users.empty())
                throw ConfigError("users", "at least one user required");
            for (const auto &u : scenario.users)
                cells.push_back({u.theta(), u.r()});
        }
        else
        {
            const double theta = scenario.users.empty() ? 0.0 : scenario.users.front().theta();
            for (double d : sweep.distances)
                cells.push_back({theta, d});
        }

        // One angular-grid cell of the far-field dictionary on either side of the base angle.
        const double half_cell = 1.0 / static_cast<double>(std::max<Eigen::Index>(1, cb_far.angle_count()));

        const std::size_t jobs = cells.size() * sweep.snrs_db.size() * trials;
        std::vector<double> err_far(jobs), err_polar(jobs);
        parallel_for(jobs, [&](std::size_t job) {
            const std::size_t snr_idx = (job / trials) % sweep.snrs_db.size();
            const std::size_t cell_idx = job / (trials * sweep.snrs_db.size());
            const Cell &cell = cells[cell_idx];
            const double snr_db = sweep.snrs_db[snr_idx];

            auto gen = make_stream(scenario.seed, 2 * job + 1);
            std::uniform_real_distribution<double> unit(-1.0, 1.0);
            const double s = std::clamp(std::sin(cell.theta) + half_cell * unit(gen), -0.999, 0.999);
            const double phase = std::numbers::pi * unit(gen);
            const PolarPointd user = std::isinf(cell.distance) ? PolarPointd::far_field(std::asin(s))
                                                               : PolarPointd(std::asin(s), cell.distance);
            const CVectord h = std::polar(1.0, phase) * array_response(geom, freq, user, speed).entries;

            const std::uint64_t pilot_seed = mix_seed(scenario.seed ^ mix_seed(2 * job + 2));
            const PilotMeasurement meas = simulate_pilots(h, sweep.pilots, snr_db, pilot_seed);
            const double stop = sweep.stop_residual >= 0
                                    ? sweep.stop_residual
                                    : 1.0 / std::sqrt(1.0 + std::pow(10.0, snr_db / 10.0));
            const double ref = h.squaredNorm();
            err_far[job] = (h - omp(meas.y, meas.system, cb_far, sweep.sparsity, stop).estimated_channel).squaredNorm() / ref;
            err_polar[job] =
                (h - omp(meas.y, meas.system, cb_polar, sweep.sparsity, stop).estimated_channel).squaredNorm() / ref;
        });

        std::vector<NmseRow> rows;
        for (std::size_t c = 0; c < cells.size(); ++c)
            for (std::size_t si = 0; si < sweep.snrs_db.size(); ++si)
            {
                const std::size_t base = (c * sweep.snrs_db.size() + si) * trials;
                double sum_far = 0, sum_polar = 0;
                for (std::size_t t = 0; t < trials; ++t)
                {
                    sum_far += err_far[base + t];
                    sum_polar += err_polar[base + t];
                }
                auto to_db = [&](double sum) {
                    const double mean = sum / static_cast<double>(trials);
                    return mean > 0 ? std::max(-300.0, 10.0 * std::log10(mean)) : -300.0;
                };
                rows.push_back({cells[c].distance, sweep.snrs_db[si], "angular", to_db(sum_far), trials});
                rows.push_back({cells[c].distance, sweep.snrs_db[si], "polar", to_db(sum_polar), trials});
            }
        return rows;
    }
} // namespace nearfield
