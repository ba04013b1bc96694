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

#include "nearfield/capacity.hpp"
#include "nearfield/boundaries.hpp"
#include "nearfield/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nearfield
{
    Eigen::Index effective_dof(const CMatrixd &h, double rel_threshold)
    {
        detail::require(rel_threshold > 0 && rel_threshold <= 1, "effective_dof: threshold must be in (0, 1]");
        const Eigen::VectorXd s = Eigen::BDCSVD<CMatrixd>(h).singularValues();
        if (s.size() == 0 || s(0) == 0)
            throw InvalidArgument("effective_dof: zero channel matrix");
        return (s.array() >= rel_threshold * s(0)).count();
    }

    Eigen::Index effective_dof(const ChannelMatrixd &h, double rel_threshold)
    {
        return effective_dof(h.entries, rel_threshold);
    }

    double dof_upper_bound(double aperture_tx, double aperture_rx, double lambda, double distance)
    {
        detail::require(aperture_tx > 0 && aperture_rx > 0 && lambda > 0 && distance > 0,
                        "dof_upper_bound: inputs must be positive");
        return std::max(1.0, aperture_tx * aperture_rx / (lambda * distance));
    }

    double waterfilling(std::span<const double> singular_values, double snr_db)
    {
        double s1 = 0;
        for (double s : singular_values)
            s1 = std::max(s1, std::abs(s));
        if (s1 == 0)
            throw InvalidArgument("waterfilling: all singular values are zero");
        const double snr = std::pow(10.0, snr_db / 10.0);

        // Unit total power; mode gain g_i = snr sigma_i^2 / sigma_1^2.
        std::vector<double> g;
        for (double s : singular_values)
            if (s != 0)
                g.push_back(snr * (s / s1) * (s / s1));
        auto used_power = [&](double level) {
            double p = 0;
            for (double gi : g)
                p += std::max(0.0, level - 1.0 / gi);
            return p;
        };

        double lo = 0, hi = 1.0 + 1.0 / *std::min_element(g.begin(), g.end());
        for (int it = 0; it < 200; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (used_power(mid) > 1.0 ? hi : lo) = mid;
        }
        const double level = 0.5 * (lo + hi);
        double cap = 0;
        for (double gi : g)
            cap += std::log2(1.0 + std::max(0.0, level - 1.0 / gi) * gi);
        return cap;
    }

    double waterfilling(const Eigen::VectorXd &singular_values, double snr_db)
    {
        return waterfilling(std::span<const double>(singular_values.data(), static_cast<std::size_t>(singular_values.size())),
                            snr_db);
    }

    std::vector<DofReport> dof_vs_distance(const ArrayGeometryd &tx, const ArrayGeometryd &rx,
                                           const CarrierConfigd &carrier, std::span<const double> distances,
                                           double snr_db, double rel_threshold)
    {
        carrier.validate();
        for (std::size_t i = 0; i < distances.size(); ++i)
        {
            detail::require(distances[i] > 0, "dof_vs_distance: distances must be positive");
            detail::require(i == 0 || distances[i] >= distances[i - 1], "dof_vs_distance: distances must be sorted");
        }

        std::vector<DofReport> out(distances.size());
        parallel_for(distances.size(), [&](std::size_t i) {
            const ChannelMatrixd h = los_mimo_channel(tx, rx, carrier.center_frequency, PolarPointd(0.0, distances[i]),
                                                      Eigen::Matrix3d(Eigen::Matrix3d::Identity()), AmplitudeModel::FREE_SPACE,
                                                      carrier.propagation_speed);
            DofReport rep;
            rep.distance = distances[i];
            rep.snr_db = snr_db;
            rep.singular_values = Eigen::BDCSVD<CMatrixd>(h.entries).singularValues();
            rep.effective_dof =
                (rep.singular_values.array() >= rel_threshold * rep.singular_values(0)).count();
            rep.capacity_bps_hz = waterfilling(rep.singular_values, snr_db);
            out[i] = std::move(rep);
        });
        return out;
    }

    Eigen::Index recommend_rf_chains(const DofReport &report) { return report.effective_dof; }

    CMatrixd zf_precoder_unscaled(const CMatrixd &h)
    {
        detail::require(h.rows() >= 1 && h.rows() <= h.cols(), "zf_precoder: need 1 <= K <= N");
        Eigen::BDCSVD<CMatrixd> svd(h);
        const Eigen::VectorXd s = svd.singularValues();
        if (s(0) == 0 || s(s.size() - 1) < 1e-10 * s(0))
            throw NumericError("zf_precoder: channel matrix is rank deficient (users are not separable)");
        const CMatrixd gram = h * h.adjoint();
        return h.adjoint() * gram.ldlt().solve(CMatrixd::Identity(h.rows(), h.rows()));
    }

    CMatrixd zf_precoder(const CMatrixd &h)
    {
        CMatrixd w = zf_precoder_unscaled(h);
        for (Eigen::Index k = 0; k < w.cols(); ++k)
            w.col(k).normalize();
        return w;
    }

    CMatrixd mf_precoder(const CMatrixd &h)
    {
        CMatrixd w = h.adjoint();
        for (Eigen::Index k = 0; k < w.cols(); ++k)
        {
            const double n = w.col(k).norm();
            if (n == 0)
                throw NumericError("mf_precoder: user " + std::to_string(k) + " has a zero channel");
            w.col(k) /= n;
        }
        return w;
    }

    double sum_rate(const CMatrixd &h, const CMatrixd &w, double snr_db)
    {
        detail::require(h.cols() == w.rows() && h.rows() == w.cols(), "sum_rate: precoder dimensions must be N x K");
        const double power = std::pow(10.0, snr_db / 10.0) / static_cast<double>(h.rows());
        const Eigen::MatrixXd g = (h * w).cwiseAbs2();
        double rate = 0;
        for (Eigen::Index k = 0; k < h.rows(); ++k)
        {
            const double signal = power * g(k, k);
            const double interference = power * (g.row(k).sum() - g(k, k));
            rate += std::log2(1.0 + signal / (interference + 1.0));
        }
        return rate;
    }

    SdmaScenario make_sdma_scenario(const ArrayGeometryd &geom, double frequency, std::vector<PolarPointd> users,
                                    double snr_db, PrecoderKind precoder, double speed)
    {
        detail::require(!users.empty(), "make_sdma_scenario: at least one user required");
        SdmaScenario sc;
        sc.channels.resize(static_cast<Eigen::Index>(users.size()), geom.size());
        for (std::size_t k = 0; k < users.size(); ++k)
            sc.channels.row(static_cast<Eigen::Index>(k)) =
                array_response(geom, frequency, users[k], speed).entries.transpose();
        sc.users = std::move(users);
        sc.snr_db = snr_db;
        sc.precoder = precoder;
        return sc;
    }

    double evaluate(const SdmaScenario &sc)
    {
        const CMatrixd w = sc.precoder == PrecoderKind::ZF ? zf_precoder(sc.channels) : mf_precoder(sc.channels);
        return sum_rate(sc.channels, w, sc.snr_db);
    }

    double channel_correlation(const ArrayGeometryd &geom, double frequency, const PolarPointd &p1,
                               const PolarPointd &p2, double speed)
    {
        const CVectord a1 = array_response(geom, frequency, p1, speed).entries;
        const CVectord a2 = array_response(geom, frequency, p2, speed).entries;
        return std::abs(a1.dot(a2)) / static_cast<double>(geom.size());
    }

    SdmaReport sdma_compare(const ArrayGeometryd &geom, double frequency, std::span<const PolarPointd> users,
                            double snr_db, double speed)
    {
        detail::require(users.size() >= 2, "sdma_compare: at least two users required");
        const double rayleigh = rayleigh_distance(geom.aperture(), speed / frequency);
        const double tol = deg2rad(0.1);
        for (const auto &u : users)
        {
            detail::require(std::abs(u.theta() - users.front().theta()) <= tol,
                            "sdma_compare: users must share the same angle within 0.1 deg");
            if (u.is_far_field() || !(u.r() < rayleigh))
                throw DomainError("sdma_compare: users must lie inside the Rayleigh distance");
        }

        SdmaReport rep;
        for (std::size_t i = 0; i < users.size(); ++i)
            for (std::size_t j = i + 1; j < users.size(); ++j)
                rep.channel_correlation =
                    std::max(rep.channel_correlation, channel_correlation(geom, frequency, users[i], users[j], speed));

        const SdmaScenario near = make_sdma_scenario(geom, frequency, {users.begin(), users.end()}, snr_db,
                                                     PrecoderKind::ZF, speed);
        rep.near_field_zf_rate = evaluate(near);

        // Far-field beams only resolve angle, so users at one angle get the same beam.
        CMatrixd steer(geom.size(), static_cast<Eigen::Index>(users.size()));
        for (std::size_t k = 0; k < users.size(); ++k)
        {
            const CVectord a = planar_steering(geom, frequency, users[k].theta(), speed).entries;
            steer.col(static_cast<Eigen::Index>(k)) = a.conjugate() / a.norm();
        }
        rep.far_field_steering_rate = sum_rate(near.channels, steer, snr_db);
        return rep;
    }
} // namespace nearfield
