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

#ifndef NEARFIELD_PROPAGATION_HPP
#define NEARFIELD_PROPAGATION_HPP

#include "nearfield/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace nearfield
{
    enum class WaveModel
    {
        SPHERICAL,
        PLANAR
    };

    enum class AmplitudeModel
    {
        UNIT,
        FREE_SPACE
    };

    template <typename Scalar>
    using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

    template <typename Scalar>
    using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename Scalar>
    using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    // Array response: unit-modulus entries, norm sqrt(N).
    template <typename Scalar = double>
    struct SteeringVector
    {
        CVector<Scalar> entries;
        Scalar frequency = 0;
        WaveModel model = WaveModel::SPHERICAL;
    };

    template <typename Scalar = double>
    struct ChannelMatrix
    {
        CMatrix<Scalar> entries; // rx x tx
        Scalar frequency = 0;
        std::string tag;
    };

    template <typename Scalar = double>
    struct PathComponent
    {
        std::complex<Scalar> gain;
        PolarPoint<Scalar> point;
    };

    namespace detail
    {
        template <typename Scalar>
        std::complex<Scalar> unit_phasor(Scalar phase)
        {
            return {std::cos(phase), std::sin(phase)};
        }

        template <typename Scalar>
        void require_outside_hull(const ArrayGeometry<Scalar> &geom, const PolarPoint<Scalar> &p)
        {
            if (p.is_far_field())
                throw UnsupportedModel("far-field sentinel requires the planar model");
            if (!(p.r() > geom.aperture() / Scalar(2)))
                throw DomainError("source lies inside the array hull (r <= aperture/2)");
        }
    } // namespace detail

    // Exact element-to-point distances r_n.
    template <typename Scalar>
    RVector<Scalar> element_distances(const ArrayGeometry<Scalar> &geom, const PolarPoint<Scalar> &p)
    {
        detail::require_outside_hull(geom, p);
        const Point3<Scalar> src = p.cartesian();
        return (geom.elements().colwise() - src).colwise().norm().transpose();
    }

    // r_n - r without the cancellation of subtracting two large distances:
    // r_n - r = (|x_n|^2 - 2 r x_n.u) / (r_n + r) with u the unit direction to p.
    template <typename Scalar>
    RVector<Scalar> path_differences(const ArrayGeometry<Scalar> &geom, const PolarPoint<Scalar> &p)
    {
        const RVector<Scalar> dist = element_distances(geom, p);
        const Point3<Scalar> u(std::sin(p.theta()), Scalar(0), std::cos(p.theta()));
        RVector<Scalar> out(dist.size());
        for (Eigen::Index n = 0; n < dist.size(); ++n)
        {
            const auto x = geom.elements().col(n);
            out(n) = (x.squaredNorm() - Scalar(2) * p.r() * x.dot(u)) / (dist(n) + p.r());
        }
        return out;
    }

    // exp(-j 2 pi f (r_n - r) / c), referenced to the array center.
    template <typename Scalar>
    SteeringVector<Scalar> spherical_steering(const ArrayGeometry<Scalar> &geom, Scalar frequency,
                                              const PolarPoint<Scalar> &p,
                                              Scalar speed = speed_of_light<Scalar>)
    {
        const RVector<Scalar> dist = path_differences(geom, p);
        const Scalar k = Scalar(2) * std::numbers::pi_v<Scalar> * frequency / speed;
        SteeringVector<Scalar> out;
        out.entries.resize(dist.size());
        for (Eigen::Index n = 0; n < dist.size(); ++n)
            out.entries(n) = detail::unit_phasor(-k * dist(n));
        out.frequency = frequency;
        out.model = WaveModel::SPHERICAL;
        return out;
    }

    // First-order (planar) response exp(+j 2 pi f x_n sin(theta) / c).
    template <typename Scalar>
    SteeringVector<Scalar> planar_steering(const ArrayGeometry<Scalar> &geom, Scalar frequency, Scalar theta,
                                           Scalar speed = speed_of_light<Scalar>)
    {
        const Scalar half_pi = std::numbers::pi_v<Scalar> / Scalar(2);
        if (!(theta > -half_pi && theta < half_pi))
            throw InvalidArgument("planar_steering: theta must lie in (-pi/2, pi/2)");
        const Scalar k = Scalar(2) * std::numbers::pi_v<Scalar> * frequency / speed;
        const Scalar s = std::sin(theta);
        SteeringVector<Scalar> out;
        out.entries.resize(geom.size());
        for (Eigen::Index n = 0; n < geom.size(); ++n)
            out.entries(n) = detail::unit_phasor(k * geom.elements()(0, n) * s);
        out.frequency = frequency;
        out.model = WaveModel::PLANAR;
        return out;
    }

    // Spherical response, or planar for the far-field sentinel.
    template <typename Scalar>
    SteeringVector<Scalar> array_response(const ArrayGeometry<Scalar> &geom, Scalar frequency,
                                          const PolarPoint<Scalar> &p, Scalar speed = speed_of_light<Scalar>)
    {
        if (p.is_far_field())
            return planar_steering(geom, frequency, p.theta(), speed);
        return spherical_steering(geom, frequency, p, speed);
    }

    // Largest unwrapped phase error of the planar approximation over the elements.
    template <typename Scalar>
    Scalar phase_discrepancy(const ArrayGeometry<Scalar> &geom, Scalar frequency, const PolarPoint<Scalar> &p,
                             Scalar speed = speed_of_light<Scalar>)
    {
        const RVector<Scalar> diff = path_differences(geom, p);
        const Scalar k = Scalar(2) * std::numbers::pi_v<Scalar> * frequency / speed;
        const Scalar s = std::sin(p.theta());
        Scalar worst = 0;
        for (Eigen::Index n = 0; n < diff.size(); ++n)
        {
            const Scalar err = std::abs(k * (diff(n) + geom.elements()(0, n) * s));
            if (err > worst)
                worst = err;
        }
        return worst;
    }

    // h = sum_l g_l a(p_l). FREE_SPACE scales finite-distance paths by lambda / (4 pi r_l);
    // far-field paths keep their gain as given.
    template <typename Scalar>
    CVector<Scalar> multipath_channel(const ArrayGeometry<Scalar> &geom, Scalar frequency,
                                      std::span<const PathComponent<Scalar>> paths,
                                      AmplitudeModel amplitude = AmplitudeModel::UNIT,
                                      Scalar speed = speed_of_light<Scalar>)
    {
        if (paths.empty())
            throw InvalidArgument("multipath_channel: at least one path required");
        const Scalar lambda = speed / frequency;
        CVector<Scalar> h = CVector<Scalar>::Zero(geom.size());
        for (const auto &path : paths)
        {
            std::complex<Scalar> g = path.gain;
            if (amplitude == AmplitudeModel::FREE_SPACE && !path.point.is_far_field())
                g *= lambda / (Scalar(4) * std::numbers::pi_v<Scalar> * path.point.r());
            h += g * array_response(geom, frequency, path.point, speed).entries;
        }
        return h;
    }

    // Exact element-pair LoS channel. The receive array is rotated by rx_orientation and
    // translated to the Cartesian image of rx_center.
    template <typename Scalar>
    ChannelMatrix<Scalar> los_mimo_channel(const ArrayGeometry<Scalar> &tx, const ArrayGeometry<Scalar> &rx,
                                           Scalar frequency, const PolarPoint<Scalar> &rx_center,
                                           const Eigen::Matrix<Scalar, 3, 3> &rx_orientation =
                                               Eigen::Matrix<Scalar, 3, 3>::Identity(),
                                           AmplitudeModel amplitude = AmplitudeModel::UNIT,
                                           Scalar speed = speed_of_light<Scalar>)
    {
        if (rx_center.is_far_field())
            throw UnsupportedModel("los_mimo_channel: receive array needs a finite position");
        const Point3<Scalar> centre = rx_center.cartesian();
        const Positions<Scalar> rx_pos = (rx_orientation * rx.elements()).colwise() + centre;

        for (Eigen::Index m = 0; m < rx_pos.cols(); ++m)
            if (!(rx_pos.col(m).norm() > tx.aperture() / Scalar(2)))
                throw DomainError("los_mimo_channel: receive element inside transmit array hull");
        for (Eigen::Index n = 0; n < tx.size(); ++n)
            if (!((tx.elements().col(n) - centre).norm() > rx.aperture() / Scalar(2)))
                throw DomainError("los_mimo_channel: transmit element inside receive array hull");

        const Scalar k = Scalar(2) * std::numbers::pi_v<Scalar> * frequency / speed;
        const Scalar lambda = speed / frequency;
        ChannelMatrix<Scalar> out;
        out.entries.resize(rx.size(), tx.size());
        for (Eigen::Index n = 0; n < tx.size(); ++n)
            for (Eigen::Index m = 0; m < rx.size(); ++m)
            {
                const Scalar d = (rx_pos.col(m) - tx.elements().col(n)).norm();
                std::complex<Scalar> v = detail::unit_phasor(-k * d);
                if (amplitude == AmplitudeModel::FREE_SPACE)
                    v *= lambda / (Scalar(4) * std::numbers::pi_v<Scalar> * d);
                out.entries(m, n) = v;
            }
        out.frequency = frequency;
        out.tag = "los_mimo:" + tx.name() + "->" + rx.name();
        return out;
    }

    // BS -> RIS -> UE channel seen at the BS antennas: h = G^T diag(omega) a_ue.
    // Positions are relative to the RIS center; the BS array is parallel to the RIS.
    template <typename Scalar>
    CVector<Scalar> cascaded_ris_channel(const ArrayGeometry<Scalar> &bs, const ArrayGeometry<Scalar> &ris,
                                         const PolarPoint<Scalar> &ue, const PolarPoint<Scalar> &bs_center,
                                         Scalar frequency, const CVector<Scalar> &ris_phases,
                                         Scalar speed = speed_of_light<Scalar>)
    {
        if (ris_phases.size() != ris.size())
            throw InvalidArgument("cascaded_ris_channel: phase vector length must equal RIS element count");
        const ChannelMatrix<Scalar> hop1 = los_mimo_channel(ris, bs, frequency, bs_center,
                                                            Eigen::Matrix<Scalar, 3, 3>(Eigen::Matrix<Scalar, 3, 3>::Identity()),
                                                            AmplitudeModel::UNIT, speed);
        const CVector<Scalar> hop2 = spherical_steering(ris, frequency, ue, speed).entries;
        // hop1.entries is (bs x ris) = G^T.
        return hop1.entries * ris_phases.cwiseProduct(hop2);
    }

    // One response per subcarrier frequency.
    template <typename Scalar>
    std::vector<SteeringVector<Scalar>> wideband_steering(const ArrayGeometry<Scalar> &geom,
                                                          const CarrierConfig<Scalar> &carrier,
                                                          const PolarPoint<Scalar> &p)
    {
        const RVector<Scalar> freqs = subcarrier_frequencies(carrier);
        std::vector<SteeringVector<Scalar>> out;
        out.reserve(static_cast<std::size_t>(freqs.size()));
        for (Eigen::Index m = 0; m < freqs.size(); ++m)
            out.push_back(array_response(geom, freqs(m), p, carrier.propagation_speed));
        return out;
    }

    using SteeringVectord = SteeringVector<double>;
    using ChannelMatrixd = ChannelMatrix<double>;
    using PathComponentd = PathComponent<double>;
    using CVectord = CVector<double>;
    using CMatrixd = CMatrix<double>;
} // namespace nearfield

#endif // NEARFIELD_PROPAGATION_HPP
