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

#ifndef NEARFIELD_GEOMETRY_HPP
#define NEARFIELD_GEOMETRY_HPP

#include "nearfield/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace nearfield
{
    template <typename Scalar>
    inline constexpr Scalar speed_of_light = Scalar(299792458);

    template <typename Scalar>
    using Positions = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

    template <typename Scalar>
    using Point3 = Eigen::Matrix<Scalar, 3, 1>;

    // Explicit 3D element positions of an antenna array, one column per element.
    template <typename Scalar = double>
    class ArrayGeometry
    {
    public:
        using scalar_type = Scalar;

        ArrayGeometry(Positions<Scalar> elements, std::string name = "array")
            : elements_(std::move(elements)), name_(std::move(name))
        {
            if (elements_.cols() < 1)
                throw InvalidArgument("ArrayGeometry: at least one element required");
            if (!elements_.allFinite())
                throw InvalidArgument("ArrayGeometry: element coordinates must be finite");

            // Aperture and uniqueness share the pairwise scan.
            Scalar max_sq = 0;
            for (Eigen::Index a = 0; a < elements_.cols(); ++a)
                for (Eigen::Index b = a + 1; b < elements_.cols(); ++b)
                {
                    const Scalar d2 = (elements_.col(a) - elements_.col(b)).squaredNorm();
                    if (d2 == Scalar(0))
                        throw InvalidArgument("ArrayGeometry: duplicate element position");
                    if (d2 > max_sq)
                        max_sq = d2;
                }
            aperture_ = std::sqrt(max_sq);
        }

        const Positions<Scalar> &elements() const noexcept { return elements_; }
        const std::string &name() const noexcept { return name_; }
        Eigen::Index size() const noexcept { return elements_.cols(); }

        // Largest distance between any two elements.
        Scalar aperture() const noexcept { return aperture_; }

        ArrayGeometry translated(const Point3<Scalar> &offset) const
        {
            Positions<Scalar> moved = elements_.colwise() + offset;
            return ArrayGeometry(std::move(moved), name_);
        }

    private:
        Positions<Scalar> elements_;
        std::string name_;
        Scalar aperture_ = 0;
    };

    // Uniform linear array along x, centered at the origin.
    template <typename Scalar = double>
    ArrayGeometry<Scalar> build_ula(Eigen::Index n, Scalar spacing, std::string name = "ula")
    {
        if (n < 1)
            throw InvalidArgument("build_ula: element count must be >= 1");
        if (!(spacing > Scalar(0)) || !std::isfinite(spacing))
            throw InvalidArgument("build_ula: spacing must be positive");

        Positions<Scalar> pos = Positions<Scalar>::Zero(3, n);
        const Scalar centre = Scalar(n - 1) / Scalar(2);
        for (Eigen::Index i = 0; i < n; ++i)
            pos(0, i) = (Scalar(i) - centre) * spacing;
        return ArrayGeometry<Scalar>(std::move(pos), std::move(name));
    }

    // Uniform planar array in the x-y plane, centered at the origin. x runs fastest.
    template <typename Scalar = double>
    ArrayGeometry<Scalar> build_upa(Eigen::Index nx, Eigen::Index ny, Scalar spacing_x, Scalar spacing_y,
                                    std::string name = "upa")
    {
        if (nx < 1 || ny < 1)
            throw InvalidArgument("build_upa: element counts must be >= 1");
        if (!(spacing_x > Scalar(0)) || !(spacing_y > Scalar(0)))
            throw InvalidArgument("build_upa: spacings must be positive");

        Positions<Scalar> pos = Positions<Scalar>::Zero(3, nx * ny);
        const Scalar cx = Scalar(nx - 1) / Scalar(2);
        const Scalar cy = Scalar(ny - 1) / Scalar(2);
        for (Eigen::Index iy = 0; iy < ny; ++iy)
            for (Eigen::Index ix = 0; ix < nx; ++ix)
            {
                pos(0, iy * nx + ix) = (Scalar(ix) - cx) * spacing_x;
                pos(1, iy * nx + ix) = (Scalar(iy) - cy) * spacing_y;
            }
        return ArrayGeometry<Scalar>(std::move(pos), std::move(name));
    }

    template <typename Scalar = double>
    struct CarrierConfig
    {
        Scalar center_frequency = Scalar(28e9);
        Scalar bandwidth = 0;
        Eigen::Index num_subcarriers = 1;
        Scalar propagation_speed = speed_of_light<Scalar>;

        void validate() const
        {
            if (!(center_frequency > Scalar(0)))
                throw InvalidArgument("CarrierConfig: center_frequency must be positive");
            if (!(bandwidth >= Scalar(0)))
                throw InvalidArgument("CarrierConfig: bandwidth must be non-negative");
            if (num_subcarriers < 1)
                throw InvalidArgument("CarrierConfig: num_subcarriers must be >= 1");
            if (!(bandwidth < Scalar(2) * center_frequency))
                throw InvalidArgument("CarrierConfig: bandwidth must stay below twice the center frequency");
            if (!(propagation_speed > Scalar(0)))
                throw InvalidArgument("CarrierConfig: propagation_speed must be positive");
        }
    };

    template <typename Scalar>
    Scalar wavelength(const CarrierConfig<Scalar> &carrier)
    {
        carrier.validate();
        return carrier.propagation_speed / carrier.center_frequency;
    }

    // Subcarrier grid spanning [fc - B/2, fc + B/2] with both endpoints included.
    template <typename Scalar>
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> subcarrier_frequencies(const CarrierConfig<Scalar> &carrier)
    {
        carrier.validate();
        const Eigen::Index m = carrier.num_subcarriers;
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> f(m);
        if (m == 1)
        {
            f(0) = carrier.center_frequency;
            return f;
        }
        const Scalar lo = carrier.center_frequency - carrier.bandwidth / Scalar(2);
        const Scalar step = carrier.bandwidth / Scalar(m - 1);
        for (Eigen::Index i = 0; i < m; ++i)
            f(i) = lo + step * Scalar(i);
        // Mirror the upper half so the grid is exactly symmetric about fc.
        for (Eigen::Index i = 0; i < m / 2; ++i)
            f(m - 1 - i) = Scalar(2) * carrier.center_frequency - f(i);
        if (m % 2 == 1)
            f(m / 2) = carrier.center_frequency;
        return f;
    }

    // Location (theta, r) relative to an array center; theta is the angle off boresight (z) towards x.
    // r = +inf marks the far-field ring.
    template <typename Scalar = double>
    class PolarPoint
    {
    public:
        PolarPoint(Scalar theta, Scalar r) : theta_(theta), r_(r)
        {
            const Scalar half_pi = std::numbers::pi_v<Scalar> / Scalar(2);
            if (!(theta > -half_pi && theta < half_pi))
                throw InvalidArgument("PolarPoint: theta must lie in (-pi/2, pi/2)");
            if (!(r > Scalar(0)))
                throw InvalidArgument("PolarPoint: r must be positive or the far-field sentinel");
        }

        static PolarPoint far_field(Scalar theta) { return PolarPoint(theta, std::numeric_limits<Scalar>::infinity()); }

        Scalar theta() const noexcept { return theta_; }
        Scalar r() const noexcept { return r_; }
        bool is_far_field() const noexcept { return std::isinf(r_); }

        Point3<Scalar> cartesian() const
        {
            if (is_far_field())
                throw UnsupportedModel("PolarPoint: far-field sentinel has no Cartesian image");
            return Point3<Scalar>(r_ * std::sin(theta_), Scalar(0), r_ * std::cos(theta_));
        }

        friend bool operator==(const PolarPoint &, const PolarPoint &) = default;

    private:
        Scalar theta_;
        Scalar r_;
    };

    template <typename Scalar>
    constexpr Scalar deg2rad(Scalar deg)
    {
        return deg * std::numbers::pi_v<Scalar> / Scalar(180);
    }

    template <typename Scalar>
    constexpr Scalar rad2deg(Scalar rad)
    {
        return rad * Scalar(180) / std::numbers::pi_v<Scalar>;
    }

    using ArrayGeometryd = ArrayGeometry<double>;
    using CarrierConfigd = CarrierConfig<double>;
    using PolarPointd = PolarPoint<double>;
} // namespace nearfield

#endif // NEARFIELD_GEOMETRY_HPP
