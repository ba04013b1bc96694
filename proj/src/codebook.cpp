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

#include "nearfield/codebook.hpp"
#include "nearfield/csv.hpp"
#include "nearfield/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace nearfield
{
    namespace
    {
        constexpr double kUnitNormTol = 1e-9;
        // Largest edge-element phase change between two scan points of the ring search.
        constexpr double kRingScanPhaseStep = 0.05;

        CVectord normalized(const CVectord &v) { return v / v.norm(); }

        struct Spoke
        {
            std::vector<double> distances; // far-field first
            std::vector<CVectord> codewords;
        };

        Spoke build_spoke(const ArrayGeometryd &geom, double frequency, double theta, double mu, double r_min,
                          double speed)
        {
            Spoke spoke;
            spoke.distances.push_back(std::numeric_limits<double>::infinity());
            spoke.codewords.push_back(normalized(planar_steering(geom, frequency, theta, speed).entries));

            // Quadratic (Fresnel) phase scale in 1/r: k * max(x^2 cos^2 + y^2) / 2.
            const double k = 2.0 * std::numbers::pi * frequency / speed;
            const double c2 = std::cos(theta) * std::cos(theta);
            double spread = 0;
            for (Eigen::Index n = 0; n < geom.size(); ++n)
            {
                const double x = geom.elements()(0, n), y = geom.elements()(1, n);
                spread = std::max(spread, x * x * c2 + y * y);
            }
            const double scale = 0.5 * k * spread;
            if (scale == 0)
                return spoke;

            const double du = kRingScanPhaseStep / scale;
            const double u_max = 1.0 / r_min;
            auto codeword = [&](double u) {
                return normalized(spherical_steering(geom, frequency, PolarPointd(theta, 1.0 / u), speed).entries);
            };

            double u_prev = 0;
            for (;;)
            {
                const CVectord &prev = spoke.codewords.back();
                double lo = u_prev, hi = -1;
                for (double u = u_prev + du;; u += du)
                {
                    const double cand = std::min(u, u_max);
                    if (coherence(prev, codeword(cand)) <= mu)
                    {
                        hi = cand;
                        break;
                    }
                    lo = cand;
                    if (cand >= u_max)
                        break;
                }
                if (hi < 0)
                    break;

                // Shrink [lo, hi] keeping coherence(lo) > mu >= coherence(hi).
                for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    if (coherence(prev, codeword(mid)) <= mu)
                        hi = mid;
                    else
                        lo = mid;
                }
                spoke.distances.push_back(1.0 / hi);
                spoke.codewords.push_back(codeword(hi));
                u_prev = hi;
            }
            return spoke;
        }

        double label_r(const std::string &cell) { return parse_double(cell); }
    } // namespace

    const char *to_string(CodebookKind kind) noexcept { return kind == CodebookKind::POLAR ? "POLAR" : "ANGULAR"; }

    Codebook::Codebook(CMatrixd codewords, std::vector<PolarPointd> labels, std::vector<Eigen::Index> angle_index,
                       std::vector<Eigen::Index> ring_index, CodebookKind kind, double frequency, double mu_target,
                       std::string geometry)
        : codewords_(std::move(codewords)), labels_(std::move(labels)), angle_index_(std::move(angle_index)),
          ring_index_(std::move(ring_index)), kind_(kind), frequency_(frequency), mu_target_(mu_target),
          geometry_(std::move(geometry))
    {
        const auto q = static_cast<std::size_t>(codewords_.cols());
        if (q == 0)
            throw InvalidArgument("Codebook: at least one codeword required");
        if (labels_.size() != q || angle_index_.size() != q || ring_index_.size() != q)
            throw InvalidArgument("Codebook: labels and indices must match the codeword count");

        std::set<std::pair<double, double>> seen;
        bool has_far = false;
        for (std::size_t i = 0; i < q; ++i)
        {
            if (std::abs(codewords_.col(static_cast<Eigen::Index>(i)).norm() - 1.0) > kUnitNormTol)
                throw InvalidArgument("Codebook: codeword " + std::to_string(i) + " is not unit norm");
            if (!seen.emplace(labels_[i].theta(), labels_[i].r()).second)
                throw InvalidArgument("Codebook: duplicate label at codeword " + std::to_string(i));
            has_far = has_far || labels_[i].is_far_field();
        }

        if (kind_ == CodebookKind::POLAR)
        {
            if (!has_far)
                throw InvalidArgument("Codebook: polar codebook needs a far-field ring");
            for (Eigen::Index a = 0; a < angle_count(); ++a)
            {
                const auto r = rings(a);
                for (std::size_t s = 1; s < r.size(); ++s)
                    if (!(r[s] < r[s - 1]))
                        throw InvalidArgument("Codebook: rings of angle " + std::to_string(a) +
                                              " are not strictly decreasing");
            }
        }
    }

    Eigen::Index Codebook::angle_count() const noexcept
    {
        Eigen::Index count = 0;
        for (auto a : angle_index_)
            count = std::max(count, a + 1);
        return count;
    }

    std::vector<double> Codebook::rings(Eigen::Index angle) const
    {
        std::vector<std::pair<Eigen::Index, double>> found;
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (angle_index_[i] == angle)
                found.emplace_back(ring_index_[i], labels_[i].r());
        std::sort(found.begin(), found.end());
        std::vector<double> out;
        out.reserve(found.size());
        for (const auto &f : found)
            out.push_back(f.second);
        return out;
    }

    double coherence(const CVectord &u, const CVectord &v)
    {
        if (u.size() != v.size())
            throw InvalidArgument("coherence: vector lengths differ");
        return std::abs(u.dot(v));
    }

    std::vector<double> uniform_sine_angles(Eigen::Index size)
    {
        detail::require(size >= 1, "uniform_sine_angles: size must be >= 1");
        std::vector<double> angles(static_cast<std::size_t>(size));
        for (Eigen::Index i = 0; i < size; ++i)
            angles[static_cast<std::size_t>(i)] =
                std::asin(static_cast<double>(2 * i - size + 1) / static_cast<double>(size));
        return angles;
    }

    Codebook angular_codebook(const ArrayGeometryd &geom, double frequency, Eigen::Index size, double speed)
    {
        const auto angles = uniform_sine_angles(size);
        CMatrixd words(geom.size(), size);
        std::vector<PolarPointd> labels;
        std::vector<Eigen::Index> angle_idx, ring_idx;
        for (Eigen::Index i = 0; i < size; ++i)
        {
            const double theta = angles[static_cast<std::size_t>(i)];
            words.col(i) = normalized(planar_steering(geom, frequency, theta, speed).entries);
            labels.push_back(PolarPointd::far_field(theta));
            angle_idx.push_back(i);
            ring_idx.push_back(0);
        }
        return Codebook(std::move(words), std::move(labels), std::move(angle_idx), std::move(ring_idx),
                        CodebookKind::ANGULAR, frequency, 1.0, geom.name());
    }

    Codebook polar_codebook(const ArrayGeometryd &geom, double frequency, Eigen::Index angle_count,
                            double mu_target, double r_min, double speed)
    {
        if (!(mu_target > 0 && mu_target < 1))
            throw InvalidArgument("polar_codebook: mu_target must be in (0, 1)");
        detail::require(angle_count >= 1, "polar_codebook: angle_count must be >= 1");
        if (!(r_min > geom.aperture() / 2))
            throw DomainError("polar_codebook: r_min lies inside the array hull");

        const auto angles = uniform_sine_angles(angle_count);
        std::vector<Spoke> spokes(angles.size());
        parallel_for(angles.size(), [&](std::size_t a) {
            spokes[a] = build_spoke(geom, frequency, angles[a], mu_target, r_min, speed);
        });

        Eigen::Index total = 0;
        for (const auto &s : spokes)
            total += static_cast<Eigen::Index>(s.codewords.size());

        CMatrixd words(geom.size(), total);
        std::vector<PolarPointd> labels;
        std::vector<Eigen::Index> angle_idx, ring_idx;
        labels.reserve(static_cast<std::size_t>(total));
        Eigen::Index col = 0;
        for (std::size_t a = 0; a < spokes.size(); ++a)
            for (std::size_t s = 0; s < spokes[a].codewords.size(); ++s)
            {
                words.col(col++) = spokes[a].codewords[s];
                labels.emplace_back(angles[a], spokes[a].distances[s]);
                angle_idx.push_back(static_cast<Eigen::Index>(a));
                ring_idx.push_back(static_cast<Eigen::Index>(s));
            }
        return Codebook(std::move(words), std::move(labels), std::move(angle_idx), std::move(ring_idx),
                        CodebookKind::POLAR, frequency, mu_target, geom.name());
    }

    CoherenceProfile codebook_coherence_profile(const Codebook &cb)
    {
        if (cb.kind() != CodebookKind::POLAR)
            throw UnsupportedModel("codebook_coherence_profile: polar codebook required");

        // column index per (angle, ring)
        const Eigen::Index angles = cb.angle_count();
        std::vector<std::vector<Eigen::Index>> grid(static_cast<std::size_t>(angles));
        for (Eigen::Index i = 0; i < cb.size(); ++i)
        {
            auto &spoke = grid[static_cast<std::size_t>(cb.angle_index()[static_cast<std::size_t>(i)])];
            const auto ring = static_cast<std::size_t>(cb.ring_index()[static_cast<std::size_t>(i)]);
            if (spoke.size() <= ring)
                spoke.resize(ring + 1, -1);
            spoke[ring] = i;
        }

        CoherenceProfile prof;
        for (std::size_t a = 0; a < grid.size(); ++a)
        {
            const auto &spoke = grid[a];
            for (std::size_t s = 1; s < spoke.size(); ++s)
            {
                if (spoke[s] < 0 || spoke[s - 1] < 0)
                    continue;
                const double c = coherence(cb.codewords().col(spoke[s - 1]), cb.codewords().col(spoke[s]));
                prof.max_adjacent_ring = std::max(prof.max_adjacent_ring, c);
                ++prof.histogram[std::min<std::size_t>(9, static_cast<std::size_t>(c * 10.0))];
                ++prof.adjacent_pairs;
            }
            if (a + 1 < grid.size())
            {
                const auto &next = grid[a + 1];
                for (std::size_t s = 0; s < std::min(spoke.size(), next.size()); ++s)
                    if (spoke[s] >= 0 && next[s] >= 0)
                        prof.max_cross_angle = std::max(
                            prof.max_cross_angle, coherence(cb.codewords().col(spoke[s]), cb.codewords().col(next[s])));
            }
        }
        prof.exceeds_target = prof.max_adjacent_ring > cb.mu_target() + 1e-6;
        return prof;
    }

    void export_codebook(const Codebook &cb, const std::filesystem::path &stem)
    {
        CsvTable labels;
        labels.header = {"index", "kind", "angle_index", "ring_index", "theta_rad", "r_m", "frequency_hz",
                         "mu_target", "geometry"};
        for (Eigen::Index i = 0; i < cb.size(); ++i)
        {
            const auto u = static_cast<std::size_t>(i);
            labels.rows.push_back({std::int64_t{i}, std::string(to_string(cb.kind())),
                                   std::int64_t{cb.angle_index()[u]}, std::int64_t{cb.ring_index()[u]},
                                   cb.labels()[u].theta(), cb.labels()[u].r(), cb.frequency(), cb.mu_target(),
                                   cb.geometry()});
        }

        CsvTable entries;
        entries.header = {"index"};
        for (Eigen::Index n = 0; n < cb.antennas(); ++n)
        {
            entries.header.push_back("re" + std::to_string(n));
            entries.header.push_back("im" + std::to_string(n));
        }
        for (Eigen::Index i = 0; i < cb.size(); ++i)
        {
            std::vector<CsvCell> row{std::int64_t{i}};
            for (Eigen::Index n = 0; n < cb.antennas(); ++n)
            {
                row.emplace_back(cb.codewords()(n, i).real());
                row.emplace_back(cb.codewords()(n, i).imag());
            }
            entries.rows.push_back(std::move(row));
        }

        emit_csv(labels, stem.string() + "_labels.csv");
        emit_csv(entries, stem.string() + "_entries.csv");
    }

    Codebook import_codebook(const std::filesystem::path &stem)
    {
        const CsvText labels = read_csv(stem.string() + "_labels.csv");
        const CsvText entries = read_csv(stem.string() + "_entries.csv");
        if (labels.rows.empty() || labels.rows.size() != entries.rows.size())
            throw InvalidArgument("import_codebook: labels and entries row counts differ");
        if (entries.header.size() < 3 || entries.header.size() % 2 != 1)
            throw InvalidArgument("import_codebook: malformed entries header");

        const auto q = static_cast<Eigen::Index>(labels.rows.size());
        const auto n = static_cast<Eigen::Index>((entries.header.size() - 1) / 2);
        CMatrixd words(n, q);
        std::vector<PolarPointd> lab;
        std::vector<Eigen::Index> angle_idx, ring_idx;
        CodebookKind kind = CodebookKind::ANGULAR;
        double freq = 0, mu = 1;
        std::string geometry;
        for (Eigen::Index i = 0; i < q; ++i)
        {
            const auto &l = labels.rows[static_cast<std::size_t>(i)];
            const auto &e = entries.rows[static_cast<std::size_t>(i)];
            if (l.size() != labels.header.size() || e.size() != entries.header.size())
                throw InvalidArgument("import_codebook: ragged row " + std::to_string(i));
            kind = l[1] == "POLAR" ? CodebookKind::POLAR : CodebookKind::ANGULAR;
            angle_idx.push_back(static_cast<Eigen::Index>(std::stoll(l[2])));
            ring_idx.push_back(static_cast<Eigen::Index>(std::stoll(l[3])));
            lab.emplace_back(parse_double(l[4]), label_r(l[5]));
            freq = parse_double(l[6]);
            mu = parse_double(l[7]);
            geometry = l[8];
            for (Eigen::Index k = 0; k < n; ++k)
                words(k, i) = {parse_double(e[static_cast<std::size_t>(1 + 2 * k)]),
                               parse_double(e[static_cast<std::size_t>(2 + 2 * k)])};
        }
        return Codebook(std::move(words), std::move(lab), std::move(angle_idx), std::move(ring_idx), kind, freq, mu,
                        geometry);
    }
} // namespace nearfield
