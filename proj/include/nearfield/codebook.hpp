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

#ifndef NEARFIELD_CODEBOOK_HPP
#define NEARFIELD_CODEBOOK_HPP

#include "nearfield/geometry.hpp"
#include "nearfield/propagation.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace nearfield
{
    enum class CodebookKind
    {
        ANGULAR,
        POLAR
    };

    const char *to_string(CodebookKind kind) noexcept;

    // Unit-norm codewords stored as the columns of an N x Q matrix.
    class Codebook
    {
    public:
        // angle_index/ring_index locate each codeword on the polar grid; ring 0 is the
        // far-field ring. Validates unit norms, label uniqueness and (POLAR) ring ordering.
        Codebook(CMatrixd codewords, std::vector<PolarPointd> labels, std::vector<Eigen::Index> angle_index,
                 std::vector<Eigen::Index> ring_index, CodebookKind kind, double frequency, double mu_target,
                 std::string geometry);

        const CMatrixd &codewords() const noexcept { return codewords_; }
        const std::vector<PolarPointd> &labels() const noexcept { return labels_; }
        const std::vector<Eigen::Index> &angle_index() const noexcept { return angle_index_; }
        const std::vector<Eigen::Index> &ring_index() const noexcept { return ring_index_; }
        CodebookKind kind() const noexcept { return kind_; }
        double frequency() const noexcept { return frequency_; }
        double mu_target() const noexcept { return mu_target_; }
        const std::string &geometry() const noexcept { return geometry_; }

        Eigen::Index size() const noexcept { return codewords_.cols(); }
        Eigen::Index antennas() const noexcept { return codewords_.rows(); }
        Eigen::Index angle_count() const noexcept;

        // Distances of the rings on one angular spoke, far-field ring first.
        std::vector<double> rings(Eigen::Index angle) const;

    private:
        CMatrixd codewords_;
        std::vector<PolarPointd> labels_;
        std::vector<Eigen::Index> angle_index_;
        std::vector<Eigen::Index> ring_index_;
        CodebookKind kind_;
        double frequency_;
        double mu_target_;
        std::string geometry_;
    };

    // |<u, v>| for unit-norm vectors.
    double coherence(const CVectord &u, const CVectord &v);

    // Angle grid uniform in sin(theta): sin(theta_i) = (2i - size + 1) / size.
    std::vector<double> uniform_sine_angles(Eigen::Index size);

    // Normalized planar codewords on the uniform-sine grid.
    Codebook angular_codebook(const ArrayGeometryd &geom, double frequency, Eigen::Index size,
                              double speed = speed_of_light<double>);

    // Per angle, rings are placed greedily from the far-field ring inwards: the next ring is the
    // first distance below the previous one whose codeword coherence with it drops to mu_target.
    // Construction stops before r_min.
    Codebook polar_codebook(const ArrayGeometryd &geom, double frequency, Eigen::Index angle_count,
                            double mu_target, double r_min, double speed = speed_of_light<double>);

    struct CoherenceProfile
    {
        double max_adjacent_ring = 0;       // 0 when no angle has two rings
        double max_cross_angle = 0;         // neighbouring angles, same ring index
        std::array<std::size_t, 10> histogram{}; // adjacent-ring coherences over [0, 1]
        std::size_t adjacent_pairs = 0;
        bool exceeds_target = false;        // some adjacent pair above mu_target + 1e-6
    };

    CoherenceProfile codebook_coherence_profile(const Codebook &cb);

    // CSV pair: <stem>_labels.csv and <stem>_entries.csv (one row per codeword, re/im columns).
    void export_codebook(const Codebook &cb, const std::filesystem::path &stem);
    Codebook import_codebook(const std::filesystem::path &stem);
} // namespace nearfield

#endif // NEARFIELD_CODEBOOK_HPP
