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

#ifndef NEARFIELD_RANDOM_HPP
#define NEARFIELD_RANDOM_HPP

#include <cstdint>
#include <random>

namespace nearfield
{
    // splitmix64 finalizer; used to derive independent stream seeds.
    constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Generator for stream `stream` of run `seed`, e.g. (seed, trial index).
    inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream = 0)
    {
        return std::mt19937_64(mix_seed(mix_seed(seed) ^ mix_seed(stream + 0x632be59bd9b4e019ULL)));
    }
} // namespace nearfield

#endif // NEARFIELD_RANDOM_HPP
