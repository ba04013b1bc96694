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

#ifndef NEARFIELD_PARALLEL_HPP
#define NEARFIELD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace nearfield
{
    // Worker count used by parallel_for; 0 selects hardware concurrency.
    void set_thread_count(unsigned count) noexcept;
    unsigned thread_count() noexcept;

    // Calls body(i) for every i in [0, count). Each index runs exactly once; callers write
    // results into per-index slots so output never depends on scheduling.
    void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);
} // namespace nearfield

#endif // NEARFIELD_PARALLEL_HPP
