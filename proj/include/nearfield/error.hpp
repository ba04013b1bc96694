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

#ifndef NEARFIELD_ERROR_HPP
#define NEARFIELD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nearfield
{
    // Base of every error thrown by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class InvalidArgument : public Error
    {
    public:
        using Error::Error;
    };

    // Geometrically impossible request, e.g. a source inside the array hull.
    class DomainError : public Error
    {
    public:
        using Error::Error;
    };

    // Operation does not support the requested propagation model or codebook kind.
    class UnsupportedModel : public Error
    {
    public:
        using Error::Error;
    };

    // Bisection bracket failure, singular least squares, rank deficiency.
    class NumericError : public Error
    {
    public:
        using Error::Error;
    };

    class IoError : public Error
    {
    public:
        using Error::Error;
    };

    // Malformed scenario file; key() names the offending entry.
    class ConfigError : public Error
    {
    public:
        ConfigError(std::string key, const std::string &what)
            : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

        const std::string &key() const noexcept { return key_; }

    private:
        std::string key_;
    };

    namespace detail
    {
        inline void require(bool condition, const char *message)
        {
            if (!condition)
                throw InvalidArgument(message);
        }
    } // namespace detail
} // namespace nearfield

#endif // NEARFIELD_ERROR_HPP
