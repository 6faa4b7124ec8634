// SPDX-License-Identifier: Apache-2.0
//
// mpcx: multipath component extraction for idealized MIMO channel sounders
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

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpcx
{
    using cplx = std::complex<double>;

    inline constexpr double pi = 3.14159265358979323846;
    inline constexpr double two_pi = 2.0 * pi;

    // Invalid argument values (out-of-range angles, negative powers, aliased delays, ...)
    class DomainError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Tensor or grid dimensions that do not agree with the sounder configuration
    class ShapeError : public DomainError
    {
    public:
        using DomainError::DomainError;
    };

    // Malformed input file; carries the 1-based line number (0 if unknown) and the offending field
    class ParseError : public std::runtime_error
    {
    public:
        ParseError(const std::string &what, std::size_t line = 0, std::string field = {})
            : std::runtime_error(what), line_(line), field_(std::move(field)) {}

        std::size_t line() const noexcept { return line_; }
        const std::string &field() const noexcept { return field_; }

    private:
        std::size_t line_;
        std::string field_;
    };

    // One multipath component. Angles are spatial frequencies in cycles, delay in seconds.
    struct PathParams
    {
        cplx gain{0.0, 0.0};
        double delay = 0.0;
        double aod = 0.0;
        double aoa = 0.0;

        double power() const { return std::norm(gain); }
        bool operator==(const PathParams &) const = default;
    };

    using PathList = std::vector<PathParams>;

    // Idealized sounder: ULAs at both ends, uniform frequency sampling over the two-sided bandwidth.
    struct SounderConfig
    {
        std::size_t n_tx = 1;
        std::size_t n_rx = 1;
        double bandwidth_hz = 1.0e9;
        std::size_t n_freq = 1;
        double carrier_hz = 28.0e9;

        double delay_res() const { return 1.0 / bandwidth_hz; }
        double aod_res() const { return 1.0 / static_cast<double>(n_tx); }
        double aoa_res() const { return 1.0 / static_cast<double>(n_rx); }
        double duration() const { return static_cast<double>(n_freq) / bandwidth_hz; }

        // Throws DomainError when any field is non-positive
        void validate() const;

        bool operator==(const SounderConfig &) const = default;
    };

    // Per-axis resolving power used to normalize estimation errors
    struct ResolutionSpec
    {
        double delay_res = 1.0e-9;
        double aoa_res = 1.0;
        double aod_res = 1.0;

        static ResolutionSpec from_config(const SounderConfig &c)
        {
            return {c.delay_res(), c.aoa_res(), c.aod_res()};
        }
    };

    // Named presets: "paper" (35x35 ULAs, 1 GHz, 233 samples) and "desk" (8x8, 1 GHz, 32 samples)
    SounderConfig preset_config(const std::string &name);

    // Wraps a spatial-frequency difference onto (-0.5, 0.5]
    inline double wrap_cycles(double d)
    {
        double w = d - std::round(d);
        if (w <= -0.5)
            w += 1.0;
        return w;
    }
}
