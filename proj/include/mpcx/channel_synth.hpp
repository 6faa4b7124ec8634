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

#include "mpcx/tensor.hpp"
#include "mpcx/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mpcx
{
    // Sampled spatial frequency response H(f), shape (n_rx, n_tx, n_freq)
    struct FrequencyResponse
    {
        SounderConfig config;
        CTensor3 values;

        FrequencyResponse() = default;
        explicit FrequencyResponse(const SounderConfig &c)
            : config(c), values(c.n_rx, c.n_tx, c.n_freq) {}
    };

    // Angle-delay (virtual) channel coefficients on the critical lattice, shape (n_rx, n_tx, L + 1)
    struct VirtualCoefficients
    {
        CTensor3 values;
        std::size_t max_delay_index = 0; // L
    };

    // theta = spacing_ratio * sin(phi); phi in degrees, must lie in [-90, 90]
    double spatial_frequency(double phi_deg, double spacing_ratio = 0.5);

    // Element m is exp(+j 2 pi theta m)
    std::vector<cplx> steering_vector(double theta, std::size_t n);

    // k-th sample is -W/2 + k W / n_freq
    std::vector<double> frequency_grid(const SounderConfig &config);

    // Throws DomainError if the path violates the angle range or 0 <= delay < T
    void validate_path(const PathParams &path, const SounderConfig &config);

    FrequencyResponse synthesize_response(const SounderConfig &config, std::span<const PathParams> paths);

    // Adds circular complex Gaussian noise of the given per-entry variance
    FrequencyResponse add_awgn(const FrequencyResponse &response, double noise_power_per_sample, std::uint64_t seed);

    VirtualCoefficients virtual_coefficients(const FrequencyResponse &response, double tau_max);

    FrequencyResponse reconstruct_from_virtual(const VirtualCoefficients &coeffs, const SounderConfig &config);

    std::size_t signal_space_dimension(const SounderConfig &config);

    // Keeps paths with |gain|^2 >= max_power / 10^(dr_db / 10), preserving order
    PathList filter_by_dynamic_range(std::span<const PathParams> paths, double dr_db);

    // Mean over frequency samples of the squared Frobenius norm
    double response_power(const FrequencyResponse &response);
}
