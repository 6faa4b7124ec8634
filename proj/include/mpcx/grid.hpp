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

#include "mpcx/types.hpp"

#include <cstddef>
#include <vector>

namespace mpcx
{
    // Oversampled AoA x AoD x delay lattice. delay_span <= 0 selects the full observation window T.
    struct GridSpec
    {
        std::size_t os_aoa = 4;
        std::size_t os_aod = 4;
        std::size_t os_delay = 4;
        double delay_span = 0.0;

        bool operator==(const GridSpec &) const = default;
    };

    // Resolved lattice geometry for one (config, spec) pair
    struct GridAxes
    {
        std::vector<double> aoa;   // n_rx * os_aoa points, -0.5 + i / (n_rx * os_aoa)
        std::vector<double> aod;   // n_tx * os_aod points
        std::vector<double> delay; // ceil(span * W) * os_delay points, m / (W * os_delay)

        std::size_t size() const { return aoa.size() * aod.size() * delay.size(); }
    };

    // Number of delay resolution bins covered by the grid, i.e. ceil(span * W)
    std::size_t delay_bins(const SounderConfig &config, const GridSpec &spec);

    // Throws DomainError for zero oversampling or a delay span beyond the observation window
    GridAxes make_axes(const SounderConfig &config, const GridSpec &spec);
}
