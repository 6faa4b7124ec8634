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

#include "mpcx/grid.hpp"
#include "mpcx/types.hpp"

#include <cmath>

namespace mpcx
{
    void SounderConfig::validate() const
    {
        if (n_tx == 0 || n_rx == 0 || n_freq == 0)
            throw DomainError("SounderConfig: n_tx, n_rx and n_freq must be positive.");
        if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
            throw DomainError("SounderConfig: bandwidth_hz must be positive.");
        if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
            throw DomainError("SounderConfig: carrier_hz must be positive.");
    }

    SounderConfig preset_config(const std::string &name)
    {
        if (name == "paper")
            return {35, 35, 1.0e9, 233, 28.0e9};
        if (name == "desk")
            return {8, 8, 1.0e9, 32, 28.0e9};
        throw DomainError("Unknown preset '" + name + "' (expected 'paper' or 'desk').");
    }

    std::size_t delay_bins(const SounderConfig &config, const GridSpec &spec)
    {
        const double span = spec.delay_span > 0.0 ? spec.delay_span : config.duration();
        // tolerate representation error in span * W (e.g. 128e-9 * 1e9)
        const double bins = std::ceil(span * config.bandwidth_hz - 1.0e-9);
        if (bins > static_cast<double>(config.n_freq))
            throw DomainError("GridSpec: delay_span exceeds the observation window T = n_freq / W.");
        return bins < 1.0 ? 1 : static_cast<std::size_t>(bins);
    }

    GridAxes make_axes(const SounderConfig &config, const GridSpec &spec)
    {
        config.validate();
        if (spec.os_aoa == 0 || spec.os_aod == 0 || spec.os_delay == 0)
            throw DomainError("GridSpec: oversampling factors must be positive.");

        GridAxes axes;
        const std::size_t m_aoa = config.n_rx * spec.os_aoa;
        const std::size_t m_aod = config.n_tx * spec.os_aod;
        const std::size_t m_delay = delay_bins(config, spec) * spec.os_delay;

        axes.aoa.resize(m_aoa);
        for (std::size_t i = 0; i < m_aoa; ++i)
            axes.aoa[i] = -0.5 + static_cast<double>(i) / static_cast<double>(m_aoa);
        axes.aod.resize(m_aod);
        for (std::size_t i = 0; i < m_aod; ++i)
            axes.aod[i] = -0.5 + static_cast<double>(i) / static_cast<double>(m_aod);

        const double rate = config.bandwidth_hz * static_cast<double>(spec.os_delay);
        axes.delay.resize(m_delay);
        for (std::size_t m = 0; m < m_delay; ++m)
            axes.delay[m] = static_cast<double>(m) / rate;
        return axes;
    }
}
