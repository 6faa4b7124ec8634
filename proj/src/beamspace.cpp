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

#include "mpcx/beamspace.hpp"
#include "mpcx/kernels.hpp"

#include <array>
#include <cmath>

namespace mpcx
{
    cplx angle_kernel(double delta_theta, std::size_t n)
    {
        // reduce to [-0.5, 0.5]; the kernel is exactly 1-periodic
        const double d = delta_theta - std::round(delta_theta);
        if (d == 0.0 || n == 1)
            return {1.0, 0.0};
        const double nd = static_cast<double>(n);
        const double mag = std::sin(pi * nd * d) / (nd * std::sin(pi * d));
        return std::polar(mag, pi * (nd - 1.0) * d);
    }

    cplx delay_kernel(double delta_tau, double bandwidth_hz, std::size_t n_freq)
    {
        const double x = bandwidth_hz * delta_tau;
        return std::polar(1.0, -pi * x) * angle_kernel(x / static_cast<double>(n_freq), n_freq);
    }

    namespace
    {
        void check_response(const FrequencyResponse &response)
        {
            const auto &c = response.config;
            c.validate();
            if (response.values.dims() != std::array<std::size_t, 3>{c.n_rx, c.n_tx, c.n_freq})
                throw ShapeError("Frequency response shape does not match its sounder config.");
        }

        struct PathFactors
        {
            std::vector<cplx> aoa, aod, delay;
        };

        PathFactors path_factors(const PathParams &path, const GridAxes &axes, const SounderConfig &config)
        {
            PathFactors f;
            f.aoa.resize(axes.aoa.size());
            for (std::size_t i = 0; i < axes.aoa.size(); ++i)
                f.aoa[i] = std::conj(angle_kernel(axes.aoa[i] - path.aoa, config.n_rx));
            f.aod.resize(axes.aod.size());
            for (std::size_t i = 0; i < axes.aod.size(); ++i)
                f.aod[i] = angle_kernel(axes.aod[i] - path.aod, config.n_tx);
            f.delay.resize(axes.delay.size());
            for (std::size_t i = 0; i < axes.delay.size(); ++i)
                f.delay[i] = delay_kernel(axes.delay[i] - path.delay, config.bandwidth_hz, config.n_freq);
            return f;
        }
    }

    BeamspaceGrid beamspace_transform(const FrequencyResponse &response, const GridSpec &spec)
    {
        check_response(response);
        BeamspaceGrid grid;
        grid.spec = spec;
        grid.config = response.config;
        grid.axes = make_axes(response.config, spec);
        grid.values = kernels::parallel::lattice_transform(response.values, response.config, spec);
        return grid;
    }

    BeamspaceGrid single_path_grid(const PathParams &path, const GridSpec &spec, const SounderConfig &config)
    {
        BeamspaceGrid grid;
        grid.spec = spec;
        grid.config = config;
        grid.axes = make_axes(config, spec);
        grid.values = CTensor3(grid.axes.aoa.size(), grid.axes.aod.size(), grid.axes.delay.size());
        if (path.gain != cplx{})
        {
            const auto f = path_factors(path, grid.axes, config);
            kernels::parallel::subtract_rank1(grid.values, -path.gain, f.aoa, f.aod, f.delay);
        }
        return grid;
    }

    void subtract_path(BeamspaceGrid &grid, const PathParams &path)
    {
        if (path.gain == cplx{})
            return;
        const auto f = path_factors(path, grid.axes, grid.config);
        kernels::parallel::subtract_rank1(grid.values, path.gain, f.aoa, f.aod, f.delay);
    }

    cplx evaluate_beamspace(const FrequencyResponse &response, double aoa, double aod, double delay)
    {
        check_response(response);
        const kernels::Geometry g{aoa, aod, delay};
        return kernels::parallel::evaluate_points(response.values, response.config, {&g, 1})[0];
    }

    PdpMaps pdp_marginals(const BeamspaceGrid &grid)
    {
        const auto &v = grid.values;
        const std::size_t na = v.dim(0), nd = v.dim(1), nt = v.dim(2);
        PdpMaps maps{RealMatrix(na, nd), RealMatrix(na, nt)};
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < nd; ++j)
            {
                const cplx *row = &v(i, j, 0);
                double acc = 0.0;
                for (std::size_t m = 0; m < nt; ++m)
                {
                    const double p = std::norm(row[m]);
                    acc += p;
                    maps.aoa_delay(i, m) += p;
                }
                maps.aoa_aod(i, j) = acc;
            }
        return maps;
    }
}
