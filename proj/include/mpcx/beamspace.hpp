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

#include "mpcx/channel_synth.hpp"
#include "mpcx/grid.hpp"
#include "mpcx/tensor.hpp"

#include <span>
#include <vector>

namespace mpcx
{
    // Beamspace (AoA x AoD x delay) samples of a frequency response on an oversampled lattice.
    // Normalized so that an isolated, lattice-aligned path of gain a reads exactly a at its location.
    struct BeamspaceGrid
    {
        CTensor3 values;
        GridSpec spec;
        SounderConfig config;
        GridAxes axes;
    };

    // (1/n) sum_m exp(j 2 pi delta m): the normalized steering-vector inner product.
    // Periodic in delta with period 1, equal to 1 at integer delta.
    cplx angle_kernel(double delta_theta, std::size_t n);

    // Mean of exp(j 2 pi delta_tau f) over the sampled band; the discrete counterpart of sinc(W delta_tau)
    cplx delay_kernel(double delta_tau, double bandwidth_hz, std::size_t n_freq);

    BeamspaceGrid beamspace_transform(const FrequencyResponse &response, const GridSpec &spec);

    // Analytic beamspace image of one path; equals beamspace_transform(synthesize_response({path}))
    BeamspaceGrid single_path_grid(const PathParams &path, const GridSpec &spec, const SounderConfig &config);

    // grid -= single_path_grid(path), without materializing the path image
    void subtract_path(BeamspaceGrid &grid, const PathParams &path);

    // Beamspace value at an arbitrary (off-lattice) point
    cplx evaluate_beamspace(const FrequencyResponse &response, double aoa, double aod, double delay);

    struct PdpMaps
    {
        RealMatrix aoa_aod;   // sum over delay of |H_b|^2, shape (aoa points, aod points)
        RealMatrix aoa_delay; // sum over AoD of |H_b|^2, shape (aoa points, delay points)
    };

    PdpMaps pdp_marginals(const BeamspaceGrid &grid);
}
