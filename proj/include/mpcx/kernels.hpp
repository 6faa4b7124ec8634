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

// Hot loops, each in two flavours. kernels::serial holds straightforward reference loops
// that the tests treat as ground truth; kernels::parallel holds the OpenMP (and, for the
// lattice transform, FFT based) versions used by the library. Parallel results do not
// depend on the thread count: every output element is produced by exactly one thread
// with a fixed operation order.

#include "mpcx/grid.hpp"
#include "mpcx/tensor.hpp"
#include "mpcx/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mpcx::kernels
{
    // Point in (aoa, aod, delay) space
    struct Geometry
    {
        double aoa = 0.0;
        double aod = 0.0;
        double delay = 0.0;
    };

    namespace serial
    {
        // out(r, t, k) = sum_n g_n exp(j2pi(aoa_n r - aod_n t - delay_n f_k)), out must be (n_rx, n_tx, n_freq)
        void synthesize(const SounderConfig &config, std::span<const PathParams> paths, CTensor3 &out);

        // Normalized beamspace samples on arbitrary per-axis coordinate lists (direct summation)
        CTensor3 separable_transform(const CTensor3 &response, const SounderConfig &config,
                                     std::span<const double> aoa, std::span<const double> aod,
                                     std::span<const double> delay);

        CTensor3 lattice_transform(const CTensor3 &response, const SounderConfig &config, const GridSpec &spec);

        // Index of the largest |v|; ties resolve to the lowest index. Empty input returns 0.
        std::size_t find_peak(std::span<const cplx> values);

        // values(i, j, k) -= g * u0[i] * u1[j] * u2[k]
        void subtract_rank1(CTensor3 &values, cplx g, std::span<const cplx> u0,
                            std::span<const cplx> u1, std::span<const cplx> u2);

        std::vector<cplx> evaluate_points(const CTensor3 &response, const SounderConfig &config,
                                          std::span<const Geometry> points);

        // Normalized Gram matrix of space-frequency columns, row-major K x K
        std::vector<cplx> gram(const SounderConfig &config, std::span<const Geometry> geometry);

        // Unweighted pairwise association cost, rows = phys, cols = est
        RealMatrix cost_matrix(std::span<const PathParams> phys, std::span<const PathParams> est,
                               const ResolutionSpec &res);
    }

    namespace parallel
    {
        void synthesize(const SounderConfig &config, std::span<const PathParams> paths, CTensor3 &out);

        // Zero-padded FFT evaluation of the lattice transform
        CTensor3 lattice_transform(const CTensor3 &response, const SounderConfig &config, const GridSpec &spec);

        std::size_t find_peak(std::span<const cplx> values);

        void subtract_rank1(CTensor3 &values, cplx g, std::span<const cplx> u0,
                            std::span<const cplx> u1, std::span<const cplx> u2);

        std::vector<cplx> evaluate_points(const CTensor3 &response, const SounderConfig &config,
                                          std::span<const Geometry> points);

        std::vector<cplx> gram(const SounderConfig &config, std::span<const Geometry> geometry);

        RealMatrix cost_matrix(std::span<const PathParams> phys, std::span<const PathParams> est,
                               const ResolutionSpec &res);
    }

    // Pairwise cost between one physical and one estimated path (shared by both flavours)
    double pair_cost(const PathParams &phys, const PathParams &est, const ResolutionSpec &res);

    // Threads used by the parallel kernels (1 when built without OpenMP)
    int max_threads();
    void set_threads(int n);
}
