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

#include "mpcx/beamspace.hpp"
#include "mpcx/channel_synth.hpp"
#include "mpcx/kernels.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpcx
{
    struct ExtractionConfig
    {
        std::size_t k_dom = 1;  // committed-path budget
        std::size_t k_g = 4;    // candidates detected per outer iteration
        std::size_t k_up = 2;   // candidates committed per outer iteration
        GridSpec grid;
        double residual_stop = 1.0e-6; // stop once residual power / initial power falls below this
        bool final_global_ls = true;
        bool subgrid_refine = false; // per-axis quadratic peak interpolation

        // Requires 1 <= k_up <= k_g <= k_dom and residual_stop >= 0
        void validate() const;
    };

    struct ExtractionTrace
    {
        std::vector<double> residual_power;        // after each commit, mean over f of ||R(f)||_F^2
        std::vector<double> committed_gain_power;  // |alpha|^2 of each committed path
        std::vector<double> ls_condition;          // condition estimate of each LS solve
    };

    struct ExtractionResult
    {
        PathList paths;
        ExtractionTrace trace;
        std::vector<std::string> notes; // dropped duplicates and other non-fatal events
    };

    struct Peak
    {
        double aoa = 0.0;
        double aod = 0.0;
        double delay = 0.0;
        cplx value{0.0, 0.0};
        std::size_t aoa_index = 0;
        std::size_t aod_index = 0;
        std::size_t delay_index = 0;
    };

    // Raised when the LS Gram matrix is numerically singular. first < second index the
    // most correlated pair of columns; second is the later (droppable) one.
    class DegenerateGeometryError : public std::runtime_error
    {
    public:
        DegenerateGeometryError(const std::string &what, std::size_t first, std::size_t second, double condition)
            : std::runtime_error(what), first_(first), second_(second), condition_(condition) {}

        std::size_t first() const noexcept { return first_; }
        std::size_t second() const noexcept { return second_; }
        double condition() const noexcept { return condition_; }

    private:
        std::size_t first_;
        std::size_t second_;
        double condition_;
    };

    inline constexpr double max_gram_condition = 1.0e12;

    Peak find_peak(const BeamspaceGrid &grid);

    // Peak refined by a three-point parabola per axis on |H_b|; value re-evaluated at the refined point
    Peak refine_peak(const BeamspaceGrid &grid, const FrequencyResponse &response, const Peak &peak);

    // CLEAN / matching pursuit: peak-pick, record, subtract, repeat
    PathList greedy_extract(const FrequencyResponse &response, const GridSpec &spec, std::size_t count);

    struct LsSolution
    {
        std::vector<cplx> amplitudes;
        double condition = 1.0;
    };

    LsSolution ls_solve(const FrequencyResponse &response, std::span<const kernels::Geometry> geometry);

    // Least-squares path amplitudes for fixed geometry (normal equations, A never materialized)
    std::vector<cplx> ls_amplitudes(const FrequencyResponse &response, std::span<const kernels::Geometry> geometry);

    // Greedy matching pursuit with in-loop LS refits: detect k_g, refit, commit the k_up strongest
    ExtractionResult greedy_ls(const FrequencyResponse &response, const ExtractionConfig &xcfg);

    FrequencyResponse reconstruct(std::span<const PathParams> paths, const SounderConfig &config);

    // sum |estimate - truth|^2 / sum |truth|^2
    double reconstruction_error(const FrequencyResponse &estimate, const FrequencyResponse &truth);

    struct SageResult
    {
        PathList paths;
        std::vector<double> error_per_sweep;
    };

    // Path-wise SAGE: per path, E-step isolates it from the others, M-step re-picks it on the grid
    SageResult sage_refine(const FrequencyResponse &response, std::span<const PathParams> paths,
                           const GridSpec &spec, std::size_t sweeps);

    std::vector<kernels::Geometry> geometry_of(std::span<const PathParams> paths);
}
