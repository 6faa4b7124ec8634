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

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace mpcx
{
    // Squared geometric error, each axis normalized by its resolution; angles compared modulo 1
    double pairwise_cost(const PathParams &phys, const PathParams &est, const ResolutionSpec &res);

    struct Assignment
    {
        std::vector<std::pair<std::size_t, std::size_t>> pairs; // (row, col), sorted by row
        double total_cost = 0.0; // matched costs + unmatched_cost per unmatched row and column
    };

    // Optimal rectangular assignment where every unmatched row and column costs unmatched_cost.
    // Solved as a square problem with dummy rows/columns by the Hungarian (shortest augmenting path) method.
    Assignment assign(const RealMatrix &cost, double unmatched_cost);

    struct AssociatedPair
    {
        std::size_t phys_index = 0;
        std::size_t est_index = 0;
        double cost = 0.0;
    };

    // Indices into AssociationResult::pairs
    struct BinSets
    {
        std::vector<std::size_t> delay;
        std::vector<std::size_t> aoa;
        std::vector<std::size_t> aod;
        std::vector<std::size_t> joint;
    };

    struct AssociationResult
    {
        std::vector<AssociatedPair> pairs;
        std::vector<std::size_t> unmatched_phys;
        std::vector<std::size_t> unmatched_est;
        double pre_pa_cost = 0.0;
        double post_pa_cost = 0.0;
        BinSets bin_sets;
    };

    AssociationResult associate(std::span<const PathParams> phys, std::span<const PathParams> est,
                                const ResolutionSpec &res, double unmatched_cost = 3.0);

    // Per-axis normalized signed errors (phys - est) of one pair
    struct AxisErrors
    {
        double delay_bins = 0.0;
        double aoa_bins = 0.0;
        double aod_bins = 0.0;
    };

    AxisErrors axis_errors(const PathParams &phys, const PathParams &est, const ResolutionSpec &res);
}
