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

#include "mpcx/association.hpp"
#include "mpcx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mpcx
{
    double pairwise_cost(const PathParams &phys, const PathParams &est, const ResolutionSpec &res)
    {
        return kernels::pair_cost(phys, est, res);
    }

    namespace
    {
        // Min-cost perfect matching on a dense square matrix, O(n^3) shortest augmenting paths
        // with row/column potentials. Returns row_of_col (size n).
        std::vector<std::size_t> hungarian_square(const std::vector<double> &a, std::size_t n)
        {
            constexpr double inf = std::numeric_limits<double>::infinity();
            constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

            // 1-based with a virtual column 0, following the classic formulation
            std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
            std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
            std::vector<char> used(n + 1);

            for (std::size_t i = 1; i <= n; ++i)
            {
                p[0] = i;
                std::size_t j0 = 0;
                std::fill(minv.begin(), minv.end(), inf);
                std::fill(used.begin(), used.end(), 0);
                do
                {
                    used[j0] = 1;
                    const std::size_t i0 = p[j0];
                    double delta = inf;
                    std::size_t j1 = none;
                    const double *row = &a[(i0 - 1) * n];
                    for (std::size_t j = 1; j <= n; ++j)
                    {
                        if (used[j])
                            continue;
                        const double cur = row[j - 1] - u[i0] - v[j];
                        if (cur < minv[j])
                        {
                            minv[j] = cur;
                            way[j] = j0;
                        }
                        if (minv[j] < delta)
                        {
                            delta = minv[j];
                            j1 = j;
                        }
                    }
                    for (std::size_t j = 0; j <= n; ++j)
                    {
                        if (used[j])
                        {
                            u[p[j]] += delta;
                            v[j] -= delta;
                        }
                        else
                            minv[j] -= delta;
                    }
                    j0 = j1;
                } while (p[j0] != 0);
                do
                {
                    const std::size_t j1 = way[j0];
                    p[j0] = p[j1];
                    j0 = j1;
                } while (j0 != 0);
            }

            std::vector<std::size_t> row_of_col(n);
            for (std::size_t j = 1; j <= n; ++j)
                row_of_col[j - 1] = p[j] - 1;
            return row_of_col;
        }
    }

    Assignment assign(const RealMatrix &cost, double unmatched_cost)
    {
        if (!(unmatched_cost > 0.0) || !std::isfinite(unmatched_cost))
            throw DomainError("assign: unmatched cost must be positive and finite.");
        const std::size_t nr = cost.rows(), nc = cost.cols();
        for (const double c : cost.values())
            if (!(c >= 0.0) || !std::isfinite(c))
                throw DomainError("assign: costs must be finite and non-negative.");

        Assignment out;
        if (nr == 0 || nc == 0)
        {
            out.total_cost = unmatched_cost * static_cast<double>(nr + nc);
            return out;
        }

        // Rows: nr real + nc dummy. Cols: nc real + nr dummy.
        // real row -> dummy col: row unmatched; dummy row -> real col: column unmatched; dummy-dummy free.
        const std::size_t n = nr + nc;
        std::vector<double> a(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
            {
                double v;
                if (i < nr && j < nc)
                    v = cost(i, j);
                else if (i < nr || j < nc)
                    v = unmatched_cost;
                else
                    v = 0.0;
                a[i * n + j] = v;
            }

        const auto row_of_col = hungarian_square(a, n);
        std::size_t matched = 0;
        double total = 0.0;
        for (std::size_t j = 0; j < nc; ++j)
        {
            const std::size_t i = row_of_col[j];
            if (i < nr)
            {
                out.pairs.emplace_back(i, j);
                total += cost(i, j);
                ++matched;
            }
        }
        std::sort(out.pairs.begin(), out.pairs.end());
        total += unmatched_cost * static_cast<double>((nr - matched) + (nc - matched));
        out.total_cost = total;
        return out;
    }

    AxisErrors axis_errors(const PathParams &phys, const PathParams &est, const ResolutionSpec &res)
    {
        return {(phys.delay - est.delay) / res.delay_res, wrap_cycles(phys.aoa - est.aoa) / res.aoa_res,
                wrap_cycles(phys.aod - est.aod) / res.aod_res};
    }

    AssociationResult associate(std::span<const PathParams> phys, std::span<const PathParams> est,
                                const ResolutionSpec &res, double unmatched_cost)
    {
        if (phys.empty() || est.empty())
            throw DomainError("associate: physical and estimated path lists must be non-empty.");
        if (!(res.delay_res > 0.0 && res.aoa_res > 0.0 && res.aod_res > 0.0))
            throw DomainError("associate: resolutions must be positive.");

        const RealMatrix cost = kernels::parallel::cost_matrix(phys, est, res);
        const Assignment asg = assign(cost, unmatched_cost);

        double total_phys_power = 0.0;
        for (const auto &p : phys)
            total_phys_power += p.power();
        auto weight = [&](std::size_t i) {
            return total_phys_power > 0.0 ? phys[i].power() / total_phys_power : 0.0;
        };

        AssociationResult out;
        std::vector<char> phys_used(phys.size(), 0), est_used(est.size(), 0);
        for (const auto &[i, j] : asg.pairs)
        {
            out.pairs.push_back({i, j, cost(i, j)});
            out.post_pa_cost += cost(i, j) * weight(i);
            phys_used[i] = 1;
            est_used[j] = 1;
        }
        for (std::size_t i = 0; i < phys.size(); ++i)
            if (!phys_used[i])
                out.unmatched_phys.push_back(i);
        for (std::size_t j = 0; j < est.size(); ++j)
            if (!est_used[j])
                out.unmatched_est.push_back(j);

        // rank-for-rank pairing by descending power over the first K_pa entries
        auto by_power = [](std::span<const PathParams> list) {
            std::vector<std::size_t> idx(list.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return list[a].power() > list[b].power(); });
            return idx;
        };
        const auto phys_rank = by_power(phys);
        const auto est_rank = by_power(est);
        for (std::size_t k = 0; k < out.pairs.size(); ++k)
            out.pre_pa_cost += cost(phys_rank[k], est_rank[k]) * weight(phys_rank[k]);

        // Bin membership: |error| <= one resolution bin (tolerant of representation error at the boundary)
        constexpr double edge = 1.0 + 1.0e-9;
        for (std::size_t k = 0; k < out.pairs.size(); ++k)
        {
            const auto e = axis_errors(phys[out.pairs[k].phys_index], est[out.pairs[k].est_index], res);
            const bool in_delay = std::abs(e.delay_bins) <= edge;
            const bool in_aoa = std::abs(e.aoa_bins) <= edge;
            const bool in_aod = std::abs(e.aod_bins) <= edge;
            if (in_delay)
                out.bin_sets.delay.push_back(k);
            if (in_aoa)
                out.bin_sets.aoa.push_back(k);
            if (in_aod)
                out.bin_sets.aod.push_back(k);
            if (in_delay && in_aoa && in_aod)
                out.bin_sets.joint.push_back(k);
        }
        return out;
    }
}
