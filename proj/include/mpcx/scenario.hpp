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

// Clustered synthetic scenarios used as ground truth.
//
// Draws (all from one std::mt19937_64 seeded with `seed`):
//   cluster c:  delay centre ~ U[cluster_delay_min_s, cluster_delay_max_s]
//               AoD and AoA centres ~ U[-cluster_angle_extent, cluster_angle_extent]
//   path in c:  delay = centre + Exp(mean delay_spread_s)
//               aod = centre + N(0, aod_spread), aoa = centre + N(0, aoa_spread)
//               power_db = cluster offset + N(0, path_spread_db), phase ~ U[0, 2 pi)
// Paths with delay outside [0, max_delay_s) or angles outside [-0.5, 0.5] are redrawn.
// The cluster offset is cluster_offsets_db[c] when given, otherwise -c * cluster_decay_db.
// With all three separation_* fields positive, a path is also redrawn while its normalized
// distance sqrt((dtau / sep_tau)^2 + (daod / sep_aod)^2 + (daoa / sep_aoa)^2) to an earlier
// path is below 1 (angle differences taken modulo 1).

#include "mpcx/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mpcx
{
    struct ScenarioSpec
    {
        std::size_t n_clusters = 5;
        std::vector<std::size_t> paths_per_cluster{50}; // one entry (applies to all) or one per cluster
        double max_delay_s = 200.0e-9;
        double cluster_delay_min_s = 10.0e-9;
        double cluster_delay_max_s = 150.0e-9;
        double cluster_angle_extent = 0.4;
        double delay_spread_s = 5.0e-9;
        double aod_spread = 0.03;
        double aoa_spread = 0.03;
        std::vector<double> cluster_offsets_db;
        double cluster_decay_db = 5.0;
        double path_spread_db = 6.0;
        double dynamic_range_db = 100.0;
        double separation_delay_s = 0.0;
        double separation_aod = 0.0;
        double separation_aoa = 0.0;
        std::uint64_t seed = 1;

        bool enforces_separation() const
        {
            return separation_delay_s > 0.0 && separation_aod > 0.0 && separation_aoa > 0.0;
        }

        std::size_t paths_in_cluster(std::size_t c) const;
        std::size_t total_paths() const;

        // Throws DomainError for empty scenarios or inconsistent ranges
        void validate() const;
    };

    struct Scenario
    {
        PathList generated;
        PathList retained; // after the dynamic-range filter
        std::vector<std::size_t> cluster_of; // cluster index of each retained path
    };

    ScenarioSpec parse_scenario_spec(std::istream &in);
    ScenarioSpec read_scenario_spec(const std::filesystem::path &file);

    // Canonical key = value rendering; parse_scenario_spec(format_scenario_spec(s)) == s
    std::string format_scenario_spec(const ScenarioSpec &spec);

    Scenario generate_scenario(const ScenarioSpec &spec);

    // Spec echo, draw distributions and path counts
    std::string scenario_sidecar(const ScenarioSpec &spec, const Scenario &scenario);
}
