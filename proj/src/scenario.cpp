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

#include "mpcx/scenario.hpp"

#include "mpcx/channel_synth.hpp"
#include "mpcx/io.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

namespace mpcx
{
    namespace
    {
        template <typename T, typename Parse>
        std::vector<T> parse_list(const io::KeyValue &kv, Parse parse)
        {
            std::vector<T> out;
            std::string_view s = kv.value;
            std::size_t start = 0;
            for (;;)
            {
                const auto pos = s.find(',', start);
                out.push_back(parse(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start),
                                    kv.line, kv.key));
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return out;
        }

        template <typename T>
        std::string join(const std::vector<T> &v)
        {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                if (i)
                    out += ',';
                if constexpr (std::is_floating_point_v<T>)
                    out += io::format_double(v[i]);
                else
                    out += std::to_string(v[i]);
            }
            return out;
        }
    }

    namespace
    {
        constexpr std::size_t max_attempts = 10000;

        bool separated(const ScenarioSpec &spec, const PathParams &p, const PathList &others)
        {
            for (const auto &q : others)
            {
                const double dt = (p.delay - q.delay) / spec.separation_delay_s;
                const double dd = wrap_cycles(p.aod - q.aod) / spec.separation_aod;
                const double da = wrap_cycles(p.aoa - q.aoa) / spec.separation_aoa;
                if (dt * dt + dd * dd + da * da < 1.0)
                    return false;
            }
            return true;
        }
    }

    std::size_t ScenarioSpec::paths_in_cluster(std::size_t c) const
    {
        return paths_per_cluster.size() == 1 ? paths_per_cluster[0] : paths_per_cluster.at(c);
    }

    std::size_t ScenarioSpec::total_paths() const
    {
        std::size_t n = 0;
        for (std::size_t c = 0; c < n_clusters; ++c)
            n += paths_in_cluster(c);
        return n;
    }

    void ScenarioSpec::validate() const
    {
        if (n_clusters == 0)
            throw DomainError("Scenario needs at least one cluster.");
        if (paths_per_cluster.size() != 1 && paths_per_cluster.size() != n_clusters)
            throw DomainError("paths_per_cluster must hold one value or one value per cluster.");
        if (std::any_of(paths_per_cluster.begin(), paths_per_cluster.end(), [](std::size_t n) { return n == 0; }))
            throw DomainError("paths_per_cluster must be positive (empty scenario).");
        if (!cluster_offsets_db.empty() && cluster_offsets_db.size() != n_clusters)
            throw DomainError("cluster_offsets_db must hold one value per cluster.");
        if (!(max_delay_s > 0.0))
            throw DomainError("max_delay_s must be positive.");
        if (!(cluster_delay_min_s >= 0.0 && cluster_delay_min_s <= cluster_delay_max_s &&
              cluster_delay_max_s < max_delay_s))
            throw DomainError("Cluster delay range must satisfy 0 <= min <= max < max_delay_s.");
        if (!(cluster_angle_extent >= 0.0 && cluster_angle_extent <= 0.5))
            throw DomainError("cluster_angle_extent must lie in [0, 0.5].");
        if (!(delay_spread_s >= 0.0 && aod_spread >= 0.0 && aoa_spread >= 0.0 && path_spread_db >= 0.0))
            throw DomainError("Spreads must be non-negative.");
        if (!(dynamic_range_db > 0.0))
            throw DomainError("dynamic_range_db must be positive.");
        if (!(separation_delay_s >= 0.0 && separation_aod >= 0.0 && separation_aoa >= 0.0))
            throw DomainError("Separations must be non-negative.");
    }

    ScenarioSpec parse_scenario_spec(std::istream &in)
    {
        ScenarioSpec s;
        bool has_offsets = false;
        for (const auto &kv : io::parse_key_values(in))
        {
            const auto num = [&] { return io::parse_double(kv.value, kv.line, kv.key); };
            if (kv.key == "n_clusters")
                s.n_clusters = io::parse_size(kv.value, kv.line, kv.key);
            else if (kv.key == "paths_per_cluster")
                s.paths_per_cluster = parse_list<std::size_t>(kv, io::parse_size);
            else if (kv.key == "max_delay_s")
                s.max_delay_s = num();
            else if (kv.key == "cluster_delay_min_s")
                s.cluster_delay_min_s = num();
            else if (kv.key == "cluster_delay_max_s")
                s.cluster_delay_max_s = num();
            else if (kv.key == "cluster_angle_extent")
                s.cluster_angle_extent = num();
            else if (kv.key == "delay_spread_s")
                s.delay_spread_s = num();
            else if (kv.key == "aod_spread")
                s.aod_spread = num();
            else if (kv.key == "aoa_spread")
                s.aoa_spread = num();
            else if (kv.key == "cluster_offsets_db")
                s.cluster_offsets_db = parse_list<double>(kv, io::parse_double), has_offsets = true;
            else if (kv.key == "cluster_decay_db")
                s.cluster_decay_db = num();
            else if (kv.key == "path_spread_db")
                s.path_spread_db = num();
            else if (kv.key == "dynamic_range_db")
                s.dynamic_range_db = num();
            else if (kv.key == "separation_delay_s")
                s.separation_delay_s = num();
            else if (kv.key == "separation_aod")
                s.separation_aod = num();
            else if (kv.key == "separation_aoa")
                s.separation_aoa = num();
            else if (kv.key == "seed")
                s.seed = io::parse_size(kv.value, kv.line, kv.key);
            else
                throw ParseError("Unknown scenario key '" + kv.key + "' (line " + std::to_string(kv.line) + ")",
                                 kv.line, kv.key);
        }
        (void)has_offsets;
        try
        {
            s.validate();
        }
        catch (const DomainError &e)
        {
            throw ParseError(e.what());
        }
        return s;
    }

    ScenarioSpec read_scenario_spec(const std::filesystem::path &file)
    {
        std::ifstream in(file);
        if (!in)
            throw ParseError("Cannot open scenario spec '" + file.string() + "'.");
        return parse_scenario_spec(in);
    }

    std::string format_scenario_spec(const ScenarioSpec &s)
    {
        std::ostringstream os;
        os << "n_clusters = " << s.n_clusters << '\n'
           << "paths_per_cluster = " << join(s.paths_per_cluster) << '\n'
           << "max_delay_s = " << io::format_double(s.max_delay_s) << '\n'
           << "cluster_delay_min_s = " << io::format_double(s.cluster_delay_min_s) << '\n'
           << "cluster_delay_max_s = " << io::format_double(s.cluster_delay_max_s) << '\n'
           << "cluster_angle_extent = " << io::format_double(s.cluster_angle_extent) << '\n'
           << "delay_spread_s = " << io::format_double(s.delay_spread_s) << '\n'
           << "aod_spread = " << io::format_double(s.aod_spread) << '\n'
           << "aoa_spread = " << io::format_double(s.aoa_spread) << '\n';
        if (!s.cluster_offsets_db.empty())
            os << "cluster_offsets_db = " << join(s.cluster_offsets_db) << '\n';
        os << "cluster_decay_db = " << io::format_double(s.cluster_decay_db) << '\n'
           << "path_spread_db = " << io::format_double(s.path_spread_db) << '\n'
           << "dynamic_range_db = " << io::format_double(s.dynamic_range_db) << '\n';
        if (s.enforces_separation())
            os << "separation_delay_s = " << io::format_double(s.separation_delay_s) << '\n'
               << "separation_aod = " << io::format_double(s.separation_aod) << '\n'
               << "separation_aoa = " << io::format_double(s.separation_aoa) << '\n';
        os << "seed = " << s.seed << '\n';
        return os.str();
    }

    Scenario generate_scenario(const ScenarioSpec &spec)
    {
        spec.validate();
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::exponential_distribution<double> expo(1.0);

        Scenario out;
        std::vector<std::size_t> cluster;
        for (std::size_t c = 0; c < spec.n_clusters; ++c)
        {
            const double tau_c =
                spec.cluster_delay_min_s + (spec.cluster_delay_max_s - spec.cluster_delay_min_s) * unit(rng);
            const double aod_c = spec.cluster_angle_extent * (2.0 * unit(rng) - 1.0);
            const double aoa_c = spec.cluster_angle_extent * (2.0 * unit(rng) - 1.0);
            const double offset_db = spec.cluster_offsets_db.empty() ? -static_cast<double>(c) * spec.cluster_decay_db
                                                                     : spec.cluster_offsets_db[c];

            for (std::size_t n = 0; n < spec.paths_in_cluster(c); ++n)
            {
                PathParams p;
                for (std::size_t attempt = 0;; ++attempt)
                {
                    if (attempt == max_attempts)
                        throw DomainError("Cannot place path " + std::to_string(n) + " of cluster " +
                                          std::to_string(c) + " at the requested separation; widen the spreads.");
                    do
                        p.delay = tau_c + spec.delay_spread_s * expo(rng);
                    while (p.delay >= spec.max_delay_s);
                    do
                        p.aod = aod_c + spec.aod_spread * normal(rng);
                    while (p.aod < -0.5 || p.aod > 0.5);
                    do
                        p.aoa = aoa_c + spec.aoa_spread * normal(rng);
                    while (p.aoa < -0.5 || p.aoa > 0.5);
                    if (!spec.enforces_separation() || separated(spec, p, out.generated))
                        break;
                }
                const double power_db = offset_db + spec.path_spread_db * normal(rng);
                p.gain = std::polar(std::pow(10.0, power_db / 20.0), two_pi * unit(rng));
                out.generated.push_back(p);
                cluster.push_back(c);
            }
        }

        const double max_power =
            std::max_element(out.generated.begin(), out.generated.end(), [](const auto &a, const auto &b) {
                return a.power() < b.power();
            })->power();
        out.retained = filter_by_dynamic_range(out.generated, spec.dynamic_range_db);
        const double threshold = max_power / std::pow(10.0, spec.dynamic_range_db / 10.0);
        for (std::size_t i = 0; i < out.generated.size(); ++i)
            if (out.generated[i].power() >= threshold)
                out.cluster_of.push_back(cluster[i]);
        return out;
    }

    std::string scenario_sidecar(const ScenarioSpec &spec, const Scenario &scenario)
    {
        std::ostringstream os;
        os << "# scenario spec\n"
           << format_scenario_spec(spec) << "\n"
           << "# draws (std::mt19937_64, seeded with `seed`)\n"
           << "# cluster delay centre ~ uniform[cluster_delay_min_s, cluster_delay_max_s]\n"
           << "# cluster aod/aoa centre ~ uniform[-cluster_angle_extent, cluster_angle_extent]\n"
           << "# path delay = centre + exponential(mean delay_spread_s), redrawn if >= max_delay_s\n"
           << "# path aod/aoa = centre + normal(0, aod_spread/aoa_spread), redrawn outside [-0.5, 0.5]\n"
           << "# path power_db = cluster offset + normal(0, path_spread_db), phase ~ uniform[0, 2 pi)\n"
           << "# cluster offset = cluster_offsets_db[c] if given, else -c * cluster_decay_db\n"
           << "# with separation_* set, draws closer than unit normalized distance to an earlier path are repeated\n\n"
           << "generated_paths = " << scenario.generated.size() << '\n'
           << "retained_paths = " << scenario.retained.size() << '\n';
        return os.str();
    }
}
