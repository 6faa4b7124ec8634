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

#include "mpcx/extractor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mpcx
{
    void ExtractionConfig::validate() const
    {
        if (k_up == 0 || k_g == 0 || k_dom == 0)
            throw DomainError("ExtractionConfig: k_dom, k_g and k_up must be positive.");
        if (k_up > k_g)
            throw DomainError("ExtractionConfig: k_up must not exceed k_g.");
        if (k_g > k_dom)
            throw DomainError("ExtractionConfig: k_g must not exceed k_dom.");
        if (!(residual_stop >= 0.0))
            throw DomainError("ExtractionConfig: residual_stop must be non-negative.");
        if (grid.os_aoa == 0 || grid.os_aod == 0 || grid.os_delay == 0)
            throw DomainError("ExtractionConfig: oversampling factors must be positive.");
    }

    std::vector<kernels::Geometry> geometry_of(std::span<const PathParams> paths)
    {
        std::vector<kernels::Geometry> g;
        g.reserve(paths.size());
        for (const auto &p : paths)
            g.push_back({p.aoa, p.aod, p.delay});
        return g;
    }

    Peak find_peak(const BeamspaceGrid &grid)
    {
        Peak pk;
        if (grid.values.empty())
            return pk;
        const std::size_t idx = kernels::parallel::find_peak(grid.values.values());
        const std::size_t nd = grid.values.dim(1), nt = grid.values.dim(2);
        pk.aoa_index = idx / (nd * nt);
        pk.aod_index = (idx / nt) % nd;
        pk.delay_index = idx % nt;
        pk.aoa = grid.axes.aoa[pk.aoa_index];
        pk.aod = grid.axes.aod[pk.aod_index];
        pk.delay = grid.axes.delay[pk.delay_index];
        pk.value = grid.values.data()[idx];
        return pk;
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

        // Vertex offset (in samples, within [-0.5, 0.5]) of the parabola through three magnitudes
        double parabola_offset(double ym, double y0, double yp)
        {
            const double den = ym - 2.0 * y0 + yp;
            if (!(den < 0.0))
                return 0.0;
            return std::clamp(0.5 * (ym - yp) / den, -0.5, 0.5);
        }

        // Beamspace value of (response - sum of pending paths) at an arbitrary point
        cplx residual_value(const FrequencyResponse &response, std::span<const PathParams> pending,
                            double aoa, double aod, double delay)
        {
            const auto &c = response.config;
            cplx v = evaluate_beamspace(response, aoa, aod, delay);
            for (const auto &p : pending)
                v -= p.gain * std::conj(angle_kernel(aoa - p.aoa, c.n_rx)) * angle_kernel(aod - p.aod, c.n_tx) *
                     delay_kernel(delay - p.delay, c.bandwidth_hz, c.n_freq);
            return v;
        }

        Peak refine_with_pending(const BeamspaceGrid &grid, const FrequencyResponse &response,
                                 std::span<const PathParams> pending, const Peak &peak)
        {
            const auto &v = grid.values;
            const std::size_t na = v.dim(0), nd = v.dim(1), nt = v.dim(2);
            const std::size_t ia = peak.aoa_index, id = peak.aod_index, it = peak.delay_index;
            const double y0 = std::abs(v(ia, id, it));

            Peak out = peak;
            {
                const double ym = std::abs(v((ia + na - 1) % na, id, it));
                const double yp = std::abs(v((ia + 1) % na, id, it));
                double a = peak.aoa + parabola_offset(ym, y0, yp) / static_cast<double>(na);
                if (a >= 0.5)
                    a -= 1.0;
                out.aoa = std::max(a, -0.5);
            }
            {
                const double ym = std::abs(v(ia, (id + nd - 1) % nd, it));
                const double yp = std::abs(v(ia, (id + 1) % nd, it));
                double a = peak.aod + parabola_offset(ym, y0, yp) / static_cast<double>(nd);
                if (a >= 0.5)
                    a -= 1.0;
                out.aod = std::max(a, -0.5);
            }
            if (it > 0 && it + 1 < nt)
            {
                const double ym = std::abs(v(ia, id, it - 1));
                const double yp = std::abs(v(ia, id, it + 1));
                const double step = grid.axes.delay[1] - grid.axes.delay[0];
                out.delay = peak.delay + parabola_offset(ym, y0, yp) * step;
            }
            out.value = residual_value(response, pending, out.aoa, out.aod, out.delay);
            return out;
        }

        // Ordered most-correlated column pair of a normalized Gram matrix
        std::pair<std::size_t, std::size_t> most_correlated(const std::vector<cplx> &g, std::size_t k)
        {
            std::pair<std::size_t, std::size_t> best{0, k > 1 ? 1 : 0};
            double best_mag = -1.0;
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t q = p + 1; q < k; ++q)
                {
                    const double m = std::abs(g[p * k + q]);
                    if (m > best_mag)
                    {
                        best_mag = m;
                        best = {p, q};
                    }
                }
            return best;
        }

        // ls_solve, dropping the later member of any degenerate pair until the system is solvable
        LsSolution ls_solve_dropping(const FrequencyResponse &response, PathList &paths,
                                     std::vector<std::string> &notes)
        {
            for (;;)
            {
                const auto geo = geometry_of(paths);
                try
                {
                    return ls_solve(response, geo);
                }
                catch (const DegenerateGeometryError &e)
                {
                    std::ostringstream os;
                    os << "dropped candidate " << e.second() << " (near-duplicate of " << e.first()
                       << ", condition " << e.condition() << ")";
                    notes.push_back(os.str());
                    paths.erase(paths.begin() + static_cast<std::ptrdiff_t>(e.second()));
                }
            }
        }

        void subtract_response(FrequencyResponse &target, const PathParams &path, CTensor3 &scratch)
        {
            kernels::parallel::synthesize(target.config, {&path, 1}, scratch);
            auto dst = target.values.values();
            auto src = scratch.values();
            for (std::size_t i = 0; i < dst.size(); ++i)
                dst[i] -= src[i];
        }
    }

    Peak refine_peak(const BeamspaceGrid &grid, const FrequencyResponse &response, const Peak &peak)
    {
        check_response(response);
        return refine_with_pending(grid, response, {}, peak);
    }

    PathList greedy_extract(const FrequencyResponse &response, const GridSpec &spec, std::size_t count)
    {
        check_response(response);
        if (count == 0)
            throw DomainError("greedy_extract: count must be at least 1.");

        BeamspaceGrid grid = beamspace_transform(response, spec);
        PathList found;
        for (std::size_t k = 0; k < count; ++k)
        {
            const Peak pk = find_peak(grid);
            if (pk.value == cplx{})
                break;
            const PathParams p{pk.value, pk.delay, pk.aod, pk.aoa};
            found.push_back(p);
            subtract_path(grid, p);
        }
        return found;
    }

    LsSolution ls_solve(const FrequencyResponse &response, std::span<const kernels::Geometry> geometry)
    {
        check_response(response);
        const std::size_t k = geometry.size();
        LsSolution sol;
        if (k == 0)
            return sol;
        if (k >= signal_space_dimension(response.config))
            throw DomainError("ls_amplitudes: more columns than the signal-space dimension.");

        const auto gram = kernels::parallel::gram(response.config, geometry);
        const auto rhs = kernels::parallel::evaluate_points(response.values, response.config, geometry);

        const auto kk = static_cast<Eigen::Index>(k);
        const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> g(gram.data(), kk, kk);
        const Eigen::Map<const Eigen::VectorXcd> b(rhs.data(), kk);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g, Eigen::EigenvaluesOnly);
        const double lmax = eig.eigenvalues().maxCoeff();
        const double lmin = eig.eigenvalues().minCoeff();
        sol.condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
        if (!(sol.condition <= max_gram_condition))
        {
            const auto [p, q] = most_correlated(gram, k);
            std::ostringstream os;
            os << "ls_amplitudes: degenerate geometry, columns " << p << " and " << q
               << " are near-duplicates (condition estimate " << sol.condition << ")";
            throw DegenerateGeometryError(os.str(), p, q, sol.condition);
        }

        const Eigen::VectorXcd x = g.ldlt().solve(b);
        sol.amplitudes.assign(x.data(), x.data() + k);
        return sol;
    }

    std::vector<cplx> ls_amplitudes(const FrequencyResponse &response, std::span<const kernels::Geometry> geometry)
    {
        return ls_solve(response, geometry).amplitudes;
    }

    ExtractionResult greedy_ls(const FrequencyResponse &response, const ExtractionConfig &xcfg)
    {
        check_response(response);
        xcfg.validate();

        ExtractionResult res;
        const double initial = response_power(response);
        if (initial == 0.0)
            return res;

        FrequencyResponse residual = response;
        double current = initial;
        CTensor3 scratch(response.config.n_rx, response.config.n_tx, response.config.n_freq);
        BeamspaceGrid grid = beamspace_transform(residual, xcfg.grid);

        while (res.paths.size() < xcfg.k_dom)
        {
            if (current <= xcfg.residual_stop * initial)
                break;

            // (1) detect k_g candidates by peak-pick-and-subtract on the residual grid
            PathList cands;
            for (std::size_t c = 0; c < xcfg.k_g; ++c)
            {
                Peak pk = find_peak(grid);
                if (pk.value == cplx{})
                    break;
                if (xcfg.subgrid_refine)
                    pk = refine_with_pending(grid, residual, cands, pk);
                const PathParams p{pk.value, pk.delay, pk.aod, pk.aoa};
                cands.push_back(p);
                subtract_path(grid, p);
            }
            if (cands.empty())
                break;

            // (2) refit candidate amplitudes against the current residual
            const LsSolution sol = ls_solve_dropping(residual, cands, res.notes);
            res.trace.ls_condition.push_back(sol.condition);
            for (std::size_t i = 0; i < cands.size(); ++i)
                cands[i].gain = sol.amplitudes[i];

            // (3) commit the strongest k_up, exact frequency-domain subtraction
            std::vector<std::size_t> order(cands.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return cands[a].power() > cands[b].power();
            });
            const std::size_t n_commit = std::min({xcfg.k_up, xcfg.k_dom - res.paths.size(), cands.size()});

            std::size_t committed = 0;
            for (std::size_t c = 0; c < n_commit; ++c)
            {
                PathParams p = cands[order[c]];
                FrequencyResponse trial = residual;
                subtract_response(trial, p, scratch);
                double pw = response_power(trial);
                if (pw > current)
                {
                    // the joint fit does not reduce the residual on its own; use the single-column projection
                    p.gain = evaluate_beamspace(residual, p.aoa, p.aod, p.delay);
                    trial = residual;
                    subtract_response(trial, p, scratch);
                    pw = response_power(trial);
                    std::ostringstream os;
                    os << "commit " << res.paths.size() << ": joint LS amplitude replaced by projection";
                    res.notes.push_back(os.str());
                    if (pw > current)
                        continue;
                }
                residual = std::move(trial);
                current = pw;
                res.paths.push_back(p);
                res.trace.residual_power.push_back(pw);
                res.trace.committed_gain_power.push_back(p.power());
                ++committed;
            }
            if (committed == 0)
                break;

            grid = beamspace_transform(residual, xcfg.grid);
        }

        if (xcfg.final_global_ls && !res.paths.empty())
        {
            const LsSolution sol = ls_solve_dropping(response, res.paths, res.notes);
            for (std::size_t i = 0; i < res.paths.size(); ++i)
                res.paths[i].gain = sol.amplitudes[i];
        }
        return res;
    }

    FrequencyResponse reconstruct(std::span<const PathParams> paths, const SounderConfig &config)
    {
        return synthesize_response(config, paths);
    }

    double reconstruction_error(const FrequencyResponse &estimate, const FrequencyResponse &truth)
    {
        if (!estimate.values.same_shape(truth.values))
            throw ShapeError("reconstruction_error: estimate and truth shapes differ.");
        const double denom = total_power(truth.values.values());
        if (denom == 0.0)
            throw DomainError("reconstruction_error: truth response has zero power.");
        double num = 0.0;
        const auto a = estimate.values.values();
        const auto b = truth.values.values();
        for (std::size_t i = 0; i < a.size(); ++i)
            num += std::norm(a[i] - b[i]);
        return num / denom;
    }

    SageResult sage_refine(const FrequencyResponse &response, std::span<const PathParams> paths,
                           const GridSpec &spec, std::size_t sweeps)
    {
        check_response(response);
        if (paths.empty())
            throw DomainError("sage_refine: empty initial path list.");
        if (sweeps == 0)
            throw DomainError("sage_refine: at least one sweep is required.");

        const auto &cfg = response.config;
        SageResult out;
        out.paths.assign(paths.begin(), paths.end());

        // residual = response - sum of all current path responses
        FrequencyResponse residual = response;
        CTensor3 scratch(cfg.n_rx, cfg.n_tx, cfg.n_freq);
        for (const auto &p : out.paths)
            subtract_response(residual, p, scratch);

        for (std::size_t s = 0; s < sweeps; ++s)
        {
            for (auto &path : out.paths)
            {
                // E-step: measurement minus every other path
                FrequencyResponse isolated = residual;
                kernels::parallel::synthesize(cfg, {&path, 1}, scratch);
                {
                    auto dst = isolated.values.values();
                    auto src = scratch.values();
                    for (std::size_t i = 0; i < dst.size(); ++i)
                        dst[i] += src[i];
                }

                // M-step: grid peak of the isolated component; never worse than re-fitting in place
                const BeamspaceGrid grid = beamspace_transform(isolated, spec);
                const Peak pk = find_peak(grid);
                const cplx in_place = evaluate_beamspace(isolated, path.aoa, path.aod, path.delay);
                PathParams next = path;
                if (std::norm(pk.value) >= std::norm(in_place))
                    next = {pk.value, pk.delay, pk.aod, pk.aoa};
                else
                    next.gain = in_place;

                // accept only updates that do not raise the residual; at a fixed point rounding
                // noise would otherwise make the per-sweep error drift upwards
                subtract_response(isolated, next, scratch);
                if (total_power(isolated.values.values()) <= total_power(residual.values.values()))
                {
                    residual = std::move(isolated);
                    path = next;
                }
            }
            const double denom = total_power(response.values.values());
            out.error_per_sweep.push_back(denom == 0.0 ? 0.0 : total_power(residual.values.values()) / denom);
        }
        return out;
    }
}
