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
#include "mpcx/channel_synth.hpp"
#include "mpcx/kernels.hpp"

#include <cmath>

namespace mpcx::kernels
{
    double pair_cost(const PathParams &phys, const PathParams &est, const ResolutionSpec &res)
    {
        const double da = wrap_cycles(phys.aoa - est.aoa) / res.aoa_res;
        const double dd = wrap_cycles(phys.aod - est.aod) / res.aod_res;
        const double dt = (phys.delay - est.delay) / res.delay_res;
        return da * da + dd * dd + dt * dt;
    }

    namespace serial
    {
        void synthesize(const SounderConfig &config, std::span<const PathParams> paths, CTensor3 &out)
        {
            const auto f = frequency_grid(config);
            for (std::size_t r = 0; r < config.n_rx; ++r)
                for (std::size_t t = 0; t < config.n_tx; ++t)
                    for (std::size_t k = 0; k < config.n_freq; ++k)
                    {
                        cplx acc{};
                        for (const auto &p : paths)
                        {
                            const double phase = two_pi * (p.aoa * static_cast<double>(r) -
                                                           p.aod * static_cast<double>(t) - p.delay * f[k]);
                            acc += p.gain * std::polar(1.0, phase);
                        }
                        out(r, t, k) = acc;
                    }
        }

        CTensor3 separable_transform(const CTensor3 &response, const SounderConfig &config,
                                     std::span<const double> aoa, std::span<const double> aod,
                                     std::span<const double> delay)
        {
            const std::size_t nr = config.n_rx, nt = config.n_tx, nf = config.n_freq;
            const std::size_t ma = aoa.size(), md = aod.size(), mt = delay.size();
            const auto f = frequency_grid(config);

            // frequency -> delay
            CTensor3 s1(nr, nt, mt);
            std::vector<cplx> ph(mt * nf);
            for (std::size_t m = 0; m < mt; ++m)
                for (std::size_t k = 0; k < nf; ++k)
                    ph[m * nf + k] = std::polar(1.0, two_pi * delay[m] * f[k]);
            for (std::size_t r = 0; r < nr; ++r)
                for (std::size_t t = 0; t < nt; ++t)
                    for (std::size_t m = 0; m < mt; ++m)
                    {
                        cplx acc{};
                        for (std::size_t k = 0; k < nf; ++k)
                            acc += response(r, t, k) * ph[m * nf + k];
                        s1(r, t, m) = acc;
                    }

            // tx -> AoD, weight a^T(theta)_t
            CTensor3 s2(nr, md, mt);
            for (std::size_t j = 0; j < md; ++j)
                for (std::size_t t = 0; t < nt; ++t)
                {
                    const cplx w = std::polar(1.0, two_pi * aod[j] * static_cast<double>(t));
                    for (std::size_t r = 0; r < nr; ++r)
                        for (std::size_t m = 0; m < mt; ++m)
                            s2(r, j, m) += w * s1(r, t, m);
                }

            // rx -> AoA, weight conj(a^R(theta))_r
            CTensor3 out(ma, md, mt);
            const double scale = 1.0 / static_cast<double>(nr * nt * nf);
            for (std::size_t i = 0; i < ma; ++i)
                for (std::size_t r = 0; r < nr; ++r)
                {
                    const cplx w = scale * std::polar(1.0, -two_pi * aoa[i] * static_cast<double>(r));
                    for (std::size_t j = 0; j < md; ++j)
                        for (std::size_t m = 0; m < mt; ++m)
                            out(i, j, m) += w * s2(r, j, m);
                }
            return out;
        }

        CTensor3 lattice_transform(const CTensor3 &response, const SounderConfig &config, const GridSpec &spec)
        {
            const auto axes = make_axes(config, spec);
            return separable_transform(response, config, axes.aoa, axes.aod, axes.delay);
        }

        std::size_t find_peak(std::span<const cplx> values)
        {
            std::size_t best = 0;
            double best_mag = -1.0;
            for (std::size_t i = 0; i < values.size(); ++i)
            {
                const double m = std::norm(values[i]);
                if (m > best_mag)
                {
                    best_mag = m;
                    best = i;
                }
            }
            return best;
        }

        void subtract_rank1(CTensor3 &values, cplx g, std::span<const cplx> u0,
                            std::span<const cplx> u1, std::span<const cplx> u2)
        {
            for (std::size_t i = 0; i < u0.size(); ++i)
                for (std::size_t j = 0; j < u1.size(); ++j)
                    for (std::size_t k = 0; k < u2.size(); ++k)
                        values(i, j, k) -= g * u0[i] * u1[j] * u2[k];
        }

        std::vector<cplx> evaluate_points(const CTensor3 &response, const SounderConfig &config,
                                          std::span<const Geometry> points)
        {
            std::vector<cplx> out(points.size());
            for (std::size_t p = 0; p < points.size(); ++p)
            {
                const double a[1] = {points[p].aoa}, d[1] = {points[p].aod}, t[1] = {points[p].delay};
                out[p] = separable_transform(response, config, a, d, t)(0, 0, 0);
            }
            return out;
        }

        std::vector<cplx> gram(const SounderConfig &config, std::span<const Geometry> geometry)
        {
            const std::size_t k = geometry.size();
            std::vector<cplx> g(k * k);
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t q = 0; q < k; ++q)
                {
                    const auto &a = geometry[p];
                    const auto &b = geometry[q];
                    g[p * k + q] = angle_kernel(b.aoa - a.aoa, config.n_rx) *
                                   angle_kernel(a.aod - b.aod, config.n_tx) *
                                   delay_kernel(a.delay - b.delay, config.bandwidth_hz, config.n_freq);
                }
            return g;
        }

        RealMatrix cost_matrix(std::span<const PathParams> phys, std::span<const PathParams> est,
                               const ResolutionSpec &res)
        {
            RealMatrix c(phys.size(), est.size());
            for (std::size_t i = 0; i < phys.size(); ++i)
                for (std::size_t j = 0; j < est.size(); ++j)
                    c(i, j) = pair_cost(phys[i], est[j], res);
            return c;
        }
    }
}
