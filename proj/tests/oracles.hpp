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

// Independent reference evaluations used by the tests. Everything here is written from
// the defining sums, without the closed forms or FFTs the library relies on.

#include "mpcx/association.hpp"
#include "mpcx/channel_synth.hpp"
#include "mpcx/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle
{
    using mpcx::cplx;

    inline cplx expj(double phase) { return {std::cos(phase), std::sin(phase)}; }

    inline double freq(const mpcx::SounderConfig &c, std::size_t k)
    {
        return -0.5 * c.bandwidth_hz + static_cast<double>(k) * c.bandwidth_hz / static_cast<double>(c.n_freq);
    }

    // H[r, t, k] summed path by path with scalar loops
    inline mpcx::CTensor3 synthesize(const mpcx::SounderConfig &c, const mpcx::PathList &paths)
    {
        mpcx::CTensor3 h(c.n_rx, c.n_tx, c.n_freq);
        for (std::size_t r = 0; r < c.n_rx; ++r)
            for (std::size_t t = 0; t < c.n_tx; ++t)
                for (std::size_t k = 0; k < c.n_freq; ++k)
                {
                    cplx acc{};
                    for (const auto &p : paths)
                        acc += p.gain * expj(mpcx::two_pi * p.aoa * double(r)) *
                               expj(-mpcx::two_pi * p.aod * double(t)) *
                               expj(-mpcx::two_pi * p.delay * freq(c, k));
                    h(r, t, k) = acc;
                }
        return h;
    }

    // Full (1 / (Nr Nt Nf)) sum over r, t, k at one beamspace point
    inline cplx beamspace_point(const mpcx::CTensor3 &h, const mpcx::SounderConfig &c, double aoa, double aod,
                                double delay)
    {
        cplx acc{};
        for (std::size_t r = 0; r < c.n_rx; ++r)
            for (std::size_t t = 0; t < c.n_tx; ++t)
                for (std::size_t k = 0; k < c.n_freq; ++k)
                    acc += std::conj(expj(mpcx::two_pi * aoa * double(r))) * h(r, t, k) *
                           expj(mpcx::two_pi * aod * double(t)) * expj(mpcx::two_pi * delay * freq(c, k));
        return acc / double(c.n_rx * c.n_tx * c.n_freq);
    }

    inline cplx mean_exp(double cycles_per_step, std::size_t n)
    {
        cplx acc{};
        for (std::size_t m = 0; m < n; ++m)
            acc += expj(mpcx::two_pi * cycles_per_step * double(m));
        return acc / double(n);
    }

    inline cplx delay_mean(double dtau, const mpcx::SounderConfig &c)
    {
        cplx acc{};
        for (std::size_t k = 0; k < c.n_freq; ++k)
            acc += expj(mpcx::two_pi * dtau * freq(c, k));
        return acc / double(c.n_freq);
    }

    // Materialized dictionary: one column per path, flattened (r, t, k) row-major
    inline Eigen::MatrixXcd dictionary(const mpcx::SounderConfig &c, const mpcx::PathList &geometry)
    {
        Eigen::MatrixXcd a(Eigen::Index(c.n_rx * c.n_tx * c.n_freq), Eigen::Index(geometry.size()));
        for (std::size_t q = 0; q < geometry.size(); ++q)
        {
            mpcx::PathParams unit = geometry[q];
            unit.gain = 1.0;
            const auto col = synthesize(c, {unit});
            for (std::size_t i = 0; i < col.size(); ++i)
                a(Eigen::Index(i), Eigen::Index(q)) = col.data()[i];
        }
        return a;
    }

    // Least-squares amplitudes via the complete orthogonal decomposition pseudo-inverse
    inline std::vector<cplx> pinv_amplitudes(const mpcx::CTensor3 &h, const mpcx::SounderConfig &c,
                                             const mpcx::PathList &geometry)
    {
        const Eigen::MatrixXcd a = dictionary(c, geometry);
        Eigen::VectorXcd y(Eigen::Index(h.size()));
        for (std::size_t i = 0; i < h.size(); ++i)
            y(Eigen::Index(i)) = h.data()[i];
        const Eigen::VectorXcd x = a.completeOrthogonalDecomposition().pseudoInverse() * y;
        return {x.data(), x.data() + x.size()};
    }

    // Exhaustive minimum over all partial matchings; each unmatched row and column costs um
    inline double best_assignment(const mpcx::RealMatrix &cost, double um)
    {
        const std::size_t n = cost.rows(), m = cost.cols();
        double best = std::numeric_limits<double>::infinity();
        std::vector<bool> used(m, false);
        // depth-first over rows; a row either takes a free column or stays unmatched
        auto rec = [&](auto &&self, std::size_t row, double acc, std::size_t matched) -> void {
            if (acc >= best)
                return;
            if (row == n)
            {
                best = std::min(best, acc + um * double(m - matched));
                return;
            }
            self(self, row + 1, acc + um, matched);
            for (std::size_t j = 0; j < m; ++j)
                if (!used[j])
                {
                    used[j] = true;
                    self(self, row + 1, acc + cost(row, j), matched + 1);
                    used[j] = false;
                }
        };
        rec(rec, 0, 0.0, 0);
        return best;
    }

    inline double rel_diff(const mpcx::CTensor3 &a, const mpcx::CTensor3 &b)
    {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            num += std::norm(a.data()[i] - b.data()[i]);
            den += std::norm(b.data()[i]);
        }
        return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
    }

    inline mpcx::SounderConfig desk() { return {8, 8, 1.0e9, 32, 28.0e9}; }
    inline mpcx::SounderConfig tiny() { return {4, 4, 1.0e9, 16, 28.0e9}; }

    inline cplx random_gain(std::mt19937_64 &rng, double min_db, double max_db)
    {
        std::uniform_real_distribution<double> db(min_db, max_db), ph(0.0, mpcx::two_pi);
        return std::polar(std::pow(10.0, db(rng) / 20.0), ph(rng));
    }

    // Random path anywhere in the observation window
    inline mpcx::PathParams random_path(std::mt19937_64 &rng, const mpcx::SounderConfig &c)
    {
        std::uniform_real_distribution<double> ang(-0.5, 0.5), del(0.0, c.duration());
        mpcx::PathParams p;
        p.gain = random_gain(rng, -20.0, 0.0);
        p.aoa = ang(rng);
        p.aod = ang(rng);
        p.delay = del(rng);
        return p;
    }

    // Paths on the critical lattice (i / Nr, k / Nt, l / W), pairwise at least min_sep bins apart on some axis
    inline mpcx::PathList on_grid_paths(std::mt19937_64 &rng, const mpcx::SounderConfig &c, std::size_t count,
                                        double dr_db, int min_sep = 2, std::size_t max_delay_bin = 0)
    {
        const int nr = int(c.n_rx), nt = int(c.n_tx);
        const int nd = int(max_delay_bin ? max_delay_bin : c.n_freq);
        std::uniform_int_distribution<int> ia(0, nr - 1), id(0, nt - 1), il(0, nd - 1);
        struct Idx
        {
            int a, d, l;
        };
        std::vector<Idx> taken;
        mpcx::PathList out;
        auto circ = [](int x, int y, int n) {
            const int d = std::abs(x - y) % n;
            return std::min(d, n - d);
        };
        while (out.size() < count)
        {
            const Idx idx{ia(rng), id(rng), il(rng)};
            bool ok = true;
            for (const auto &t : taken)
                if (circ(idx.a, t.a, nr) < min_sep && circ(idx.d, t.d, nt) < min_sep && std::abs(idx.l - t.l) < min_sep)
                    ok = false;
            if (!ok)
                continue;
            taken.push_back(idx);
            mpcx::PathParams p;
            p.gain = random_gain(rng, -dr_db, 0.0);
            p.aoa = -0.5 + double(idx.a) / nr;
            p.aod = -0.5 + double(idx.d) / nt;
            p.delay = double(idx.l) / c.bandwidth_hz;
            out.push_back(p);
        }
        return out;
    }
}
