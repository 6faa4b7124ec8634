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

#include <fftw3.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>

namespace mpcx::kernels
{
    int max_threads()
    {
#ifdef _OPENMP
        return omp_get_max_threads();
#else
        return 1;
#endif
    }

    void set_threads(int n)
    {
#ifdef _OPENMP
        omp_set_num_threads(std::max(1, n));
#else
        (void)n;
#endif
    }

    namespace
    {
        // FFTW planning is not thread-safe; execution of an existing plan is.
        std::mutex &planner_mutex()
        {
            static std::mutex m;
            return m;
        }

        struct FftwFree
        {
            void operator()(void *p) const { fftw_free(p); }
        };
        using FftwBuffer = std::unique_ptr<cplx[], FftwFree>;

        FftwBuffer fftw_buffer(std::size_t n)
        {
            auto *p = static_cast<cplx *>(fftw_malloc(sizeof(cplx) * std::max<std::size_t>(n, 1)));
            if (!p)
                throw std::bad_alloc();
            return FftwBuffer(p);
        }

        fftw_complex *as_fftw(cplx *p) { return reinterpret_cast<fftw_complex *>(p); }

        // In-place batch of `batch` interleaved transforms of length n: element (i, b) at i * batch + b
        class BatchPlan
        {
        public:
            BatchPlan(std::size_t n, std::size_t batch, int sign)
            {
                if (n == 0 || batch == 0)
                    return;
                auto probe = fftw_buffer(n * batch);
                const int len = static_cast<int>(n);
                const int stride = static_cast<int>(batch);
                std::lock_guard<std::mutex> lock(planner_mutex());
                plan_ = fftw_plan_many_dft(1, &len, stride, as_fftw(probe.get()), nullptr, stride, 1,
                                           as_fftw(probe.get()), nullptr, stride, 1, sign, FFTW_ESTIMATE);
                if (!plan_)
                    throw std::runtime_error("FFTW planning failed.");
            }
            ~BatchPlan()
            {
                if (plan_)
                {
                    std::lock_guard<std::mutex> lock(planner_mutex());
                    fftw_destroy_plan(plan_);
                }
            }
            BatchPlan(const BatchPlan &) = delete;
            BatchPlan &operator=(const BatchPlan &) = delete;

            // buffer must come from fftw_buffer (same alignment as the planning probe)
            void run(cplx *buffer) const
            {
                if (plan_)
                    fftw_execute_dft(plan_, as_fftw(buffer), as_fftw(buffer));
            }

        private:
            fftw_plan plan_ = nullptr;
        };

        constexpr std::size_t line_block = 16;
    }

    namespace parallel
    {
        void synthesize(const SounderConfig &config, std::span<const PathParams> paths, CTensor3 &out)
        {
            const std::size_t nr = config.n_rx, nt = config.n_tx, nf = config.n_freq, np = paths.size();
            const auto f = frequency_grid(config);

            std::vector<cplx> ur(np * nr), ut(np * nt), uf(np * nf);
            for (std::size_t p = 0; p < np; ++p)
            {
                const auto &path = paths[p];
                for (std::size_t r = 0; r < nr; ++r)
                    ur[p * nr + r] = path.gain * std::polar(1.0, two_pi * path.aoa * static_cast<double>(r));
                for (std::size_t t = 0; t < nt; ++t)
                    ut[p * nt + t] = std::polar(1.0, -two_pi * path.aod * static_cast<double>(t));
                for (std::size_t k = 0; k < nf; ++k)
                    uf[p * nf + k] = std::polar(1.0, -two_pi * path.delay * f[k]);
            }

            std::fill(out.values().begin(), out.values().end(), cplx{});
            const auto nr_i = static_cast<std::ptrdiff_t>(nr);
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t ri = 0; ri < nr_i; ++ri)
            {
                const auto r = static_cast<std::size_t>(ri);
                for (std::size_t p = 0; p < np; ++p)
                {
                    const cplx cr = ur[p * nr + r];
                    const cplx *fp = &uf[p * nf];
                    for (std::size_t t = 0; t < nt; ++t)
                    {
                        const cplx c = cr * ut[p * nt + t];
                        cplx *row = &out(r, t, 0);
                        for (std::size_t k = 0; k < nf; ++k)
                            row[k] += c * fp[k];
                    }
                }
            }
        }

        CTensor3 lattice_transform(const CTensor3 &response, const SounderConfig &config, const GridSpec &spec)
        {
            const auto axes = make_axes(config, spec);
            const std::size_t nr = config.n_rx, nt = config.n_tx, nf = config.n_freq;
            const std::size_t ma = axes.aoa.size(), md = axes.aod.size(), mt = axes.delay.size();
            const std::size_t lf = nf * spec.os_delay; // delay FFT length, mt <= lf

            CTensor3 out(ma, md, mt);
            const double scale = 1.0 / static_cast<double>(nr * nt * nf);

            // delay samples tau_m = m / (W os): exp(j2pi tau_m f_k) = exp(-j pi m / os) exp(+j2pi m k / lf)
            std::vector<cplx> delay_phase(mt);
            for (std::size_t m = 0; m < mt; ++m)
                delay_phase[m] = scale * std::polar(1.0, -pi * static_cast<double>(m) / static_cast<double>(spec.os_delay));

            // Stage 1: frequency -> delay for every (r, t); results land at out(r, t, :)
            {
                BatchPlan plan(lf, 1, FFTW_BACKWARD);
                const auto lines = static_cast<std::ptrdiff_t>(nr * nt);
#pragma omp parallel
                {
                    auto buf = fftw_buffer(lf);
#pragma omp for schedule(static)
                    for (std::ptrdiff_t li = 0; li < lines; ++li)
                    {
                        const auto r = static_cast<std::size_t>(li) / nt;
                        const auto t = static_cast<std::size_t>(li) % nt;
                        std::fill(buf.get(), buf.get() + lf, cplx{});
                        std::copy_n(&response(r, t, 0), nf, buf.get());
                        plan.run(buf.get());
                        cplx *dst = &out(r, t, 0);
                        for (std::size_t m = 0; m < mt; ++m)
                            dst[m] = buf[m] * delay_phase[m];
                    }
                }
            }

            // Stage 2: tx -> AoD. a^T(theta_j)_t = (-1)^t exp(+j2pi j t / md)
            // Stage 3: rx -> AoA. conj(a^R(theta_i))_r = (-1)^r exp(-j2pi i r / ma)
            // Both process `line_block` consecutive delay columns at once so gathers stay contiguous.
            auto axis_pass = [&](std::size_t n_in, std::size_t n_out, int sign, std::size_t outer,
                                 std::size_t in_stride, std::size_t base_stride) {
                BatchPlan full(n_out, line_block, sign);
                const std::size_t rem = mt % line_block;
                BatchPlan tail(n_out, rem, sign);
                const std::size_t blocks_per_outer = (mt + line_block - 1) / line_block;
                const auto jobs = static_cast<std::ptrdiff_t>(outer * blocks_per_outer);
#pragma omp parallel
                {
                    auto buf = fftw_buffer(n_out * line_block);
#pragma omp for schedule(static)
                    for (std::ptrdiff_t job = 0; job < jobs; ++job)
                    {
                        const auto o = static_cast<std::size_t>(job) / blocks_per_outer;
                        const auto m0 = (static_cast<std::size_t>(job) % blocks_per_outer) * line_block;
                        const std::size_t width = std::min(line_block, mt - m0);
                        cplx *base = out.data() + o * base_stride + m0;

                        std::fill(buf.get(), buf.get() + n_out * width, cplx{});
                        for (std::size_t i = 0; i < n_in; ++i)
                        {
                            const cplx *src = base + i * in_stride;
                            const double s = (i % 2 == 0) ? 1.0 : -1.0;
                            for (std::size_t b = 0; b < width; ++b)
                                buf[i * width + b] = s * src[b];
                        }
                        (width == line_block ? full : tail).run(buf.get());
                        for (std::size_t i = 0; i < n_out; ++i)
                            std::copy_n(&buf[i * width], width, base + i * in_stride);
                    }
                }
            };

            // AoD: for each r < nr, lines along axis 1 with stride mt
            axis_pass(nt, md, FFTW_BACKWARD, nr, mt, md * mt);
            // AoA: for each AoD index j, lines along axis 0 with stride md * mt
            axis_pass(nr, ma, FFTW_FORWARD, md, md * mt, mt);
            return out;
        }

        std::size_t find_peak(std::span<const cplx> values)
        {
            const auto n = static_cast<std::ptrdiff_t>(values.size());
            const int threads = max_threads();
            std::vector<std::size_t> best_idx(static_cast<std::size_t>(threads), 0);
            std::vector<double> best_mag(static_cast<std::size_t>(threads), -1.0);

#pragma omp parallel num_threads(threads)
            {
#ifdef _OPENMP
                const auto tid = static_cast<std::size_t>(omp_get_thread_num());
#else
                const std::size_t tid = 0;
#endif
                std::size_t bi = 0;
                double bm = -1.0;
#pragma omp for schedule(static)
                for (std::ptrdiff_t i = 0; i < n; ++i)
                {
                    const double m = std::norm(values[static_cast<std::size_t>(i)]);
                    if (m > bm)
                    {
                        bm = m;
                        bi = static_cast<std::size_t>(i);
                    }
                }
                best_idx[tid] = bi;
                best_mag[tid] = bm;
            }

            // static schedule: thread t owns a lower index range than thread t+1
            std::size_t best = 0;
            double bm = -1.0;
            for (std::size_t t = 0; t < best_idx.size(); ++t)
                if (best_mag[t] > bm)
                {
                    bm = best_mag[t];
                    best = best_idx[t];
                }
            return best;
        }

        void subtract_rank1(CTensor3 &values, cplx g, std::span<const cplx> u0,
                            std::span<const cplx> u1, std::span<const cplx> u2)
        {
            const auto n0 = static_cast<std::ptrdiff_t>(u0.size());
            const std::size_t n1 = u1.size(), n2 = u2.size();
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t ii = 0; ii < n0; ++ii)
            {
                const auto i = static_cast<std::size_t>(ii);
                const cplx gi = g * u0[i];
                for (std::size_t j = 0; j < n1; ++j)
                {
                    const cplx c = gi * u1[j];
                    cplx *row = &values(i, j, 0);
                    for (std::size_t k = 0; k < n2; ++k)
                        row[k] -= c * u2[k];
                }
            }
        }

        std::vector<cplx> evaluate_points(const CTensor3 &response, const SounderConfig &config,
                                          std::span<const Geometry> points)
        {
            const std::size_t nr = config.n_rx, nt = config.n_tx, nf = config.n_freq;
            const auto f = frequency_grid(config);
            const double scale = 1.0 / static_cast<double>(nr * nt * nf);
            std::vector<cplx> out(points.size());
            const auto np = static_cast<std::ptrdiff_t>(points.size());

#pragma omp parallel
            {
                std::vector<cplx> wf(nf), wt(nt);
#pragma omp for schedule(static)
                for (std::ptrdiff_t pi_ = 0; pi_ < np; ++pi_)
                {
                    const auto &g = points[static_cast<std::size_t>(pi_)];
                    for (std::size_t k = 0; k < nf; ++k)
                        wf[k] = std::polar(1.0, two_pi * g.delay * f[k]);
                    for (std::size_t t = 0; t < nt; ++t)
                        wt[t] = std::polar(1.0, two_pi * g.aod * static_cast<double>(t));
                    cplx acc{};
                    for (std::size_t r = 0; r < nr; ++r)
                    {
                        cplx acc_r{};
                        for (std::size_t t = 0; t < nt; ++t)
                        {
                            const cplx *row = &response(r, t, 0);
                            cplx acc_t{};
                            for (std::size_t k = 0; k < nf; ++k)
                                acc_t += row[k] * wf[k];
                            acc_r += wt[t] * acc_t;
                        }
                        acc += std::polar(1.0, -two_pi * g.aoa * static_cast<double>(r)) * acc_r;
                    }
                    out[static_cast<std::size_t>(pi_)] = scale * acc;
                }
            }
            return out;
        }

        std::vector<cplx> gram(const SounderConfig &config, std::span<const Geometry> geometry)
        {
            const std::size_t k = geometry.size();
            std::vector<cplx> g(k * k);
            const auto kk = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(dynamic, 8)
            for (std::ptrdiff_t pp = 0; pp < kk; ++pp)
            {
                const auto p = static_cast<std::size_t>(pp);
                const auto &a = geometry[p];
                g[p * k + p] = {1.0, 0.0};
                for (std::size_t q = p + 1; q < k; ++q)
                {
                    const auto &b = geometry[q];
                    const cplx v = angle_kernel(b.aoa - a.aoa, config.n_rx) *
                                   angle_kernel(a.aod - b.aod, config.n_tx) *
                                   delay_kernel(a.delay - b.delay, config.bandwidth_hz, config.n_freq);
                    g[p * k + q] = v;
                    g[q * k + p] = std::conj(v);
                }
            }
            return g;
        }

        RealMatrix cost_matrix(std::span<const PathParams> phys, std::span<const PathParams> est,
                               const ResolutionSpec &res)
        {
            RealMatrix c(phys.size(), est.size());
            const auto rows = static_cast<std::ptrdiff_t>(phys.size());
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t ii = 0; ii < rows; ++ii)
            {
                const auto i = static_cast<std::size_t>(ii);
                for (std::size_t j = 0; j < est.size(); ++j)
                    c(i, j) = pair_cost(phys[i], est[j], res);
            }
            return c;
        }
    }
}
