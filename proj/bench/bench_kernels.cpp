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

// Serial reference kernels against their OpenMP counterparts on identical inputs.
// The thread count of the parallel flavour follows OMP_NUM_THREADS.

#include "mpcx/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace mpcx;
namespace ks = mpcx::kernels::serial;
namespace kp = mpcx::kernels::parallel;

namespace
{
    const SounderConfig mid{16, 16, 1.0e9, 64, 28.0e9};

    PathList random_paths(std::size_t n, const SounderConfig &c, unsigned seed)
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ang(-0.5, 0.5), del(0.0, 0.8 * c.duration()), ph(0.0, 6.283185307179586);
        PathList out;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back({std::polar(1.0, ph(rng)), del(rng), ang(rng), ang(rng)});
        return out;
    }

    CTensor3 response(const SounderConfig &c, std::size_t n)
    {
        CTensor3 h(c.n_rx, c.n_tx, c.n_freq);
        const auto p = random_paths(n, c, 7);
        ks::synthesize(c, p, h);
        return h;
    }

    template <auto Fn>
    void bm_synthesize(benchmark::State &st)
    {
        const auto p = random_paths(static_cast<std::size_t>(st.range(0)), mid, 1);
        CTensor3 out(mid.n_rx, mid.n_tx, mid.n_freq);
        for (auto _ : st)
        {
            Fn(mid, p, out);
            benchmark::DoNotOptimize(out.data());
        }
    }

    template <auto Fn>
    void bm_lattice(benchmark::State &st)
    {
        const auto h = response(mid, 20);
        GridSpec g;
        g.os_aoa = g.os_aod = g.os_delay = static_cast<std::size_t>(st.range(0));
        for (auto _ : st)
            benchmark::DoNotOptimize(Fn(h, mid, g));
    }

    template <auto Fn>
    void bm_find_peak(benchmark::State &st)
    {
        std::vector<cplx> v(static_cast<std::size_t>(st.range(0)));
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n;
        for (auto &x : v)
            x = {n(rng), n(rng)};
        for (auto _ : st)
            benchmark::DoNotOptimize(Fn(v));
        st.SetItemsProcessed(st.iterations() * st.range(0));
    }

    template <auto Fn>
    void bm_subtract(benchmark::State &st)
    {
        const std::size_t n = static_cast<std::size_t>(st.range(0));
        CTensor3 t(n, n, 4 * n, cplx{1.0, 0.0});
        std::vector<cplx> u0(n, {0.5, 0.1}), u1(n, {0.2, -0.3}), u2(4 * n, {0.9, 0.0});
        for (auto _ : st)
        {
            Fn(t, {1e-9, 0.0}, u0, u1, u2);
            benchmark::DoNotOptimize(t.data());
        }
    }

    template <auto Fn>
    void bm_gram(benchmark::State &st)
    {
        const auto p = random_paths(static_cast<std::size_t>(st.range(0)), mid, 5);
        std::vector<kernels::Geometry> geo;
        for (const auto &x : p)
            geo.push_back({x.aoa, x.aod, x.delay});
        for (auto _ : st)
            benchmark::DoNotOptimize(Fn(mid, geo));
    }

    template <auto Fn>
    void bm_cost(benchmark::State &st)
    {
        const std::size_t n = static_cast<std::size_t>(st.range(0));
        const auto a = random_paths(n, mid, 8), b = random_paths(2 * n, mid, 9);
        const auto res = ResolutionSpec::from_config(mid);
        for (auto _ : st)
            benchmark::DoNotOptimize(Fn(a, b, res));
    }
}

BENCHMARK(bm_synthesize<ks::synthesize>)->Name("synthesize/serial")->Arg(16)->Arg(128);
BENCHMARK(bm_synthesize<kp::synthesize>)->Name("synthesize/parallel")->Arg(16)->Arg(128);
BENCHMARK(bm_lattice<ks::lattice_transform>)->Name("lattice_transform/serial")->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_lattice<kp::lattice_transform>)->Name("lattice_transform/parallel")->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_find_peak<ks::find_peak>)->Name("find_peak/serial")->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(bm_find_peak<kp::find_peak>)->Name("find_peak/parallel")->Arg(1 << 16)->Arg(1 << 22);
BENCHMARK(bm_subtract<ks::subtract_rank1>)->Name("subtract_rank1/serial")->Arg(32)->Arg(96);
BENCHMARK(bm_subtract<kp::subtract_rank1>)->Name("subtract_rank1/parallel")->Arg(32)->Arg(96);
BENCHMARK(bm_gram<ks::gram>)->Name("gram/serial")->Arg(8)->Arg(64);
BENCHMARK(bm_gram<kp::gram>)->Name("gram/parallel")->Arg(8)->Arg(64);
BENCHMARK(bm_cost<ks::cost_matrix>)->Name("cost_matrix/serial")->Arg(64)->Arg(448);
BENCHMARK(bm_cost<kp::cost_matrix>)->Name("cost_matrix/parallel")->Arg(64)->Arg(448);

BENCHMARK_MAIN();
