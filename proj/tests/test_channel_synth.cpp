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

#include "oracles.hpp"

#include "mpcx/channel_synth.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace mpcx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("spatial_frequency maps physical angles to cycles")
{
    CHECK(spatial_frequency(0.0, 0.5) == 0.0);
    CHECK_THAT(spatial_frequency(90.0, 0.5), WithinAbs(0.5, 1e-15));
    CHECK_THAT(spatial_frequency(30.0, 0.5), WithinAbs(0.25, 1e-15));
    CHECK_THAT(spatial_frequency(-90.0, 0.5), WithinAbs(-0.5, 1e-15));
    CHECK_THROWS_AS(spatial_frequency(90.5, 0.5), DomainError);
    CHECK_THROWS_AS(spatial_frequency(-91.0, 0.5), DomainError);
    CHECK_THROWS_AS(spatial_frequency(10.0, 0.0), DomainError);
}

TEST_CASE("steering vectors")
{
    const auto a0 = steering_vector(0.0, 4);
    for (const auto &v : a0)
        CHECK(v == cplx(1.0, 0.0));

    const auto a1 = steering_vector(0.5, 2);
    CHECK_THAT(a1[1].real(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(a1[1].imag(), WithinAbs(0.0, 1e-15));

    const auto a2 = steering_vector(0.25, 4);
    const cplx expect[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(a2[m] - expect[m]) < 1e-15);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> th(-0.5, 0.5);
    for (std::size_t n : {1u, 2u, 7u, 35u})
        for (int i = 0; i < 20; ++i)
        {
            double norm = 0.0;
            for (const auto &v : steering_vector(th(rng), n))
                norm += std::norm(v);
            CHECK_THAT(norm, WithinRel(double(n), 1e-13));
        }
}

TEST_CASE("resolutions and dimensions")
{
    const SounderConfig c{35, 35, 1.0e9, 128, 28.0e9};
    CHECK(signal_space_dimension(c) == 156800);
    CHECK(signal_space_dimension({1, 1, 1.0e9, 1, 28e9}) == 1);
    CHECK(signal_space_dimension({2, 3, 1.0e9, 5, 28e9}) == 30);
    CHECK(c.delay_res() * c.bandwidth_hz == 1.0);
    CHECK(c.aod_res() * 35 == 1.0);
    CHECK(c.aoa_res() * 35 == 1.0);
    CHECK_THAT(c.duration(), WithinRel(128e-9, 1e-15));

    const auto f = frequency_grid({2, 2, 1.0e9, 8, 28e9});
    CHECK(f.front() == -0.5e9);
    CHECK(f[4] == 0.0);
    CHECK(f.back() == 0.375e9);
}

TEST_CASE("synthesize_response matches the scalar-loop oracle")
{
    const SounderConfig c{4, 4, 1.0e9, 8, 28e9};
    SECTION("unit path at the origin gives all ones")
    {
        const PathList p{{1.0, 0.0, 0.0, 0.0}};
        const auto h = synthesize_response(c, p);
        for (const auto &v : h.values.values())
            CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-15);
    }
    SECTION("spec example")
    {
        const PathList p{{cplx(2.0, 0.0), 1.0e-9, 0.0, c.aoa_res()}};
        const auto h = synthesize_response(c, p);
        CHECK(oracle::rel_diff(h.values, oracle::synthesize(c, p)) < 1e-13);
    }
    SECTION("random multi-path")
    {
        std::mt19937_64 rng(11);
        const auto cfg = oracle::desk();
        PathList p;
        for (int i = 0; i < 6; ++i)
            p.push_back(oracle::random_path(rng, cfg));
        CHECK(oracle::rel_diff(synthesize_response(cfg, p).values, oracle::synthesize(cfg, p)) < 1e-12);
    }
    SECTION("empty list gives zeros")
    {
        const auto h = synthesize_response(c, PathList{});
        CHECK(total_power(h.values.values()) == 0.0);
    }
    SECTION("aliasing delays and out-of-range angles are rejected")
    {
        CHECK_THROWS_AS(synthesize_response(c, PathList{{1.0, c.duration(), 0.0, 0.0}}), DomainError);
        CHECK_THROWS_AS(synthesize_response(c, PathList{{1.0, -1e-12, 0.0, 0.0}}), DomainError);
        CHECK_THROWS_AS(synthesize_response(c, PathList{{1.0, 0.0, 0.6, 0.0}}), DomainError);
        CHECK_THROWS_AS(synthesize_response(c, PathList{{1.0, 0.0, 0.0, -0.51}}), DomainError);
    }
}

TEST_CASE("synthesis is linear in the path list")
{
    std::mt19937_64 rng(5);
    const auto c = oracle::desk();
    PathList a, b;
    for (int i = 0; i < 4; ++i)
        a.push_back(oracle::random_path(rng, c));
    for (int i = 0; i < 3; ++i)
        b.push_back(oracle::random_path(rng, c));
    PathList ab = a;
    ab.insert(ab.end(), b.begin(), b.end());

    const auto ha = synthesize_response(c, a), hb = synthesize_response(c, b), hab = synthesize_response(c, ab);
    for (std::size_t i = 0; i < hab.values.size(); ++i)
        CHECK(std::abs(hab.values.data()[i] - (ha.values.data()[i] + hb.values.data()[i])) < 1e-12);
}

TEST_CASE("add_awgn")
{
    const auto c = oracle::desk();
    std::mt19937_64 rng(2);
    const auto h = synthesize_response(c, PathList{oracle::random_path(rng, c)});

    CHECK(add_awgn(h, 0.0, 9).values == h.values);
    CHECK(add_awgn(h, 0.3, 9).values == add_awgn(h, 0.3, 9).values);
    CHECK_FALSE(add_awgn(h, 0.3, 9).values == add_awgn(h, 0.3, 10).values);
    CHECK_THROWS_AS(add_awgn(h, -1.0, 1), DomainError);

    // 10^5 samples of unit-power noise: sample variance within 2%
    const SounderConfig big{10, 10, 1.0e9, 1000, 28e9};
    const auto n = add_awgn(FrequencyResponse(big), 1.0, 77);
    double mean_re = 0.0, mean_im = 0.0;
    for (const auto &v : n.values.values())
        mean_re += v.real(), mean_im += v.imag();
    const double cnt = double(n.values.size());
    mean_re /= cnt, mean_im /= cnt;
    double var = 0.0, var_re = 0.0;
    for (const auto &v : n.values.values())
    {
        var += std::norm(v - cplx(mean_re, mean_im));
        var_re += (v.real() - mean_re) * (v.real() - mean_re);
    }
    var /= cnt - 1.0;
    var_re /= cnt - 1.0;
    CHECK(n.values.size() == 100000);
    CHECK_THAT(var, WithinAbs(1.0, 0.02));
    CHECK_THAT(var_re, WithinAbs(0.5, 0.02));
}

TEST_CASE("virtual coefficients")
{
    const auto c = oracle::desk();
    std::mt19937_64 rng(21);

    SECTION("single on-lattice path occupies exactly one coefficient")
    {
        for (int trial = 0; trial < 10; ++trial)
        {
            std::uniform_int_distribution<int> ia(0, 7), il(0, 20);
            const int i0 = ia(rng), k0 = ia(rng), l0 = il(rng);
            PathParams p;
            p.gain = oracle::random_gain(rng, -10.0, 10.0);
            p.aoa = wrap_cycles(double(i0) / 8.0);
            p.aod = wrap_cycles(double(k0) / 8.0);
            p.delay = double(l0) / c.bandwidth_hz;
            const auto h = synthesize_response(c, PathList{p});
            const auto vc = virtual_coefficients(h, c.duration());
            CHECK(vc.max_delay_index == 31);
            for (std::size_t i = 0; i < 8; ++i)
                for (std::size_t k = 0; k < 8; ++k)
                    for (std::size_t l = 0; l < 32; ++l)
                    {
                        const cplx v = vc.values(i, k, l);
                        if (int(i) == i0 && int(k) == k0 && int(l) == l0)
                            CHECK_THAT(std::abs(v), WithinRel(std::abs(p.gain), 1e-10));
                        else
                            CHECK(std::abs(v) < 1e-9 * std::abs(p.gain));
                    }
        }
    }
    SECTION("coefficients equal the direct beamspace sum at the critical lattice")
    {
        const auto cfg = oracle::tiny();
        PathList p{oracle::random_path(rng, cfg), oracle::random_path(rng, cfg)};
        const auto h = synthesize_response(cfg, p);
        const auto vc = virtual_coefficients(h, 5.0e-9);
        CHECK(vc.max_delay_index == 5);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t k = 0; k < 4; ++k)
                for (std::size_t l = 0; l <= 5; ++l)
                {
                    const cplx o = oracle::beamspace_point(h.values, cfg, i / 4.0, k / 4.0, l * 1e-9);
                    CHECK(std::abs(vc.values(i, k, l) - o) < 1e-12);
                }
    }
    SECTION("zero response and round trip")
    {
        const auto z = virtual_coefficients(FrequencyResponse(c), c.duration());
        CHECK(total_power(z.values.values()) == 0.0);
        CHECK(total_power(reconstruct_from_virtual(z, c).values.values()) == 0.0);

        for (int trial = 0; trial < 5; ++trial)
        {
            const auto paths = oracle::on_grid_paths(rng, c, 2, 20.0);
            const auto h = synthesize_response(c, paths);
            const auto back = reconstruct_from_virtual(virtual_coefficients(h, c.duration()), c);
            CHECK(oracle::rel_diff(back.values, h.values) < 1e-9);
        }
    }
    SECTION("one coefficient reconstructs a single lattice sinusoid")
    {
        VirtualCoefficients vc;
        vc.max_delay_index = 3;
        vc.values = CTensor3(8, 8, 4);
        const cplx g(0.5, -1.5);
        vc.values(3, 6, 2) = g;
        const auto h = reconstruct_from_virtual(vc, c);
        const PathList p{{g, 2e-9, wrap_cycles(6.0 / 8.0), wrap_cycles(3.0 / 8.0)}};
        CHECK(oracle::rel_diff(h.values, oracle::synthesize(c, p)) < 1e-12);
    }
    SECTION("errors")
    {
        CHECK_THROWS_AS(virtual_coefficients(FrequencyResponse(c), c.duration() * 1.01), DomainError);
        VirtualCoefficients bad;
        bad.values = CTensor3(8, 7, 1);
        CHECK_THROWS_AS(reconstruct_from_virtual(bad, c), DomainError);
    }
}

TEST_CASE("filter_by_dynamic_range")
{
    const PathList eq{{1.0, 0, 0, 0}, {cplx(0, 1), 0, 0, 0}, {-1.0, 0, 0, 0}};
    CHECK(filter_by_dynamic_range(eq, 3.0).size() == 3);

    const PathList three{{1.0, 1e-9, 0, 0}, {std::pow(10.0, -50.0 / 20.0), 2e-9, 0, 0},
                         {std::pow(10.0, -120.0 / 20.0), 3e-9, 0, 0}};
    const auto kept = filter_by_dynamic_range(three, 100.0);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0] == three[0]);
    CHECK(kept[1] == three[1]);

    CHECK_THROWS_AS(filter_by_dynamic_range(PathList{}, 10.0), DomainError);

    // 252 powers uniform in dB against a threshold scan
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> db(-110.0, 0.0);
    PathList many;
    for (int i = 0; i < 252; ++i)
        many.push_back({std::pow(10.0, db(rng) / 20.0), 0.0, 0.0, 0.0});
    double pmax = 0.0;
    for (const auto &p : many)
        pmax = std::max(pmax, std::norm(p.gain));
    PathList scan;
    for (const auto &p : many)
        if (10.0 * std::log10(std::norm(p.gain) / pmax) >= -100.0 - 1e-9)
            scan.push_back(p);
    CHECK(filter_by_dynamic_range(many, 100.0) == scan);
}
