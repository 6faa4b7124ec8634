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

#include "mpcx/association.hpp"
#include "mpcx/kernels.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace mpcx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    const ResolutionSpec res{1e-9, 1.0 / 8.0, 1.0 / 8.0};

    RealMatrix random_matrix(std::mt19937_64 &rng, std::size_t r, std::size_t c, double hi)
    {
        std::uniform_real_distribution<double> u(0.0, hi);
        RealMatrix m(r, c);
        for (auto &v : m.values())
            v = u(rng);
        return m;
    }

    double pairs_cost(const RealMatrix &m, const Assignment &a, double um)
    {
        double t = 0.0;
        for (const auto &[i, j] : a.pairs)
            t += m(i, j);
        return t + um * double(m.rows() + m.cols() - 2 * a.pairs.size());
    }
}

TEST_CASE("pairwise cost")
{
    const PathParams p{1.0, 5e-9, 0.1, -0.2};
    CHECK(pairwise_cost(p, p, res) == 0.0);
    PathParams q = p;
    q.delay += 1e-9;
    CHECK_THAT(pairwise_cost(p, q, res), WithinRel(1.0, 1e-9));
    q.aoa += 1.0 / 8.0;
    q.aod -= 1.0 / 8.0;
    CHECK_THAT(pairwise_cost(p, q, res), WithinRel(3.0, 1e-9));

    // angles compare on the circle
    const PathParams edge_a{1.0, 0.0, 0.49, -0.49};
    const PathParams edge_b{1.0, 0.0, -0.49, 0.49};
    CHECK_THAT(pairwise_cost(edge_a, edge_b, res), WithinRel(2.0 * std::pow(0.02 * 8.0, 2), 1e-9));
    CHECK(wrap_cycles(0.5) == 0.5);
    CHECK(wrap_cycles(-0.5) == 0.5);
    CHECK_THAT(wrap_cycles(0.7), WithinAbs(-0.3, 1e-15));
}

TEST_CASE("assign small cases")
{
    RealMatrix m(2, 2);
    m(0, 0) = 1, m(0, 1) = 2, m(1, 0) = 2, m(1, 1) = 1;
    const auto a = assign(m, 10.0);
    REQUIRE(a.pairs.size() == 2);
    CHECK(a.pairs[0] == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(a.pairs[1] == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(a.total_cost == 2.0);

    RealMatrix one(1, 1);
    one(0, 0) = 5.0;
    const auto b = assign(one, 1.0);
    CHECK(b.pairs.empty());
    CHECK(b.total_cost == 2.0);

    const auto e = assign(RealMatrix(0, 0), 1.0);
    CHECK(e.pairs.empty());
    CHECK(e.total_cost == 0.0);
    const auto e2 = assign(RealMatrix(0, 3), 1.0);
    CHECK(e2.total_cost == 3.0);

    CHECK_THROWS_AS(assign(m, 0.0), DomainError);
    RealMatrix neg(1, 1);
    neg(0, 0) = -1.0;
    CHECK_THROWS_AS(assign(neg, 1.0), DomainError);
}

TEST_CASE("assign equals the exhaustive optimum")
{
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    std::uniform_real_distribution<double> um(0.2, 6.0);
    for (int trial = 0; trial < 300; ++trial)
    {
        const std::size_t r = dim(rng), c = trial < 100 ? r : dim(rng);
        const auto m = random_matrix(rng, r, c, 10.0);
        const double u = trial % 3 == 0 ? 100.0 : um(rng);
        const auto a = assign(m, u);
        CHECK_THAT(a.total_cost, WithinAbs(oracle::best_assignment(m, u), 1e-9));
        CHECK_THAT(pairs_cost(m, a, u), WithinAbs(a.total_cost, 1e-9));
        std::set<std::size_t> rows, cols;
        for (const auto &[i, j] : a.pairs)
        {
            CHECK(rows.insert(i).second);
            CHECK(cols.insert(j).second);
        }
        CHECK(a.pairs.size() <= std::min(r, c));
    }
}

TEST_CASE("associate basic properties")
{
    std::mt19937_64 rng(52);
    const auto c = oracle::desk();
    PathList phys;
    for (int i = 0; i < 8; ++i)
        phys.push_back(oracle::random_path(rng, c));

    SECTION("identical lists")
    {
        const auto r = associate(phys, phys, res, 3.0);
        CHECK(r.pairs.size() == phys.size());
        CHECK(r.post_pa_cost == 0.0);
        CHECK(r.bin_sets.joint.size() == phys.size());
        CHECK(r.unmatched_phys.empty());
        CHECK(r.unmatched_est.empty());
    }
    SECTION("two-bin delay shifts")
    {
        PathList est = phys;
        for (auto &p : est)
            p.delay += 2e-9;
        const auto r = associate(phys, est, res, 10.0);
        CHECK(r.pairs.size() == phys.size());
        CHECK(r.bin_sets.delay.empty());
        CHECK(r.bin_sets.aoa.size() == phys.size());
        CHECK(r.bin_sets.aod.size() == phys.size());
        CHECK(r.bin_sets.joint.empty());
    }
    SECTION("one-bin shift sits on the boundary and counts as inside")
    {
        PathList est = phys;
        for (auto &p : est)
            p.delay += 1e-9;
        const auto r = associate(phys, est, res, 10.0);
        CHECK(r.bin_sets.delay.size() == phys.size());
        PathList beyond = phys;
        for (auto &p : beyond)
            p.delay += 1.001e-9;
        CHECK(associate(phys, beyond, res, 10.0).bin_sets.delay.empty());
    }
    SECTION("joint set is the intersection")
    {
        PathList est = phys;
        std::normal_distribution<double> n(0.0, 1.0);
        for (auto &p : est)
        {
            p.delay = std::max(0.0, p.delay + 0.8e-9 * n(rng));
            p.aoa = wrap_cycles(p.aoa + 0.1 * n(rng));
            p.aod = wrap_cycles(p.aod + 0.1 * n(rng));
        }
        const auto r = associate(phys, est, res, 30.0);
        std::vector<std::size_t> inter;
        for (std::size_t k : r.bin_sets.delay)
            if (std::count(r.bin_sets.aoa.begin(), r.bin_sets.aoa.end(), k) &&
                std::count(r.bin_sets.aod.begin(), r.bin_sets.aod.end(), k))
                inter.push_back(k);
        CHECK(inter == r.bin_sets.joint);
    }
    SECTION("common gain scaling changes nothing")
    {
        PathList est = phys;
        std::normal_distribution<double> n(0.0, 1.0);
        for (auto &p : est)
            p.delay = std::max(0.0, p.delay + 0.5e-9 * n(rng));
        std::reverse(est.begin(), est.end());
        const auto r1 = associate(phys, est, res, 3.0);
        PathList phys2 = phys, est2 = est;
        for (auto &p : phys2)
            p.gain *= cplx(3.0, -1.0);
        for (auto &p : est2)
            p.gain *= cplx(3.0, -1.0);
        const auto r2 = associate(phys2, est2, res, 3.0);
        REQUIRE(r1.pairs.size() == r2.pairs.size());
        for (std::size_t k = 0; k < r1.pairs.size(); ++k)
        {
            CHECK(r1.pairs[k].phys_index == r2.pairs[k].phys_index);
            CHECK(r1.pairs[k].est_index == r2.pairs[k].est_index);
        }
        CHECK(r1.bin_sets.joint == r2.bin_sets.joint);
        CHECK_THAT(r1.post_pa_cost, WithinRel(r2.post_pa_cost, 1e-12));
        CHECK_THAT(r1.pre_pa_cost, WithinRel(r2.pre_pa_cost, 1e-12));
    }
    SECTION("empty inputs")
    {
        CHECK_THROWS_AS(associate(PathList{}, phys, res, 3.0), DomainError);
        CHECK_THROWS_AS(associate(phys, PathList{}, res, 3.0), DomainError);
    }
}

TEST_CASE("ten true paths hidden among spurious estimates")
{
    std::mt19937_64 rng(53);
    const auto c = oracle::desk();
    std::uniform_real_distribution<double> small(-0.1, 0.1);
    for (int trial = 0; trial < 5; ++trial)
    {
        PathList phys, est;
        for (int i = 0; i < 10; ++i)
        {
            PathParams p = oracle::random_path(rng, c);
            p.delay = std::uniform_real_distribution<double>(1e-9, 15e-9)(rng);
            phys.push_back(p);
            PathParams e = p;
            e.delay += small(rng) * 1e-9;
            e.aoa = wrap_cycles(e.aoa + small(rng) / 8.0);
            e.aod = wrap_cycles(e.aod + small(rng) / 8.0);
            e.gain *= 1.1;
            est.push_back(e);
            PathParams s = oracle::random_path(rng, c);
            s.delay = std::uniform_real_distribution<double>(20e-9, 31e-9)(rng);
            est.push_back(s);
        }
        std::shuffle(est.begin(), est.end(), rng);
        const auto r = associate(phys, est, res, 9.0);
        REQUIRE(r.pairs.size() == 10);
        for (const auto &pr : r.pairs)
            CHECK(std::abs(phys[pr.phys_index].delay - est[pr.est_index].delay) < 0.11e-9);
        CHECK(r.unmatched_est.size() == 10);
        CHECK(r.post_pa_cost <= r.pre_pa_cost);
        CHECK(r.bin_sets.joint.size() == 10);

        const auto m = kernels::serial::cost_matrix(phys, est, res);
        CHECK_THAT(assign(m, 9.0).total_cost, WithinAbs(oracle::best_assignment(m, 9.0), 1e-9));
    }
}

TEST_CASE("post-PA cost never exceeds a feasible rank pairing")
{
    std::mt19937_64 rng(54);
    const auto c = oracle::desk();
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial)
    {
        PathList phys, est;
        for (int i = 0; i < 6; ++i)
            phys.push_back(oracle::random_path(rng, c));
        for (const auto &p : phys)
        {
            PathParams e = p;
            e.delay = std::max(0.0, e.delay + 0.3e-9 * n(rng));
            e.gain *= 1.0 + 0.05 * n(rng);
            est.push_back(e);
        }
        const auto r = associate(phys, est, res, 1e6);
        REQUIRE(r.pairs.size() == 6);
        CHECK(r.post_pa_cost <= r.pre_pa_cost + 1e-12);
    }
}
