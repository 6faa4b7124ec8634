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

#include "mpcx/io.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <random>
#include <sstream>

using namespace mpcx;
using Catch::Matchers::WithinAbs;

namespace
{
    PathList parse(const std::string &text, bool degrees = false)
    {
        std::istringstream in(text);
        return io::parse_path_csv(in, degrees);
    }
}

TEST_CASE("shortest round-trip number formatting")
{
    std::mt19937_64 rng(61);
    std::normal_distribution<double> n(0.0, 1e-7);
    for (int i = 0; i < 1000; ++i)
    {
        const double v = n(rng);
        CHECK(io::parse_double(io::format_double(v), 0, "x") == v);
    }
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(1e-9) == "1e-09");
    CHECK(io::parse_double(" +2.5 ", 1, "x") == 2.5);
    CHECK_THROWS_AS(io::parse_double("2.5x", 1, "x"), ParseError);
    CHECK_THROWS_AS(io::parse_double("", 1, "x"), ParseError);
    CHECK(io::parse_size("42", 1, "n") == 42);
    CHECK_THROWS_AS(io::parse_size("-1", 1, "n"), ParseError);
    CHECK(io::parse_bool("true", 1, "b"));
    CHECK_FALSE(io::parse_bool("0", 1, "b"));
    CHECK_THROWS_AS(io::parse_bool("maybe", 1, "b"), ParseError);
}

TEST_CASE("path CSV")
{
    SECTION("round trip is exact")
    {
        std::mt19937_64 rng(62);
        PathList p;
        for (int i = 0; i < 50; ++i)
            p.push_back(oracle::random_path(rng, oracle::desk()));
        CHECK(parse(io::format_path_csv(p)) == p);
    }
    SECTION("columns are located by name")
    {
        const auto p = parse("aoa_cycles,delay_s,gain_imag,extra,aod_cycles,gain_real\n0.25,1e-9,2,x,-0.1,3\n\n");
        REQUIRE(p.size() == 1);
        CHECK(p[0].gain == cplx(3.0, 2.0));
        CHECK(p[0].delay == 1e-9);
        CHECK(p[0].aod == -0.1);
        CHECK(p[0].aoa == 0.25);
    }
    SECTION("polar header")
    {
        const auto p = parse("gain_db,phase_deg,delay_s,aod_cycles,aoa_cycles\n-20,90,0,0,0\n");
        REQUIRE(p.size() == 1);
        CHECK_THAT(p[0].gain.real(), WithinAbs(0.0, 1e-15));
        CHECK_THAT(p[0].gain.imag(), WithinAbs(0.1, 1e-15));
    }
    SECTION("degrees are converted")
    {
        const auto p = parse("gain_real,gain_imag,delay_s,aod_cycles,aoa_cycles\n1,0,0,30,-90\n", true);
        CHECK_THAT(p[0].aod, WithinAbs(0.25, 1e-15));
        CHECK_THAT(p[0].aoa, WithinAbs(-0.5, 1e-15));
        CHECK_THROWS_AS(parse("gain_real,gain_imag,delay_s,aod_cycles,aoa_cycles\n1,0,0,95,0\n", true), ParseError);
    }
    SECTION("missing column is named")
    {
        try
        {
            parse("gain_real,gain_imag,delay_s,aoa_cycles\n1,0,0,0\n");
            FAIL("expected ParseError");
        }
        catch (const ParseError &e)
        {
            CHECK(e.field() == "aod_cycles");
            CHECK(std::string(e.what()).find("aod_cycles") != std::string::npos);
        }
    }
    SECTION("bad values report their line")
    {
        try
        {
            parse("gain_real,gain_imag,delay_s,aod_cycles,aoa_cycles\n1,0,0,0,0\n1,0,abc,0,0\n");
            FAIL("expected ParseError");
        }
        catch (const ParseError &e)
        {
            CHECK(e.line() == 3);
            CHECK(e.field() == "delay_s");
        }
        CHECK_THROWS_AS(parse("gain_real,gain_imag,delay_s,aod_cycles,aoa_cycles\n1,0,0\n"), ParseError);
        CHECK_THROWS_AS(parse(""), ParseError);
    }
}

TEST_CASE("binary tensors")
{
    CTensor3 t(2, 3, 4);
    for (std::size_t i = 0; i < t.size(); ++i)
        t.data()[i] = cplx(double(i) * 0.1, -double(i));
    const auto bytes = io::encode_tensor(t, io::TensorKind::frequency_response);
    REQUIRE(bytes.size() == 32 + 16 * 24);
    CHECK(bytes.substr(0, 8) == "MPCXFR01");
    CHECK(static_cast<unsigned char>(bytes[8]) == 2);
    CHECK(static_cast<unsigned char>(bytes[16]) == 3);
    CHECK(static_cast<unsigned char>(bytes[24]) == 4);
    CHECK(io::decode_tensor(bytes, io::TensorKind::frequency_response) == t);

    CHECK_THROWS_AS(io::decode_tensor(bytes, io::TensorKind::beamspace), ParseError);
    CHECK_THROWS_AS(io::decode_tensor(bytes.substr(0, bytes.size() - 1), io::TensorKind::frequency_response),
                    ParseError);
    CHECK_THROWS_AS(io::decode_tensor("MPCX", io::TensorKind::frequency_response), ParseError);

    const auto dir = std::filesystem::temp_directory_path() / "mpcx_test_io";
    std::filesystem::create_directories(dir);
    io::write_tensor(dir / "t.bin", t, io::TensorKind::frequency_response);
    const SounderConfig good{3, 2, 1e9, 4, 28e9};
    CHECK(io::read_response(dir / "t.bin", good).values == t);
    CHECK_THROWS_AS(io::read_response(dir / "t.bin", SounderConfig{2, 3, 1e9, 4, 28e9}), ShapeError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sounder config files")
{
    std::istringstream in("# desk\nn_tx = 8\nn_rx=8\nbandwidth_hz = 1e9 # two-sided\nn_freq = 32\ncarrier_hz = 28e9\n");
    const auto c = io::parse_sounder_config(in);
    CHECK(c == oracle::desk());
    std::istringstream round(io::format_sounder_config(c));
    CHECK(io::parse_sounder_config(round) == c);

    std::istringstream missing("n_tx = 8\nn_rx = 8\nn_freq = 32\ncarrier_hz = 1\n");
    try
    {
        io::parse_sounder_config(missing);
        FAIL("expected ParseError");
    }
    catch (const ParseError &e)
    {
        CHECK(e.field() == "bandwidth_hz");
    }
    std::istringstream bad("n_tx = 8\nn_rx = eight\n");
    try
    {
        io::parse_sounder_config(bad);
        FAIL("expected ParseError");
    }
    catch (const ParseError &e)
    {
        CHECK(e.line() == 2);
        CHECK(e.field() == "n_rx");
    }
    std::istringstream unknown("n_tx = 8\nfoo = 1\n");
    CHECK_THROWS_AS(io::parse_sounder_config(unknown), ParseError);
    std::istringstream dup("n_tx = 8\nn_tx = 9\n");
    CHECK_THROWS_AS(io::parse_sounder_config(dup), ParseError);
    std::istringstream zero("n_tx = 0\nn_rx = 8\nbandwidth_hz = 1e9\nn_freq = 32\ncarrier_hz = 28e9\n");
    CHECK_THROWS_AS(io::parse_sounder_config(zero), ParseError);
}

TEST_CASE("matrix CSV")
{
    RealMatrix m(2, 3);
    m(0, 0) = 1, m(0, 1) = 2, m(0, 2) = 3, m(1, 0) = 4, m(1, 1) = 5, m(1, 2) = 6.5;
    const std::vector<double> rows{-0.5, 0.0}, cols{0.0, 1e-9, 2e-9};
    CHECK(io::format_matrix_csv(m, rows, cols, "aoa\\delay") ==
          "aoa\\delay,0,1e-09,2e-09\n-0.5,1,2,3\n0,4,5,6.5\n");
}
