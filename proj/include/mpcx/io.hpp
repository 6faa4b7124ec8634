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

// File formats
//
//   Path list CSV    header gain_real,gain_imag,delay_s,aod_cycles,aoa_cycles (any column order,
//                    extra columns ignored) or gain_db,phase_deg,delay_s,aod_cycles,aoa_cycles.
//   Tensor binary    8 magic bytes, three little-endian uint64 dimensions, then interleaved
//                    little-endian float64 (real, imag) pairs in row-major order.
//                    "MPCXFR01" = frequency response (rx, tx, freq), "MPCXBS01" = beamspace (aoa, aod, delay).
//   Key-value text   one "key = value" per line, '#' starts a comment.

#include "mpcx/channel_synth.hpp"
#include "mpcx/tensor.hpp"
#include "mpcx/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mpcx::io
{
    // Shortest decimal representation that round-trips exactly
    std::string format_double(double v);

    double parse_double(std::string_view text, std::size_t line, const std::string &field);
    std::size_t parse_size(std::string_view text, std::size_t line, const std::string &field);
    bool parse_bool(std::string_view text, std::size_t line, const std::string &field);

    // --- path lists ---------------------------------------------------------------------------

    // With degrees = true the AoD/AoA columns hold physical angles in degrees (half-wavelength spacing)
    PathList parse_path_csv(std::istream &in, bool degrees = false);
    PathList read_path_csv(const std::filesystem::path &file, bool degrees = false);

    std::string format_path_csv(std::span<const PathParams> paths);
    void write_path_csv(const std::filesystem::path &file, std::span<const PathParams> paths);

    // --- binary tensors -----------------------------------------------------------------------

    enum class TensorKind
    {
        frequency_response,
        beamspace
    };

    std::string encode_tensor(const CTensor3 &t, TensorKind kind);
    CTensor3 decode_tensor(std::string_view bytes, TensorKind kind);
    void write_tensor(const std::filesystem::path &file, const CTensor3 &t, TensorKind kind);
    CTensor3 read_tensor(const std::filesystem::path &file, TensorKind kind);

    // Reads a response tensor and checks it against the config (ShapeError on mismatch)
    FrequencyResponse read_response(const std::filesystem::path &file, const SounderConfig &config);

    // --- key-value text -----------------------------------------------------------------------

    struct KeyValue
    {
        std::string key;
        std::string value;
        std::size_t line = 0;
    };

    std::vector<KeyValue> parse_key_values(std::istream &in);
    std::vector<KeyValue> read_key_values(const std::filesystem::path &file);

    // Keys: n_tx, n_rx, bandwidth_hz, n_freq, carrier_hz (all required)
    SounderConfig parse_sounder_config(std::istream &in);
    SounderConfig read_sounder_config(const std::filesystem::path &file);
    std::string format_sounder_config(const SounderConfig &config);

    // --- misc ---------------------------------------------------------------------------------

    std::string read_file(const std::filesystem::path &file);
    void write_file(const std::filesystem::path &file, std::string_view contents);

    // Matrix CSV: header row "<corner>,c0,c1,...", then "<row coord>,v0,v1,..."
    std::string format_matrix_csv(const RealMatrix &m, std::span<const double> row_axis,
                                  std::span<const double> col_axis, const std::string &corner);
}
