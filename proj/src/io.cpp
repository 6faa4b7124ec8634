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

#include "mpcx/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace mpcx::io
{
    namespace
    {
        std::string_view trim(std::string_view s)
        {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            return s;
        }

        std::vector<std::string_view> split(std::string_view s, char sep)
        {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            for (;;)
            {
                const auto pos = s.find(sep, start);
                out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return out;
        }

        std::string at_line(std::size_t line)
        {
            return line ? " (line " + std::to_string(line) + ")" : std::string{};
        }

        constexpr std::array<char, 8> magic_for(TensorKind kind)
        {
            return kind == TensorKind::frequency_response
                       ? std::array<char, 8>{'M', 'P', 'C', 'X', 'F', 'R', '0', '1'}
                       : std::array<char, 8>{'M', 'P', 'C', 'X', 'B', 'S', '0', '1'};
        }

        void put_u64(std::string &out, std::uint64_t v)
        {
            for (int b = 0; b < 8; ++b)
                out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
        }

        std::uint64_t get_u64(const unsigned char *p)
        {
            std::uint64_t v = 0;
            for (int b = 7; b >= 0; --b)
                v = (v << 8) | p[b];
            return v;
        }
    }

    std::string format_double(double v)
    {
        std::array<char, 64> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), res.ptr);
    }

    double parse_double(std::string_view text, std::size_t line, const std::string &field)
    {
        text = trim(text);
        double v = 0.0;
        const char *first = text.data();
        const char *last = text.data() + text.size();
        if (!text.empty() && *first == '+')
            ++first;
        const auto res = std::from_chars(first, last, v);
        if (text.empty() || res.ec != std::errc{} || res.ptr != last)
            throw ParseError("Invalid number '" + std::string(text) + "' for field '" + field + "'" + at_line(line),
                             line, field);
        return v;
    }

    std::size_t parse_size(std::string_view text, std::size_t line, const std::string &field)
    {
        text = trim(text);
        std::size_t v = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
            throw ParseError("Invalid non-negative integer '" + std::string(text) + "' for field '" + field + "'" +
                                 at_line(line),
                             line, field);
        return v;
    }

    bool parse_bool(std::string_view text, std::size_t line, const std::string &field)
    {
        text = trim(text);
        if (text == "true" || text == "1" || text == "yes" || text == "on")
            return true;
        if (text == "false" || text == "0" || text == "no" || text == "off")
            return false;
        throw ParseError("Invalid boolean '" + std::string(text) + "' for field '" + field + "'" + at_line(line), line,
                         field);
    }

    PathList parse_path_csv(std::istream &in, bool degrees)
    {
        std::string raw;
        std::size_t line = 0;

        // header
        std::vector<std::string_view> header;
        std::string header_line;
        while (std::getline(in, raw))
        {
            ++line;
            if (!trim(raw).empty())
            {
                header_line = raw;
                header = split(header_line, ',');
                break;
            }
        }
        if (header.empty())
            throw ParseError("Path list is empty (missing header).", 0);

        std::map<std::string, std::size_t, std::less<>> col;
        for (std::size_t i = 0; i < header.size(); ++i)
            col.emplace(std::string(header[i]), i);

        const bool polar = col.count("gain_db") || col.count("phase_deg");
        const std::vector<std::string> required =
            polar ? std::vector<std::string>{"gain_db", "phase_deg", "delay_s", "aod_cycles", "aoa_cycles"}
                  : std::vector<std::string>{"gain_real", "gain_imag", "delay_s", "aod_cycles", "aoa_cycles"};
        for (const auto &name : required)
            if (!col.count(name))
                throw ParseError("Path list header is missing column '" + name + "'" + at_line(line), line, name);

        const std::size_t header_line_no = line;
        (void)header_line_no;

        PathList paths;
        while (std::getline(in, raw))
        {
            ++line;
            if (trim(raw).empty())
                continue;
            const auto cells = split(raw, ',');
            auto cell = [&](const std::string &name) -> double {
                const std::size_t idx = col.find(name)->second;
                if (idx >= cells.size())
                    throw ParseError("Row is missing column '" + name + "'" + at_line(line), line, name);
                return parse_double(cells[idx], line, name);
            };

            PathParams p;
            if (polar)
            {
                const double amp = std::pow(10.0, cell("gain_db") / 20.0);
                p.gain = std::polar(amp, cell("phase_deg") * pi / 180.0);
            }
            else
                p.gain = {cell("gain_real"), cell("gain_imag")};
            p.delay = cell("delay_s");
            p.aod = cell("aod_cycles");
            p.aoa = cell("aoa_cycles");
            if (degrees)
            {
                try
                {
                    p.aod = spatial_frequency(p.aod);
                    p.aoa = spatial_frequency(p.aoa);
                }
                catch (const DomainError &e)
                {
                    throw ParseError(std::string(e.what()) + at_line(line), line, "aod_cycles/aoa_cycles");
                }
            }
            paths.push_back(p);
        }
        return paths;
    }

    PathList read_path_csv(const std::filesystem::path &file, bool degrees)
    {
        std::ifstream in(file);
        if (!in)
            throw ParseError("Cannot open path list '" + file.string() + "'.");
        return parse_path_csv(in, degrees);
    }

    std::string format_path_csv(std::span<const PathParams> paths)
    {
        std::string out = "gain_real,gain_imag,delay_s,aod_cycles,aoa_cycles\n";
        for (const auto &p : paths)
        {
            out += format_double(p.gain.real());
            out += ',';
            out += format_double(p.gain.imag());
            out += ',';
            out += format_double(p.delay);
            out += ',';
            out += format_double(p.aod);
            out += ',';
            out += format_double(p.aoa);
            out += '\n';
        }
        return out;
    }

    void write_path_csv(const std::filesystem::path &file, std::span<const PathParams> paths)
    {
        write_file(file, format_path_csv(paths));
    }

    std::string encode_tensor(const CTensor3 &t, TensorKind kind)
    {
        std::string out;
        out.reserve(8 + 24 + 16 * t.size());
        const auto magic = magic_for(kind);
        out.append(magic.data(), magic.size());
        for (std::size_t a = 0; a < 3; ++a)
            put_u64(out, t.dim(a));
        for (const auto &v : t.values())
        {
            put_u64(out, std::bit_cast<std::uint64_t>(v.real()));
            put_u64(out, std::bit_cast<std::uint64_t>(v.imag()));
        }
        return out;
    }

    CTensor3 decode_tensor(std::string_view bytes, TensorKind kind)
    {
        const auto magic = magic_for(kind);
        if (bytes.size() < 32 || std::memcmp(bytes.data(), magic.data(), 8) != 0)
            throw ParseError("Tensor file has a wrong or missing magic header (expected '" +
                             std::string(magic.data(), 8) + "').");
        const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
        const std::uint64_t d0 = get_u64(p + 8), d1 = get_u64(p + 16), d2 = get_u64(p + 24);
        const std::uint64_t limit = (bytes.size() - 32) / 16;
        if (d0 != 0 && (d1 == 0 || d2 == 0 || d0 > limit / d1 / d2))
            throw ParseError("Tensor file is truncated or has inconsistent dimensions.");
        if (d0 * d1 * d2 != limit || (bytes.size() - 32) % 16 != 0)
            throw ParseError("Tensor file size does not match its dimensions.");

        CTensor3 t(d0, d1, d2);
        auto vals = t.values();
        const unsigned char *q = p + 32;
        for (std::size_t i = 0; i < vals.size(); ++i, q += 16)
            vals[i] = {std::bit_cast<double>(get_u64(q)), std::bit_cast<double>(get_u64(q + 8))};
        return t;
    }

    void write_tensor(const std::filesystem::path &file, const CTensor3 &t, TensorKind kind)
    {
        write_file(file, encode_tensor(t, kind));
    }

    CTensor3 read_tensor(const std::filesystem::path &file, TensorKind kind)
    {
        return decode_tensor(read_file(file), kind);
    }

    FrequencyResponse read_response(const std::filesystem::path &file, const SounderConfig &config)
    {
        FrequencyResponse r;
        r.config = config;
        r.values = read_tensor(file, TensorKind::frequency_response);
        if (r.values.dims() != std::array<std::size_t, 3>{config.n_rx, config.n_tx, config.n_freq})
            throw ShapeError("Tensor '" + file.string() + "' has shape (" + std::to_string(r.values.dim(0)) + ", " +
                             std::to_string(r.values.dim(1)) + ", " + std::to_string(r.values.dim(2)) +
                             ") but the config expects (" + std::to_string(config.n_rx) + ", " +
                             std::to_string(config.n_tx) + ", " + std::to_string(config.n_freq) + ").");
        return r;
    }

    std::vector<KeyValue> parse_key_values(std::istream &in)
    {
        std::vector<KeyValue> out;
        std::string raw;
        std::size_t line = 0;
        while (std::getline(in, raw))
        {
            ++line;
            std::string_view s = raw;
            if (const auto hash = s.find('#'); hash != std::string_view::npos)
                s = s.substr(0, hash);
            s = trim(s);
            if (s.empty())
                continue;
            const auto eq = s.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("Expected 'key = value'" + at_line(line), line);
            const auto key = trim(s.substr(0, eq));
            if (key.empty())
                throw ParseError("Empty key" + at_line(line), line);
            for (const auto &kv : out)
                if (kv.key == key)
                    throw ParseError("Duplicate key '" + std::string(key) + "'" + at_line(line), line,
                                     std::string(key));
            out.push_back({std::string(key), std::string(trim(s.substr(eq + 1))), line});
        }
        return out;
    }

    std::vector<KeyValue> read_key_values(const std::filesystem::path &file)
    {
        std::ifstream in(file);
        if (!in)
            throw ParseError("Cannot open '" + file.string() + "'.");
        return parse_key_values(in);
    }

    SounderConfig parse_sounder_config(std::istream &in)
    {
        const auto kvs = parse_key_values(in);
        SounderConfig c;
        bool seen[5] = {false, false, false, false, false};
        for (const auto &kv : kvs)
        {
            if (kv.key == "n_tx")
                c.n_tx = parse_size(kv.value, kv.line, kv.key), seen[0] = true;
            else if (kv.key == "n_rx")
                c.n_rx = parse_size(kv.value, kv.line, kv.key), seen[1] = true;
            else if (kv.key == "bandwidth_hz")
                c.bandwidth_hz = parse_double(kv.value, kv.line, kv.key), seen[2] = true;
            else if (kv.key == "n_freq")
                c.n_freq = parse_size(kv.value, kv.line, kv.key), seen[3] = true;
            else if (kv.key == "carrier_hz")
                c.carrier_hz = parse_double(kv.value, kv.line, kv.key), seen[4] = true;
            else
                throw ParseError("Unknown sounder config key '" + kv.key + "'" + at_line(kv.line), kv.line, kv.key);
        }
        const char *names[5] = {"n_tx", "n_rx", "bandwidth_hz", "n_freq", "carrier_hz"};
        for (int i = 0; i < 5; ++i)
            if (!seen[i])
                throw ParseError(std::string("Sounder config is missing key '") + names[i] + "'", 0, names[i]);
        try
        {
            c.validate();
        }
        catch (const DomainError &e)
        {
            throw ParseError(e.what());
        }
        return c;
    }

    SounderConfig read_sounder_config(const std::filesystem::path &file)
    {
        std::ifstream in(file);
        if (!in)
            throw ParseError("Cannot open sounder config '" + file.string() + "'.");
        return parse_sounder_config(in);
    }

    std::string format_sounder_config(const SounderConfig &c)
    {
        std::ostringstream os;
        os << "n_tx = " << c.n_tx << '\n'
           << "n_rx = " << c.n_rx << '\n'
           << "bandwidth_hz = " << format_double(c.bandwidth_hz) << '\n'
           << "n_freq = " << c.n_freq << '\n'
           << "carrier_hz = " << format_double(c.carrier_hz) << '\n';
        return os.str();
    }

    std::string read_file(const std::filesystem::path &file)
    {
        std::ifstream in(file, std::ios::binary);
        if (!in)
            throw ParseError("Cannot open '" + file.string() + "'.");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_file(const std::filesystem::path &file, std::string_view contents)
    {
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("Cannot write '" + file.string() + "'.");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out)
            throw std::runtime_error("Write to '" + file.string() + "' failed.");
    }

    std::string format_matrix_csv(const RealMatrix &m, std::span<const double> row_axis,
                                  std::span<const double> col_axis, const std::string &corner)
    {
        std::string out = corner;
        for (const double c : col_axis)
        {
            out += ',';
            out += format_double(c);
        }
        out += '\n';
        for (std::size_t r = 0; r < m.rows(); ++r)
        {
            out += format_double(row_axis[r]);
            for (std::size_t c = 0; c < m.cols(); ++c)
            {
                out += ',';
                out += format_double(m(r, c));
            }
            out += '\n';
        }
        return out;
    }
}
