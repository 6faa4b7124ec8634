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

#include "mpcx/channel_synth.hpp"
#include "mpcx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace mpcx
{
    double spatial_frequency(double phi_deg, double spacing_ratio)
    {
        if (!(phi_deg >= -90.0 && phi_deg <= 90.0))
            throw DomainError("spatial_frequency: angle must lie in [-90, 90] degrees.");
        if (!(spacing_ratio > 0.0))
            throw DomainError("spatial_frequency: spacing ratio must be positive.");
        return spacing_ratio * std::sin(phi_deg * pi / 180.0);
    }

    std::vector<cplx> steering_vector(double theta, std::size_t n)
    {
        std::vector<cplx> a(n);
        for (std::size_t m = 0; m < n; ++m)
            a[m] = std::polar(1.0, two_pi * theta * static_cast<double>(m));
        return a;
    }

    std::vector<double> frequency_grid(const SounderConfig &config)
    {
        std::vector<double> f(config.n_freq);
        const double w = config.bandwidth_hz;
        const double n = static_cast<double>(config.n_freq);
        for (std::size_t k = 0; k < config.n_freq; ++k)
            f[k] = -0.5 * w + static_cast<double>(k) * w / n;
        return f;
    }

    void validate_path(const PathParams &path, const SounderConfig &config)
    {
        if (!(path.aod >= -0.5 && path.aod <= 0.5))
            throw DomainError("Path AoD " + std::to_string(path.aod) + " outside [-0.5, 0.5] cycles.");
        if (!(path.aoa >= -0.5 && path.aoa <= 0.5))
            throw DomainError("Path AoA " + std::to_string(path.aoa) + " outside [-0.5, 0.5] cycles.");
        if (!(path.delay >= 0.0))
            throw DomainError("Path delay must be non-negative.");
        if (!(path.delay < config.duration()))
            throw DomainError("Path delay " + std::to_string(path.delay) +
                              " s is not below the observation window T = " + std::to_string(config.duration()) +
                              " s (would alias).");
        if (!std::isfinite(path.gain.real()) || !std::isfinite(path.gain.imag()))
            throw DomainError("Path gain must be finite.");
    }

    FrequencyResponse synthesize_response(const SounderConfig &config, std::span<const PathParams> paths)
    {
        config.validate();
        for (const auto &p : paths)
            validate_path(p, config);

        FrequencyResponse out(config);
        kernels::parallel::synthesize(config, paths, out.values);
        return out;
    }

    FrequencyResponse add_awgn(const FrequencyResponse &response, double noise_power_per_sample, std::uint64_t seed)
    {
        if (!(noise_power_per_sample >= 0.0))
            throw DomainError("add_awgn: noise power must be non-negative.");

        FrequencyResponse out = response;
        if (noise_power_per_sample == 0.0)
            return out;

        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * noise_power_per_sample));
        for (auto &v : out.values.values())
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            v += cplx(re, im);
        }
        return out;
    }

    namespace
    {
        std::size_t max_delay_index(const SounderConfig &config, double tau_max)
        {
            // an index of n_freq would alias onto index 0 on the sampled band
            const double l = std::ceil(tau_max * config.bandwidth_hz - 1.0e-9);
            const std::size_t cap = config.n_freq - 1;
            if (l <= 0.0)
                return 0;
            return std::min(cap, static_cast<std::size_t>(l));
        }
    }

    VirtualCoefficients virtual_coefficients(const FrequencyResponse &response, double tau_max)
    {
        const auto &cfg = response.config;
        cfg.validate();
        if (!(tau_max >= 0.0))
            throw DomainError("virtual_coefficients: tau_max must be non-negative.");
        if (tau_max > cfg.duration() * (1.0 + 1.0e-12))
            throw DomainError("virtual_coefficients: tau_max exceeds the observation window T.");
        if (response.values.dims() != std::array<std::size_t, 3>{cfg.n_rx, cfg.n_tx, cfg.n_freq})
            throw ShapeError("virtual_coefficients: response shape does not match its config.");

        VirtualCoefficients vc;
        vc.max_delay_index = max_delay_index(cfg, tau_max);

        std::vector<double> aoa(cfg.n_rx), aod(cfg.n_tx), delay(vc.max_delay_index + 1);
        for (std::size_t i = 0; i < cfg.n_rx; ++i)
            aoa[i] = static_cast<double>(i) / static_cast<double>(cfg.n_rx);
        for (std::size_t k = 0; k < cfg.n_tx; ++k)
            aod[k] = static_cast<double>(k) / static_cast<double>(cfg.n_tx);
        for (std::size_t l = 0; l < delay.size(); ++l)
            delay[l] = static_cast<double>(l) / cfg.bandwidth_hz;

        vc.values = kernels::serial::separable_transform(response.values, cfg, aoa, aod, delay);
        return vc;
    }

    FrequencyResponse reconstruct_from_virtual(const VirtualCoefficients &coeffs, const SounderConfig &config)
    {
        config.validate();
        const auto &v = coeffs.values;
        if (v.dim(0) != config.n_rx || v.dim(1) != config.n_tx || v.dim(2) != coeffs.max_delay_index + 1)
            throw ShapeError("reconstruct_from_virtual: coefficient shape does not match the config.");
        if (coeffs.max_delay_index >= config.n_freq)
            throw ShapeError("reconstruct_from_virtual: more delay taps than frequency samples.");

        const std::size_t nr = config.n_rx, nt = config.n_tx, nf = config.n_freq, nl = v.dim(2);
        const auto f = frequency_grid(config);

        // Stage-wise inverse of the separable analysis: delay taps -> frequency, AoD -> tx, AoA -> rx
        CTensor3 s1(nr, nt, nf);
        std::vector<cplx> ph(nl * nf);
        for (std::size_t l = 0; l < nl; ++l)
            for (std::size_t k = 0; k < nf; ++k)
                ph[l * nf + k] = std::polar(1.0, -two_pi * (static_cast<double>(l) / config.bandwidth_hz) * f[k]);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nt; ++j)
                for (std::size_t l = 0; l < nl; ++l)
                {
                    const cplx c = v(i, j, l);
                    if (c == cplx{})
                        continue;
                    for (std::size_t k = 0; k < nf; ++k)
                        s1(i, j, k) += c * ph[l * nf + k];
                }

        CTensor3 s2(nr, nt, nf);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nt; ++j)
                for (std::size_t t = 0; t < nt; ++t)
                {
                    // conj(a^T(j / N_T))_t
                    const cplx w = std::polar(1.0, -two_pi * static_cast<double>(j * t % nt) / static_cast<double>(nt));
                    for (std::size_t k = 0; k < nf; ++k)
                        s2(i, t, k) += w * s1(i, j, k);
                }

        FrequencyResponse out(config);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t r = 0; r < nr; ++r)
            {
                const cplx w = std::polar(1.0, two_pi * static_cast<double>(i * r % nr) / static_cast<double>(nr));
                for (std::size_t t = 0; t < nt; ++t)
                    for (std::size_t k = 0; k < nf; ++k)
                        out.values(r, t, k) += w * s2(i, t, k);
            }
        return out;
    }

    std::size_t signal_space_dimension(const SounderConfig &config)
    {
        return config.n_tx * config.n_rx * config.n_freq;
    }

    PathList filter_by_dynamic_range(std::span<const PathParams> paths, double dr_db)
    {
        if (paths.empty())
            throw DomainError("filter_by_dynamic_range: empty path list.");
        if (!(dr_db > 0.0))
            throw DomainError("filter_by_dynamic_range: dynamic range must be positive.");

        double max_power = 0.0;
        for (const auto &p : paths)
            max_power = std::max(max_power, p.power());
        const double threshold = max_power / std::pow(10.0, dr_db / 10.0);

        PathList kept;
        for (const auto &p : paths)
            if (p.power() >= threshold)
                kept.push_back(p);
        return kept;
    }

    double response_power(const FrequencyResponse &response)
    {
        const auto nf = response.values.dim(2);
        return nf == 0 ? 0.0 : total_power(response.values.values()) / static_cast<double>(nf);
    }
}
