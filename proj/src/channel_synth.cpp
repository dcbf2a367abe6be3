// SPDX-License-Identifier: Apache-2.0
//
// chanlingo: channel prediction over vocabularies of channel changes
// Copyright (C) 2026 The chanlingo authors
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

#include "chanlingo/channel_synth.hpp"

#include "chanlingo/error.hpp"
#include "chanlingo/io.hpp"
#include "chanlingo/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace chanlingo
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite_nonneg(double v, const char *what)
{
    if (!std::isfinite(v) || v < 0.0)
        throw InvalidArgument(std::string(what) + " must be finite and non-negative");
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

void ChannelSeries::validate() const
{
    if (samples.size() < 2)
        throw InvalidArgument("channel series needs at least 2 samples");
    if (!(sample_interval_s > 0.0) || !std::isfinite(sample_interval_s))
        throw InvalidArgument("sample interval must be positive");
    for (const auto &s : samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw InvalidArgument("channel series contains a non-finite sample");
}

double doppler_frequency(double speed_mps, double carrier_freq_hz)
{
    require_finite_nonneg(speed_mps, "speed");
    require_finite_nonneg(carrier_freq_hz, "carrier frequency");
    if (carrier_freq_hz == 0.0)
        throw InvalidArgument("carrier frequency must be positive");
    return speed_mps * carrier_freq_hz / kSpeedOfLight;
}

double wavelength_span(double duration_s, double speed_mps, double carrier_freq_hz)
{
    require_finite_nonneg(duration_s, "duration");
    return duration_s * doppler_frequency(speed_mps, carrier_freq_hz);
}

double FadingConfig::doppler_hz() const
{
    return doppler_frequency(speed_mps, carrier_freq_hz);
}

std::vector<double> FadingConfig::linear_tap_powers() const
{
    std::vector<double> p(tap_gains_db.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = std::pow(10.0, tap_gains_db[i] / 10.0);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto &v : p)
        v /= total;
    return p;
}

void FadingConfig::validate() const
{
    if (!(sample_interval_s > 0.0) || !std::isfinite(sample_interval_s))
        throw InvalidArgument("sample_interval_s must be positive");
    if (num_sinusoids < 1)
        throw InvalidArgument("num_sinusoids must be >= 1");
    if (num_taps < 1)
        throw InvalidArgument("num_taps must be >= 1");
    if (tap_gains_db.size() != static_cast<std::size_t>(num_taps))
        throw InvalidArgument("tap_gains_db must have num_taps entries");
    for (double g : tap_gains_db)
        if (!std::isfinite(g))
            throw InvalidArgument("tap gains must be finite");
    if (duration_samples < 2)
        throw InvalidArgument("duration_samples must be >= 2");
    if (doppler_hz() * sample_interval_s >= 0.5)
        throw InvalidArgument("Doppler frequency violates the sampling Nyquist limit");
}

ChannelSeries sum_of_sinusoids(double doppler_hz, double sample_interval_s, std::size_t count,
                               std::span<const double> arrival_angles,
                               std::span<const double> phases, double amplitude)
{
    if (arrival_angles.empty() || arrival_angles.size() != phases.size())
        throw InvalidArgument("need matching, non-empty angle and phase lists");

    const std::size_t k_count = arrival_angles.size();
    const double scale = amplitude / std::sqrt(static_cast<double>(k_count));
    std::vector<double> omega(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
        omega[k] = kTwoPi * doppler_hz * std::cos(arrival_angles[k]) * sample_interval_s;

    ChannelSeries out;
    out.sample_interval_s = sample_interval_s;
    out.samples.resize(count);
    for (std::size_t n = 0; n < count; ++n)
    {
        const double t = static_cast<double>(n);
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < k_count; ++k)
            acc += std::polar(1.0, omega[k] * t + phases[k]);
        out.samples[n] = acc * scale;
    }
    return out;
}

ChannelSeries generate_tap(const FadingConfig &config, int tap_index)
{
    config.validate();
    if (tap_index < 0 || tap_index >= config.num_taps)
        throw InvalidArgument("tap index out of range");

    CounterRng rng(config.rng_seed ^ static_cast<std::uint64_t>(tap_index), 0x7a9);
    const auto k_count = static_cast<std::size_t>(config.num_sinusoids);
    std::vector<double> angles(k_count);
    std::vector<double> phases(k_count);
    // One angle per stratum of [0, pi): cos(alpha) keeps the Clarke arcsine
    // law, and no two sinusoids share a Doppler frequency.
    for (std::size_t k = 0; k < k_count; ++k)
    {
        angles[k] = std::numbers::pi * (static_cast<double>(k) + rng.uniform()) /
                    static_cast<double>(k_count);
        phases[k] = rng.uniform(0.0, kTwoPi);
    }

    const double power = config.linear_tap_powers()[static_cast<std::size_t>(tap_index)];
    auto out = sum_of_sinusoids(config.doppler_hz(), config.sample_interval_s,
                                config.duration_samples, angles, phases, std::sqrt(power));
    out.label = "tap" + std::to_string(tap_index);
    return out;
}

ChannelSeries generate_channel(const FadingConfig &config)
{
    ChannelSeries sum = generate_tap(config, 0);
    for (int tap = 1; tap < config.num_taps; ++tap)
    {
        const auto t = generate_tap(config, tap);
        for (std::size_t n = 0; n < sum.samples.size(); ++n)
            sum.samples[n] += t.samples[n];
    }
    sum.label = "channel";
    return sum;
}

ChannelSeries add_noise(const ChannelSeries &series, double snr_db, std::uint64_t rng_seed)
{
    if (series.samples.empty())
        throw InvalidArgument("cannot add noise to an empty series");
    ChannelSeries out = series;
    if (std::isinf(snr_db) && snr_db > 0.0)
        return out;

    const double noise_var = mean_power(series.samples) / std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(noise_var / 2.0);
    CounterRng rng(rng_seed, 0x6e6f);
    for (auto &s : out.samples)
    {
        const double re = rng.normal();
        const double im = rng.normal();
        s += Complex{sigma * re, sigma * im};
    }
    return out;
}

double mean_power(std::span<const Complex> samples)
{
    if (samples.empty())
        return 0.0;
    double acc = 0.0;
    for (const auto &s : samples)
        acc += std::norm(s);
    return acc / static_cast<double>(samples.size());
}

double normalize_power(ChannelSeries &series)
{
    const double p = mean_power(series.samples);
    if (!(p > 0.0))
        throw InvalidArgument("cannot normalize a zero-power series");
    const double scale = 1.0 / std::sqrt(p);
    for (auto &s : series.samples)
        s *= scale;
    return scale;
}

std::string format_csf(const ChannelSeries &series)
{
    std::string out = "# csf v1 interval_s=" + io::format_double(series.sample_interval_s) +
                      " label=" + series.label + "\n";
    for (const auto &s : series.samples)
    {
        out += io::format_double(s.real());
        out += ' ';
        out += io::format_double(s.imag());
        out += '\n';
    }
    return out;
}

ChannelSeries parse_csf(std::string_view text, const std::string &source)
{
    ChannelSeries out;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (!have_header)
        {
            constexpr std::string_view prefix = "# csf v1 interval_s=";
            if (line.substr(0, prefix.size()) != prefix)
                throw ParseError(source, line_no, "expected '# csf v1 interval_s=... label=...' header");
            std::string_view rest = line.substr(prefix.size());
            const std::size_t label_at = rest.find(" label=");
            if (label_at == std::string_view::npos)
                throw ParseError(source, line_no, "header is missing label=");
            const auto interval = io::parse_double(rest.substr(0, label_at));
            if (!interval || !(*interval > 0.0))
                throw ParseError(source, line_no, "bad interval_s value");
            out.sample_interval_s = *interval;
            out.label = std::string(rest.substr(label_at + 7));
            have_header = true;
            continue;
        }
        if (line.empty())
            continue;
        const std::size_t sp = line.find_first_of(" \t");
        if (sp == std::string_view::npos)
            throw ParseError(source, line_no, "expected '<real> <imag>'");
        const auto re = io::parse_double(trim(line.substr(0, sp)));
        const auto im = io::parse_double(trim(line.substr(sp + 1)));
        if (!re || !im || !std::isfinite(*re) || !std::isfinite(*im))
            throw ParseError(source, line_no, "malformed sample");
        out.samples.emplace_back(*re, *im);
    }
    if (!have_header)
        throw ParseError(source, 1, "empty file");
    return out;
}

void save_csf(const ChannelSeries &series, const std::filesystem::path &path)
{
    io::write_file_atomic(path, format_csf(series));
}

ChannelSeries load_csf(const std::filesystem::path &path)
{
    return parse_csf(io::read_file(path), path.string());
}

} // namespace chanlingo
