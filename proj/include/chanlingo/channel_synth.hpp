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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chanlingo
{

using Complex = std::complex<double>;

inline constexpr double kSpeedOfLight = 299'792'458.0;

// Pass as snr_db to add_noise to get a clean copy back.
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Uniformly sampled complex channel coefficients.
struct ChannelSeries
{
    std::vector<Complex> samples;
    double sample_interval_s = 1e-3;
    std::string label;

    std::size_t size() const { return samples.size(); }

    // Throws InvalidArgument unless length >= 2, interval > 0 and all samples are finite.
    void validate() const;

    bool operator==(const ChannelSeries &) const = default;
};

/// Parameters of the per-tap sum-of-sinusoids (Clarke) fading generator.
struct FadingConfig
{
    double carrier_freq_hz = 3.45e9;
    double speed_mps = 3.0 / 3.6;
    double sample_interval_s = 1e-3;
    int num_sinusoids = 32;
    int num_taps = 1;
    std::vector<double> tap_gains_db = {0.0};
    std::size_t duration_samples = 10'000;
    std::uint64_t rng_seed = 0;

    double doppler_hz() const;

    // Linear tap powers scaled so they sum to one.
    std::vector<double> linear_tap_powers() const;

    void validate() const;

    bool operator==(const FadingConfig &) const = default;
};

// Maximum Doppler shift v * f_c / c.
double doppler_frequency(double speed_mps, double carrier_freq_hz);

// Distance covered during `duration_s`, in carrier wavelengths (T * f_d).
double wavelength_span(double duration_s, double speed_mps, double carrier_freq_hz);

// Sum over k of amplitude / sqrt(K) * exp(i (2 pi f_d cos(angle_k) t + phase_k)),
// sampled at t = n * interval for n in [0, count).
ChannelSeries sum_of_sinusoids(double doppler_hz, double sample_interval_s, std::size_t count,
                               std::span<const double> arrival_angles,
                               std::span<const double> phases, double amplitude = 1.0);

// One tap of the configured channel. Angles and phases come from a counter
// RNG keyed by rng_seed ^ tap_index, so the output is bit-reproducible.
ChannelSeries generate_tap(const FadingConfig &config, int tap_index);

// Sum of all taps: the narrowband (flat) response of the configured channel.
ChannelSeries generate_channel(const FadingConfig &config);

// Circularly-symmetric complex Gaussian noise at the requested SNR relative
// to the series' mean power. kNoNoise returns the input unchanged.
ChannelSeries add_noise(const ChannelSeries &series, double snr_db, std::uint64_t rng_seed);

double mean_power(std::span<const Complex> samples);

// Scales the series to unit mean power; returns the factor that was applied.
double normalize_power(ChannelSeries &series);

// --- Channel series files -------------------------------------------------
//
//   # csf v1 interval_s=<float> label=<text>
//   <real> <imag>
//   ...

std::string format_csf(const ChannelSeries &series);
ChannelSeries parse_csf(std::string_view text, const std::string &source = "<memory>");
void save_csf(const ChannelSeries &series, const std::filesystem::path &path);
ChannelSeries load_csf(const std::filesystem::path &path);

} // namespace chanlingo
