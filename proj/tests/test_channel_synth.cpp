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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace chanlingo;
using Catch::Approx;

namespace
{

constexpr double kPi = std::numbers::pi;

// Normalized time-average autocorrelation Re{E[h(t+lag) h*(t)]} / E[|h|^2].
double autocorrelation(const ChannelSeries &s, std::size_t lag)
{
    Complex acc = 0.0;
    double power = 0.0;
    const std::size_t n = s.size() - lag;
    for (std::size_t t = 0; t < n; ++t)
    {
        acc += s.samples[t + lag] * std::conj(s.samples[t]);
        power += std::norm(s.samples[t]);
    }
    return acc.real() / power;
}

FadingConfig ten_hz_config(std::uint64_t seed, std::size_t samples)
{
    FadingConfig c;
    c.carrier_freq_hz = 3.45e9;
    c.speed_mps = 10.0 * kSpeedOfLight / c.carrier_freq_hz; // f_d = 10 Hz
    c.sample_interval_s = 1e-3;
    c.duration_samples = samples;
    c.rng_seed = seed;
    return c;
}

} // namespace

TEST_CASE("doppler frequency", "[channel_synth]")
{
    // 3 km/h at 3.45 GHz: about 10 Hz.
    CHECK(doppler_frequency(3.0 / 3.6, 3.45e9) == Approx(9.58997).epsilon(1e-5));
    CHECK(doppler_frequency(0.0, 3.45e9) == 0.0);
    // 100 km/h, evaluated offline as 27.7778 * 3.45e9 / 299792458.
    CHECK(doppler_frequency(27.7778, 3.45e9) == Approx(319.66585).epsilon(1e-6));

    CHECK_THROWS_AS(doppler_frequency(-1.0, 3.45e9), InvalidArgument);
    CHECK_THROWS_AS(doppler_frequency(1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(doppler_frequency(NAN, 3.45e9), InvalidArgument);
}

TEST_CASE("wavelength span", "[channel_synth]")
{
    const double v = 3.0 / 3.6;
    CHECK(wavelength_span(30e-3, v, 3.45e9) == Approx(0.287699).epsilon(1e-5));
    CHECK(wavelength_span(10e-3, v, 3.45e9) == Approx(0.0958997).epsilon(1e-5));
    CHECK(wavelength_span(0.0, v, 3.45e9) == 0.0);
    CHECK_THROWS_AS(wavelength_span(-1.0, v, 3.45e9), InvalidArgument);

    for (double t : {0.0, 1e-3, 0.03, 1.7})
        for (double speed : {0.0, 0.8333, 27.7778})
            CHECK(wavelength_span(t, speed, 3.45e9) == t * doppler_frequency(speed, 3.45e9));
}

TEST_CASE("single sinusoid has unit magnitude", "[channel_synth]")
{
    const double angle[] = {0.0};
    const double phase[] = {0.0};
    const auto s = sum_of_sinusoids(10.0, 1e-3, 500, angle, phase);
    REQUIRE(s.size() == 500);
    for (std::size_t n = 0; n < s.size(); ++n)
    {
        CHECK(std::abs(s.samples[n]) == Approx(1.0).epsilon(1e-12));
        const Complex expect = std::polar(1.0, 2.0 * kPi * 10.0 * 1e-3 * static_cast<double>(n));
        CHECK(std::abs(s.samples[n] - expect) < 1e-12);
    }
}

TEST_CASE("stationary user gives a constant tap", "[channel_synth]")
{
    FadingConfig c;
    c.speed_mps = 0.0;
    c.duration_samples = 200;
    c.rng_seed = 7;
    const auto s = generate_tap(c, 0);
    for (const auto &x : s.samples)
        CHECK(x == s.samples[0]);
}

TEST_CASE("generator is deterministic and seed-sensitive", "[channel_synth]")
{
    auto c = ten_hz_config(42, 1000);
    CHECK(generate_tap(c, 0) == generate_tap(c, 0));
    auto other = c;
    other.rng_seed = 43;
    CHECK(!(generate_tap(other, 0) == generate_tap(c, 0)));
}

TEST_CASE("autocorrelation follows J0", "[channel_synth]")
{
    const auto s = generate_tap(ten_hz_config(42, 10'000), 0);
    for (std::size_t lag = 0; lag <= 20; ++lag)
    {
        const double tau = static_cast<double>(lag) * 1e-3;
        const double j0 = std::cyl_bessel_j(0.0, 2.0 * kPi * 10.0 * tau);
        INFO("lag " << lag);
        CHECK(std::abs(autocorrelation(s, lag) - j0) <= 0.1);
    }
}

TEST_CASE("tap power matches configured gain", "[channel_synth]")
{
    auto c = ten_hz_config(0, 100'000);
    c.num_taps = 3;
    c.tap_gains_db = {0.0, -3.0, -10.0};
    const auto powers = c.linear_tap_powers();
    double total = 0.0;
    for (double p : powers)
        total += p;
    CHECK(std::abs(total - 1.0) < 1e-9);

    for (std::uint64_t seed = 0; seed < 6; ++seed)
    {
        c.rng_seed = seed;
        for (int tap = 0; tap < c.num_taps; ++tap)
        {
            const auto s = generate_tap(c, tap);
            const double p = mean_power(s.samples);
            INFO("seed " << seed << " tap " << tap);
            CHECK(std::abs(p / powers[static_cast<std::size_t>(tap)] - 1.0) < 0.02);
        }
    }
}

TEST_CASE("config validation", "[channel_synth]")
{
    FadingConfig c;
    c.speed_mps = 1e5; // f_d * dt far above 0.5
    CHECK_THROWS_AS(generate_tap(c, 0), InvalidArgument);

    FadingConfig taps;
    taps.num_taps = 2;
    taps.tap_gains_db = {0.0};
    CHECK_THROWS_AS(taps.validate(), InvalidArgument);

    FadingConfig ok;
    CHECK_THROWS_AS(generate_tap(ok, 1), InvalidArgument);
}

TEST_CASE("noise", "[channel_synth]")
{
    ChannelSeries s;
    s.samples.assign(200'000, Complex(1.0, 0.0));
    s.label = "const";

    CHECK(add_noise(s, kNoNoise, 3) == s);

    const auto noisy = add_noise(s, 0.0, 3);
    double p = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        p += std::norm(noisy.samples[i] - s.samples[i]);
    p /= static_cast<double>(s.size());
    CHECK(std::abs(p - 1.0) < 0.05);

    CHECK(add_noise(s, 10.0, 9) == add_noise(s, 10.0, 9));
    CHECK(!(add_noise(s, 10.0, 9) == add_noise(s, 10.0, 10)));
}

TEST_CASE("power normalization", "[channel_synth]")
{
    auto s = generate_tap(ten_hz_config(5, 2000), 0);
    for (auto &x : s.samples)
        x *= 3.0;
    const double scale = normalize_power(s);
    CHECK(mean_power(s.samples) == Approx(1.0).epsilon(1e-12));
    CHECK(scale > 0.0);
}

TEST_CASE("csf round trip and errors", "[channel_synth]")
{
    auto s = generate_tap(ten_hz_config(11, 64), 0);
    s.label = "route a";
    const auto back = parse_csf(format_csf(s));
    CHECK(back == s);

    CHECK_THROWS_AS(parse_csf("1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_csf("# csf v2 interval_s=0.001 label=x\n1 2\n3 4\n"), ParseError);
    try
    {
        parse_csf("# csf v1 interval_s=0.001 label=x\n1 2\n3 oops\n");
        FAIL("expected a parse error");
    }
    catch (const ParseError &e)
    {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_csf("# csf v1 interval_s=0.001 label=x\n1 2\nnan 0\n"), Error);
}
