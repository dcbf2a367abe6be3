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
#include "chanlingo/rng.hpp"
#include "chanlingo/vcc.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>

using namespace chanlingo;

namespace
{

ChannelSeries series_of(std::vector<Complex> samples)
{
    ChannelSeries s;
    s.samples = std::move(samples);
    return s;
}

ChangeSeries quantized_of(std::vector<Complex> changes, double step = 0.01)
{
    ChangeSeries c;
    c.changes = std::move(changes);
    c.quant_step = step;
    return c;
}

// Top ten rows of a reference frequency table.
const char *kTableTop10 = "# vccf v1 step=0.01 X=10 L=0\n"
                          "1 0.02 -0.02 538211\n"
                          "2 -0.02 0.02 536925\n"
                          "3 -0.02 -0.02 535761\n"
                          "4 0.02 0.02 534726\n"
                          "5 -0.02 0.01 373125\n"
                          "6 -0.01 0.02 371946\n"
                          "7 0.01 0.02 371856\n"
                          "8 -0.02 -0.01 371778\n"
                          "9 -0.01 -0.02 371682\n"
                          "10 0.01 -0.02 371673\n";

} // namespace

TEST_CASE("compute_changes", "[vcc]")
{
    const auto c = compute_changes(series_of({{1, 0}, {1.02, -0.02}}));
    REQUIRE(c.changes.size() == 1);
    CHECK(std::abs(c.changes[0] - Complex(0.02, -0.02)) < 1e-15);
    CHECK(!c.quantized());

    const auto flat = compute_changes(series_of(std::vector<Complex>(5, {0.3, -0.4})));
    for (auto z : flat.changes)
        CHECK(z == Complex(0, 0));

    CHECK_THROWS_AS(compute_changes(series_of({{1, 0}})), InvalidArgument);

    CounterRng rng(17);
    std::vector<Complex> xs(300);
    for (auto &x : xs)
        x = {rng.normal(), rng.normal()};
    const auto d = compute_changes(series_of(xs));
    Complex acc = xs[0];
    for (std::size_t k = 0; k < d.changes.size(); ++k)
    {
        acc += d.changes[k];
        CHECK(std::abs(acc - xs[k + 1]) < 1e-12);
    }
}

TEST_CASE("quantize", "[vcc]")
{
    const auto q = quantize(quantized_of({{0.0213, -0.0192}, {0.005, 0.0}, {-0.005, -0.015}, {0.03, -0.07}}), 0.01);
    CHECK(q.changes[0] == Complex(0.02, -0.02));
    CHECK(format_change(q.changes[0]) == "+0.02-0.02i");
    CHECK(q.changes[1] == Complex(0.01, 0.0));
    CHECK(q.changes[2] == Complex(-0.01, -0.02));
    CHECK(q.changes[3] == Complex(0.03, -0.07));

    CounterRng rng(3);
    ChangeSeries raw;
    for (int i = 0; i < 2000; ++i)
        raw.changes.emplace_back(rng.normal() * 0.05, rng.normal() * 0.05);
    const auto once = quantize(raw, 0.01);
    const auto twice = quantize(once, 0.01);
    CHECK(once.changes == twice.changes);
    for (auto z : once.changes)
    {
        CHECK(std::abs(z.real() / 0.01 - std::round(z.real() / 0.01)) < 1e-9);
        CHECK(std::abs(z.imag() / 0.01 - std::round(z.imag() / 0.01)) < 1e-9);
    }
    CHECK_THROWS_AS(quantize(raw, 0.0), InvalidArgument);
}

TEST_CASE("build_vocabulary", "[vcc]")
{
    const Complex a{0.01, 0.0}, b{0.0, -0.02}, c{0.03, 0.03};
    std::vector<Complex> xs;
    xs.insert(xs.end(), 5, a);
    xs.insert(xs.end(), 3, b);
    xs.insert(xs.end(), 1, c);
    std::reverse(xs.begin(), xs.end());
    const auto v = build_vocabulary(quantized_of(xs), 100, 2);
    REQUIRE(v.size() == 2);
    CHECK(v.entries()[0] == VocabEntry{1, a, 5});
    CHECK(v.entries()[1] == VocabEntry{2, b, 3});
    CHECK(v.oov_count() == 1);
    CHECK(v.token_count() == 3);

    const auto single = build_vocabulary(quantized_of(std::vector<Complex>(7, b)), 10, 1);
    CHECK(single.size() == 1);
    CHECK(single.oov_count() == 0);

    // max_size truncation counts the dropped values as out-of-vocabulary.
    const auto trunc = build_vocabulary(quantized_of(xs), 1, 1);
    CHECK(trunc.size() == 1);
    CHECK(trunc.oov_count() == 2);

    // Ties go to ascending (real, imag).
    const auto tied = build_vocabulary(quantized_of({{0.02, 0}, {-0.01, 0.01}, {-0.01, -0.01}}), 10, 1);
    CHECK(tied.entries()[0].cc == Complex(-0.01, -0.01));
    CHECK(tied.entries()[1].cc == Complex(-0.01, 0.01));
    CHECK(tied.entries()[2].cc == Complex(0.02, 0));

    CHECK_THROWS_AS(build_vocabulary(quantized_of({}), 10, 1), InvalidArgument);
    ChangeSeries unq;
    unq.changes = {a};
    CHECK_THROWS_AS(build_vocabulary(unq, 10, 1), InvalidArgument);
}

TEST_CASE("encode and decode", "[vcc]")
{
    const Complex a{0.02, -0.02}, b{-0.01, 0.0};
    const auto vocab = build_vocabulary(quantized_of({a, a, a, b}), 10, 1);

    const auto all_a = encode(series_of({{0, 0}, a, 2.0 * a, 3.0 * a}), vocab);
    CHECK(all_a.ids == std::vector<int>{1, 1, 1});
    CHECK(all_a.vocabulary_hash == vocab.hash());

    const auto with_unk = encode(series_of({{0, 0}, {0.5, 0.5}}), vocab);
    CHECK(with_unk.ids == std::vector<int>{0});

    TokenSeries t;
    t.vocabulary_hash = vocab.hash();
    t.anchor = {1.0, 1.0};
    t.ids = {1};
    auto one = decode(t, vocab);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one.samples[0] - (Complex(1, 1) + a)) < 1e-15);

    t.ids = {0, 0, 0};
    DecodeStats stats;
    const auto held = decode(t, vocab, &stats);
    for (auto z : held.samples)
        CHECK(z == t.anchor);
    CHECK(stats.unk_count == 3);

    t.anchor = 0.0;
    t.ids = {1, 2, 1};
    const auto prefix = decode(t, vocab);
    CHECK(std::abs(prefix.samples[0] - a) < 1e-15);
    CHECK(std::abs(prefix.samples[1] - (a + b)) < 1e-15);
    CHECK(std::abs(prefix.samples[2] - (a + b + a)) < 1e-15);

    t.ids = {3};
    CHECK_THROWS_AS(decode(t, vocab), CorruptToken);
    t.ids = {1};
    t.vocabulary_hash ^= 1;
    CHECK_THROWS_AS(decode(t, vocab), VocabularyMismatch);

    const auto other_step = quantized_of({a}, 0.02);
    CHECK_THROWS_AS(encode_changes(other_step, 0.0, vocab), InvalidArgument);
}

TEST_CASE("round trip reproduces the quantized reconstruction", "[vcc]")
{
    CounterRng rng(99);
    std::vector<Complex> all;
    std::vector<ChannelSeries> series;
    for (int s = 0; s < 50; ++s)
    {
        std::vector<Complex> xs{{rng.normal(), rng.normal()}};
        for (int k = 0; k < 100; ++k)
            xs.push_back(xs.back() + Complex(rng.normal() * 0.03, rng.normal() * 0.03));
        series.push_back(series_of(xs));
        const auto q = quantize(compute_changes(series.back()), 0.01);
        all.insert(all.end(), q.changes.begin(), q.changes.end());
    }
    const auto vocab = build_vocabulary(quantized_of(all), 100'000, 1);
    for (const auto &s : series)
    {
        const auto tokens = encode(s, vocab);
        const auto q = quantize(compute_changes(s), 0.01);
        for (int id : tokens.ids)
            CHECK((id >= 1 && id <= vocab.size()));
        const auto back = decode(tokens, vocab);
        Complex acc = s.samples[0];
        for (std::size_t k = 0; k < q.changes.size(); ++k)
        {
            acc += q.changes[k];
            CHECK(std::abs(back.samples[k] - acc) < 1e-9);
        }
    }
}

TEST_CASE("vocabulary files", "[vcc]")
{
    const auto table = parse_vocabulary(kTableTop10);
    CHECK(table.size() == 10);
    CHECK(table.entries()[0].cc == Complex(0.02, -0.02));
    CHECK(table.entries()[0].frequency == 538211);
    CHECK(format_change(table.change_of(1)) == "+0.02-0.02i");
    CHECK(table.id_of({0.02, -0.02}) == 1);
    for (std::size_t i = 1; i < table.entries().size(); ++i)
        CHECK(table.entries()[i - 1].frequency >= table.entries()[i].frequency);

    const auto back = parse_vocabulary(format_vocabulary(table));
    CHECK(back == table);
    CHECK(back.hash() == table.hash());

    CHECK_THROWS_AS(parse_vocabulary("# vccf v1 step=0.01 X=2 L=0\n1 0.02 0 5\n2 0.02 0 4\n"), ParseError);
    CHECK_THROWS_AS(parse_vocabulary("# vccf v1 step=0.01 X=2 L=0\n1 0.02 0 5\n2 0.01 0 6\n"), ParseError);
    CHECK_THROWS_AS(parse_vocabulary("# vccf v1 step=0.01 X=2 L=0\n1 0.02 0 5\n"), ParseError);
    try
    {
        parse_vocabulary("# vccf v1 step=0.01 X=2 L=0\n1 0.02 0 5\n2 x 0 4\n");
        FAIL("expected a parse error");
    }
    catch (const ParseError &e)
    {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("symmetric change pairs on Clarke data", "[vcc][statistical]")
{
    FadingConfig c;
    c.speed_mps = 10.0 * kSpeedOfLight / c.carrier_freq_hz;
    c.duration_samples = 1'000'001;
    c.rng_seed = 2024;
    auto s = generate_tap(c, 0);
    normalize_power(s);
    const auto q = quantize(compute_changes(s), 0.01);
    const auto vocab = build_vocabulary(q, 2000, 1);
    std::map<GridPoint, std::uint64_t> freq;
    for (const auto &e : vocab.entries())
        freq[grid_point(e.cc, 0.01)] = e.frequency;
    for (int i = 0; i < 10; ++i)
    {
        const auto &e = vocab.entries()[static_cast<std::size_t>(i)];
        const auto mirror = grid_point(-e.cc, 0.01);
        const double f = static_cast<double>(e.frequency);
        const double g = static_cast<double>(freq[mirror]);
        INFO(format_change(e.cc) << " " << f << " vs " << g);
        CHECK(std::abs(f - g) / std::max(f, g) < 0.10);
    }
}
