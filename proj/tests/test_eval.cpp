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

#include "chanlingo/error.hpp"
#include "chanlingo/eval.hpp"
#include "chanlingo/io.hpp"
#include "chanlingo/rng.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace chanlingo;
using Catch::Approx;

namespace
{

ChannelSeries random_series(std::size_t n, CounterRng &rng)
{
    ChannelSeries s;
    for (std::size_t k = 0; k < n; ++k)
        s.samples.emplace_back(rng.normal(), rng.normal());
    return s;
}

ChannelSeries exponential(std::size_t n, double fd, double dt)
{
    ChannelSeries s;
    s.sample_interval_s = dt;
    for (std::size_t k = 0; k < n; ++k)
        s.samples.push_back(std::polar(1.0, 2.0 * std::numbers::pi * fd * dt * static_cast<double>(k)));
    return s;
}

std::vector<std::string> split(const std::string &line, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, sep))
        out.push_back(field);
    return out;
}

} // namespace

TEST_CASE("nmse", "[eval]")
{
    CounterRng rng(1);
    const auto h = random_series(100, rng);
    CHECK(nmse(h, h) == 0.0);

    auto twice = h;
    for (auto &z : twice.samples)
        z *= 2.0;
    CHECK(nmse(h, twice) == Approx(0.25).epsilon(1e-12));
    CHECK(nmse(h, twice, NmseNorm::kTruth) == Approx(1.0).epsilon(1e-12));

    for (int i = 0; i < 20; ++i)
    {
        const Complex c(rng.normal(), rng.normal());
        auto scaled = h;
        for (auto &z : scaled.samples)
            z *= c;
        CHECK(nmse(h, scaled) == Approx(std::norm(1.0 - c) / std::norm(c)).epsilon(1e-10));

        const Complex rot = std::polar(1.0, rng.uniform(0.0, 6.28));
        auto a = h, b = scaled;
        for (auto &z : a.samples)
            z *= rot;
        for (auto &z : b.samples)
            z *= rot;
        CHECK(nmse(a, b) == Approx(nmse(h, scaled)).epsilon(1e-10));
    }

    auto zero = h;
    for (auto &z : zero.samples)
        z = 0.0;
    CHECK_THROWS_AS(nmse(h, zero), UndefinedNmse);
    auto shorter = h;
    shorter.samples.pop_back();
    CHECK_THROWS_AS(nmse(h, shorter), InvalidArgument);
}

TEST_CASE("splice bookkeeping", "[eval]")
{
    CounterRng rng(2);
    const PredictionTask task{.M = 7, .N = 4};
    const auto truth = random_series(7 + 1 + 3 * 4, rng);
    const BlockPredictor oracle = [&](std::span<const ChannelSeries> histories) {
        std::vector<ChannelSeries> out;
        for (const auto &h : histories)
        {
            // Locate the window in the truth and return what follows.
            std::size_t start = 0;
            while (truth.samples[start] != h.samples.front())
                ++start;
            ChannelSeries b;
            b.samples.assign(truth.samples.begin() + static_cast<std::ptrdiff_t>(start + h.size()),
                             truth.samples.begin() +
                                 static_cast<std::ptrdiff_t>(std::min(truth.size(), start + h.size() + 4)));
            b.samples.resize(4);
            out.push_back(b);
        }
        return out;
    };
    const auto r = splice(truth, oracle, layout_for(task));
    REQUIRE(r.segments.size() == 3);
    CHECK(r.segments[0] == Segment{8, 4});
    CHECK(r.segments[1] == Segment{12, 4});
    CHECK(r.segments[2] == Segment{16, 4});
    CHECK(r.segments.back().start + r.segments.back().length == truth.size());
    CHECK(r.evaluable_start == 8);
    CHECK(r.nmse() == 0.0);

    // Truth outside the replaced blocks is untouched.
    const BlockPredictor junk = [](std::span<const ChannelSeries> histories) {
        return std::vector<ChannelSeries>(histories.size(), ChannelSeries{{{9, 9}, {9, 9}, {9, 9}, {9, 9}}, 1e-3, ""});
    };
    const auto j = splice(truth, junk, layout_for(task));
    for (std::size_t k = 0; k < 8; ++k)
        CHECK(j.predicted.samples[k] == truth.samples[k]);
    for (std::size_t k = 8; k < truth.size(); ++k)
        CHECK(j.predicted.samples[k] == Complex(9, 9));

    // Partial last block.
    auto longer = truth;
    longer.samples.push_back({1, 1});
    const auto p = splice(longer, junk, layout_for(task));
    CHECK(p.segments.back() == Segment{20, 1});

    CHECK_THROWS_AS(splice(random_series(8, rng), junk, layout_for(task)), InvalidArgument);
}

TEST_CASE("accumulating splice reads its own predictions", "[eval]")
{
    ChannelSeries truth;
    truth.samples.assign(3 + 2 * 2, Complex(0, 0));
    const BlockPredictor plus_one = [](std::span<const ChannelSeries> histories) {
        std::vector<ChannelSeries> out;
        for (const auto &h : histories)
            out.push_back(ChannelSeries{{h.samples.back() + 1.0, h.samples.back() + 1.0}, 1e-3, ""});
        return out;
    };
    const SpliceLayout layout{3, 2};
    const auto fresh = splice(truth, plus_one, layout, false);
    const auto acc = splice(truth, plus_one, layout, true);
    CHECK(fresh.predicted.samples[5] == Complex(1, 0));
    CHECK(acc.predicted.samples[5] == Complex(2, 0));
}

TEST_CASE("zero-order hold", "[eval]")
{
    const PredictionTask task{.M = 30, .N = 10};
    ChannelSeries flat;
    flat.samples.assign(200, Complex(0.4, 0.1));
    CHECK(zoh_baseline(flat, task).nmse() == 0.0);

    // Single complex exponential at 10 Hz, 1 ms: every block has per-sample
    // error 4 sin^2(0.01 pi n), n = 1..10; mean evaluated offline.
    const auto tone = exponential(31 + 10 * 40, 10.0, 1e-3);
    CHECK(zoh_baseline(tone, task).nmse() == Approx(0.148735300766).epsilon(1e-9));
}

TEST_CASE("prediction diversity", "[eval]")
{
    const ChannelSeries a{{{1, 0}, {0, 3}}, 1e-3, "a"};
    const ChannelSeries b{{{0, 2}, {-2, 0}}, 1e-3, "b"};
    DiversitySet two{{a, b}, {}};
    const auto pd = prediction_diversity(two);
    CHECK(std::abs(pd.samples[0]) == 2.0);
    CHECK(std::abs(pd.samples[1]) == 3.0);
    CHECK(two.selector_trace == std::vector<int>{1, 0});

    DiversitySet one{{a}, {}};
    CHECK(prediction_diversity(one).samples == a.samples);
    DiversitySet same{{a, a}, {}};
    CHECK(prediction_diversity(same).samples == a.samples);
    CHECK(same.selector_trace == std::vector<int>{0, 0});

    CounterRng rng(3);
    for (int trial = 0; trial < 200; ++trial)
    {
        DiversitySet set;
        for (int i = 0; i < 3; ++i)
            set.candidates.push_back(random_series(16, rng));
        const auto out = prediction_diversity(set);
        for (std::size_t k = 0; k < 16; ++k)
            for (const auto &c : set.candidates)
                CHECK(std::abs(out.samples[k]) >= std::abs(c.samples[k]));
    }

    DiversitySet empty;
    CHECK_THROWS_AS(prediction_diversity(empty), InvalidArgument);
    DiversitySet ragged{{a, ChannelSeries{{{1, 1}}, 1e-3, ""}}, {}};
    CHECK_THROWS_AS(prediction_diversity(ragged), InvalidArgument);
}

TEST_CASE("reports", "[eval]")
{
    const std::vector<RunSummary> none;
    const std::string header = report_tsv(none);
    CHECK(std::count(header.begin(), header.end(), '\n') == 1);

    CounterRng rng(4);
    const PredictionTask task{.M = 5, .N = 3};
    const auto r1 = zoh_baseline(random_series(40, rng), task);
    const auto r2 = zoh_baseline(random_series(50, rng), task);
    const std::vector<RunSummary> runs{summarize("a", r1), summarize("b", r2)};
    const std::string tsv = report_tsv(runs);
    const auto lines = split(tsv, '\n');
    REQUIRE(lines.size() == 3);
    const auto row = split(lines[1], '\t');
    CHECK(row[0] == "a");
    CHECK(io::parse_double(row[1]).value() == r1.nmse());
    CHECK(row[3] == std::to_string(r1.segments.size()));
    CHECK(!report_text(runs).empty());

    DiversitySet set{{random_series(10, rng), random_series(10, rng)}, {}};
    prediction_diversity(set);
    const auto pd = summarize("pd", set);
    CHECK(pd.pd_winners[0] + pd.pd_winners[1] == 10);
    const std::vector<RunSummary> pd_runs{pd};
    CHECK(split(split(report_tsv(pd_runs), '\n')[1], '\t')[1] == "-");
}
