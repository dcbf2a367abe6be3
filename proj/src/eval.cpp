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

#include "chanlingo/eval.hpp"

#include "chanlingo/error.hpp"
#include "chanlingo/io.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace chanlingo
{

double nmse(std::span<const Complex> truth, std::span<const Complex> predicted, NmseNorm norm)
{
    if (truth.size() != predicted.size() || truth.empty())
        throw InvalidArgument("nmse needs two non-empty series of equal length");
    double err = 0.0;
    double power = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k)
    {
        err += std::norm(truth[k] - predicted[k]);
        power += std::norm(norm == NmseNorm::kPredicted ? predicted[k] : truth[k]);
    }
    if (!(power > 0.0))
        throw UndefinedNmse(norm == NmseNorm::kPredicted ? "prediction has zero power" : "truth has zero power");
    return err / power;
}

double nmse(const ChannelSeries &truth, const ChannelSeries &predicted, NmseNorm norm)
{
    return nmse(truth.samples, predicted.samples, norm);
}

double SplicedResult::nmse(NmseNorm norm) const
{
    return chanlingo::nmse(std::span<const Complex>(truth.samples).subspan(evaluable_start),
                           std::span<const Complex>(predicted.samples).subspan(evaluable_start), norm);
}

SpliceLayout layout_for(const PredictionTask &task)
{
    task.validate();
    const auto S = static_cast<std::size_t>(task.S);
    return {static_cast<std::size_t>(task.M) * S + 1, static_cast<std::size_t>(task.N) * S};
}

SplicedResult splice(const ChannelSeries &truth, const BlockPredictor &predictor, SpliceLayout layout,
                     bool accumulate)
{
    if (layout.history < 1 || layout.block < 1)
        throw InvalidArgument("splice needs history and block lengths >= 1");
    if (truth.size() < layout.history + 1)
        throw InvalidArgument("truth of " + std::to_string(truth.size()) + " samples is too short for a " +
                              std::to_string(layout.history) + "-sample history plus one predicted sample");
    SplicedResult out;
    out.truth = truth;
    out.predicted = truth;
    out.evaluable_start = layout.history;
    for (std::size_t start = layout.history; start < truth.size(); start += layout.block)
        out.segments.push_back({start, std::min(layout.block, truth.size() - start)});

    auto window = [&](const ChannelSeries &source, std::size_t start) {
        ChannelSeries h;
        h.sample_interval_s = truth.sample_interval_s;
        h.label = truth.label;
        h.samples.assign(source.samples.begin() + static_cast<std::ptrdiff_t>(start - layout.history),
                         source.samples.begin() + static_cast<std::ptrdiff_t>(start));
        return h;
    };
    auto place = [&](const Segment &seg, const ChannelSeries &block) {
        if (block.size() < seg.length)
            throw InvalidState("predictor returned " + std::to_string(block.size()) + " samples, expected " +
                               std::to_string(layout.block));
        std::copy_n(block.samples.begin(), seg.length,
                    out.predicted.samples.begin() + static_cast<std::ptrdiff_t>(seg.start));
    };

    if (accumulate)
    {
        for (const auto &seg : out.segments)
        {
            const ChannelSeries h = window(out.predicted, seg.start);
            place(seg, predictor(std::span<const ChannelSeries>(&h, 1)).at(0));
        }
        return out;
    }

    constexpr std::size_t kBatch = 256;
    for (std::size_t i = 0; i < out.segments.size(); i += kBatch)
    {
        const std::size_t end = std::min(out.segments.size(), i + kBatch);
        std::vector<ChannelSeries> histories;
        for (std::size_t j = i; j < end; ++j)
            histories.push_back(window(truth, out.segments[j].start));
        const auto blocks = predictor(histories);
        if (blocks.size() != histories.size())
            throw InvalidState("predictor returned the wrong number of blocks");
        for (std::size_t j = i; j < end; ++j)
            place(out.segments[j], blocks[j - i]);
    }
    return out;
}

SplicedResult splice(const ChannelSeries &truth, const SequenceModel &model, const Vocabulary &vocab,
                     const PredictionTask &task, bool accumulate)
{
    PredictStats stats;
    const BlockPredictor predictor = [&](std::span<const ChannelSeries> histories) {
        return transfer_predict_batch(model, vocab, histories, task, &stats);
    };
    auto out = splice(truth, predictor, layout_for(task), accumulate);
    out.predicted_tokens = stats.tokens;
    out.unk_count = stats.unk;
    return out;
}

SplicedResult zoh_baseline(const ChannelSeries &truth, const PredictionTask &task)
{
    const SpliceLayout layout = layout_for(task);
    const BlockPredictor hold = [&](std::span<const ChannelSeries> histories) {
        std::vector<ChannelSeries> out;
        for (const auto &h : histories)
        {
            ChannelSeries b;
            b.sample_interval_s = h.sample_interval_s;
            b.samples.assign(layout.block, h.samples.back());
            out.push_back(std::move(b));
        }
        return out;
    };
    return splice(truth, hold, layout, false);
}

ChannelSeries prediction_diversity(DiversitySet &set)
{
    if (set.candidates.empty())
        throw InvalidArgument("prediction diversity needs at least one candidate");
    const std::size_t len = set.candidates.front().size();
    for (const auto &c : set.candidates)
        if (c.size() != len)
            throw InvalidArgument("diversity candidates must have equal lengths");
    ChannelSeries out;
    out.sample_interval_s = set.candidates.front().sample_interval_s;
    out.label = "pd";
    out.samples.resize(len);
    set.selector_trace.assign(len, 0);
    for (std::size_t k = 0; k < len; ++k)
    {
        std::size_t best = 0;
        double best_mag = std::abs(set.candidates[0].samples[k]);
        for (std::size_t i = 1; i < set.candidates.size(); ++i)
        {
            const double mag = std::abs(set.candidates[i].samples[k]);
            if (mag > best_mag)
            {
                best = i;
                best_mag = mag;
            }
        }
        out.samples[k] = set.candidates[best].samples[k];
        set.selector_trace[k] = static_cast<int>(best);
    }
    return out;
}

double RunSummary::unk_rate() const
{
    return predicted_tokens == 0 ? 0.0 : static_cast<double>(unk_count) / static_cast<double>(predicted_tokens);
}

RunSummary summarize(const std::string &name, const SplicedResult &result)
{
    RunSummary s;
    s.name = name;
    s.nmse = result.nmse(NmseNorm::kPredicted);
    s.nmse_truth_norm = result.nmse(NmseNorm::kTruth);
    s.segments = result.segments.size();
    s.predicted_tokens = result.predicted_tokens;
    s.unk_count = result.unk_count;
    return s;
}

RunSummary summarize(const std::string &name, const DiversitySet &set)
{
    RunSummary s;
    s.name = name;
    s.pd_winners.assign(set.candidates.size(), 0);
    for (int w : set.selector_trace)
        ++s.pd_winners.at(static_cast<std::size_t>(w));
    return s;
}

namespace
{

std::string optional_field(const std::optional<double> &v)
{
    return v ? io::format_double(*v) : "-";
}

std::string winners_field(const RunSummary &r)
{
    if (r.pd_winners.empty())
        return "-";
    std::string out;
    for (std::size_t i = 0; i < r.pd_winners.size(); ++i)
        out += (i ? "," : "") + std::to_string(r.pd_winners[i]);
    return out;
}

} // namespace

std::string report_tsv(std::span<const RunSummary> runs)
{
    std::string out = "run\tnmse\tnmse_truth_norm\tsegments\tpredicted_tokens\tunk_count\tunk_rate\tpd_winners\n";
    for (const auto &r : runs)
        out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.name, optional_field(r.nmse),
                           optional_field(r.nmse_truth_norm), r.segments, r.predicted_tokens, r.unk_count,
                           io::format_double(r.unk_rate()), winners_field(r));
    return out;
}

std::string report_text(std::span<const RunSummary> runs)
{
    std::string out = fmt::format("{:<24} {:>12} {:>12} {:>9} {:>9}  {}\n", "run", "nmse", "nmse(truth)",
                                  "segments", "unk rate", "pd winners");
    for (const auto &r : runs)
        out += fmt::format("{:<24} {:>12} {:>12} {:>9} {:>9.4f}  {}\n", r.name,
                           r.nmse ? fmt::format("{:.6g}", *r.nmse) : "-",
                           r.nmse_truth_norm ? fmt::format("{:.6g}", *r.nmse_truth_norm) : "-", r.segments,
                           r.unk_rate(), winners_field(r));
    return out;
}

} // namespace chanlingo
