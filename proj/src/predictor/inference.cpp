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
#include "chanlingo/io.hpp"
#include "chanlingo/predictor.hpp"

namespace chanlingo
{

namespace
{

void check_hash(const SequenceModel &model, const Vocabulary &vocab)
{
    if (model.config().vocabulary_hash != vocab.hash())
        throw VocabularyMismatch("model vocabulary " + io::hex64(model.config().vocabulary_hash) +
                                 " differs from vocabulary " + io::hex64(vocab.hash()));
}

} // namespace

std::vector<int> predict(const SequenceModel &model, std::span<const int> input_ids, int N)
{
    if (N <= 0)
        return {};
    const std::vector<std::vector<int>> rows{std::vector<int>(input_ids.begin(), input_ids.end())};
    return model.predict_batch(rows, N).front();
}

std::vector<int> history_ids(const Vocabulary &vocab, const ChannelSeries &history, int M)
{
    if (M < 1)
        throw InvalidArgument("M must be >= 1");
    const auto need = static_cast<std::size_t>(M) + 1;
    if (history.size() < need)
        throw InvalidArgument("history of " + std::to_string(history.size()) + " samples is shorter than M+1 = " +
                              std::to_string(need));
    ChannelSeries tail;
    tail.samples.assign(history.samples.end() - static_cast<std::ptrdiff_t>(need), history.samples.end());
    tail.sample_interval_s = history.sample_interval_s;
    return encode(tail, vocab).ids;
}

std::vector<ChannelSeries> predict_series_batch(const SequenceModel &model, const Vocabulary &vocab,
                                                std::span<const ChannelSeries> histories,
                                                const PredictionTask &task, PredictStats *stats)
{
    task.validate();
    check_hash(model, vocab);
    std::vector<std::vector<int>> inputs;
    inputs.reserve(histories.size());
    for (const auto &h : histories)
        inputs.push_back(history_ids(vocab, h, task.M));
    const auto predicted = model.predict_batch(inputs, task.N);
    std::vector<ChannelSeries> out;
    out.reserve(histories.size());
    for (std::size_t i = 0; i < histories.size(); ++i)
    {
        TokenSeries tokens;
        tokens.ids = predicted[i];
        tokens.anchor = histories[i].samples.back();
        tokens.vocabulary_hash = vocab.hash();
        tokens.sample_interval_s = histories[i].sample_interval_s;
        DecodeStats ds;
        auto series = decode(tokens, vocab, &ds);
        series.label = histories[i].label;
        if (stats)
        {
            stats->tokens += tokens.ids.size();
            stats->unk += ds.unk_count;
        }
        out.push_back(std::move(series));
    }
    return out;
}

ChannelSeries predict_series(const SequenceModel &model, const Vocabulary &vocab, const ChannelSeries &history,
                             const PredictionTask &task)
{
    return predict_series_batch(model, vocab, std::span<const ChannelSeries>(&history, 1), task).front();
}

ChannelSeries decimate(const ChannelSeries &series, int S)
{
    if (S < 1)
        throw InvalidArgument("sampling factor S must be >= 1");
    ChannelSeries out;
    out.sample_interval_s = series.sample_interval_s * S;
    out.label = series.label;
    if (series.samples.empty())
        return out;
    const auto step = static_cast<std::size_t>(S);
    const std::size_t first = (series.size() - 1) % step;
    for (std::size_t i = first; i < series.size(); i += step)
        out.samples.push_back(series.samples[i]);
    return out;
}

ChannelSeries interpolate_linear(Complex anchor, const ChannelSeries &coarse, int S)
{
    if (S < 1)
        throw InvalidArgument("sampling factor S must be >= 1");
    ChannelSeries out;
    out.sample_interval_s = coarse.sample_interval_s / S;
    out.label = coarse.label;
    Complex prev = anchor;
    for (const Complex next : coarse.samples)
    {
        for (int j = 1; j < S; ++j)
        {
            const double f = static_cast<double>(j) / S;
            out.samples.push_back(prev + f * (next - prev));
        }
        out.samples.push_back(next);
        prev = next;
    }
    return out;
}

std::vector<ChannelSeries> transfer_predict_batch(const SequenceModel &model, const Vocabulary &vocab,
                                                  std::span<const ChannelSeries> histories,
                                                  const PredictionTask &task, PredictStats *stats)
{
    task.validate();
    if (task.S == 1)
        return predict_series_batch(model, vocab, histories, task, stats);
    std::vector<ChannelSeries> coarse;
    coarse.reserve(histories.size());
    for (const auto &h : histories)
    {
        coarse.push_back(decimate(h, task.S));
        if (coarse.back().size() < static_cast<std::size_t>(task.M) + 1)
            throw InvalidArgument("decimated history has " + std::to_string(coarse.back().size()) +
                                  " samples, need M+1 = " + std::to_string(task.M + 1));
    }
    auto coarse_task = task;
    coarse_task.S = 1;
    const auto predicted = predict_series_batch(model, vocab, coarse, coarse_task, stats);
    std::vector<ChannelSeries> out;
    out.reserve(histories.size());
    for (std::size_t i = 0; i < histories.size(); ++i)
    {
        auto fine = interpolate_linear(histories[i].samples.back(), predicted[i], task.S);
        fine.sample_interval_s = histories[i].sample_interval_s;
        out.push_back(std::move(fine));
    }
    return out;
}

ChannelSeries transfer_predict(const SequenceModel &model, const Vocabulary &vocab, const ChannelSeries &history,
                               const PredictionTask &task)
{
    return transfer_predict_batch(model, vocab, std::span<const ChannelSeries>(&history, 1), task).front();
}

std::vector<std::vector<double>> attention_map(const SequenceModel &model, const Vocabulary &vocab,
                                               const ChannelSeries &history, const PredictionTask &task)
{
    task.validate();
    check_hash(model, vocab);
    const auto *nmt = dynamic_cast<const Seq2SeqModel *>(&model);
    if (!nmt || !nmt->config().attention)
        throw InvalidState("attention export needs an nmt model trained with attention");
    std::vector<std::vector<double>> weights;
    nmt->predict_with_attention(history_ids(vocab, history, task.M), task.N, weights);
    return weights;
}

} // namespace chanlingo
