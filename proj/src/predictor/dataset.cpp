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
#include "chanlingo/rng.hpp"

#include <spdlog/spdlog.h>

namespace chanlingo
{

void PredictionTask::validate() const
{
    if (M < 1 || N < 1 || stride < 1 || S < 1)
        throw InvalidArgument("M, N, stride and S must all be >= 1");
}

std::size_t window_count(std::size_t length, int M, int N, int stride)
{
    if (M < 1 || N < 1 || stride < 1)
        throw InvalidArgument("M, N and stride must be >= 1");
    const auto span = static_cast<std::size_t>(M + N);
    if (length < span)
        return 0;
    return (length - span) / static_cast<std::size_t>(stride) + 1;
}

WindowedDataset make_dataset(std::span<const TokenSeries> tokens, const Vocabulary &vocab,
                             const PredictionTask &task)
{
    task.validate();
    WindowedDataset out;
    out.vocabulary_hash = vocab.hash();
    out.M = task.M;
    out.N = task.N;
    const auto M = static_cast<std::size_t>(task.M);
    const auto N = static_cast<std::size_t>(task.N);
    for (const auto &ts : tokens)
    {
        if (ts.vocabulary_hash != vocab.hash())
            throw VocabularyMismatch("token series was encoded with vocabulary " + io::hex64(ts.vocabulary_hash) +
                                     ", dataset uses " + io::hex64(vocab.hash()));
        const std::size_t count = window_count(ts.ids.size(), task.M, task.N, task.stride);
        if (count == 0)
        {
            spdlog::warn("token series of length {} is shorter than M+N = {}; no windows", ts.ids.size(), M + N);
            continue;
        }
        // prefix[k] = coefficient after the first k changes.
        std::vector<Complex> prefix(ts.ids.size() + 1);
        prefix[0] = ts.anchor;
        for (std::size_t k = 0; k < ts.ids.size(); ++k)
            prefix[k + 1] = prefix[k] + vocab.change_of(ts.ids[k]);

        out.examples.reserve(out.examples.size() + count);
        for (std::size_t w = 0; w < count; ++w)
        {
            const std::size_t start = w * static_cast<std::size_t>(task.stride);
            WindowExample ex;
            ex.input.assign(ts.ids.begin() + static_cast<std::ptrdiff_t>(start),
                            ts.ids.begin() + static_cast<std::ptrdiff_t>(start + M));
            ex.target.assign(ts.ids.begin() + static_cast<std::ptrdiff_t>(start + M),
                             ts.ids.begin() + static_cast<std::ptrdiff_t>(start + M + N));
            ex.anchor = prefix[start + M];
            out.examples.push_back(std::move(ex));
        }
    }
    return out;
}

WindowedDataset make_dataset(const TokenSeries &tokens, const Vocabulary &vocab, const PredictionTask &task)
{
    return make_dataset(std::span<const TokenSeries>(&tokens, 1), vocab, task);
}

WindowedDataset copy_task_dataset(std::size_t count, int M, int N, int vocab_tokens, std::uint64_t seed,
                                  std::uint64_t vocabulary_hash)
{
    if (N > M || vocab_tokens < 2)
        throw InvalidArgument("copy task needs N <= M and at least two tokens");
    CounterRng rng(seed, 0xc09e);
    WindowedDataset out;
    out.vocabulary_hash = vocabulary_hash;
    out.M = M;
    out.N = N;
    for (std::size_t i = 0; i < count; ++i)
    {
        WindowExample ex;
        for (int k = 0; k < M; ++k)
            ex.input.push_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(vocab_tokens - 1))));
        ex.target.assign(ex.input.end() - N, ex.input.end());
        out.examples.push_back(std::move(ex));
    }
    return out;
}

} // namespace chanlingo
