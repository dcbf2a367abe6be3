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

#include <cmath>
#include <numeric>

namespace chanlingo
{

namespace
{

void check_hash(const SequenceModel &model, const WindowedDataset &data)
{
    if (model.config().vocabulary_hash != data.vocabulary_hash)
        throw VocabularyMismatch("model vocabulary " + io::hex64(model.config().vocabulary_hash) +
                                 " differs from dataset vocabulary " + io::hex64(data.vocabulary_hash));
}

} // namespace

TrainReport train(SequenceModel &model, const WindowedDataset &data, const TrainOptions &options)
{
    check_hash(model, data);
    if (options.batch_size < 1)
        throw InvalidArgument("batch size must be >= 1");
    if (options.epochs < 0)
        throw InvalidArgument("epochs must be >= 0");

    TrainReport report;
    report.examples = data.size();
    if (options.epochs == 0 || data.empty() || options.max_steps == 0)
        return report;

    const std::size_t n = data.size();
    const auto batch = static_cast<std::size_t>(options.batch_size);
    const auto steps_per_epoch = static_cast<std::int64_t>((n + batch - 1) / batch);
    neural::Adam adam({.learning_rate = options.learning_rate, .clip_norm = options.clip_norm});
    auto &params = model.parameters();

    std::vector<std::size_t> order(n);
    for (int epoch = 0; epoch < options.epochs; ++epoch)
    {
        std::iota(order.begin(), order.end(), std::size_t{0});
        CounterRng rng(options.seed, 0x5348 + static_cast<std::uint64_t>(epoch));
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);

        double loss_sum = 0.0;
        std::size_t loss_count = 0;
        bool budget_done = false;
        for (std::size_t start = 0; start < n; start += batch)
        {
            const std::size_t end = std::min(n, start + batch);
            std::vector<const WindowExample *> rows;
            rows.reserve(end - start);
            for (std::size_t i = start; i < end; ++i)
                rows.push_back(&data.examples[order[i]]);

            const double lr = options.anneal
                                  ? neural::annealed_learning_rate(options.learning_rate, report.steps, steps_per_epoch)
                                  : options.learning_rate;
            params.zero_grad();
            neural::Graph g;
            const neural::Var loss =
                model.batch_loss(g, rows, LossScope::kTrainingObjective, options.teacher_forcing);
            const double value = g.value(loss)[0];
            if (!std::isfinite(value))
                throw NumericalError("non-finite training loss at epoch " + std::to_string(epoch + 1) + ", step " +
                                     std::to_string(report.steps + 1) + " (lr " +
                                     io::format_double(lr) + ")");
            g.backward(loss);
            adam.step(params, lr);
            ++report.steps;
            loss_sum += value * static_cast<double>(rows.size());
            loss_count += rows.size();
            if (options.max_steps >= 0 && report.steps >= options.max_steps)
            {
                budget_done = true;
                break;
            }
        }
        report.epoch_loss.push_back(loss_sum / static_cast<double>(loss_count));
        spdlog::info("epoch {}: mean training loss {:.6f} ({} steps)", epoch + 1, report.epoch_loss.back(),
                     report.steps);
        if (options.on_epoch)
            options.on_epoch(epoch, report.epoch_loss.back());
        if (budget_done)
            break;
    }
    return report;
}

TrainReport train_nlg(NlgModel &model, const WindowedDataset &data, const TrainOptions &options)
{
    return train(model, data, options);
}

TrainReport train_nmt(Seq2SeqModel &model, const WindowedDataset &data, const TrainOptions &options)
{
    return train(model, data, options);
}

TrainReport fine_tune(SequenceModel &model, const WindowedDataset &data, const TrainOptions &options)
{
    return train(model, data, options);
}

EvalMetrics evaluate(const SequenceModel &model, const WindowedDataset &data, int batch_size)
{
    check_hash(model, data);
    if (batch_size < 1)
        throw InvalidArgument("batch size must be >= 1");
    EvalMetrics m;
    if (data.empty())
        return m;
    const auto batch = static_cast<std::size_t>(batch_size);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < data.size(); start += batch)
    {
        const std::size_t end = std::min(data.size(), start + batch);
        std::vector<const WindowExample *> rows;
        std::vector<std::vector<int>> inputs;
        for (std::size_t i = start; i < end; ++i)
        {
            rows.push_back(&data.examples[i]);
            inputs.push_back(data.examples[i].input);
        }
        neural::Graph g(false);
        loss_sum += g.value(model.batch_loss(g, rows, LossScope::kTargetsOnly, true))[0] *
                    static_cast<double>(rows.size());
        const auto N = static_cast<int>(rows[0]->target.size());
        const auto predicted = model.predict_batch(inputs, N);
        for (std::size_t r = 0; r < rows.size(); ++r)
        {
            for (std::size_t k = 0; k < rows[r]->target.size(); ++k)
                correct += predicted[r][k] == rows[r]->target[k] ? 1 : 0;
            m.tokens += rows[r]->target.size();
        }
    }
    m.loss = loss_sum / static_cast<double>(data.size());
    m.accuracy = static_cast<double>(correct) / static_cast<double>(m.tokens);
    return m;
}

} // namespace chanlingo
