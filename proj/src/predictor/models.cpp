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
#include "chanlingo/predictor.hpp"
#include "chanlingo/rng.hpp"

#include <algorithm>
#include <cmath>

namespace chanlingo
{

using neural::CellState;
using neural::Graph;
using neural::StackState;
using neural::Tensor;
using neural::Var;

namespace
{

int argmax_row(std::span<const double> row)
{
    // Ties go to the lowest id.
    return static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
}

std::vector<int> argmax_rows(const Tensor &logits)
{
    std::vector<int> out(logits.rows());
    for (std::size_t r = 0; r < logits.rows(); ++r)
        out[r] = argmax_row(logits.row(r));
    return out;
}

std::vector<double> row_vector(const Tensor &t, std::size_t r)
{
    const auto row = t.row(r);
    return {row.begin(), row.end()};
}

// columns[t][b] = rows[b][t]
std::vector<std::vector<int>> transpose(std::span<const std::vector<int>> rows, std::size_t width)
{
    std::vector<std::vector<int>> cols(width, std::vector<int>(rows.size()));
    for (std::size_t b = 0; b < rows.size(); ++b)
    {
        if (rows[b].size() != width)
            throw InvalidArgument("all input rows must have the same length");
        for (std::size_t t = 0; t < width; ++t)
            cols[t][b] = rows[b][t];
    }
    return cols;
}

void check_ids(std::span<const int> ids, int token_count)
{
    for (int id : ids)
        if (id < 0 || id >= token_count)
            throw InvalidArgument("token id " + std::to_string(id) + " outside [0, " +
                                  std::to_string(token_count - 1) + "]");
}

double hidden_bound(int hidden)
{
    return 1.0 / std::sqrt(static_cast<double>(hidden));
}

} // namespace

std::string to_string(Arrangement a)
{
    return a == Arrangement::kNlg ? "nlg" : "nmt";
}

Arrangement parse_arrangement(const std::string &s)
{
    if (s == "nlg")
        return Arrangement::kNlg;
    if (s == "nmt")
        return Arrangement::kNmt;
    throw InvalidArgument("unknown mode '" + s + "' (expected nlg or nmt)");
}

std::string to_string(DecoderSeed s)
{
    return s == DecoderSeed::kZeroToken ? "zero" : "last";
}

DecoderSeed parse_decoder_seed(const std::string &s)
{
    if (s == "zero")
        return DecoderSeed::kZeroToken;
    if (s == "last")
        return DecoderSeed::kLastInput;
    throw InvalidArgument("unknown decoder seed '" + s + "' (expected zero or last)");
}

void ModelConfig::validate() const
{
    if (layers < 1 || hidden < 1 || embedding_dim < 1)
        throw InvalidArgument("layers, hidden and embedding size must be >= 1");
    if (vocab_size < 1)
        throw InvalidArgument("model needs a vocabulary with at least one entry");
    if (arrangement == Arrangement::kNlg && (bidirectional || attention))
        throw InvalidArgument("bidirectional encoding and attention need the nmt arrangement");
}

SequenceModel::SequenceModel(ModelConfig config) : config_(config)
{
    config_.validate();
}

// ---- NLG -------------------------------------------------------------------

NlgModel::NlgModel(ModelConfig config) : SequenceModel(config)
{
    if (config_.arrangement != Arrangement::kNlg)
        throw InvalidArgument("NlgModel needs arrangement nlg");
    embedding_ = neural::EmbeddingTable(params_, "embedding", config_.token_count(), config_.embedding_dim);
    stack_ = neural::RecurrentStack(params_, "rnn", config_.cell, config_.layers, config_.embedding_dim,
                                    config_.hidden);
    output_ = neural::Linear(params_, "output", config_.hidden, config_.token_count());
}

void NlgModel::initialize(std::uint64_t seed)
{
    CounterRng rng(seed, 0x6e6c67);
    embedding_.initialize(rng);
    stack_.initialize(rng);
    output_.initialize(rng, hidden_bound(config_.hidden));
}

Var NlgModel::batch_loss(Graph &g, std::span<const WindowExample *const> batch, LossScope scope,
                         bool /*teacher_forcing*/) const
{
    if (batch.empty())
        throw InvalidArgument("empty batch");
    const std::size_t B = batch.size();
    const std::size_t M = batch[0]->input.size();
    const std::size_t N = batch[0]->target.size();
    const std::size_t L = M + N;
    std::vector<std::vector<int>> seq(B);
    for (std::size_t b = 0; b < B; ++b)
    {
        if (batch[b]->input.size() != M || batch[b]->target.size() != N)
            throw InvalidArgument("batch examples differ in M or N");
        seq[b] = batch[b]->input;
        seq[b].insert(seq[b].end(), batch[b]->target.begin(), batch[b]->target.end());
        check_ids(seq[b], config_.token_count());
    }
    const auto cols = transpose(seq, L);
    const std::size_t first = scope == LossScope::kTrainingObjective ? 0 : M - 1;
    const double scale = 1.0 / static_cast<double>(B * (L - 1 - first));

    StackState state = stack_.zero_state(g, B);
    std::vector<Var> losses;
    for (std::size_t t = 0; t + 1 < L; ++t)
    {
        state = stack_.step(g, embedding_.embed(g, cols[t]), state);
        if (t >= first)
            losses.push_back(neural::softmax_xent(g, output_.forward(g, state.back().h), cols[t + 1], scale));
    }
    return neural::sum_scalars(g, losses);
}

std::vector<std::vector<double>> NlgModel::step_logits(std::span<const int> sequence) const
{
    check_ids(sequence, config_.token_count());
    Graph g(false);
    StackState state = stack_.zero_state(g, 1);
    std::vector<std::vector<double>> out;
    for (int id : sequence)
    {
        const int ids[] = {id};
        state = stack_.step(g, embedding_.embed(g, ids), state);
        out.push_back(row_vector(g.value(output_.forward(g, state.back().h)), 0));
    }
    return out;
}

std::vector<std::vector<double>> NlgModel::target_logits(const WindowExample &example) const
{
    std::vector<int> seq = example.input;
    seq.insert(seq.end(), example.target.begin(), example.target.end());
    seq.pop_back();
    auto all = step_logits(seq);
    return {all.begin() + static_cast<std::ptrdiff_t>(example.input.size() - 1), all.end()};
}

std::vector<std::vector<int>> NlgModel::predict_batch(std::span<const std::vector<int>> inputs, int N) const
{
    std::vector<std::vector<int>> out(inputs.size());
    if (inputs.empty() || N <= 0)
        return out;
    const std::size_t M = inputs[0].size();
    if (M == 0)
        throw InvalidArgument("prediction needs at least one history id");
    for (const auto &row : inputs)
        check_ids(row, config_.token_count());
    const auto cols = transpose(inputs, M);
    Graph g(false);
    StackState state = stack_.zero_state(g, inputs.size());
    for (std::size_t t = 0; t < M; ++t)
        state = stack_.step(g, embedding_.embed(g, cols[t]), state);
    for (int k = 0; k < N; ++k)
    {
        const auto next = argmax_rows(g.value(output_.forward(g, state.back().h)));
        for (std::size_t b = 0; b < inputs.size(); ++b)
            out[b].push_back(next[b]);
        if (k + 1 < N)
            state = stack_.step(g, embedding_.embed(g, next), state);
    }
    return out;
}

// ---- NMT -------------------------------------------------------------------

Seq2SeqModel::Seq2SeqModel(ModelConfig config) : SequenceModel(config)
{
    if (config_.arrangement != Arrangement::kNmt)
        throw InvalidArgument("Seq2SeqModel needs arrangement nmt");
    const int H = config_.hidden;
    const int E = config_.embedding_dim;
    const int D = H * directions();
    embedding_ = neural::EmbeddingTable(params_, "embedding", config_.token_count(), E);
    encoder_fwd_ = neural::RecurrentStack(params_, "encoder.fwd", config_.cell, config_.layers, E, H);
    if (config_.bidirectional)
        encoder_bwd_ = neural::RecurrentStack(params_, "encoder.bwd", config_.cell, config_.layers, E, H);
    for (int l = 0; l < config_.layers; ++l)
    {
        const std::string base = "bridge.l" + std::to_string(l);
        bridge_h_.emplace_back(params_, base + ".h", D, H);
        if (config_.cell == neural::CellKind::kLstm)
            bridge_c_.emplace_back(params_, base + ".c", D, H);
    }
    decoder_ = neural::RecurrentStack(params_, "decoder", config_.cell, config_.layers, E, H);
    if (config_.attention)
    {
        attention_score_ = neural::Linear(params_, "attention.score", H, D, false);
        attention_combine_ = neural::Linear(params_, "attention.combine", D + H, H);
    }
    output_ = neural::Linear(params_, "output", H, config_.token_count());
}

void Seq2SeqModel::initialize(std::uint64_t seed)
{
    CounterRng rng(seed, 0x6e6d74);
    const double bound = hidden_bound(config_.hidden);
    embedding_.initialize(rng);
    encoder_fwd_.initialize(rng);
    if (config_.bidirectional)
        encoder_bwd_.initialize(rng);
    for (auto &b : bridge_h_)
        b.initialize(rng, bound);
    for (auto &b : bridge_c_)
        b.initialize(rng, bound);
    decoder_.initialize(rng);
    if (config_.attention)
    {
        attention_score_.initialize(rng, bound);
        attention_combine_.initialize(rng, bound);
    }
    output_.initialize(rng, bound);
}

Seq2SeqModel::Encoded Seq2SeqModel::encode(Graph &g, const std::vector<std::vector<int>> &columns) const
{
    const std::size_t M = columns.size();
    const std::size_t B = columns.at(0).size();
    std::vector<Var> emb(M);
    for (std::size_t t = 0; t < M; ++t)
        emb[t] = embedding_.embed(g, columns[t]);

    std::vector<Var> fwd(M), bwd(M);
    StackState fs = encoder_fwd_.zero_state(g, B);
    for (std::size_t t = 0; t < M; ++t)
    {
        fs = encoder_fwd_.step(g, emb[t], fs);
        fwd[t] = fs.back().h;
    }
    StackState bs;
    if (config_.bidirectional)
    {
        bs = encoder_bwd_.zero_state(g, B);
        for (std::size_t t = M; t-- > 0;)
        {
            bs = encoder_bwd_.step(g, emb[t], bs);
            bwd[t] = bs.back().h;
        }
    }

    Encoded out;
    if (config_.attention)
    {
        std::vector<Var> steps(M);
        for (std::size_t t = 0; t < M; ++t)
        {
            if (config_.bidirectional)
            {
                const Var parts[] = {fwd[t], bwd[t]};
                steps[t] = neural::concat_cols(g, parts);
            }
            else
            {
                steps[t] = fwd[t];
            }
        }
        out.memory = neural::stack_steps(g, steps);
    }

    out.init.resize(static_cast<std::size_t>(config_.layers));
    for (std::size_t l = 0; l < out.init.size(); ++l)
    {
        auto merged = [&](Var f, Var b) {
            if (!config_.bidirectional)
                return f;
            const Var parts[] = {f, b};
            return neural::concat_cols(g, parts);
        };
        out.init[l].h = bridge_h_[l].forward(g, merged(fs[l].h, config_.bidirectional ? bs[l].h : Var{}));
        if (config_.cell == neural::CellKind::kLstm)
            out.init[l].c = bridge_c_[l].forward(g, merged(fs[l].c, config_.bidirectional ? bs[l].c : Var{}));
    }
    return out;
}

Var Seq2SeqModel::decoder_logits(Graph &g, const StackState &state, Var memory, Var *weights_out) const
{
    const Var top = state.back().h;
    if (!config_.attention)
        return output_.forward(g, top);
    const Var ctx = neural::attention(g, attention_score_.forward(g, top), memory);
    if (weights_out)
        *weights_out = ctx;
    const Var parts[] = {ctx, top};
    const Var combined = neural::tanh(g, attention_combine_.forward(g, neural::concat_cols(g, parts)));
    return output_.forward(g, combined);
}

Var Seq2SeqModel::seed_ids(Graph &g, const std::vector<std::vector<int>> &columns, std::size_t batch,
                           std::vector<int> &seed) const
{
    if (config_.decoder_seed == DecoderSeed::kLastInput)
        seed = columns.back();
    else
        seed.assign(batch, 0);
    return embedding_.embed(g, seed);
}

Var Seq2SeqModel::batch_loss(Graph &g, std::span<const WindowExample *const> batch, LossScope /*scope*/,
                             bool teacher_forcing) const
{
    if (batch.empty())
        throw InvalidArgument("empty batch");
    const std::size_t B = batch.size();
    const std::size_t M = batch[0]->input.size();
    const std::size_t N = batch[0]->target.size();
    std::vector<std::vector<int>> inputs(B), targets(B);
    for (std::size_t b = 0; b < B; ++b)
    {
        if (batch[b]->input.size() != M || batch[b]->target.size() != N)
            throw InvalidArgument("batch examples differ in M or N");
        inputs[b] = batch[b]->input;
        targets[b] = batch[b]->target;
        check_ids(inputs[b], config_.token_count());
        check_ids(targets[b], config_.token_count());
    }
    const auto in_cols = transpose(inputs, M);
    const auto tgt_cols = transpose(targets, N);
    const double scale = 1.0 / static_cast<double>(B * N);

    const Encoded enc = encode(g, in_cols);
    StackState state = enc.init;
    std::vector<int> prev;
    Var x = seed_ids(g, in_cols, B, prev);
    std::vector<Var> losses;
    for (std::size_t k = 0; k < N; ++k)
    {
        state = decoder_.step(g, x, state);
        const Var logits = decoder_logits(g, state, enc.memory, nullptr);
        losses.push_back(neural::softmax_xent(g, logits, tgt_cols[k], scale));
        if (k + 1 < N)
        {
            prev = teacher_forcing ? tgt_cols[k] : argmax_rows(g.value(logits));
            x = embedding_.embed(g, prev);
        }
    }
    return neural::sum_scalars(g, losses);
}

std::vector<std::vector<int>> Seq2SeqModel::predict_batch(std::span<const std::vector<int>> inputs, int N) const
{
    std::vector<std::vector<int>> out(inputs.size());
    if (inputs.empty() || N <= 0)
        return out;
    const std::size_t M = inputs[0].size();
    if (M == 0)
        throw InvalidArgument("prediction needs at least one history id");
    for (const auto &row : inputs)
        check_ids(row, config_.token_count());
    const auto cols = transpose(inputs, M);
    Graph g(false);
    const Encoded enc = encode(g, cols);
    StackState state = enc.init;
    std::vector<int> prev;
    Var x = seed_ids(g, cols, inputs.size(), prev);
    for (int k = 0; k < N; ++k)
    {
        state = decoder_.step(g, x, state);
        prev = argmax_rows(g.value(decoder_logits(g, state, enc.memory, nullptr)));
        for (std::size_t b = 0; b < inputs.size(); ++b)
            out[b].push_back(prev[b]);
        if (k + 1 < N)
            x = embedding_.embed(g, prev);
    }
    return out;
}

std::vector<int> Seq2SeqModel::predict_with_attention(std::span<const int> input_ids, int N,
                                                      std::vector<std::vector<double>> &weights) const
{
    if (!config_.attention)
        throw InvalidState("model was built without attention");
    if (input_ids.empty())
        throw InvalidArgument("prediction needs at least one history id");
    check_ids(input_ids, config_.token_count());
    weights.clear();
    const std::vector<std::vector<int>> rows{std::vector<int>(input_ids.begin(), input_ids.end())};
    const auto cols = transpose(rows, input_ids.size());
    Graph g(false);
    const Encoded enc = encode(g, cols);
    StackState state = enc.init;
    std::vector<int> prev;
    Var x = seed_ids(g, cols, 1, prev);
    std::vector<int> out;
    for (int k = 0; k < N; ++k)
    {
        state = decoder_.step(g, x, state);
        Var ctx;
        const Var logits = decoder_logits(g, state, enc.memory, &ctx);
        weights.push_back(row_vector(g.aux(ctx), 0));
        prev = argmax_rows(g.value(logits));
        out.push_back(prev[0]);
        if (k + 1 < N)
            x = embedding_.embed(g, prev);
    }
    return out;
}

std::vector<std::vector<double>> Seq2SeqModel::target_logits(const WindowExample &example) const
{
    check_ids(example.input, config_.token_count());
    check_ids(example.target, config_.token_count());
    const std::vector<std::vector<int>> rows{example.input};
    const auto cols = transpose(rows, example.input.size());
    Graph g(false);
    const Encoded enc = encode(g, cols);
    StackState state = enc.init;
    std::vector<int> prev;
    Var x = seed_ids(g, cols, 1, prev);
    std::vector<std::vector<double>> out;
    for (std::size_t k = 0; k < example.target.size(); ++k)
    {
        state = decoder_.step(g, x, state);
        out.push_back(row_vector(g.value(decoder_logits(g, state, enc.memory, nullptr)), 0));
        const int ids[] = {example.target[k]};
        x = embedding_.embed(g, ids);
    }
    return out;
}

EncoderOutput Seq2SeqModel::encode_history(std::span<const int> input_ids) const
{
    if (input_ids.empty())
        throw InvalidArgument("encoder needs at least one id");
    check_ids(input_ids, config_.token_count());
    const std::size_t M = input_ids.size();
    const auto D = static_cast<std::size_t>(config_.hidden * directions());
    const auto H = static_cast<std::size_t>(config_.hidden);
    Graph g(false);
    std::vector<Var> emb(M);
    for (std::size_t t = 0; t < M; ++t)
        emb[t] = embedding_.embed(g, input_ids.subspan(t, 1));

    EncoderOutput out;
    out.states = Tensor({M, D});
    StackState fs = encoder_fwd_.zero_state(g, 1);
    for (std::size_t t = 0; t < M; ++t)
    {
        fs = encoder_fwd_.step(g, emb[t], fs);
        const auto h = g.value(fs.back().h).values();
        std::copy(h.begin(), h.end(), out.states.row(t).begin());
    }
    StackState bs;
    if (config_.bidirectional)
    {
        bs = encoder_bwd_.zero_state(g, 1);
        for (std::size_t t = M; t-- > 0;)
        {
            bs = encoder_bwd_.step(g, emb[t], bs);
            const auto h = g.value(bs.back().h).values();
            std::copy(h.begin(), h.end(), out.states.row(t).begin() + static_cast<std::ptrdiff_t>(H));
        }
    }
    for (std::size_t l = 0; l < static_cast<std::size_t>(config_.layers); ++l)
    {
        auto merged = [&](Var f, Var b) {
            if (!config_.bidirectional)
                return f;
            const Var parts[] = {f, b};
            return neural::concat_cols(g, parts);
        };
        out.bridged.h.push_back(
            row_vector(g.value(bridge_h_[l].forward(g, merged(fs[l].h, config_.bidirectional ? bs[l].h : Var{}))), 0));
        if (config_.cell == neural::CellKind::kLstm)
            out.bridged.c.push_back(row_vector(
                g.value(bridge_c_[l].forward(g, merged(fs[l].c, config_.bidirectional ? bs[l].c : Var{}))), 0));
    }
    return out;
}

Seq2SeqModel::Attended Seq2SeqModel::attend(std::span<const double> decoder_state,
                                            const Tensor &encoder_states) const
{
    if (!config_.attention)
        throw InvalidState("model was built without attention");
    const auto D = static_cast<std::size_t>(config_.hidden * directions());
    if (decoder_state.size() != static_cast<std::size_t>(config_.hidden) || encoder_states.rank() != 2 ||
        encoder_states.cols() != D || encoder_states.rows() == 0)
        throw InvalidArgument("attend: decoder state or encoder states have the wrong shape");
    Graph g(false);
    const Var q = attention_score_.forward(
        g, g.constant(Tensor({1, decoder_state.size()}, {decoder_state.begin(), decoder_state.end()})));
    const Var memory = g.constant(Tensor({1, encoder_states.rows(), D},
                                         {encoder_states.values().begin(), encoder_states.values().end()}));
    const Var ctx = neural::attention(g, q, memory);
    return {row_vector(g.value(ctx), 0), row_vector(g.aux(ctx), 0)};
}

std::unique_ptr<SequenceModel> make_model(const ModelConfig &config)
{
    if (config.arrangement == Arrangement::kNlg)
        return std::make_unique<NlgModel>(config);
    return std::make_unique<Seq2SeqModel>(config);
}

} // namespace chanlingo
