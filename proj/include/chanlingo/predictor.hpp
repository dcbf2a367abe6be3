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

#include "chanlingo/channel_synth.hpp"
#include "chanlingo/neural/adam.hpp"
#include "chanlingo/neural/checkpoint.hpp"
#include "chanlingo/neural/layers.hpp"
#include "chanlingo/vcc.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace chanlingo
{

/// M:N prediction protocol: M history changes, N future changes, window
/// stride and temporal sampling factor S.
struct PredictionTask
{
    int M = 30;
    int N = 10;
    int stride = 1;
    int S = 1;

    void validate() const;

    bool operator==(const PredictionTask &) const = default;
};

// ---- Datasets -------------------------------------------------------------

struct WindowExample
{
    std::vector<int> input;  // M ids
    std::vector<int> target; // N ids
    Complex anchor;          // reconstructed coefficient before target[0]
};

struct WindowedDataset
{
    std::vector<WindowExample> examples;
    std::uint64_t vocabulary_hash = 0;
    int M = 0;
    int N = 0;

    std::size_t size() const { return examples.size(); }
    bool empty() const { return examples.empty(); }
};

// floor((length - (M+N)) / stride) + 1, or 0 when length < M+N.
std::size_t window_count(std::size_t length, int M, int N, int stride);

// Sliding windows over one or more token series. Too-short inputs produce no
// windows and a logged warning.
WindowedDataset make_dataset(const TokenSeries &tokens, const Vocabulary &vocab, const PredictionTask &task);
WindowedDataset make_dataset(std::span<const TokenSeries> tokens, const Vocabulary &vocab,
                             const PredictionTask &task);

// Windows where the target is the last N input ids (copy task).
WindowedDataset copy_task_dataset(std::size_t count, int M, int N, int vocab_tokens, std::uint64_t seed,
                                  std::uint64_t vocabulary_hash = 0);

// ---- Models ----------------------------------------------------------------

enum class Arrangement
{
    kNlg, // single recurrent network over input || target
    kNmt, // encoder-decoder
};

enum class DecoderSeed
{
    kZeroToken, // first decoder input is id 0
    kLastInput, // first decoder input is the last history id
};

std::string to_string(Arrangement a);
Arrangement parse_arrangement(const std::string &s);
std::string to_string(DecoderSeed s);
DecoderSeed parse_decoder_seed(const std::string &s);

struct ModelConfig
{
    Arrangement arrangement = Arrangement::kNmt;
    neural::CellKind cell = neural::CellKind::kGru;
    int layers = 2;
    int hidden = 64;
    int embedding_dim = 32;
    int vocab_size = 0; // X; the model emits X + 1 token classes
    bool bidirectional = false;
    bool attention = false;
    DecoderSeed decoder_seed = DecoderSeed::kZeroToken;
    std::uint64_t vocabulary_hash = 0;

    int token_count() const { return vocab_size + 1; }
    void validate() const;

    bool operator==(const ModelConfig &) const = default;
};

enum class LossScope
{
    kTrainingObjective, // NLG: every next-token position; NMT: the N targets
    kTargetsOnly,       // the N target positions for both arrangements
};

/// Common interface of the two arrangements. Parameters live in a
/// ParameterSet owned by the model.
class SequenceModel
{
public:
    virtual ~SequenceModel() = default;

    const ModelConfig &config() const { return config_; }
    neural::ParameterSet &parameters() { return params_; }
    const neural::ParameterSet &parameters() const { return params_; }

    // Fresh random weights from `seed`.
    virtual void initialize(std::uint64_t seed) = 0;

    // Mean cross-entropy over the batch. `teacher_forcing` only affects the
    // NMT decoder; the NLG network always reads the true sequence.
    virtual neural::Var batch_loss(neural::Graph &g, std::span<const WindowExample *const> batch,
                                   LossScope scope, bool teacher_forcing) const = 0;

    // Greedy decoding of N ids for every input row.
    virtual std::vector<std::vector<int>> predict_batch(std::span<const std::vector<int>> inputs, int N) const = 0;

    // Teacher-forced logits for the N target positions of one example.
    virtual std::vector<std::vector<double>> target_logits(const WindowExample &example) const = 0;

protected:
    SequenceModel(ModelConfig config);

    ModelConfig config_;
    neural::ParameterSet params_;
};

class NlgModel final : public SequenceModel
{
public:
    explicit NlgModel(ModelConfig config);

    void initialize(std::uint64_t seed) override;
    neural::Var batch_loss(neural::Graph &g, std::span<const WindowExample *const> batch, LossScope scope,
                           bool teacher_forcing) const override;
    std::vector<std::vector<int>> predict_batch(std::span<const std::vector<int>> inputs, int N) const override;
    std::vector<std::vector<double>> target_logits(const WindowExample &example) const override;

    // Logits after each position of `sequence`; row t scores sequence[t+1].
    std::vector<std::vector<double>> step_logits(std::span<const int> sequence) const;

private:
    neural::EmbeddingTable embedding_;
    neural::RecurrentStack stack_;
    neural::Linear output_;
};

struct EncoderOutput
{
    // Per-step top-layer states [M, hidden * directions].
    neural::Tensor states;
    // Decoder initial state after the bridge, per layer.
    neural::CellState bridged;
};

class Seq2SeqModel final : public SequenceModel
{
public:
    explicit Seq2SeqModel(ModelConfig config);

    void initialize(std::uint64_t seed) override;
    neural::Var batch_loss(neural::Graph &g, std::span<const WindowExample *const> batch, LossScope scope,
                           bool teacher_forcing) const override;
    std::vector<std::vector<int>> predict_batch(std::span<const std::vector<int>> inputs, int N) const override;
    std::vector<std::vector<double>> target_logits(const WindowExample &example) const override;

    EncoderOutput encode_history(std::span<const int> input_ids) const;

    struct Attended
    {
        std::vector<double> context;
        std::vector<double> weights; // one per encoder state, sums to 1
    };

    // Attention of one decoder top state over encoder states [M, D]. Throws
    // InvalidState when the model has no attention.
    Attended attend(std::span<const double> decoder_state, const neural::Tensor &encoder_states) const;

    // Greedy decoding that also returns the attention weights of every
    // decoder step ([N][M]).
    std::vector<int> predict_with_attention(std::span<const int> input_ids, int N,
                                            std::vector<std::vector<double>> &weights) const;

    int directions() const { return config_.bidirectional ? 2 : 1; }

private:
    struct Encoded
    {
        neural::Var memory; // [B, M, H*dirs]
        neural::StackState init;
    };

    Encoded encode(neural::Graph &g, const std::vector<std::vector<int>> &columns) const;
    neural::Var decoder_logits(neural::Graph &g, const neural::StackState &state, neural::Var memory,
                               neural::Var *weights_out) const;
    neural::Var seed_ids(neural::Graph &g, const std::vector<std::vector<int>> &columns, std::size_t batch,
                         std::vector<int> &seed) const;

    neural::EmbeddingTable embedding_;
    neural::RecurrentStack encoder_fwd_;
    neural::RecurrentStack encoder_bwd_;
    std::vector<neural::Linear> bridge_h_;
    std::vector<neural::Linear> bridge_c_;
    neural::RecurrentStack decoder_;
    neural::Linear attention_score_;
    neural::Linear attention_combine_;
    neural::Linear output_;
};

std::unique_ptr<SequenceModel> make_model(const ModelConfig &config);

// ---- Training --------------------------------------------------------------

struct TrainOptions
{
    int epochs = 2;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double clip_norm = 5.0;
    bool anneal = true; // halve every half-epoch after the first epoch
    bool teacher_forcing = true;
    std::uint64_t seed = 0;     // shuffling
    std::int64_t max_steps = -1; // stop after this many updates when >= 0
    // Called after every epoch with (epoch index, mean training loss).
    std::function<void(int, double)> on_epoch;
};

struct TrainReport
{
    std::vector<double> epoch_loss;
    std::int64_t steps = 0;
    std::size_t examples = 0;

    double final_loss() const { return epoch_loss.empty() ? 0.0 : epoch_loss.back(); }
};

TrainReport train(SequenceModel &model, const WindowedDataset &data, const TrainOptions &options);
TrainReport train_nlg(NlgModel &model, const WindowedDataset &data, const TrainOptions &options);
TrainReport train_nmt(Seq2SeqModel &model, const WindowedDataset &data, const TrainOptions &options);

// Continues training a loaded model on new data; all parameters are updated.
TrainReport fine_tune(SequenceModel &model, const WindowedDataset &data, const TrainOptions &options);

struct EvalMetrics
{
    double loss = 0.0;     // mean target-position cross-entropy (teacher forced)
    double accuracy = 0.0; // fraction of greedy-decoded ids equal to the target
    std::size_t tokens = 0;
};

EvalMetrics evaluate(const SequenceModel &model, const WindowedDataset &data, int batch_size = 64);

// ---- Inference --------------------------------------------------------------

std::vector<int> predict(const SequenceModel &model, std::span<const int> input_ids, int N);

// Predicts N samples after `history` from its last M changes; decoding is
// anchored at the last history sample.
ChannelSeries predict_series(const SequenceModel &model, const Vocabulary &vocab, const ChannelSeries &history,
                             const PredictionTask &task);

struct PredictStats
{
    std::size_t tokens = 0;
    std::size_t unk = 0;
};

// Batched form of predict_series for many histories. `stats`, if given,
// accumulates predicted-token and unk counts.
std::vector<ChannelSeries> predict_series_batch(const SequenceModel &model, const Vocabulary &vocab,
                                                std::span<const ChannelSeries> histories,
                                                const PredictionTask &task, PredictStats *stats = nullptr);

// Every S-th sample, aligned so the last sample is kept.
ChannelSeries decimate(const ChannelSeries &series, int S);

// Linear interpolation of coarse samples spaced S apart back to the fine
// grid. Coarse sample k sits at fine offset (k+1)*S after `anchor`; output
// has coarse.size() * S samples at the fine offsets 1 .. coarse.size()*S.
ChannelSeries interpolate_linear(Complex anchor, const ChannelSeries &coarse, int S);

// Decimate by task.S, predict N coarse samples, interpolate back. Covers
// M*S history and N*S future samples of the original timeline.
ChannelSeries transfer_predict(const SequenceModel &model, const Vocabulary &vocab, const ChannelSeries &history,
                               const PredictionTask &task);
std::vector<ChannelSeries> transfer_predict_batch(const SequenceModel &model, const Vocabulary &vocab,
                                                  std::span<const ChannelSeries> histories,
                                                  const PredictionTask &task, PredictStats *stats = nullptr);

// History ids for the last M changes of `history`.
std::vector<int> history_ids(const Vocabulary &vocab, const ChannelSeries &history, int M);

// Decoder-step attention rows ([N][M]) for the last M changes of `history`.
std::vector<std::vector<double>> attention_map(const SequenceModel &model, const Vocabulary &vocab,
                                               const ChannelSeries &history, const PredictionTask &task);

// ---- Checkpoints -------------------------------------------------------------

neural::Checkpoint to_checkpoint(const SequenceModel &model);
std::unique_ptr<SequenceModel> from_checkpoint(const neural::Checkpoint &ckpt);

void save_model(const SequenceModel &model, const std::filesystem::path &path);
std::unique_ptr<SequenceModel> load_model(const std::filesystem::path &path);
// Also checks the stored vocabulary hash against `vocab`.
std::unique_ptr<SequenceModel> load_model(const std::filesystem::path &path, const Vocabulary &vocab);

} // namespace chanlingo
