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
#include "chanlingo/predictor.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chanlingo
{

enum class NmseNorm
{
    kPredicted, // divide by the power of the prediction
    kTruth,     // divide by the power of the truth
};

// sum |h - h_hat|^2 / sum |h_hat|^2 (or / sum |h|^2 with kTruth).
double nmse(std::span<const Complex> truth, std::span<const Complex> predicted,
            NmseNorm norm = NmseNorm::kPredicted);
double nmse(const ChannelSeries &truth, const ChannelSeries &predicted, NmseNorm norm = NmseNorm::kPredicted);

struct Segment
{
    std::size_t start = 0;
    std::size_t length = 0;

    bool operator==(const Segment &) const = default;
};

/// Truth with every evaluable block replaced by a prediction. Samples before
/// `evaluable_start` are copied through and excluded from scoring.
struct SplicedResult
{
    ChannelSeries predicted;
    ChannelSeries truth;
    std::vector<Segment> segments;
    std::size_t evaluable_start = 0;
    std::size_t predicted_tokens = 0;
    std::size_t unk_count = 0;

    double nmse(NmseNorm norm = NmseNorm::kPredicted) const;
};

// Maps a batch of history windows to one predicted block each.
using BlockPredictor = std::function<std::vector<ChannelSeries>(std::span<const ChannelSeries>)>;

struct SpliceLayout
{
    std::size_t history = 0; // samples handed to the predictor
    std::size_t block = 0;   // samples predicted per call
};

// Walks `truth` in blocks after the first `history` samples. Each block is
// predicted from the true preceding window, or with `accumulate` from the
// already spliced sequence. A short final block keeps only the samples that
// fit.
SplicedResult splice(const ChannelSeries &truth, const BlockPredictor &predictor, SpliceLayout layout,
                     bool accumulate = false);

// M*S+1 history samples, N*S predicted samples per block.
SpliceLayout layout_for(const PredictionTask &task);

SplicedResult splice(const ChannelSeries &truth, const SequenceModel &model, const Vocabulary &vocab,
                     const PredictionTask &task, bool accumulate = false);

// Every block repeats the last true sample before it.
SplicedResult zoh_baseline(const ChannelSeries &truth, const PredictionTask &task);

/// Aligned candidate predictions and, after prediction_diversity, the index
/// of the winning candidate at every position.
struct DiversitySet
{
    std::vector<ChannelSeries> candidates;
    std::vector<int> selector_trace;
};

// Per position, the candidate value with the largest magnitude (ties to the
// lowest index).
ChannelSeries prediction_diversity(DiversitySet &set);

struct RunSummary
{
    std::string name;
    std::optional<double> nmse; // absent for diversity runs
    std::optional<double> nmse_truth_norm;
    std::size_t segments = 0;
    std::size_t predicted_tokens = 0;
    std::size_t unk_count = 0;
    std::vector<std::size_t> pd_winners; // empty unless a diversity run

    double unk_rate() const;
};

RunSummary summarize(const std::string &name, const SplicedResult &result);
RunSummary summarize(const std::string &name, const DiversitySet &set);

// Tab-separated, one header line plus one row per run.
std::string report_tsv(std::span<const RunSummary> runs);
std::string report_text(std::span<const RunSummary> runs);

} // namespace chanlingo
