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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chanlingo
{

/// First differences h(t) - h(t-1), optionally snapped to a square grid.
struct ChangeSeries
{
    std::vector<Complex> changes;
    std::optional<double> quant_step;
    double source_interval_s = 1e-3;

    bool quantized() const { return quant_step.has_value(); }
};

// Integer coordinates of a quantized change on the grid.
struct GridPoint
{
    std::int64_t re = 0;
    std::int64_t im = 0;

    auto operator<=>(const GridPoint &) const = default;
};

// Nearest grid multiple, ties away from zero.
std::int64_t grid_index(double x, double step);

// Value of grid index `idx`. For steps that are reciprocals of integers
// (0.01, 0.005, ...) this is idx / (1/step), which gives the same double as
// the decimal literal, e.g. 0.03 rather than 3 * 0.01.
double grid_value(std::int64_t idx, double step);

GridPoint grid_point(Complex cc, double step);
Complex grid_change(GridPoint p, double step);

ChangeSeries compute_changes(const ChannelSeries &series);
ChangeSeries quantize(const ChangeSeries &changes, double quant_step);

// Table-style rendering, e.g. "+0.02-0.02i".
std::string format_change(Complex cc);

struct VocabEntry
{
    int id = 0;
    Complex cc;
    std::uint64_t frequency = 0;

    bool operator==(const VocabEntry &) const = default;
};

/// Frequency-ranked bijection between quantized channel changes and IDs 1..X.
/// ID 0 is the out-of-vocabulary token and is never stored.
class Vocabulary
{
public:
    static constexpr int kUnkId = 0;

    Vocabulary() = default;

    // Validates ids (dense 1..X), grid membership, uniqueness and
    // non-increasing frequencies.
    Vocabulary(double quant_step, std::vector<VocabEntry> entries, std::uint64_t oov_count);

    double quant_step() const { return quant_step_; }
    int size() const { return static_cast<int>(entries_.size()); }
    // Number of ids including unk.
    int token_count() const { return size() + 1; }
    std::uint64_t oov_count() const { return oov_count_; }
    const std::vector<VocabEntry> &entries() const { return entries_; }
    std::uint64_t hash() const { return hash_; }

    // Id of a change already on this vocabulary's grid; kUnkId if absent.
    int id_of(Complex quantized_cc) const;

    // Change for an id; unk maps to the zero change. Throws CorruptToken
    // for ids outside [0, X].
    Complex change_of(int id) const;

    bool operator==(const Vocabulary &other) const
    {
        return quant_step_ == other.quant_step_ && entries_ == other.entries_ &&
               oov_count_ == other.oov_count_ && hash_ == other.hash_;
    }

private:
    double quant_step_ = 0.01;
    std::vector<VocabEntry> entries_;
    std::uint64_t oov_count_ = 0;
    std::uint64_t hash_ = 0;
    std::map<GridPoint, int> index_;
};

inline constexpr double kDefaultQuantStep = 0.01;
inline constexpr std::size_t kDefaultMaxVocabSize = 2000;
inline constexpr std::uint64_t kDefaultMinFrequency = 11;

Vocabulary build_vocabulary(std::span<const ChangeSeries> quantized, std::size_t max_size,
                            std::uint64_t min_frequency);
Vocabulary build_vocabulary(const ChangeSeries &quantized, std::size_t max_size,
                            std::uint64_t min_frequency);

/// Integer form of a change sequence. `anchor` is the true coefficient that
/// precedes the first change, so decode() can rebuild absolute values.
struct TokenSeries
{
    std::vector<int> ids;
    Complex anchor;
    std::uint64_t vocabulary_hash = 0;
    double sample_interval_s = 1e-3;
};

// Quantizes the changes of `series` on the vocabulary grid and maps them to
// ids; anchor = samples[0].
TokenSeries encode(const ChannelSeries &series, const Vocabulary &vocab);

// Same for an existing change list. Pre-quantized input must use the
// vocabulary's step.
TokenSeries encode_changes(const ChangeSeries &changes, Complex anchor, const Vocabulary &vocab);

struct DecodeStats
{
    std::size_t unk_count = 0;
};

// out[y] = anchor + sum_{k<=y} cc(ids[k]).
ChannelSeries decode(const TokenSeries &tokens, const Vocabulary &vocab,
                     DecodeStats *stats = nullptr);

// --- Vocabulary files -----------------------------------------------------
//
//   # vccf v1 step=<float> X=<int> L=<int>
//   <id> <real> <imag> <frequency>
//   ...

std::string format_vocabulary(const Vocabulary &vocab);
Vocabulary parse_vocabulary(std::string_view text, const std::string &source = "<memory>");
void save_vocabulary(const Vocabulary &vocab, const std::filesystem::path &path);
Vocabulary load_vocabulary(const std::filesystem::path &path);

} // namespace chanlingo
