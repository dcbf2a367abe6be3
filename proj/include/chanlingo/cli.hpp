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
#include "chanlingo/neural/layers.hpp"
#include "chanlingo/predictor.hpp"
#include "chanlingo/vcc.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chanlingo::cli
{

inline constexpr const char *kVersion = "0.1.0";

enum ExitCode : int
{
    kExitOk = 0,
    kExitRuntime = 1,
    kExitUsage = 2,
};

using Path = std::filesystem::path;

struct GenCommand
{
    FadingConfig fading;
    std::optional<double> snr_db;
    std::string label = "synthetic";
    Path out;

    bool operator==(const GenCommand &) const = default;
};

struct BuildVocabCommand
{
    std::vector<Path> inputs;
    double step = kDefaultQuantStep;
    std::size_t max_size = kDefaultMaxVocabSize;
    std::uint64_t min_freq = kDefaultMinFrequency;
    Path out;

    bool operator==(const BuildVocabCommand &) const = default;
};

struct TrainCommand
{
    std::vector<Path> inputs;
    Path vocab;
    PredictionTask task;
    Arrangement mode = Arrangement::kNmt;
    neural::CellKind cell = neural::CellKind::kGru;
    int hidden = 64;
    int emb = 32;
    int layers = 2;
    bool bidirectional = false;
    bool attention = false;
    DecoderSeed decoder_seed = DecoderSeed::kZeroToken;
    int epochs = 2;
    int batch = 32;
    double lr = 1e-3;
    double clip = 5.0;
    bool anneal = true;
    std::optional<Path> init; // continue from this checkpoint (fine-tuning)
    Path out;

    bool operator==(const TrainCommand &) const = default;
};

struct PredictCommand
{
    Path model;
    Path vocab;
    Path input;
    PredictionTask task;
    Path out;

    bool operator==(const PredictCommand &) const = default;
};

struct EvalCommand
{
    Path truth;
    Path model;
    Path vocab;
    PredictionTask task;
    bool accumulate = false;
    bool zoh = false; // append a zero-order-hold row
    std::string name; // report row name; defaults to the truth file stem
    Path report;

    bool operator==(const EvalCommand &) const = default;
};

struct DiversityCommand
{
    std::vector<Path> inputs;
    Path out;
    std::optional<Path> trace;

    bool operator==(const DiversityCommand &) const = default;
};

struct AttentionCommand
{
    Path model;
    Path vocab;
    Path input;
    PredictionTask task;
    Path out;

    bool operator==(const AttentionCommand &) const = default;
};

using Command = std::variant<GenCommand, BuildVocabCommand, TrainCommand, PredictCommand, EvalCommand,
                             DiversityCommand, AttentionCommand>;

struct RunConfig
{
    Command command;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string log_level = "info";
    std::optional<Path> dump_config; // not part of the run's identity

    bool operator==(const RunConfig &other) const
    {
        return command == other.command && seed == other.seed && threads == other.threads &&
               log_level == other.log_level;
    }
};

const char *subcommand_name(const Command &command);

struct ParseResult
{
    std::optional<RunConfig> config; // empty for help, version and errors
    int exit_code = kExitOk;
    std::string output;  // help or version text
    std::string message; // usage error
};

// `args` excludes the program name.
ParseResult parse_args(const std::vector<std::string> &args);

// key=value form of a config; feeding it back through --config with the same
// subcommand yields an equal RunConfig.
std::string dump_config(const RunConfig &config);

int run(const RunConfig &config, std::ostream &out, std::ostream &err);

// parse_args + run with exit-code mapping.
int main_entry(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace chanlingo::cli
