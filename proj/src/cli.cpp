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

#include "chanlingo/cli.hpp"

#include "chanlingo/error.hpp"
#include "chanlingo/eval.hpp"
#include "chanlingo/io.hpp"
#include "chanlingo/neural/checkpoint.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <ostream>
#include <sstream>

namespace chanlingo::cli
{

namespace
{

template <class... Ts> struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

const std::vector<std::string> kLogLevels = {"trace", "debug", "info", "warn", "error", "critical", "off"};

// Un-sectioned config keys belong to the active subcommand unless the app
// itself owns the option, so a config file reads like the flags it replaces
// and unknown keys are still rejected.
class SubcommandConfig : public CLI::ConfigINI
{
public:
    explicit SubcommandConfig(const CLI::App *app) : app_(app) {}

    std::vector<CLI::ConfigItem> from_config(std::istream &input) const override
    {
        auto items = CLI::ConfigINI::from_config(input);
        const auto active = app_->get_subcommands();
        if (active.empty())
            return items;
        for (auto &item : items)
            if (item.parents.empty() && app_->get_option_no_throw("--" + item.name) == nullptr)
                item.parents = {active.front()->get_name()};
        return items;
    }

private:
    const CLI::App *app_;
};

const CLI::Validator kOutputPath(
    [](std::string &s) -> std::string {
        if (s.empty())
            return "empty output path";
        const Path parent = Path(s).parent_path();
        if (!parent.empty() && !std::filesystem::is_directory(parent))
            return "directory " + parent.string() + " does not exist";
        return {};
    },
    "OUTPUT", "output path");

const CLI::Validator kPositiveInt(
    [](std::string &s) -> std::string {
        const auto v = io::parse_int(s);
        if (!v)
            return "'" + s + "' is not an integer";
        return *v >= 1 ? std::string() : "must be >= 1";
    },
    "INT>0", "positive integer");

const CLI::Validator kPositiveReal(
    [](std::string &s) -> std::string {
        const auto v = io::parse_double(s);
        if (!v)
            return "'" + s + "' is not a number";
        return *v > 0.0 ? std::string() : "must be > 0";
    },
    "REAL>0", "positive number");

void add_task(CLI::App *sub, PredictionTask &task, bool with_stride, bool with_s)
{
    sub->add_option("--M", task.M, "History length in changes")->capture_default_str()->check(kPositiveInt);
    sub->add_option("--N", task.N, "Predicted changes per block")->capture_default_str()->check(kPositiveInt);
    if (with_stride)
        sub->add_option("--stride", task.stride, "Window stride")->capture_default_str()->check(kPositiveInt);
    if (with_s)
        sub->add_option("--S", task.S, "Temporal sampling factor")->capture_default_str()->check(kPositiveInt);
}

std::string quoted(const std::string &s)
{
    if (s.find('"') != std::string::npos)
        throw InvalidArgument("paths containing '\"' cannot be written to a config file");
    return "\"" + s + "\"";
}

std::string quoted_list(const std::vector<Path> &paths)
{
    std::string out = "[";
    for (std::size_t i = 0; i < paths.size(); ++i)
        out += (i ? "," : "") + quoted(paths[i].string());
    return out + "]";
}

std::vector<Path> to_paths(const std::vector<std::string> &v)
{
    return std::vector<Path>(v.begin(), v.end());
}

// ---- Runners ----------------------------------------------------------------

ChannelSeries load_normalized(const Path &path, double *gain = nullptr)
{
    ChannelSeries s = load_csf(path);
    const double g = normalize_power(s);
    if (gain)
        *gain = g;
    return s;
}

void run_gen(const GenCommand &cmd, std::uint64_t seed, std::ostream &out)
{
    FadingConfig fading = cmd.fading;
    fading.rng_seed = seed;
    ChannelSeries series = generate_channel(fading);
    if (cmd.snr_db)
        series = add_noise(series, *cmd.snr_db, seed ^ 0x6e6f697365ULL);
    series.label = cmd.label;
    save_csf(series, cmd.out);
    out << fmt::format("gen: {} samples, f_d {:.4f} Hz, {} tap(s) -> {}\n", series.size(), fading.doppler_hz(),
                       fading.num_taps, cmd.out.string());
}

void run_build_vocab(const BuildVocabCommand &cmd, std::ostream &out)
{
    std::vector<ChangeSeries> quantized;
    for (const auto &p : cmd.inputs)
        quantized.push_back(quantize(compute_changes(load_normalized(p)), cmd.step));
    const Vocabulary vocab = build_vocabulary(quantized, cmd.max_size, cmd.min_freq);
    save_vocabulary(vocab, cmd.out);
    out << fmt::format("build-vocab: X = {}, L = {}, hash {} -> {}\n", vocab.size(), vocab.oov_count(),
                       io::hex64(vocab.hash()), cmd.out.string());
}

void run_train(const TrainCommand &cmd, std::uint64_t seed, std::ostream &out)
{
    const Vocabulary vocab = load_vocabulary(cmd.vocab);
    std::vector<TokenSeries> tokens;
    for (const auto &p : cmd.inputs)
        tokens.push_back(encode(load_normalized(p), vocab));
    const WindowedDataset data = make_dataset(tokens, vocab, cmd.task);
    if (data.empty())
        throw InvalidArgument("no training windows: inputs are shorter than M + N + 1 samples");

    std::unique_ptr<SequenceModel> model;
    if (cmd.init)
    {
        model = load_model(*cmd.init, vocab);
        spdlog::info("train: continuing from {}", cmd.init->string());
    }
    else
    {
        ModelConfig config;
        config.arrangement = cmd.mode;
        config.cell = cmd.cell;
        config.layers = cmd.layers;
        config.hidden = cmd.hidden;
        config.embedding_dim = cmd.emb;
        config.vocab_size = vocab.size();
        config.bidirectional = cmd.bidirectional;
        config.attention = cmd.attention;
        config.decoder_seed = cmd.decoder_seed;
        config.vocabulary_hash = vocab.hash();
        model = make_model(config);
        model->initialize(seed);
    }

    TrainOptions options;
    options.epochs = cmd.epochs;
    options.batch_size = cmd.batch;
    options.learning_rate = cmd.lr;
    options.clip_norm = cmd.clip;
    options.anneal = cmd.anneal;
    options.seed = seed;
    const TrainReport report = cmd.init ? fine_tune(*model, data, options) : train(*model, data, options);
    save_model(*model, cmd.out);
    out << fmt::format("train: {} windows, {} steps, final loss {:.6f} -> {}\n", data.size(), report.steps,
                       report.final_loss(), cmd.out.string());
}

void run_predict(const PredictCommand &cmd, std::ostream &out)
{
    const Vocabulary vocab = load_vocabulary(cmd.vocab);
    const auto model = load_model(cmd.model, vocab);
    double gain = 1.0;
    const ChannelSeries history = load_normalized(cmd.input, &gain);
    ChannelSeries prediction = transfer_predict(*model, vocab, history, cmd.task);
    for (auto &z : prediction.samples)
        z /= gain;
    prediction.label = "prediction";
    save_csf(prediction, cmd.out);
    out << fmt::format("predict: {} samples -> {}\n", prediction.size(), cmd.out.string());
}

void run_eval(const EvalCommand &cmd, std::ostream &out)
{
    const Vocabulary vocab = load_vocabulary(cmd.vocab);
    const auto model = load_model(cmd.model, vocab);
    const ChannelSeries truth = load_normalized(cmd.truth);
    const std::string name = cmd.name.empty() ? cmd.truth.stem().string() : cmd.name;
    std::vector<RunSummary> runs{summarize(name, splice(truth, *model, vocab, cmd.task, cmd.accumulate))};
    if (cmd.zoh)
        runs.push_back(summarize("zoh", zoh_baseline(truth, cmd.task)));
    io::write_file_atomic(cmd.report, report_tsv(runs));
    out << report_text(runs);
}

void run_diversity(const DiversityCommand &cmd, std::ostream &out)
{
    DiversitySet set;
    for (const auto &p : cmd.inputs)
        set.candidates.push_back(load_csf(p));
    ChannelSeries combined = prediction_diversity(set);
    combined.label = "pd";
    save_csf(combined, cmd.out);
    if (cmd.trace)
    {
        std::string tsv = "index\twinner\n";
        for (std::size_t k = 0; k < set.selector_trace.size(); ++k)
            tsv += fmt::format("{}\t{}\n", k, set.selector_trace[k]);
        io::write_file_atomic(*cmd.trace, tsv);
    }
    const std::vector<RunSummary> runs{summarize("pd", set)};
    out << report_text(runs);
}

void run_attention(const AttentionCommand &cmd, std::ostream &out)
{
    const Vocabulary vocab = load_vocabulary(cmd.vocab);
    const auto model = load_model(cmd.model, vocab);
    const ChannelSeries history = load_normalized(cmd.input);
    const auto rows = attention_map(*model, vocab, history, cmd.task);
    std::string tsv;
    for (const auto &row : rows)
    {
        for (std::size_t j = 0; j < row.size(); ++j)
            tsv += (j ? "\t" : "") + io::format_double(row[j]);
        tsv += '\n';
    }
    io::write_file_atomic(cmd.out, tsv);
    out << fmt::format("attention: {} x {} weights -> {}\n", rows.size(), rows.empty() ? 0 : rows.front().size(),
                       cmd.out.string());
}

void configure_logging(const std::string &level)
{
    auto logger = spdlog::get("chanlingo");
    if (!logger)
    {
        logger = spdlog::stderr_logger_mt("chanlingo");
        logger->set_pattern("[%H:%M:%S.%e] [%l] %v");
    }
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::from_str(level));
}

} // namespace

const char *subcommand_name(const Command &command)
{
    static constexpr const char *kNames[] = {"gen",       "build-vocab", "train",    "predict",
                                             "eval",      "diversity",   "attention"};
    return kNames[command.index()];
}

ParseResult parse_args(const std::vector<std::string> &args)
{
    CLI::App app{"Channel prediction over vocabularies of channel changes", "chanlingo"};
    app.config_formatter(std::make_shared<SubcommandConfig>(&app));
    app.set_config("--config", "", "Read options from a key=value file; flags win");
    app.allow_config_extras(false);
    app.set_version_flag("--version", fmt::format("chanlingo {}\ncsf v1\nvccf v1\nCKPT v{}", kVersion,
                                                  neural::kCheckpointVersion));
    app.require_subcommand(1);

    RunConfig config;
    std::string dump_path;
    app.add_option("--threads", config.threads, "Worker threads (1 = deterministic)")
        ->capture_default_str()
        ->check(kPositiveInt);
    app.add_option("--log-level", config.log_level, "Log level")->capture_default_str()->check(CLI::IsMember(kLogLevels));
    app.add_option("--dump-config", dump_path, "Write the resolved configuration here before running")
        ->check(kOutputPath);

    const auto add_seed = [&](CLI::App *sub) {
        sub->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    };

    // gen
    GenCommand gen;
    std::string gen_out;
    double snr_db = 0.0;
    auto *gen_cmd = app.add_subcommand("gen", "Synthesize a fading channel series")->fallthrough();
    gen_cmd->add_option("--carrier-hz", gen.fading.carrier_freq_hz, "Carrier frequency")->capture_default_str();
    gen_cmd->add_option("--speed-mps", gen.fading.speed_mps, "Receiver speed in m/s")->capture_default_str();
    gen_cmd->add_option("--interval-s", gen.fading.sample_interval_s, "Sample interval")->capture_default_str();
    gen_cmd->add_option("--sinusoids", gen.fading.num_sinusoids, "Sinusoids per tap")->capture_default_str();
    gen_cmd->add_option("--taps", gen.fading.num_taps, "Number of taps")->capture_default_str();
    auto *gains_opt = gen_cmd->add_option("--tap-gains-db", gen.fading.tap_gains_db,
                                          "Tap gains in dB; a single value applies to every tap");
    gen_cmd->add_option("--samples", gen.fading.duration_samples, "Series length")->capture_default_str();
    auto *snr_opt = gen_cmd->add_option("--snr-db", snr_db, "Add complex Gaussian noise at this SNR");
    gen_cmd->add_option("--label", gen.label, "Series label")->capture_default_str();
    gen_cmd->add_option("--out", gen_out, "Output CSF")->required()->check(kOutputPath);
    add_seed(gen_cmd);

    // build-vocab
    BuildVocabCommand bv;
    std::vector<std::string> bv_in;
    std::string bv_out;
    auto *bv_cmd = app.add_subcommand("build-vocab", "Build a vocabulary of channel changes")->fallthrough();
    bv_cmd->add_option("--in", bv_in, "Input CSF files")->required()->check(CLI::ExistingFile);
    bv_cmd->add_option("--step", bv.step, "Quantization step")->capture_default_str()->check(kPositiveReal);
    bv_cmd->add_option("--max-size", bv.max_size, "Largest vocabulary size X")->capture_default_str();
    bv_cmd->add_option("--min-freq", bv.min_freq, "Minimum change frequency")->capture_default_str();
    bv_cmd->add_option("--out", bv_out, "Output VCCF")->required()->check(kOutputPath);
    add_seed(bv_cmd);

    // train
    TrainCommand tr;
    std::vector<std::string> tr_in;
    std::string tr_vocab, tr_out, tr_init;
    std::string tr_mode = "nmt", tr_cell = "gru", tr_seed_mode = "zero";
    bool no_anneal = false;
    auto *tr_cmd = app.add_subcommand("train", "Train a prediction model")->fallthrough();
    tr_cmd->add_option("--mode", tr_mode, "Arrangement")->capture_default_str()->check(CLI::IsMember({"nlg", "nmt"}));
    tr_cmd->add_option("--in", tr_in, "Training CSF files")->required()->check(CLI::ExistingFile);
    tr_cmd->add_option("--vocab", tr_vocab, "Vocabulary VCCF")->required()->check(CLI::ExistingFile);
    add_task(tr_cmd, tr.task, true, false);
    tr_cmd->add_flag("--bidir", tr.bidirectional, "Bidirectional encoder");
    tr_cmd->add_flag("--attention", tr.attention, "Decoder attention");
    tr_cmd->add_option("--cell", tr_cell, "Recurrent cell")->capture_default_str()->check(CLI::IsMember({"gru", "lstm"}));
    tr_cmd->add_option("--hidden", tr.hidden, "Hidden size")->capture_default_str()->check(kPositiveInt);
    tr_cmd->add_option("--emb", tr.emb, "Embedding size")->capture_default_str()->check(kPositiveInt);
    tr_cmd->add_option("--layers", tr.layers, "Stacked layers")->capture_default_str()->check(kPositiveInt);
    tr_cmd->add_option("--decoder-seed", tr_seed_mode, "First decoder input")
        ->capture_default_str()
        ->check(CLI::IsMember({"zero", "last"}));
    tr_cmd->add_option("--epochs", tr.epochs, "Epochs")->capture_default_str()->check(kPositiveInt);
    tr_cmd->add_option("--batch", tr.batch, "Batch size")->capture_default_str()->check(kPositiveInt);
    tr_cmd->add_option("--lr", tr.lr, "Adam learning rate")->capture_default_str()->check(kPositiveReal);
    tr_cmd->add_option("--clip", tr.clip, "Global gradient-norm clip (<= 0 disables)")->capture_default_str();
    tr_cmd->add_flag("--no-anneal", no_anneal, "Keep the learning rate constant");
    tr_cmd->add_option("--init", tr_init, "Continue training this checkpoint")->check(CLI::ExistingFile);
    tr_cmd->add_option("--out", tr_out, "Output checkpoint")->required()->check(kOutputPath);
    add_seed(tr_cmd);

    // predict
    PredictCommand pr;
    std::string pr_model, pr_vocab, pr_in, pr_out;
    auto *pr_cmd = app.add_subcommand("predict", "Predict the samples following a series")->fallthrough();
    pr_cmd->add_option("--model", pr_model, "Checkpoint")->required()->check(CLI::ExistingFile);
    pr_cmd->add_option("--vocab", pr_vocab, "Vocabulary VCCF")->required()->check(CLI::ExistingFile);
    pr_cmd->add_option("--in", pr_in, "History CSF")->required()->check(CLI::ExistingFile);
    add_task(pr_cmd, pr.task, false, true);
    pr_cmd->add_option("--out", pr_out, "Output CSF")->required()->check(kOutputPath);
    add_seed(pr_cmd);

    // eval
    EvalCommand ev;
    std::string ev_truth, ev_model, ev_vocab, ev_report;
    auto *ev_cmd = app.add_subcommand("eval", "Spliced NMSE of a model on a truth series")->fallthrough();
    ev_cmd->add_option("--truth", ev_truth, "Truth CSF")->required()->check(CLI::ExistingFile);
    ev_cmd->add_option("--model", ev_model, "Checkpoint")->required()->check(CLI::ExistingFile);
    ev_cmd->add_option("--vocab", ev_vocab, "Vocabulary VCCF")->required()->check(CLI::ExistingFile);
    add_task(ev_cmd, ev.task, false, true);
    ev_cmd->add_flag("--accumulate", ev.accumulate, "Feed predicted blocks back as history");
    ev_cmd->add_flag("--zoh", ev.zoh, "Add a zero-order-hold baseline row");
    ev_cmd->add_option("--name", ev.name, "Report row name");
    ev_cmd->add_option("--report", ev_report, "Output TSV report")->required()->check(kOutputPath);
    add_seed(ev_cmd);

    // diversity
    DiversityCommand dv;
    std::vector<std::string> dv_in;
    std::string dv_out, dv_trace;
    auto *dv_cmd = app.add_subcommand("diversity", "Max-magnitude combination of predictions")->fallthrough();
    dv_cmd->add_option("--in", dv_in, "Candidate CSF files")->required()->check(CLI::ExistingFile);
    dv_cmd->add_option("--out", dv_out, "Output CSF")->required()->check(kOutputPath);
    dv_cmd->add_option("--trace", dv_trace, "Winner trace TSV")->check(kOutputPath);
    add_seed(dv_cmd);

    // attention
    AttentionCommand at;
    std::string at_model, at_vocab, at_in, at_out;
    auto *at_cmd = app.add_subcommand("attention", "Export decoder attention weights")->fallthrough();
    at_cmd->add_option("--model", at_model, "Checkpoint")->required()->check(CLI::ExistingFile);
    at_cmd->add_option("--vocab", at_vocab, "Vocabulary VCCF")->required()->check(CLI::ExistingFile);
    at_cmd->add_option("--in", at_in, "History CSF")->required()->check(CLI::ExistingFile);
    add_task(at_cmd, at.task, false, false);
    at_cmd->add_option("--out", at_out, "Output TSV (N rows x M columns)")->required()->check(kOutputPath);
    add_seed(at_cmd);

    ParseResult result;
    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError &e)
    {
        std::ostringstream out, err;
        const int code = app.exit(e, out, err);
        result.exit_code = code == 0 ? kExitOk : kExitUsage;
        result.output = out.str();
        result.message = err.str();
        return result;
    }

    try
    {
        CLI::App *active = app.get_subcommands().front();
        if (active == gen_cmd)
        {
            if (gains_opt->count() == 0)
                gen.fading.tap_gains_db = {0.0};
            if (gen.fading.tap_gains_db.size() == 1 && gen.fading.num_taps > 1)
                gen.fading.tap_gains_db.assign(static_cast<std::size_t>(gen.fading.num_taps),
                                               gen.fading.tap_gains_db.front());
            gen.fading.rng_seed = config.seed;
            gen.fading.validate();
            if (snr_opt->count() > 0)
                gen.snr_db = snr_db;
            gen.out = gen_out;
            config.command = gen;
        }
        else if (active == bv_cmd)
        {
            if (bv.max_size < 1)
                throw InvalidArgument("--max-size must be >= 1");
            bv.inputs = to_paths(bv_in);
            bv.out = bv_out;
            config.command = bv;
        }
        else if (active == tr_cmd)
        {
            tr.inputs = to_paths(tr_in);
            tr.vocab = tr_vocab;
            tr.mode = parse_arrangement(tr_mode);
            tr.cell = neural::parse_cell_kind(tr_cell);
            tr.decoder_seed = parse_decoder_seed(tr_seed_mode);
            tr.anneal = !no_anneal;
            if (!tr_init.empty())
                tr.init = Path(tr_init);
            tr.out = tr_out;
            tr.task.validate();
            ModelConfig probe;
            probe.arrangement = tr.mode;
            probe.cell = tr.cell;
            probe.layers = tr.layers;
            probe.hidden = tr.hidden;
            probe.embedding_dim = tr.emb;
            probe.vocab_size = 1;
            probe.bidirectional = tr.bidirectional;
            probe.attention = tr.attention;
            probe.decoder_seed = tr.decoder_seed;
            probe.validate();
            config.command = tr;
        }
        else if (active == pr_cmd)
        {
            pr.model = pr_model;
            pr.vocab = pr_vocab;
            pr.input = pr_in;
            pr.out = pr_out;
            pr.task.validate();
            config.command = pr;
        }
        else if (active == ev_cmd)
        {
            ev.truth = ev_truth;
            ev.model = ev_model;
            ev.vocab = ev_vocab;
            ev.report = ev_report;
            ev.task.validate();
            config.command = ev;
        }
        else if (active == dv_cmd)
        {
            dv.inputs = to_paths(dv_in);
            dv.out = dv_out;
            if (!dv_trace.empty())
                dv.trace = Path(dv_trace);
            config.command = dv;
        }
        else
        {
            at.model = at_model;
            at.vocab = at_vocab;
            at.input = at_in;
            at.out = at_out;
            at.task.validate();
            config.command = at;
        }
    }
    catch (const Error &e)
    {
        result.exit_code = kExitUsage;
        result.message = std::string(e.what()) + "\n";
        return result;
    }
    if (!dump_path.empty())
        config.dump_config = Path(dump_path);
    result.config = std::move(config);
    return result;
}

std::string dump_config(const RunConfig &config)
{
    std::string text = fmt::format("# chanlingo {} {}\n", kVersion, subcommand_name(config.command));
    const auto put = [&](const std::string &key, const std::string &value) { text += key + "=" + value + "\n"; };
    const auto put_task = [&](const PredictionTask &t, bool stride, bool s) {
        put("M", std::to_string(t.M));
        put("N", std::to_string(t.N));
        if (stride)
            put("stride", std::to_string(t.stride));
        if (s)
            put("S", std::to_string(t.S));
    };
    const auto put_bool = [&](const std::string &key, bool v) { put(key, v ? "true" : "false"); };

    put("threads", std::to_string(config.threads));
    put("log-level", quoted(config.log_level));
    put("seed", std::to_string(config.seed));
    std::visit(Overloaded{
                   [&](const GenCommand &c) {
                       put("carrier-hz", io::format_double(c.fading.carrier_freq_hz));
                       put("speed-mps", io::format_double(c.fading.speed_mps));
                       put("interval-s", io::format_double(c.fading.sample_interval_s));
                       put("sinusoids", std::to_string(c.fading.num_sinusoids));
                       put("taps", std::to_string(c.fading.num_taps));
                       std::string gains = "[";
                       for (std::size_t i = 0; i < c.fading.tap_gains_db.size(); ++i)
                           gains += (i ? "," : "") + io::format_double(c.fading.tap_gains_db[i]);
                       put("tap-gains-db", gains + "]");
                       put("samples", std::to_string(c.fading.duration_samples));
                       if (c.snr_db)
                           put("snr-db", io::format_double(*c.snr_db));
                       put("label", quoted(c.label));
                       put("out", quoted(c.out.string()));
                   },
                   [&](const BuildVocabCommand &c) {
                       put("in", quoted_list(c.inputs));
                       put("step", io::format_double(c.step));
                       put("max-size", std::to_string(c.max_size));
                       put("min-freq", std::to_string(c.min_freq));
                       put("out", quoted(c.out.string()));
                   },
                   [&](const TrainCommand &c) {
                       put("mode", to_string(c.mode));
                       put("in", quoted_list(c.inputs));
                       put("vocab", quoted(c.vocab.string()));
                       put_task(c.task, true, false);
                       put_bool("bidir", c.bidirectional);
                       put_bool("attention", c.attention);
                       put("cell", neural::to_string(c.cell));
                       put("hidden", std::to_string(c.hidden));
                       put("emb", std::to_string(c.emb));
                       put("layers", std::to_string(c.layers));
                       put("decoder-seed", to_string(c.decoder_seed));
                       put("epochs", std::to_string(c.epochs));
                       put("batch", std::to_string(c.batch));
                       put("lr", io::format_double(c.lr));
                       put("clip", io::format_double(c.clip));
                       put_bool("no-anneal", !c.anneal);
                       if (c.init)
                           put("init", quoted(c.init->string()));
                       put("out", quoted(c.out.string()));
                   },
                   [&](const PredictCommand &c) {
                       put("model", quoted(c.model.string()));
                       put("vocab", quoted(c.vocab.string()));
                       put("in", quoted(c.input.string()));
                       put_task(c.task, false, true);
                       put("out", quoted(c.out.string()));
                   },
                   [&](const EvalCommand &c) {
                       put("truth", quoted(c.truth.string()));
                       put("model", quoted(c.model.string()));
                       put("vocab", quoted(c.vocab.string()));
                       put_task(c.task, false, true);
                       put_bool("accumulate", c.accumulate);
                       put_bool("zoh", c.zoh);
                       if (!c.name.empty())
                           put("name", quoted(c.name));
                       put("report", quoted(c.report.string()));
                   },
                   [&](const DiversityCommand &c) {
                       put("in", quoted_list(c.inputs));
                       put("out", quoted(c.out.string()));
                       if (c.trace)
                           put("trace", quoted(c.trace->string()));
                   },
                   [&](const AttentionCommand &c) {
                       put("model", quoted(c.model.string()));
                       put("vocab", quoted(c.vocab.string()));
                       put("in", quoted(c.input.string()));
                       put_task(c.task, false, false);
                       put("out", quoted(c.out.string()));
                   },
               },
               config.command);
    return text;
}

int run(const RunConfig &config, std::ostream &out, std::ostream &err)
{
    try
    {
        configure_logging(config.log_level);
        if (config.threads > 1)
            spdlog::debug("--threads {} accepted; execution is single-threaded", config.threads);
        if (config.dump_config)
            io::write_file_atomic(*config.dump_config, dump_config(config));
        std::visit(Overloaded{
                       [&](const GenCommand &c) { run_gen(c, config.seed, out); },
                       [&](const BuildVocabCommand &c) { run_build_vocab(c, out); },
                       [&](const TrainCommand &c) { run_train(c, config.seed, out); },
                       [&](const PredictCommand &c) { run_predict(c, out); },
                       [&](const EvalCommand &c) { run_eval(c, out); },
                       [&](const DiversityCommand &c) { run_diversity(c, out); },
                       [&](const AttentionCommand &c) { run_attention(c, out); },
                   },
                   config.command);
        return kExitOk;
    }
    catch (const std::exception &e)
    {
        err << "chanlingo " << subcommand_name(config.command) << ": error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int main_entry(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    const ParseResult parsed = parse_args(args);
    out << parsed.output;
    err << parsed.message;
    if (!parsed.config)
        return parsed.exit_code;
    return run(*parsed.config, out, err);
}

} // namespace chanlingo::cli
