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

#include "chanlingo/channel_synth.hpp"
#include "chanlingo/cli.hpp"
#include "chanlingo/error.hpp"
#include "chanlingo/eval.hpp"
#include "chanlingo/predictor.hpp"
#include "chanlingo/vcc.hpp"

#include <pybind11/complex.h>
#include <pybind11/iostream.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace chanlingo;

namespace
{

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ChannelSeries to_series(const ComplexArray &samples, double interval_s = 1e-3)
{
    if (samples.ndim() != 1)
        throw InvalidArgument("expected a 1-D array of complex samples");
    ChannelSeries s;
    s.samples.assign(samples.data(), samples.data() + samples.size());
    s.sample_interval_s = interval_s;
    return s;
}

ComplexArray to_array(const ChannelSeries &s)
{
    return ComplexArray(static_cast<py::ssize_t>(s.size()), s.samples.data());
}

py::dict spliced_dict(const SplicedResult &r)
{
    py::list segments;
    for (const auto &seg : r.segments)
        segments.append(py::make_tuple(seg.start, seg.length));
    const RunSummary summary = summarize("run", r);
    return py::dict("predicted"_a = to_array(r.predicted), "truth"_a = to_array(r.truth), "segments"_a = segments,
                    "evaluable_start"_a = r.evaluable_start, "nmse"_a = summary.nmse,
                    "nmse_truth_norm"_a = summary.nmse_truth_norm, "predicted_tokens"_a = r.predicted_tokens,
                    "unk_count"_a = r.unk_count);
}

py::dict config_dict(const ModelConfig &c)
{
    return py::dict("arrangement"_a = to_string(c.arrangement), "cell"_a = neural::to_string(c.cell),
                    "layers"_a = c.layers, "hidden"_a = c.hidden, "embedding_dim"_a = c.embedding_dim,
                    "vocab_size"_a = c.vocab_size, "bidirectional"_a = c.bidirectional,
                    "attention"_a = c.attention, "decoder_seed"_a = to_string(c.decoder_seed),
                    "vocabulary_hash"_a = c.vocabulary_hash);
}

} // namespace

PYBIND11_MODULE(_chanlingo, m)
{
    m.doc() = "Channel prediction over vocabularies of channel changes";
    m.attr("__version__") = cli::kVersion;
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    // ---- channel synthesis ----
    m.def("doppler_frequency", &doppler_frequency, "speed_mps"_a, "carrier_freq_hz"_a);
    m.def("wavelength_span", &wavelength_span, "duration_s"_a, "speed_mps"_a, "carrier_freq_hz"_a);
    m.def(
        "generate_channel",
        [](double carrier_freq_hz, double speed_mps, double sample_interval_s, int num_sinusoids,
           std::vector<double> tap_gains_db, std::size_t samples, std::uint64_t seed) {
            FadingConfig c;
            c.carrier_freq_hz = carrier_freq_hz;
            c.speed_mps = speed_mps;
            c.sample_interval_s = sample_interval_s;
            c.num_sinusoids = num_sinusoids;
            c.num_taps = static_cast<int>(tap_gains_db.size());
            c.tap_gains_db = std::move(tap_gains_db);
            c.duration_samples = samples;
            c.rng_seed = seed;
            c.validate();
            return to_array(generate_channel(c));
        },
        "carrier_freq_hz"_a = 3.45e9, "speed_mps"_a = 3.0 / 3.6, "sample_interval_s"_a = 1e-3,
        "num_sinusoids"_a = 32, "tap_gains_db"_a = std::vector<double>{0.0}, "samples"_a = 10'000, "seed"_a = 0);
    m.def(
        "load_csf",
        [](const std::string &path) {
            const ChannelSeries s = load_csf(path);
            return py::make_tuple(to_array(s), s.sample_interval_s, s.label);
        },
        "path"_a);
    m.def(
        "save_csf",
        [](const std::string &path, const ComplexArray &samples, double interval_s, const std::string &label) {
            ChannelSeries s = to_series(samples, interval_s);
            s.label = label;
            save_csf(s, path);
        },
        "path"_a, "samples"_a, "interval_s"_a = 1e-3, "label"_a = "");

    // ---- vocabulary ----
    py::class_<Vocabulary>(m, "Vocabulary")
        .def_property_readonly("size", &Vocabulary::size)
        .def_property_readonly("token_count", &Vocabulary::token_count)
        .def_property_readonly("quant_step", &Vocabulary::quant_step)
        .def_property_readonly("oov_count", &Vocabulary::oov_count)
        .def_property_readonly("hash", &Vocabulary::hash)
        .def_property_readonly("entries",
                               [](const Vocabulary &v) {
                                   py::list out;
                                   for (const auto &e : v.entries())
                                       out.append(py::make_tuple(e.id, e.cc, e.frequency));
                                   return out;
                               })
        .def("id_of", &Vocabulary::id_of, "quantized_change"_a)
        .def("change_of", &Vocabulary::change_of, "id"_a)
        .def(
            "encode",
            [](const Vocabulary &v, const ComplexArray &samples) {
                const TokenSeries t = encode(to_series(samples), v);
                return py::make_tuple(t.ids, t.anchor);
            },
            "samples"_a)
        .def(
            "decode",
            [](const Vocabulary &v, const std::vector<int> &ids, Complex anchor) {
                TokenSeries t;
                t.ids = ids;
                t.anchor = anchor;
                t.vocabulary_hash = v.hash();
                return to_array(decode(t, v));
            },
            "ids"_a, "anchor"_a)
        .def("save", [](const Vocabulary &v, const std::string &path) { save_vocabulary(v, path); }, "path"_a)
        .def("to_text", &format_vocabulary)
        .def("__len__", &Vocabulary::size)
        .def(py::self == py::self);
    m.def(
        "build_vocabulary",
        [](const std::vector<ComplexArray> &series, double step, std::size_t max_size, std::uint64_t min_freq) {
            std::vector<ChangeSeries> q;
            for (const auto &s : series)
                q.push_back(quantize(compute_changes(to_series(s)), step));
            return build_vocabulary(q, max_size, min_freq);
        },
        "series"_a, "step"_a = kDefaultQuantStep, "max_size"_a = kDefaultMaxVocabSize,
        "min_freq"_a = kDefaultMinFrequency);
    m.def("load_vocabulary", [](const std::string &path) { return load_vocabulary(path); }, "path"_a);

    // ---- models ----
    py::class_<SequenceModel, std::unique_ptr<SequenceModel>>(m, "Model")
        .def_property_readonly("config", [](const SequenceModel &s) { return config_dict(s.config()); })
        .def("save", [](const SequenceModel &s, const std::string &path) { save_model(s, path); }, "path"_a)
        .def(
            "predict",
            [](const SequenceModel &s, const std::vector<int> &ids, int N) { return predict(s, ids, N); }, "ids"_a,
            "N"_a);
    m.def(
        "load_model",
        [](const std::string &path, const Vocabulary *vocab) {
            return vocab ? load_model(path, *vocab) : load_model(path);
        },
        "path"_a, "vocab"_a = nullptr);
    m.def(
        "train_model",
        [](const std::vector<ComplexArray> &series, const Vocabulary &vocab, const std::string &mode, int M, int N,
           int stride, const std::string &cell, int hidden, int emb, int layers, bool bidirectional, bool attention,
           const std::string &decoder_seed, int epochs, int batch, double lr, double clip, std::uint64_t seed) {
            std::vector<TokenSeries> tokens;
            for (const auto &s : series)
                tokens.push_back(encode(to_series(s), vocab));
            ModelConfig c;
            c.arrangement = parse_arrangement(mode);
            c.cell = neural::parse_cell_kind(cell);
            c.layers = layers;
            c.hidden = hidden;
            c.embedding_dim = emb;
            c.vocab_size = vocab.size();
            c.bidirectional = bidirectional;
            c.attention = attention;
            c.decoder_seed = parse_decoder_seed(decoder_seed);
            c.vocabulary_hash = vocab.hash();
            c.validate();
            const PredictionTask task{.M = M, .N = N, .stride = stride};
            py::gil_scoped_release release;
            const WindowedDataset data = make_dataset(tokens, vocab, task);
            if (data.empty())
                throw InvalidArgument("no training windows");
            auto model = make_model(c);
            model->initialize(seed);
            TrainOptions o;
            o.epochs = epochs;
            o.batch_size = batch;
            o.learning_rate = lr;
            o.clip_norm = clip;
            o.seed = seed;
            const TrainReport report = train(*model, data, o);
            return std::make_pair(std::move(model), report.epoch_loss);
        },
        "series"_a, "vocab"_a, "mode"_a = "nmt", "M"_a = 30, "N"_a = 10, "stride"_a = 1, "cell"_a = "gru",
        "hidden"_a = 64, "emb"_a = 32, "layers"_a = 2, "bidirectional"_a = false, "attention"_a = false,
        "decoder_seed"_a = "zero", "epochs"_a = 2, "batch"_a = 32, "lr"_a = 1e-3, "clip"_a = 5.0, "seed"_a = 0);
    m.def(
        "predict_series",
        [](const SequenceModel &model, const Vocabulary &vocab, const ComplexArray &history, int M, int N, int S) {
            return to_array(transfer_predict(model, vocab, to_series(history), PredictionTask{.M = M, .N = N, .S = S}));
        },
        "model"_a, "vocab"_a, "history"_a, "M"_a, "N"_a, "S"_a = 1);
    m.def(
        "attention_map",
        [](const SequenceModel &model, const Vocabulary &vocab, const ComplexArray &history, int M, int N) {
            const auto rows = attention_map(model, vocab, to_series(history), PredictionTask{.M = M, .N = N});
            py::array_t<double> out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(M)});
            auto view = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = 0; j < rows[i].size(); ++j)
                    view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = rows[i][j];
            return out;
        },
        "model"_a, "vocab"_a, "history"_a, "M"_a, "N"_a);

    // ---- evaluation ----
    m.def(
        "nmse",
        [](const ComplexArray &truth, const ComplexArray &predicted, bool truth_norm) {
            return nmse(to_series(truth), to_series(predicted), truth_norm ? NmseNorm::kTruth : NmseNorm::kPredicted);
        },
        "truth"_a, "predicted"_a, "truth_norm"_a = false);
    m.def(
        "splice",
        [](const ComplexArray &truth, const SequenceModel &model, const Vocabulary &vocab, int M, int N, int S,
           bool accumulate) {
            const ChannelSeries t = to_series(truth);
            SplicedResult r;
            {
                py::gil_scoped_release release;
                r = splice(t, model, vocab, PredictionTask{.M = M, .N = N, .S = S}, accumulate);
            }
            return spliced_dict(r);
        },
        "truth"_a, "model"_a, "vocab"_a, "M"_a, "N"_a, "S"_a = 1, "accumulate"_a = false);
    m.def(
        "zoh_baseline",
        [](const ComplexArray &truth, int M, int N, int S) {
            return spliced_dict(zoh_baseline(to_series(truth), PredictionTask{.M = M, .N = N, .S = S}));
        },
        "truth"_a, "M"_a, "N"_a, "S"_a = 1);
    m.def(
        "prediction_diversity",
        [](const std::vector<ComplexArray> &candidates) {
            DiversitySet set;
            for (const auto &c : candidates)
                set.candidates.push_back(to_series(c));
            const ChannelSeries out = prediction_diversity(set);
            return py::make_tuple(to_array(out), set.selector_trace);
        },
        "candidates"_a);

    // ---- command line ----
    m.def(
        "cli",
        [](const std::vector<std::string> &args) {
            py::scoped_ostream_redirect out(std::cout, py::module_::import("sys").attr("stdout"));
            py::scoped_estream_redirect err(std::cerr, py::module_::import("sys").attr("stderr"));
            return cli::main_entry(args, std::cout, std::cerr);
        },
        "args"_a, "Run the chanlingo command line with `args` (no program name); returns the exit code.");
}
