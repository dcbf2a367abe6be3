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

#include "gradcheck.hpp"
#include "tasks.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace chanlingo;
using namespace chanlingo::testing;
using Catch::Approx;

namespace
{

void randomize(SequenceModel &m, std::uint64_t seed, double scale = 0.5)
{
    CounterRng rng(seed);
    for (auto *p : m.parameters().all())
        for (auto &v : p->value.values())
            v = scale * rng.normal();
}

void zero_all(SequenceModel &m)
{
    for (auto *p : m.parameters().all())
        p->value.fill(0.0);
}

void copy_parameter(SequenceModel &dst, const std::string &dst_name, const SequenceModel &src,
                    const std::string &src_name)
{
    dst.parameters().find(dst_name)->value = src.parameters().find(src_name)->value;
}

std::vector<neural::Tensor> snapshot(const SequenceModel &m)
{
    std::vector<neural::Tensor> out;
    for (const auto *p : m.parameters().all())
        out.push_back(p->value);
    return out;
}

std::filesystem::path temp_path(const std::string &name)
{
    return std::filesystem::temp_directory_path() / ("chanlingo_test_" + name);
}

ChannelSeries rotating(std::size_t n, double fd, double dt)
{
    ChannelSeries s;
    s.sample_interval_s = dt;
    for (std::size_t k = 0; k < n; ++k)
        s.samples.push_back(std::polar(1.0, 2.0 * std::numbers::pi * fd * dt * static_cast<double>(k)));
    return s;
}

} // namespace

TEST_CASE("window count", "[predictor][dataset]")
{
    CHECK(window_count(100, 30, 10, 1) == 61);
    CHECK(window_count(40, 30, 10, 1) == 1);
    CHECK(window_count(39, 30, 10, 1) == 0);
    for (std::size_t len = 2; len < 60; ++len)
        for (int M = 1; M < 6; ++M)
            for (int N = 1; N < 5; ++N)
                for (int stride = 1; stride < 7; ++stride)
                {
                    std::size_t brute = 0;
                    for (std::size_t s = 0; s + static_cast<std::size_t>(M + N) <= len; s += static_cast<std::size_t>(stride))
                        ++brute;
                    CHECK(window_count(len, M, N, stride) == brute);
                }
    // stride 5 keeps one window in five.
    const std::size_t dense = window_count(100'040, 30, 10, 1);
    const std::size_t sparse = window_count(100'040, 30, 10, 5);
    CHECK(sparse == (dense + 4) / 5);
    CHECK_THROWS_AS(window_count(10, 0, 1, 1), InvalidArgument);
}

TEST_CASE("make_dataset windows and anchors", "[predictor][dataset]")
{
    ChangeSeries q;
    q.quant_step = 0.01;
    q.changes = {{0.01, 0}, {0, 0.01}, {0.01, 0}, {-0.02, 0}, {0.01, 0}, {0, 0.01}};
    const auto vocab = build_vocabulary(q, 10, 1);
    const auto tokens = encode_changes(q, Complex(1.0, -1.0), vocab);

    PredictionTask task{.M = 2, .N = 2, .stride = 1};
    const auto ds = make_dataset(tokens, vocab, task);
    REQUIRE(ds.size() == 3);
    CHECK(ds.vocabulary_hash == vocab.hash());
    for (std::size_t w = 0; w < ds.size(); ++w)
    {
        CHECK(ds.examples[w].input == std::vector<int>{tokens.ids[w], tokens.ids[w + 1]});
        CHECK(ds.examples[w].target == std::vector<int>{tokens.ids[w + 2], tokens.ids[w + 3]});
        Complex expect = tokens.anchor;
        for (std::size_t k = 0; k < w + 2; ++k)
            expect += q.changes[k];
        CHECK(std::abs(ds.examples[w].anchor - expect) < 1e-12);
    }

    task.M = 5;
    task.N = 5;
    CHECK(make_dataset(tokens, vocab, task).empty());

    auto foreign = tokens;
    foreign.vocabulary_hash ^= 7;
    CHECK_THROWS_AS(make_dataset(foreign, vocab, PredictionTask{.M = 1, .N = 1}), VocabularyMismatch);
}

TEST_CASE("end-to-end gradients of tiny models", "[predictor][gradient]")
{
    const WindowExample a{{1, 4, 2}, {3, 0}, {}};
    const WindowExample b{{5, 5, 0}, {1, 2}, {}};
    const std::vector<const WindowExample *> batch{&a, &b};

    for (auto cell : {neural::CellKind::kGru, neural::CellKind::kLstm})
    {
        DYNAMIC_SECTION("nlg " << neural::to_string(cell))
        {
            auto c = tiny_config(Arrangement::kNlg, 5, 3, 4, 2);
            c.cell = cell;
            NlgModel m(c);
            randomize(m, 3);
            for (auto scope : {LossScope::kTrainingObjective, LossScope::kTargetsOnly})
            {
                const auto r = check_gradients(m.parameters(), [&](neural::Graph &g) {
                    return m.batch_loss(g, batch, scope, true);
                });
                CHECK(r.failures.empty());
            }
        }
        DYNAMIC_SECTION("nmt bidirectional attention " << neural::to_string(cell))
        {
            auto c = tiny_config(Arrangement::kNmt, 5, 3, 4, 2);
            c.cell = cell;
            c.bidirectional = true;
            c.attention = true;
            c.decoder_seed = DecoderSeed::kLastInput;
            Seq2SeqModel m(c);
            randomize(m, 4);
            const auto r = check_gradients(m.parameters(), [&](neural::Graph &g) {
                return m.batch_loss(g, batch, LossScope::kTargetsOnly, true);
            });
            for (const auto &f : r.failures)
                UNSCOPED_INFO(f.parameter << "[" << f.index << "] " << f.analytic << " vs " << f.numeric);
            CHECK(r.failures.empty());
            CHECK(r.checked == m.parameters().scalar_count());
        }
    }
}

TEST_CASE("encode_history", "[predictor][nmt]")
{
    auto uni_cfg = tiny_config(Arrangement::kNmt, 6, 3, 4, 2);
    auto bi_cfg = uni_cfg;
    bi_cfg.bidirectional = true;
    Seq2SeqModel bi(bi_cfg);
    randomize(bi, 8);
    Seq2SeqModel uni(uni_cfg);
    randomize(uni, 9);
    for (const auto *p : uni.parameters().all())
        if (p->name.starts_with("encoder.fwd") || p->name == "embedding")
            copy_parameter(uni, p->name, bi, p->name);

    SECTION("single step")
    {
        const std::vector<int> ids{3};
        const auto eb = bi.encode_history(ids);
        const auto eu = uni.encode_history(ids);
        REQUIRE(eb.states.rows() == 1);
        REQUIRE(eb.states.cols() == 8);
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(eb.states.at(0, j) == eu.states.at(0, j));
    }
    SECTION("backward direction of reversed input")
    {
        // A unidirectional model whose forward stack holds the backward
        // weights reads the reversed input the way the backward stack reads
        // the original.
        for (const auto *p : uni.parameters().all())
            if (p->name.starts_with("encoder.fwd"))
                copy_parameter(uni, p->name, bi, "encoder.bwd" + p->name.substr(std::string("encoder.fwd").size()));
        const std::vector<int> ids{1, 5, 2, 2, 6};
        const std::vector<int> rev(ids.rbegin(), ids.rend());
        const auto eb = bi.encode_history(ids);
        const auto eu = uni.encode_history(rev);
        for (std::size_t t = 0; t < ids.size(); ++t)
            for (std::size_t j = 0; j < 4; ++j)
                CHECK(eb.states.at(t, 4 + j) == eu.states.at(ids.size() - 1 - t, j));
    }
    SECTION("zero weights")
    {
        zero_all(bi);
        const auto e = bi.encode_history(std::vector<int>{1, 2, 3});
        for (double v : e.states.values())
            CHECK(v == 0.0);
        for (const auto &h : e.bridged.h)
            for (double v : h)
                CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(bi.encode_history(std::vector<int>{7}), InvalidArgument);
}

TEST_CASE("attend", "[predictor][nmt]")
{
    auto c = tiny_config(Arrangement::kNmt, 4, 2, 2, 1);
    c.attention = true;
    Seq2SeqModel m(c);
    randomize(m, 2);

    const std::vector<double> query{0.4, -0.9};
    const auto one = m.attend(query, neural::Tensor({1, 2}, std::vector<double>{0.3, 0.1}));
    CHECK(one.weights == std::vector<double>{1.0});

    const auto same = m.attend(query, neural::Tensor({3, 2}, std::vector<double>{1, 2, 1, 2, 1, 2}));
    for (double w : same.weights)
        CHECK(w == Approx(1.0 / 3.0).epsilon(1e-12));

    auto &score = m.parameters().find("attention.score.weight")->value;
    score.fill(0.0);
    score.at(0, 0) = 1.0;
    score.at(1, 1) = 1.0;
    const auto hand = m.attend(std::vector<double>{1.0, 0.0}, neural::Tensor({2, 2}, std::vector<double>{2, 0, 0, 0}));
    CHECK(hand.weights[0] == Approx(0.8807970779778824).epsilon(1e-12));
    CHECK(hand.weights[1] == Approx(0.11920292202211755).epsilon(1e-12));
    CHECK(hand.context[0] == Approx(2.0 * 0.8807970779778824).epsilon(1e-12));

    Seq2SeqModel plain(tiny_config(Arrangement::kNmt, 4, 2, 2, 1));
    CHECK_THROWS_AS(plain.attend(query, neural::Tensor({1, 2})), InvalidState);
}

TEST_CASE("attention rows are distributions", "[predictor][nmt]")
{
    auto c = tiny_config(Arrangement::kNmt, 9, 4, 6, 2);
    c.attention = true;
    c.bidirectional = true;
    Seq2SeqModel m(c);
    m.initialize(5);
    randomize(m, 6, 1.0);
    std::vector<std::vector<double>> weights;
    const std::vector<int> ids{1, 2, 3, 9, 0, 4, 4};
    const auto out = m.predict_with_attention(ids, 5, weights);
    REQUIRE(weights.size() == 5);
    for (const auto &row : weights)
    {
        REQUIRE(row.size() == ids.size());
        double sum = 0.0;
        for (double w : row)
        {
            CHECK(w >= 0.0);
            sum += w;
        }
        CHECK(std::abs(sum - 1.0) < 1e-6);
    }
    CHECK(out == predict(m, ids, 5));
}

TEST_CASE("causality", "[predictor]")
{
    const WindowExample base{{1, 2, 3, 4}, {5, 1, 2}, {}};
    for (auto arrangement : {Arrangement::kNlg, Arrangement::kNmt})
    {
        auto c = tiny_config(arrangement, 6, 3, 5, 2);
        if (arrangement == Arrangement::kNmt)
        {
            c.attention = true;
            c.bidirectional = true;
        }
        auto m = make_model(c);
        randomize(*m, 12);
        const auto ref = m->target_logits(base);
        for (std::size_t j = 0; j < base.target.size(); ++j)
        {
            auto changed = base;
            for (std::size_t k = j; k < changed.target.size(); ++k)
                changed.target[k] = (changed.target[k] + 3) % 7;
            const auto got = m->target_logits(changed);
            // Position k scores target[k] from tokens before it.
            for (std::size_t k = 0; k <= j; ++k)
                CHECK(got[k] == ref[k]);
        }
    }
}

TEST_CASE("training basics", "[predictor][train]")
{
    SECTION("zero epochs leave the model unchanged")
    {
        NlgModel m(tiny_config(Arrangement::kNlg, 4, 3, 4));
        m.initialize(1);
        const auto before = snapshot(m);
        const auto data = windows(periodic_sequence(50, 3, 5, 1), 4, 2, 1, 0x1234);
        TrainOptions o;
        o.epochs = 0;
        const auto r = train(m, data, o);
        CHECK(r.steps == 0);
        CHECK(snapshot(m) == before);
    }
    SECTION("hash mismatch")
    {
        NlgModel m(tiny_config(Arrangement::kNlg, 4, 3, 4));
        const auto data = windows(periodic_sequence(50, 3, 5, 1), 4, 2, 1, 0x9999);
        CHECK_THROWS_AS(train(m, data, TrainOptions{}), VocabularyMismatch);
    }
    SECTION("one repeated token")
    {
        NlgModel m(tiny_config(Arrangement::kNlg, 4, 4, 8));
        m.initialize(2);
        const auto data = windows(std::vector<int>(200, 3), 5, 3, 1, 0x1234);
        TrainOptions o;
        o.epochs = 20;
        o.batch_size = 16;
        o.learning_rate = 1e-2;
        o.anneal = false;
        const auto r = train(m, data, o);
        CHECK(r.final_loss() < 0.01);
    }
    SECTION("deterministic trajectories")
    {
        const auto data = windows(periodic_sequence(300, 5, 7, 3), 6, 3, 1, 0x1234);
        auto c = tiny_config(Arrangement::kNmt, 6, 4, 8, 2);
        c.attention = true;
        TrainOptions o;
        o.epochs = 1;
        o.batch_size = 8;
        o.seed = 5;
        Seq2SeqModel a(c), b(c);
        a.initialize(9);
        b.initialize(9);
        const auto ra = train(a, data, o);
        const auto rb = train(b, data, o);
        CHECK(ra.epoch_loss == rb.epoch_loss);
        CHECK(snapshot(a) == snapshot(b));
        for (const auto &t : snapshot(a))
            for (double v : t.values())
                CHECK(static_cast<double>(static_cast<float>(v)) == v);
    }
    SECTION("non-finite loss aborts")
    {
        NlgModel m(tiny_config(Arrangement::kNlg, 4, 3, 4));
        m.initialize(1);
        m.parameters().find("output.bias")->value[0] = std::numeric_limits<double>::infinity();
        const auto data = windows(periodic_sequence(50, 3, 5, 1), 4, 2, 1, 0x1234);
        CHECK_THROWS_AS(train(m, data, TrainOptions{}), NumericalError);
    }
}

TEST_CASE("nlg learns a periodic sequence", "[predictor][train][slow]")
{
    const int period = 7, M = 14, N = 7, tokens = 12;
    const auto seq = periodic_sequence(2000, period, tokens, 21);
    const auto train_data = windows({seq.begin(), seq.begin() + 1500}, M, N, 1, 0x1234);
    const auto test_data = windows({seq.begin() + 1500, seq.end()}, M, N, 3, 0x1234);
    NlgModel m(tiny_config(Arrangement::kNlg, tokens - 1, 8, 32, 1));
    m.initialize(4);
    TrainOptions o;
    o.epochs = 3;
    o.batch_size = 16;
    o.learning_rate = 5e-3;
    train(m, train_data, o);
    const auto metrics = evaluate(m, test_data);
    INFO("held-out loss " << metrics.loss);
    CHECK(metrics.accuracy > 0.99);
}

TEST_CASE("nmt learns the copy task", "[predictor][train][slow]")
{
    const auto train_data = copy_task_dataset(500, 5, 3, 9, 1, 0x1234);
    const auto test_data = copy_task_dataset(200, 5, 3, 9, 2, 0x1234);
    auto c = tiny_config(Arrangement::kNmt, 8, 8, 32, 1);
    c.attention = true;
    Seq2SeqModel m(c);
    m.initialize(3);
    TrainOptions o;
    o.epochs = 40;
    o.batch_size = 16;
    o.learning_rate = 1e-2;
    o.anneal = false;
    train(m, train_data, o);
    const auto metrics = evaluate(m, test_data);
    INFO("held-out loss " << metrics.loss);
    CHECK(metrics.accuracy > 0.95);
}

TEST_CASE("greedy prediction", "[predictor][predict]")
{
    auto c = tiny_config(Arrangement::kNmt, 7, 4, 12, 1);
    c.attention = true;
    Seq2SeqModel m(c);
    m.initialize(6);
    const std::vector<int> in{2, 7, 1, 1, 3};

    CHECK(predict(m, in, 0).empty());
    CHECK(predict(m, in, 6) == predict(m, in, 6));
    const auto ten = predict(m, in, 10);
    const auto one = predict(m, in, 1);
    CHECK(one.front() == ten.front());
    CHECK(std::vector<int>(ten.begin(), ten.begin() + 4) == predict(m, in, 4));

    // Overfit one pair, then recall it.
    WindowedDataset single;
    single.vocabulary_hash = c.vocabulary_hash;
    single.examples.push_back({in, {6, 0, 4}, {}});
    TrainOptions o;
    o.epochs = 200;
    o.batch_size = 1;
    o.learning_rate = 1e-2;
    o.anneal = false;
    train(m, single, o);
    CHECK(predict(m, in, 3) == std::vector<int>{6, 0, 4});

    NlgModel nlg(tiny_config(Arrangement::kNlg, 7, 4, 12, 1));
    nlg.initialize(2);
    const auto nten = predict(nlg, in, 10);
    CHECK(predict(nlg, in, 1).front() == nten.front());
    train(nlg, single, o);
    CHECK(predict(nlg, in, 3) == std::vector<int>{6, 0, 4});
}

TEST_CASE("predict_series", "[predictor][predict]")
{
    ChangeSeries q;
    q.quant_step = 0.01;
    q.changes = {{0.01, 0}, {0, 0.01}, {0.01, 0}};
    const auto vocab = build_vocabulary(q, 10, 1);
    auto c = tiny_config(Arrangement::kNmt, vocab.size(), 3, 4, 1);
    c.vocabulary_hash = vocab.hash();
    Seq2SeqModel m(c);
    zero_all(m);
    m.parameters().find("output.bias")->value[0] = 10.0; // always unk

    ChannelSeries history;
    history.samples.assign(12, Complex(0.3, -0.2));
    PredictionTask task{.M = 5, .N = 4};
    const auto out = predict_series(m, vocab, history, task);
    REQUIRE(out.size() == 4);
    for (auto z : out.samples)
        CHECK(z == Complex(0.3, -0.2));
    CHECK(out.sample_interval_s == history.sample_interval_s);

    // Always the id-1 change: a ramp from the last history sample.
    m.parameters().find("output.bias")->value[0] = 0.0;
    m.parameters().find("output.bias")->value[1] = 10.0;
    const auto ramp = predict_series(m, vocab, history, task);
    for (std::size_t k = 0; k < ramp.size(); ++k)
        CHECK(std::abs(ramp.samples[k] - (Complex(0.3, -0.2) + static_cast<double>(k + 1) * vocab.change_of(1))) < 1e-12);

    ChannelSeries short_history;
    short_history.samples.assign(5, Complex(0, 0));
    CHECK_THROWS_AS(predict_series(m, vocab, short_history, task), InvalidArgument);

    const auto other = build_vocabulary(q, 1, 1);
    CHECK_THROWS_AS(predict_series(m, other, history, task), VocabularyMismatch);
}

TEST_CASE("decimation and interpolation", "[predictor][transfer]")
{
    ChannelSeries s;
    for (int k = 0; k < 10; ++k)
        s.samples.emplace_back(k, -k);
    const auto d = decimate(s, 3);
    CHECK(d.samples == std::vector<Complex>{{0, 0}, {3, -3}, {6, -6}, {9, -9}});
    CHECK(d.sample_interval_s == Approx(3e-3));
    CHECK(decimate(s, 1) == s);

    ChannelSeries coarse;
    coarse.sample_interval_s = 2e-3;
    coarse.samples = {{2.0, 4.0}};
    const auto mid = interpolate_linear(Complex(0.0, 0.0), coarse, 2);
    CHECK(mid.samples == std::vector<Complex>{{1.0, 2.0}, {2.0, 4.0}});
    CHECK(mid.sample_interval_s == Approx(1e-3));
}

TEST_CASE("transfer_predict", "[predictor][transfer]")
{
    auto history = rotating(30 * 14 + 1, 2.0, 1e-3);
    ChangeSeries q = quantize(compute_changes(decimate(history, 30)), 0.01);
    const auto vocab = build_vocabulary(q, 50, 1);
    auto c = tiny_config(Arrangement::kNmt, vocab.size(), 4, 8, 1);
    c.vocabulary_hash = vocab.hash();
    c.attention = true;
    Seq2SeqModel m(c);
    m.initialize(1);

    PredictionTask task{.M = 14, .N = 14, .S = 30};
    const auto out = transfer_predict(m, vocab, history, task);
    CHECK(out.size() == 14u * 30u);
    CHECK(out.sample_interval_s == history.sample_interval_s);

    // The coarse predictions sit on every S-th output sample.
    auto coarse_task = task;
    coarse_task.S = 1;
    const auto coarse = predict_series(m, vocab, decimate(history, 30), coarse_task);
    for (std::size_t k = 0; k < coarse.size(); ++k)
        CHECK(out.samples[(k + 1) * 30 - 1] == coarse.samples[k]);

    const auto s1 = transfer_predict(m, vocab, history, coarse_task);
    const auto direct = predict_series(m, vocab, history, coarse_task);
    CHECK(s1 == direct);

    history.samples.resize(30 * 14);
    CHECK_THROWS_AS(transfer_predict(m, vocab, history, task), InvalidArgument);
}

TEST_CASE("model checkpoints", "[predictor][checkpoint]")
{
    ChangeSeries q;
    q.quant_step = 0.01;
    q.changes = {{0.01, 0}, {0, 0.01}, {0.01, 0}, {0.02, 0.0}};
    const auto vocab = build_vocabulary(q, 10, 1);
    for (auto arrangement : {Arrangement::kNlg, Arrangement::kNmt})
    {
        auto c = tiny_config(arrangement, vocab.size(), 3, 5, 2);
        c.vocabulary_hash = vocab.hash();
        c.cell = neural::CellKind::kLstm;
        if (arrangement == Arrangement::kNmt)
        {
            c.bidirectional = true;
            c.attention = true;
            c.decoder_seed = DecoderSeed::kLastInput;
        }
        auto m = make_model(c);
        m->initialize(17);
        const auto data = windows(periodic_sequence(60, 4, vocab.token_count(), 2), 4, 2, 1, vocab.hash());
        TrainOptions o;
        o.epochs = 1;
        o.batch_size = 4;
        train(*m, data, o);

        const auto path = temp_path("ckpt_" + to_string(arrangement));
        save_model(*m, path);
        const auto loaded = load_model(path, vocab);
        CHECK(loaded->config() == m->config());
        for (const auto &ex : data.examples)
            CHECK(loaded->target_logits(ex) == m->target_logits(ex));
        CHECK(neural::serialize_checkpoint(to_checkpoint(*loaded)) == io::read_file(path));

        const auto other = build_vocabulary(q, 2, 1);
        try
        {
            load_model(path, other);
            FAIL("expected a vocabulary mismatch");
        }
        catch (const Error &e)
        {
            CHECK(e.kind() == "vocabulary-mismatch");
        }

        // Fine-tuning keeps the vocabulary and starts from the loaded weights.
        const auto before = snapshot(*loaded);
        o.epochs = 0;
        fine_tune(*loaded, data, o);
        CHECK(snapshot(*loaded) == before);
        o.epochs = 1;
        fine_tune(*loaded, data, o);
        CHECK(loaded->config().vocabulary_hash == vocab.hash());
        auto foreign = data;
        foreign.vocabulary_hash ^= 1;
        CHECK_THROWS_AS(fine_tune(*loaded, foreign, o), VocabularyMismatch);
        std::filesystem::remove(path);
    }
}

TEST_CASE("nmt beats hold-last-sample on a rotating channel", "[predictor][slow]")
{
    const auto series = rotating(6000, 10.0, 1e-3);
    const auto q = quantize(compute_changes(series), 0.01);
    const auto vocab = build_vocabulary(q, 256, 1);
    ChannelSeries train_part, test_part;
    train_part.samples.assign(series.samples.begin(), series.samples.begin() + 5000);
    test_part.samples.assign(series.samples.begin() + 5000, series.samples.end());
    const PredictionTask task{.M = 30, .N = 10, .stride = 2};
    const auto data = make_dataset(encode(train_part, vocab), vocab, task);

    auto c = tiny_config(Arrangement::kNmt, vocab.size(), 8, 32, 1);
    c.vocabulary_hash = vocab.hash();
    c.attention = true;
    Seq2SeqModel m(c);
    m.initialize(2);
    TrainOptions o;
    o.epochs = 2;
    o.learning_rate = 5e-3;
    train(m, data, o);

    double err_model = 0.0, err_zoh = 0.0, pow_model = 0.0, pow_zoh = 0.0;
    for (std::size_t start = 0; start + 41 <= test_part.size(); start += 10)
    {
        ChannelSeries history;
        history.samples.assign(test_part.samples.begin() + static_cast<std::ptrdiff_t>(start),
                               test_part.samples.begin() + static_cast<std::ptrdiff_t>(start + 31));
        const auto pred = predict_series(m, vocab, history, task);
        for (std::size_t k = 0; k < 10; ++k)
        {
            const Complex truth = test_part.samples[start + 31 + k];
            err_model += std::norm(truth - pred.samples[k]);
            pow_model += std::norm(pred.samples[k]);
            err_zoh += std::norm(truth - history.samples.back());
            pow_zoh += std::norm(history.samples.back());
        }
    }
    const double nmse_model = err_model / pow_model;
    const double nmse_zoh = err_zoh / pow_zoh;
    INFO("model " << nmse_model << " zoh " << nmse_zoh);
    CHECK(nmse_model < nmse_zoh);
}
