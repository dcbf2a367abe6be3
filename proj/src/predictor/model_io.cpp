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

namespace chanlingo
{

namespace
{

int meta_int(const neural::Checkpoint &ck, const std::string &key)
{
    const auto v = io::parse_int(ck.get(key));
    if (!v || *v < 0 || *v > (1 << 24))
        throw CheckpointMismatch("checkpoint-mismatch", key, "not a valid size: '" + ck.get(key) + "'");
    return static_cast<int>(*v);
}

bool meta_bool(const neural::Checkpoint &ck, const std::string &key)
{
    const std::string &v = ck.get(key);
    if (v != "0" && v != "1")
        throw CheckpointMismatch("checkpoint-mismatch", key, "expected 0 or 1, got '" + v + "'");
    return v == "1";
}

template <typename Fn>
auto meta_enum(const neural::Checkpoint &ck, const std::string &key, Fn parse)
{
    try
    {
        return parse(ck.get(key));
    }
    catch (const InvalidArgument &e)
    {
        throw CheckpointMismatch("checkpoint-mismatch", key, e.what());
    }
}

} // namespace

neural::Checkpoint to_checkpoint(const SequenceModel &model)
{
    const ModelConfig &c = model.config();
    neural::Checkpoint ck;
    ck.metadata = {
        {"arrangement", to_string(c.arrangement)},
        {"cell_kind", neural::to_string(c.cell)},
        {"layers", std::to_string(c.layers)},
        {"hidden", std::to_string(c.hidden)},
        {"e", std::to_string(c.embedding_dim)},
        {"X", std::to_string(c.vocab_size)},
        {"vocabulary_hash", io::hex64(c.vocabulary_hash)},
        {"bidirectional", c.bidirectional ? "1" : "0"},
        {"attention", c.attention ? "1" : "0"},
        {"decoder_seed", to_string(c.decoder_seed)},
    };
    for (const neural::Parameter *p : model.parameters().all())
        ck.tensors.emplace_back(p->name, p->value);
    return ck;
}

std::unique_ptr<SequenceModel> from_checkpoint(const neural::Checkpoint &ck)
{
    ModelConfig c;
    c.arrangement = meta_enum(ck, "arrangement", parse_arrangement);
    c.cell = meta_enum(ck, "cell_kind", neural::parse_cell_kind);
    c.layers = meta_int(ck, "layers");
    c.hidden = meta_int(ck, "hidden");
    c.embedding_dim = meta_int(ck, "e");
    c.vocab_size = meta_int(ck, "X");
    const auto hash = io::parse_hex64(ck.get("vocabulary_hash"));
    if (!hash)
        throw CheckpointMismatch("checkpoint-mismatch", "vocabulary_hash", "not a 64-bit hex digest");
    c.vocabulary_hash = *hash;
    c.bidirectional = meta_bool(ck, "bidirectional");
    c.attention = meta_bool(ck, "attention");
    c.decoder_seed = meta_enum(ck, "decoder_seed", parse_decoder_seed);

    std::unique_ptr<SequenceModel> model;
    try
    {
        model = make_model(c);
    }
    catch (const InvalidArgument &e)
    {
        throw CheckpointMismatch("checkpoint-mismatch", "config", e.what());
    }

    auto params = model->parameters().all();
    if (params.size() != ck.tensors.size())
        throw CheckpointMismatch("checkpoint-mismatch", "tensors",
                                 "checkpoint holds " + std::to_string(ck.tensors.size()) +
                                     " tensors, the configured model has " + std::to_string(params.size()));
    for (neural::Parameter *p : params)
    {
        const neural::Tensor *t = ck.find(p->name);
        if (!t)
            throw CheckpointMismatch("checkpoint-mismatch", p->name, "tensor missing from checkpoint");
        if (t->shape() != p->value.shape())
            throw CheckpointMismatch("checkpoint-mismatch", p->name,
                                     "shape " + neural::shape_string(t->shape()) + ", model expects " +
                                         neural::shape_string(p->value.shape()));
        p->value = *t;
    }
    return model;
}

void save_model(const SequenceModel &model, const std::filesystem::path &path)
{
    neural::save_checkpoint(to_checkpoint(model), path);
}

std::unique_ptr<SequenceModel> load_model(const std::filesystem::path &path)
{
    return from_checkpoint(neural::load_checkpoint(path));
}

std::unique_ptr<SequenceModel> load_model(const std::filesystem::path &path, const Vocabulary &vocab)
{
    const auto ck = neural::load_checkpoint(path);
    ck.require("vocabulary_hash", io::hex64(vocab.hash()));
    ck.require("X", std::to_string(vocab.size()));
    return from_checkpoint(ck);
}

} // namespace chanlingo
