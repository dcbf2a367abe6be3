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

#include "chanlingo/neural/layers.hpp"

#include "chanlingo/error.hpp"

#include <algorithm>
#include <cmath>

namespace chanlingo::neural
{

namespace
{

void fill_uniform(Tensor &t, CounterRng &rng, double bound)
{
    for (auto &v : t.values())
        v = rng.uniform(-bound, bound);
    t.round_to_float();
}

int gate_count(CellKind kind)
{
    return kind == CellKind::kGru ? 3 : 4;
}

Tensor row_tensor(std::span<const double> v)
{
    return Tensor({1, v.size()}, std::vector<double>(v.begin(), v.end()));
}

std::vector<double> row_values(const Tensor &t)
{
    return std::vector<double>(t.values().begin(), t.values().end());
}

} // namespace

std::string to_string(CellKind kind)
{
    return kind == CellKind::kGru ? "gru" : "lstm";
}

CellKind parse_cell_kind(const std::string &s)
{
    if (s == "gru")
        return CellKind::kGru;
    if (s == "lstm")
        return CellKind::kLstm;
    throw InvalidArgument("unknown cell kind '" + s + "' (expected gru or lstm)");
}

// ---- EmbeddingTable -----------------------------------------------------

EmbeddingTable::EmbeddingTable(ParameterSet &params, const std::string &name, int vocab_size, int dim)
    : vocab_size_(vocab_size), dim_(dim)
{
    if (vocab_size < 1 || dim < 1)
        throw InvalidArgument("embedding needs vocab_size >= 1 and dim >= 1");
    weights_ = &params.add(name, {static_cast<std::size_t>(vocab_size), static_cast<std::size_t>(dim)});
}

void EmbeddingTable::initialize(CounterRng &rng)
{
    fill_uniform(weights_->value, rng, 0.1);
}

Var EmbeddingTable::embed(Graph &g, std::span<const int> ids) const
{
    return gather_rows(g, g.parameter(*weights_), ids);
}

Tensor embed(const EmbeddingTable &table, std::span<const int> ids)
{
    const Tensor &w = table.weights().value;
    Tensor out({ids.size(), w.dim(1)});
    for (std::size_t r = 0; r < ids.size(); ++r)
    {
        if (ids[r] < 0 || ids[r] >= table.vocab_size())
            throw InvalidArgument("embedding id " + std::to_string(ids[r]) + " out of range");
        const auto src = w.row(static_cast<std::size_t>(ids[r]));
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

// ---- Linear -------------------------------------------------------------

Linear::Linear(ParameterSet &params, const std::string &name, int in_dim, int out_dim, bool with_bias)
    : in_dim_(in_dim), out_dim_(out_dim)
{
    if (in_dim < 1 || out_dim < 1)
        throw InvalidArgument("linear layer dimensions must be >= 1");
    weight_ = &params.add(name + ".weight", {static_cast<std::size_t>(in_dim), static_cast<std::size_t>(out_dim)});
    if (with_bias)
        bias_ = &params.add(name + ".bias", {static_cast<std::size_t>(out_dim)});
}

void Linear::initialize(CounterRng &rng, double bound)
{
    if (bound <= 0.0)
        bound = 1.0 / std::sqrt(static_cast<double>(in_dim_));
    fill_uniform(weight_->value, rng, bound);
    if (bias_)
        bias_->value.fill(0.0);
}

Var Linear::forward(Graph &g, Var x) const
{
    return linear(g, x, g.parameter(*weight_), bias_ ? g.parameter(*bias_) : Var{});
}

// ---- RecurrentStack -----------------------------------------------------

RecurrentStack::RecurrentStack(ParameterSet &params, const std::string &prefix, CellKind kind,
                               int num_layers, int input_size, int hidden_size)
    : kind_(kind), input_size_(input_size), hidden_size_(hidden_size)
{
    if (num_layers < 1 || hidden_size < 1 || input_size < 1)
        throw InvalidArgument("recurrent stack needs layers, input and hidden sizes >= 1");
    const int g = gate_count(kind);
    for (int l = 0; l < num_layers; ++l)
    {
        const std::string base = prefix + ".l" + std::to_string(l);
        const int in = l == 0 ? input_size : hidden_size;
        layers_.push_back({Linear(params, base + ".input", in, g * hidden_size),
                           Linear(params, base + ".recurrent", hidden_size, g * hidden_size)});
    }
}

void RecurrentStack::initialize(CounterRng &rng)
{
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_size_));
    for (auto &layer : layers_)
    {
        for (Linear *lin : {&layer.input, &layer.recurrent})
        {
            for (auto &v : lin->weight().value.values())
                v = rng.uniform(-bound, bound);
            lin->weight().value.round_to_float();
            lin->bias()->value.fill(0.0);
        }
        if (kind_ == CellKind::kLstm)
        {
            auto &b = layer.input.bias()->value;
            for (int j = 0; j < hidden_size_; ++j)
                b[static_cast<std::size_t>(hidden_size_ + j)] = 1.0;
        }
    }
}

StackState RecurrentStack::zero_state(Graph &g, std::size_t batch) const
{
    StackState s(layers_.size());
    const std::vector<std::size_t> shape{batch, static_cast<std::size_t>(hidden_size_)};
    for (auto &ls : s)
    {
        ls.h = g.constant(Tensor(shape));
        if (kind_ == CellKind::kLstm)
            ls.c = g.constant(Tensor(shape));
    }
    return s;
}

StackState RecurrentStack::step(Graph &g, Var input, const StackState &state) const
{
    if (state.size() != layers_.size())
        throw InvalidArgument("recurrent state has wrong layer count");
    if (g.value(input).cols() != static_cast<std::size_t>(input_size_))
        throw InvalidArgument("recurrent input width " + std::to_string(g.value(input).cols()) +
                              " != " + std::to_string(input_size_));
    StackState next(layers_.size());
    Var x = input;
    const auto hs = static_cast<std::size_t>(hidden_size_);
    for (std::size_t l = 0; l < layers_.size(); ++l)
    {
        const Var gx = layers_[l].input.forward(g, x);
        const Var gh = layers_[l].recurrent.forward(g, state[l].h);
        if (kind_ == CellKind::kGru)
        {
            next[l].h = gru_cell(g, gx, gh, state[l].h);
        }
        else
        {
            const Var both = lstm_cell(g, add(g, gx, gh), state[l].c);
            next[l].h = slice_cols(g, both, 0, hs);
            next[l].c = slice_cols(g, both, hs, hs);
        }
        x = next[l].h;
    }
    return next;
}

CellState zero_cell_state(const RecurrentStack &stack)
{
    CellState s;
    const auto hs = static_cast<std::size_t>(stack.hidden_size());
    s.h.assign(static_cast<std::size_t>(stack.num_layers()), std::vector<double>(hs, 0.0));
    if (stack.kind() == CellKind::kLstm)
        s.c = s.h;
    return s;
}

std::pair<std::vector<double>, CellState> cell_forward(const RecurrentStack &stack,
                                                       std::span<const double> input,
                                                       const CellState &state)
{
    const auto layers = static_cast<std::size_t>(stack.num_layers());
    if (state.h.size() != layers || (stack.kind() == CellKind::kLstm && state.c.size() != layers))
        throw InvalidArgument("cell state does not match the stack");
    Graph g;
    StackState s(layers);
    for (std::size_t l = 0; l < layers; ++l)
    {
        if (state.h[l].size() != static_cast<std::size_t>(stack.hidden_size()))
            throw InvalidArgument("cell state width mismatch");
        s[l].h = g.constant(row_tensor(state.h[l]));
        if (stack.kind() == CellKind::kLstm)
            s[l].c = g.constant(row_tensor(state.c[l]));
    }
    const auto next = stack.step(g, g.constant(row_tensor(input)), s);
    CellState out;
    for (std::size_t l = 0; l < layers; ++l)
    {
        out.h.push_back(row_values(g.value(next[l].h)));
        if (stack.kind() == CellKind::kLstm)
            out.c.push_back(row_values(g.value(next[l].c)));
    }
    return {out.h.back(), std::move(out)};
}

std::vector<double> project_logits(const Linear &projection, std::span<const double> hidden)
{
    if (hidden.size() != static_cast<std::size_t>(projection.in_dim()))
        throw InvalidArgument("projection input width mismatch");
    Graph g;
    const Var y = projection.forward(g, g.constant(row_tensor(hidden)));
    return row_values(g.value(y));
}

std::vector<double> softmax(std::span<const double> logits)
{
    std::vector<double> p(logits.begin(), logits.end());
    if (p.empty())
        return p;
    const double mx = *std::max_element(p.begin(), p.end());
    double z = 0.0;
    for (auto &v : p)
    {
        v = std::exp(v - mx);
        z += v;
    }
    for (auto &v : p)
        v /= z;
    return p;
}

XentResult softmax_xent(std::span<const double> logits, int target)
{
    if (target < 0 || static_cast<std::size_t>(target) >= logits.size())
        throw InvalidArgument("target id outside the logit range");
    const double mx = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double v : logits)
        z += std::exp(v - mx);
    XentResult r;
    r.loss = -(logits[static_cast<std::size_t>(target)] - mx - std::log(z));
    r.grad_logits = softmax(logits);
    r.grad_logits[static_cast<std::size_t>(target)] -= 1.0;
    return r;
}

} // namespace chanlingo::neural
