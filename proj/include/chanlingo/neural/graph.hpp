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

#include "chanlingo/neural/tensor.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace chanlingo::neural
{

struct Parameter
{
    std::string name;
    Tensor value;
    Tensor grad;
};

/// Owns named parameters. Addresses stay stable for the set's lifetime, so
/// layers may hold plain pointers into it.
class ParameterSet
{
public:
    ParameterSet() = default;
    ParameterSet(const ParameterSet &) = delete;
    ParameterSet &operator=(const ParameterSet &) = delete;
    ParameterSet(ParameterSet &&) = default;
    ParameterSet &operator=(ParameterSet &&) = default;

    Parameter &add(std::string name, std::vector<std::size_t> shape);
    Parameter *find(const std::string &name);
    const Parameter *find(const std::string &name) const;

    // Insertion order.
    std::vector<Parameter *> all();
    std::vector<const Parameter *> all() const;

    void zero_grad();
    std::size_t scalar_count() const;

private:
    std::vector<std::unique_ptr<Parameter>> params_;
    std::unordered_map<std::string, Parameter *> by_name_;
};

struct Var
{
    int index = -1;

    bool valid() const { return index >= 0; }
};

/// Tape for reverse-mode differentiation. Every op appends a node holding its
/// value and a closure that pushes the node's gradient to its inputs;
/// backward() replays the tape in reverse.
class Graph
{
public:
    using Backward = std::function<void(Graph &, int self)>;

    // An inference graph treats parameters as constants, so no backward
    // closures are recorded.
    explicit Graph(bool record_gradients = true) : record_(record_gradients) {}

    // Leaf bound to a parameter. Repeated calls return the same node, so
    // weights shared across time steps accumulate one gradient.
    Var parameter(Parameter &p);
    Var constant(Tensor value);

    const Tensor &value(Var v) const { return nodes_[static_cast<std::size_t>(v.index)].value; }
    const Tensor &aux(Var v) const { return nodes_[static_cast<std::size_t>(v.index)].aux; }
    bool needs_grad(Var v) const { return nodes_[static_cast<std::size_t>(v.index)].needs_grad; }

    // Gradient buffer of a node, zero-initialised on first use.
    Tensor &grad(int index);
    Tensor &grad(Var v) { return grad(v.index); }
    bool has_grad(int index) const { return !nodes_[static_cast<std::size_t>(index)].grad.empty(); }
    const Tensor &value(int index) const { return nodes_[static_cast<std::size_t>(index)].value; }
    const Tensor &aux(int index) const { return nodes_[static_cast<std::size_t>(index)].aux; }
    bool needs_grad(int index) const { return nodes_[static_cast<std::size_t>(index)].needs_grad; }

    Var push(Tensor value, bool needs_grad, Backward backward, Tensor aux = {});

    // Seeds d(loss)/d(loss) = seed, runs the tape backwards and adds the
    // results into Parameter::grad.
    void backward(Var loss, double seed = 1.0);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node
    {
        Tensor value;
        Tensor grad;
        Tensor aux;
        Backward backward;
        Parameter *param = nullptr;
        bool needs_grad = false;
    };

    std::vector<Node> nodes_;
    bool record_ = true;
    std::unordered_map<const Parameter *, int> param_nodes_;
};

// ---- Ops ----------------------------------------------------------------
// Shapes: B = batch rows. Weight matrices are stored [in, out].

// x [B, K] * w [K, N] (+ bias [N]).
Var linear(Graph &g, Var x, Var w, Var bias = {});
Var add(Graph &g, Var a, Var b);
Var mul(Graph &g, Var a, Var b);
Var scale(Graph &g, Var x, double s);
Var tanh(Graph &g, Var x);
Var sigmoid(Graph &g, Var x);
Var concat_cols(Graph &g, std::span<const Var> parts);
Var slice_cols(Graph &g, Var x, std::size_t start, std::size_t width);

// Rows of `table` [V, E] selected by ids -> [B, E].
Var gather_rows(Graph &g, Var table, std::span<const int> ids);

// T tensors of [B, D] -> [B, T, D].
Var stack_steps(Graph &g, std::span<const Var> steps);

// GRU update from precomputed input/recurrent projections gx, gh [B, 3H]
// (gate blocks r, z, n) and previous state h [B, H].
Var gru_cell(Graph &g, Var gx, Var gh, Var h);

// LSTM update from summed gate pre-activations [B, 4H] (blocks i, f, g, o)
// and previous cell c [B, H]. Output is [B, 2H] = [h' | c'].
Var lstm_cell(Graph &g, Var gates, Var c);

// Dot-product attention of query [B, D] over memory [B, T, D]. Returns the
// context [B, D]; the softmax weights [B, T] are kept in aux().
Var attention(Graph &g, Var query, Var memory);

// Sum over rows of -log softmax(logits)[target] times `scale`; a target < 0
// skips its row. Returns a [1] tensor.
Var softmax_xent(Graph &g, Var logits, std::span<const int> targets, double scale = 1.0);

Var sum_scalars(Graph &g, std::span<const Var> scalars);

} // namespace chanlingo::neural
