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

#include "chanlingo/neural/graph.hpp"
#include "chanlingo/rng.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chanlingo::neural
{

enum class CellKind
{
    kGru,
    kLstm,
};

std::string to_string(CellKind kind);
CellKind parse_cell_kind(const std::string &s);

/// Row 0 is reserved for the unknown token.
class EmbeddingTable
{
public:
    EmbeddingTable() = default;
    EmbeddingTable(ParameterSet &params, const std::string &name, int vocab_size, int dim);

    void initialize(CounterRng &rng);
    Var embed(Graph &g, std::span<const int> ids) const;

    int vocab_size() const { return vocab_size_; }
    int dim() const { return dim_; }
    Parameter &weights() const { return *weights_; }

private:
    Parameter *weights_ = nullptr;
    int vocab_size_ = 0;
    int dim_ = 0;
};

// Row gather without a graph: [len(ids), e].
Tensor embed(const EmbeddingTable &table, std::span<const int> ids);

class Linear
{
public:
    Linear() = default;
    Linear(ParameterSet &params, const std::string &name, int in_dim, int out_dim, bool with_bias = true);

    // Weights ~ U(-bound, bound) with bound = 1/sqrt(in_dim) unless given;
    // bias zero.
    void initialize(CounterRng &rng, double bound = 0.0);
    Var forward(Graph &g, Var x) const;

    int in_dim() const { return in_dim_; }
    int out_dim() const { return out_dim_; }
    Parameter &weight() const { return *weight_; }
    Parameter *bias() const { return bias_; }

private:
    Parameter *weight_ = nullptr;
    Parameter *bias_ = nullptr;
    int in_dim_ = 0;
    int out_dim_ = 0;
};

struct LayerState
{
    Var h;
    Var c; // LSTM only
};

using StackState = std::vector<LayerState>;

/// Stacked GRU- or LSTM-style layers. Layer 0 reads the step input, layer i
/// reads layer i-1's output; the stack output is the top layer's h.
class RecurrentStack
{
public:
    RecurrentStack() = default;
    RecurrentStack(ParameterSet &params, const std::string &prefix, CellKind kind, int num_layers,
                   int input_size, int hidden_size);

    // Recurrent weights ~ U(-1/sqrt(H), 1/sqrt(H)); biases 0 except the LSTM
    // forget gate (+1).
    void initialize(CounterRng &rng);

    StackState zero_state(Graph &g, std::size_t batch) const;
    StackState step(Graph &g, Var input, const StackState &state) const;

    CellKind kind() const { return kind_; }
    int num_layers() const { return static_cast<int>(layers_.size()); }
    int input_size() const { return input_size_; }
    int hidden_size() const { return hidden_size_; }

private:
    struct Layer
    {
        Linear input;     // [in, G*H] with bias
        Linear recurrent; // [H, G*H] with bias
    };

    CellKind kind_ = CellKind::kGru;
    int input_size_ = 0;
    int hidden_size_ = 0;
    std::vector<Layer> layers_;
};

/// Plain-value recurrent state for one sequence (no batch dimension).
struct CellState
{
    std::vector<std::vector<double>> h;
    std::vector<std::vector<double>> c;
};

CellState zero_cell_state(const RecurrentStack &stack);

// One time step of `stack` on a single input vector. Returns the top layer
// output and the updated state.
std::pair<std::vector<double>, CellState> cell_forward(const RecurrentStack &stack,
                                                       std::span<const double> input,
                                                       const CellState &state);

// Affine output projection hidden -> logits over X+1 tokens, without softmax.
std::vector<double> project_logits(const Linear &projection, std::span<const double> hidden);

struct XentResult
{
    double loss = 0.0;
    std::vector<double> grad_logits;
};

// -log softmax(logits)[target] with max subtraction, and its gradient
// softmax(logits) - onehot(target).
XentResult softmax_xent(std::span<const double> logits, int target);

std::vector<double> softmax(std::span<const double> logits);

} // namespace chanlingo::neural
