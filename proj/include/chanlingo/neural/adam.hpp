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

#include <cstdint>
#include <string>
#include <unordered_map>

namespace chanlingo::neural
{

struct AdamConfig
{
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double clip_norm = 5.0; // <= 0 disables clipping
};

// Learning rate at optimizer step `step` (0-based): constant through the
// first epoch, then halved at the start of every following half-epoch.
double annealed_learning_rate(double base_lr, std::int64_t step, std::int64_t steps_per_epoch);

// Scales all gradients so their global L2 norm is at most `clip_norm`.
// Returns the norm before clipping.
double clip_gradients(ParameterSet &params, double clip_norm);

double gradient_norm(const ParameterSet &params);

class Adam
{
public:
    explicit Adam(AdamConfig config = {});

    // Clips, then applies one bias-corrected update with learning rate `lr`.
    // Parameters are rounded to float32 afterwards. Returns the pre-clip
    // gradient norm.
    double step(ParameterSet &params, double lr);
    double step(ParameterSet &params) { return step(params, config_.learning_rate); }

    std::int64_t step_count() const { return step_count_; }
    const AdamConfig &config() const { return config_; }

    const Tensor *first_moment(const std::string &name) const;
    const Tensor *second_moment(const std::string &name) const;

private:
    struct Moments
    {
        Tensor m;
        Tensor v;
    };

    AdamConfig config_;
    std::int64_t step_count_ = 0;
    std::unordered_map<std::string, Moments> moments_;
};

} // namespace chanlingo::neural
