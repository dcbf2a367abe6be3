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

#include "chanlingo/neural/adam.hpp"

#include "chanlingo/error.hpp"

#include <cmath>

namespace chanlingo::neural
{

double annealed_learning_rate(double base_lr, std::int64_t step, std::int64_t steps_per_epoch)
{
    if (steps_per_epoch <= 0 || step < steps_per_epoch)
        return base_lr;
    const std::int64_t half = std::max<std::int64_t>(1, steps_per_epoch / 2);
    const std::int64_t k = (step - steps_per_epoch) / half + 1;
    return std::ldexp(base_lr, static_cast<int>(-std::min<std::int64_t>(k, 1000)));
}

double gradient_norm(const ParameterSet &params)
{
    double acc = 0.0;
    for (const Parameter *p : params.all())
        acc += p->grad.squared_norm();
    return std::sqrt(acc);
}

double clip_gradients(ParameterSet &params, double clip_norm)
{
    const double norm = gradient_norm(params);
    if (clip_norm > 0.0 && norm > clip_norm)
    {
        const double s = clip_norm / norm;
        for (Parameter *p : params.all())
            for (auto &g : p->grad.values())
                g *= s;
    }
    return norm;
}

Adam::Adam(AdamConfig config) : config_(config)
{
    if (!(config_.learning_rate >= 0.0) || !(config_.beta1 >= 0.0 && config_.beta1 < 1.0) ||
        !(config_.beta2 >= 0.0 && config_.beta2 < 1.0) || !(config_.epsilon > 0.0))
        throw InvalidArgument("invalid Adam hyperparameters");
}

double Adam::step(ParameterSet &params, double lr)
{
    const double norm = clip_gradients(params, config_.clip_norm);
    if (!std::isfinite(norm))
        throw NumericalError("non-finite gradient norm");
    ++step_count_;
    const double t = static_cast<double>(step_count_);
    const double c1 = 1.0 - std::pow(config_.beta1, t);
    const double c2 = 1.0 - std::pow(config_.beta2, t);
    for (Parameter *p : params.all())
    {
        auto [it, fresh] = moments_.try_emplace(p->name);
        Moments &mo = it->second;
        if (fresh || mo.m.shape() != p->value.shape())
        {
            mo.m = Tensor(p->value.shape());
            mo.v = Tensor(p->value.shape());
        }
        if (p->grad.empty())
            continue;
        for (std::size_t i = 0; i < p->value.size(); ++i)
        {
            const double g = p->grad[i];
            mo.m[i] = config_.beta1 * mo.m[i] + (1.0 - config_.beta1) * g;
            mo.v[i] = config_.beta2 * mo.v[i] + (1.0 - config_.beta2) * g * g;
            const double mhat = mo.m[i] / c1;
            const double vhat = mo.v[i] / c2;
            p->value[i] -= lr * mhat / (std::sqrt(vhat) + config_.epsilon);
        }
        p->value.round_to_float();
    }
    return norm;
}

const Tensor *Adam::first_moment(const std::string &name) const
{
    const auto it = moments_.find(name);
    return it == moments_.end() ? nullptr : &it->second.m;
}

const Tensor *Adam::second_moment(const std::string &name) const
{
    const auto it = moments_.find(name);
    return it == moments_.end() ? nullptr : &it->second.v;
}

} // namespace chanlingo::neural
