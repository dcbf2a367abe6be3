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

#include "chanlingo/neural/tensor.hpp"

#include "chanlingo/error.hpp"

#include <cmath>
#include <functional>
#include <numeric>

namespace chanlingo::neural
{

namespace
{

std::size_t product(const std::vector<std::size_t> &shape)
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

} // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(product(shape_), fill)
{
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data))
{
    if (product(shape_) != data_.size())
        throw InvalidArgument("tensor data length does not match shape " + shape_string(shape_));
}

std::size_t Tensor::rows() const
{
    if (shape_.empty())
        return 1;
    return shape_.size() == 1 ? 1 : shape_[0];
}

std::size_t Tensor::cols() const
{
    if (shape_.empty())
        return 1;
    if (shape_.size() == 1)
        return shape_[0];
    return data_.size() / shape_[0];
}

void Tensor::fill(double v)
{
    std::fill(data_.begin(), data_.end(), v);
}

void Tensor::round_to_float()
{
    for (auto &v : data_)
        v = static_cast<double>(static_cast<float>(v));
}

bool Tensor::all_finite() const
{
    for (double v : data_)
        if (!std::isfinite(v))
            return false;
    return true;
}

double Tensor::squared_norm() const
{
    double acc = 0.0;
    for (double v : data_)
        acc += v * v;
    return acc;
}

std::string shape_string(const std::vector<std::size_t> &shape)
{
    std::string out = "[";
    for (std::size_t i = 0; i < shape.size(); ++i)
    {
        if (i)
            out += ", ";
        out += std::to_string(shape[i]);
    }
    return out + "]";
}

} // namespace chanlingo::neural
