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

#include "chanlingo/neural/graph.hpp"

#include "chanlingo/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

namespace chanlingo::neural
{

namespace
{

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

ConstMapMat as_matrix(const Tensor &t)
{
    return ConstMapMat(t.data(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
}

MapMat as_matrix(Tensor &t)
{
    return MapMat(t.data(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
}

void require(bool ok, const std::string &what)
{
    if (!ok)
        throw InvalidArgument(what);
}

void require_same_shape(const Tensor &a, const Tensor &b, const char *op)
{
    require(a.shape() == b.shape(), std::string(op) + ": shape mismatch " + shape_string(a.shape()) +
                                        " vs " + shape_string(b.shape()));
}

double sigmoid_of(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

} // namespace

// ---- ParameterSet -------------------------------------------------------

Parameter &ParameterSet::add(std::string name, std::vector<std::size_t> shape)
{
    if (by_name_.count(name))
        throw InvalidArgument("duplicate parameter name " + name);
    auto p = std::make_unique<Parameter>();
    p->name = std::move(name);
    p->value = Tensor(shape);
    p->grad = Tensor(std::move(shape));
    by_name_.emplace(p->name, p.get());
    params_.push_back(std::move(p));
    return *params_.back();
}

Parameter *ParameterSet::find(const std::string &name)
{
    const auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
}

const Parameter *ParameterSet::find(const std::string &name) const
{
    const auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
}

std::vector<Parameter *> ParameterSet::all()
{
    std::vector<Parameter *> out;
    out.reserve(params_.size());
    for (auto &p : params_)
        out.push_back(p.get());
    return out;
}

std::vector<const Parameter *> ParameterSet::all() const
{
    std::vector<const Parameter *> out;
    out.reserve(params_.size());
    for (const auto &p : params_)
        out.push_back(p.get());
    return out;
}

void ParameterSet::zero_grad()
{
    for (auto &p : params_)
        p->grad.fill(0.0);
}

std::size_t ParameterSet::scalar_count() const
{
    std::size_t n = 0;
    for (const auto &p : params_)
        n += p->value.size();
    return n;
}

// ---- Graph --------------------------------------------------------------

Var Graph::parameter(Parameter &p)
{
    if (const auto it = param_nodes_.find(&p); it != param_nodes_.end())
        return Var{it->second};
    Node n;
    n.value = p.value;
    n.param = &p;
    n.needs_grad = record_;
    nodes_.push_back(std::move(n));
    const int idx = static_cast<int>(nodes_.size()) - 1;
    param_nodes_.emplace(&p, idx);
    return Var{idx};
}

Var Graph::constant(Tensor value)
{
    return push(std::move(value), false, nullptr);
}

Var Graph::push(Tensor value, bool needs_grad, Backward backward, Tensor aux)
{
    Node n;
    n.value = std::move(value);
    n.aux = std::move(aux);
    n.needs_grad = needs_grad;
    if (needs_grad)
        n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Tensor &Graph::grad(int index)
{
    auto &n = nodes_[static_cast<std::size_t>(index)];
    if (n.grad.empty() && !n.value.empty())
        n.grad = Tensor(n.value.shape());
    return n.grad;
}

void Graph::backward(Var loss, double seed)
{
    require(loss.valid() && value(loss).size() == 1, "backward needs a scalar loss");
    if (!needs_grad(loss))
        return;
    grad(loss)[0] += seed;
    for (int i = loss.index; i >= 0; --i)
    {
        auto &n = nodes_[static_cast<std::size_t>(i)];
        if (n.grad.empty())
            continue;
        if (n.backward)
            n.backward(*this, i);
    }
    for (auto &n : nodes_)
    {
        if (!n.param || n.grad.empty())
            continue;
        auto &pg = n.param->grad;
        if (pg.shape() != n.value.shape())
            pg = Tensor(n.value.shape());
        for (std::size_t k = 0; k < pg.size(); ++k)
            pg[k] += n.grad[k];
    }
}

// ---- Ops ----------------------------------------------------------------

Var linear(Graph &g, Var x, Var w, Var bias)
{
    const Tensor &xv = g.value(x);
    const Tensor &wv = g.value(w);
    require(wv.rank() == 2 && xv.cols() == wv.dim(0),
            "linear: input " + shape_string(xv.shape()) + " vs weight " + shape_string(wv.shape()));
    const std::size_t rows = xv.rows();
    const std::size_t out_dim = wv.dim(1);
    Tensor y({rows, out_dim});
    as_matrix(y).noalias() = as_matrix(xv) * as_matrix(wv);
    if (bias.valid())
    {
        const Tensor &bv = g.value(bias);
        require(bv.size() == out_dim, "linear: bias width mismatch");
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < out_dim; ++c)
                y.at(r, c) += bv[c];
    }
    const bool ng = g.needs_grad(x) || g.needs_grad(w) || (bias.valid() && g.needs_grad(bias));
    return g.push(std::move(y), ng, [x, w, bias](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        if (gr.needs_grad(x))
            as_matrix(gr.grad(x)).noalias() += as_matrix(dy) * as_matrix(gr.value(w)).transpose();
        if (gr.needs_grad(w))
            as_matrix(gr.grad(w)).noalias() += as_matrix(gr.value(x)).transpose() * as_matrix(dy);
        if (bias.valid() && gr.needs_grad(bias))
        {
            Tensor &db = gr.grad(bias);
            for (std::size_t r = 0; r < dy.rows(); ++r)
                for (std::size_t c = 0; c < dy.cols(); ++c)
                    db[c] += dy.at(r, c);
        }
    });
}

Var add(Graph &g, Var a, Var b)
{
    require_same_shape(g.value(a), g.value(b), "add");
    Tensor y = g.value(a);
    const Tensor &bv = g.value(b);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += bv[i];
    return g.push(std::move(y), g.needs_grad(a) || g.needs_grad(b), [a, b](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        for (Var in : {a, b})
        {
            if (!gr.needs_grad(in))
                continue;
            Tensor &d = gr.grad(in);
            for (std::size_t i = 0; i < dy.size(); ++i)
                d[i] += dy[i];
        }
    });
}

Var mul(Graph &g, Var a, Var b)
{
    require_same_shape(g.value(a), g.value(b), "mul");
    Tensor y = g.value(a);
    const Tensor &bv = g.value(b);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] *= bv[i];
    return g.push(std::move(y), g.needs_grad(a) || g.needs_grad(b), [a, b](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        if (gr.needs_grad(a))
        {
            Tensor &d = gr.grad(a);
            const Tensor &o = gr.value(b);
            for (std::size_t i = 0; i < dy.size(); ++i)
                d[i] += dy[i] * o[i];
        }
        if (gr.needs_grad(b))
        {
            Tensor &d = gr.grad(b);
            const Tensor &o = gr.value(a);
            for (std::size_t i = 0; i < dy.size(); ++i)
                d[i] += dy[i] * o[i];
        }
    });
}

Var scale(Graph &g, Var x, double s)
{
    Tensor y = g.value(x);
    for (auto &v : y.values())
        v *= s;
    return g.push(std::move(y), g.needs_grad(x), [x, s](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        Tensor &d = gr.grad(x);
        for (std::size_t i = 0; i < dy.size(); ++i)
            d[i] += s * dy[i];
    });
}

Var tanh(Graph &g, Var x)
{
    Tensor y = g.value(x);
    for (auto &v : y.values())
        v = std::tanh(v);
    return g.push(std::move(y), g.needs_grad(x), [x](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        const Tensor &yv = gr.value(self);
        Tensor &d = gr.grad(x);
        for (std::size_t i = 0; i < dy.size(); ++i)
            d[i] += dy[i] * (1.0 - yv[i] * yv[i]);
    });
}

Var sigmoid(Graph &g, Var x)
{
    Tensor y = g.value(x);
    for (auto &v : y.values())
        v = sigmoid_of(v);
    return g.push(std::move(y), g.needs_grad(x), [x](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        const Tensor &yv = gr.value(self);
        Tensor &d = gr.grad(x);
        for (std::size_t i = 0; i < dy.size(); ++i)
            d[i] += dy[i] * yv[i] * (1.0 - yv[i]);
    });
}

Var concat_cols(Graph &g, std::span<const Var> parts)
{
    require(!parts.empty(), "concat_cols: no inputs");
    const std::size_t rows = g.value(parts[0]).rows();
    std::size_t width = 0;
    bool ng = false;
    for (Var p : parts)
    {
        require(g.value(p).rows() == rows, "concat_cols: row mismatch");
        width += g.value(p).cols();
        ng = ng || g.needs_grad(p);
    }
    Tensor y({rows, width});
    std::size_t offset = 0;
    for (Var p : parts)
    {
        const Tensor &pv = g.value(p);
        for (std::size_t r = 0; r < rows; ++r)
            std::copy(pv.row(r).begin(), pv.row(r).end(), y.row(r).begin() + static_cast<std::ptrdiff_t>(offset));
        offset += pv.cols();
    }
    std::vector<Var> inputs(parts.begin(), parts.end());
    return g.push(std::move(y), ng, [inputs](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        std::size_t off = 0;
        for (Var p : inputs)
        {
            const std::size_t w = gr.value(p).cols();
            if (gr.needs_grad(p))
            {
                Tensor &d = gr.grad(p);
                for (std::size_t r = 0; r < dy.rows(); ++r)
                    for (std::size_t c = 0; c < w; ++c)
                        d.at(r, c) += dy.at(r, off + c);
            }
            off += w;
        }
    });
}

Var slice_cols(Graph &g, Var x, std::size_t start, std::size_t width)
{
    const Tensor &xv = g.value(x);
    require(start + width <= xv.cols(), "slice_cols: out of range");
    const std::size_t rows = xv.rows();
    Tensor y({rows, width});
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < width; ++c)
            y.at(r, c) = xv.at(r, start + c);
    return g.push(std::move(y), g.needs_grad(x), [x, start, width](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        Tensor &d = gr.grad(x);
        for (std::size_t r = 0; r < dy.rows(); ++r)
            for (std::size_t c = 0; c < width; ++c)
                d.at(r, start + c) += dy.at(r, c);
    });
}

Var gather_rows(Graph &g, Var table, std::span<const int> ids)
{
    const Tensor &tv = g.value(table);
    require(tv.rank() == 2, "gather_rows: table must be rank 2");
    const std::size_t e = tv.dim(1);
    Tensor y({ids.size(), e});
    for (std::size_t r = 0; r < ids.size(); ++r)
    {
        const int id = ids[r];
        require(id >= 0 && static_cast<std::size_t>(id) < tv.dim(0),
                "embedding id " + std::to_string(id) + " outside [0, " + std::to_string(tv.dim(0)) + ")");
        const auto src = tv.row(static_cast<std::size_t>(id));
        std::copy(src.begin(), src.end(), y.row(r).begin());
    }
    std::vector<int> saved(ids.begin(), ids.end());
    return g.push(std::move(y), g.needs_grad(table), [table, saved](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        Tensor &d = gr.grad(table);
        for (std::size_t r = 0; r < saved.size(); ++r)
        {
            auto dst = d.row(static_cast<std::size_t>(saved[r]));
            const auto src = dy.row(r);
            for (std::size_t c = 0; c < dst.size(); ++c)
                dst[c] += src[c];
        }
    });
}

Var stack_steps(Graph &g, std::span<const Var> steps)
{
    require(!steps.empty(), "stack_steps: no inputs");
    const std::size_t b = g.value(steps[0]).rows();
    const std::size_t d = g.value(steps[0]).cols();
    const std::size_t t_count = steps.size();
    Tensor y({b, t_count, d});
    bool ng = false;
    for (std::size_t t = 0; t < t_count; ++t)
    {
        const Tensor &sv = g.value(steps[t]);
        require(sv.rows() == b && sv.cols() == d, "stack_steps: shape mismatch");
        ng = ng || g.needs_grad(steps[t]);
        for (std::size_t r = 0; r < b; ++r)
            std::copy(sv.row(r).begin(), sv.row(r).end(), y.data() + (r * t_count + t) * d);
    }
    std::vector<Var> inputs(steps.begin(), steps.end());
    return g.push(std::move(y), ng, [inputs, b, d](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        const std::size_t tc = inputs.size();
        for (std::size_t t = 0; t < tc; ++t)
        {
            if (!gr.needs_grad(inputs[t]))
                continue;
            Tensor &ds = gr.grad(inputs[t]);
            for (std::size_t r = 0; r < b; ++r)
                for (std::size_t c = 0; c < d; ++c)
                    ds.at(r, c) += dy[(r * tc + t) * d + c];
        }
    });
}

Var gru_cell(Graph &g, Var gx, Var gh, Var h)
{
    const Tensor &xv = g.value(gx);
    const Tensor &hv = g.value(gh);
    const Tensor &prev = g.value(h);
    const std::size_t b = prev.rows();
    const std::size_t hs = prev.cols();
    require(xv.rows() == b && xv.cols() == 3 * hs && hv.rows() == b && hv.cols() == 3 * hs,
            "gru_cell: gate projections must be [B, 3H]");

    // aux keeps r, z, n per row for the backward pass.
    Tensor aux({b, 3 * hs});
    Tensor y({b, hs});
    for (std::size_t r = 0; r < b; ++r)
    {
        for (std::size_t j = 0; j < hs; ++j)
        {
            const double rg = sigmoid_of(xv.at(r, j) + hv.at(r, j));
            const double zg = sigmoid_of(xv.at(r, hs + j) + hv.at(r, hs + j));
            const double ng = std::tanh(xv.at(r, 2 * hs + j) + rg * hv.at(r, 2 * hs + j));
            aux.at(r, j) = rg;
            aux.at(r, hs + j) = zg;
            aux.at(r, 2 * hs + j) = ng;
            y.at(r, j) = (1.0 - zg) * ng + zg * prev.at(r, j);
        }
    }
    const bool need = g.needs_grad(gx) || g.needs_grad(gh) || g.needs_grad(h);
    return g.push(std::move(y), need, [gx, gh, h, b, hs](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        const Tensor &a = gr.aux(self);
        const Tensor &hv2 = gr.value(gh);
        const Tensor &prev2 = gr.value(h);
        Tensor dgx({b, 3 * hs});
        Tensor dgh({b, 3 * hs});
        Tensor dh({b, hs});
        for (std::size_t r = 0; r < b; ++r)
        {
            for (std::size_t j = 0; j < hs; ++j)
            {
                const double rg = a.at(r, j);
                const double zg = a.at(r, hs + j);
                const double ng = a.at(r, 2 * hs + j);
                const double d = dy.at(r, j);
                const double dz = d * (prev2.at(r, j) - ng) * zg * (1.0 - zg);
                const double dn = d * (1.0 - zg) * (1.0 - ng * ng);
                const double dr = dn * hv2.at(r, 2 * hs + j) * rg * (1.0 - rg);
                dh.at(r, j) = d * zg;
                dgx.at(r, j) = dr;
                dgh.at(r, j) = dr;
                dgx.at(r, hs + j) = dz;
                dgh.at(r, hs + j) = dz;
                dgx.at(r, 2 * hs + j) = dn;
                dgh.at(r, 2 * hs + j) = dn * rg;
            }
        }
        auto acc = [&gr](Var v, const Tensor &d) {
            if (!gr.needs_grad(v))
                return;
            Tensor &t = gr.grad(v);
            for (std::size_t i = 0; i < t.size(); ++i)
                t[i] += d[i];
        };
        acc(gx, dgx);
        acc(gh, dgh);
        acc(h, dh);
    }, std::move(aux));
}

Var lstm_cell(Graph &g, Var gates, Var c)
{
    const Tensor &gv = g.value(gates);
    const Tensor &cv = g.value(c);
    const std::size_t b = cv.rows();
    const std::size_t hs = cv.cols();
    require(gv.rows() == b && gv.cols() == 4 * hs, "lstm_cell: gates must be [B, 4H]");

    // aux: i, f, g, o, tanh(c').
    Tensor aux({b, 5 * hs});
    Tensor y({b, 2 * hs});
    for (std::size_t r = 0; r < b; ++r)
    {
        for (std::size_t j = 0; j < hs; ++j)
        {
            const double ig = sigmoid_of(gv.at(r, j));
            const double fg = sigmoid_of(gv.at(r, hs + j));
            const double gg = std::tanh(gv.at(r, 2 * hs + j));
            const double og = sigmoid_of(gv.at(r, 3 * hs + j));
            const double cn = fg * cv.at(r, j) + ig * gg;
            const double tc = std::tanh(cn);
            aux.at(r, j) = ig;
            aux.at(r, hs + j) = fg;
            aux.at(r, 2 * hs + j) = gg;
            aux.at(r, 3 * hs + j) = og;
            aux.at(r, 4 * hs + j) = tc;
            y.at(r, j) = og * tc;
            y.at(r, hs + j) = cn;
        }
    }
    return g.push(std::move(y), g.needs_grad(gates) || g.needs_grad(c), [gates, c, b, hs](Graph &gr, int self) {
        const Tensor &dy = gr.grad(self);
        const Tensor &a = gr.aux(self);
        const Tensor &cprev = gr.value(c);
        Tensor dg({b, 4 * hs});
        Tensor dc({b, hs});
        for (std::size_t r = 0; r < b; ++r)
        {
            for (std::size_t j = 0; j < hs; ++j)
            {
                const double ig = a.at(r, j);
                const double fg = a.at(r, hs + j);
                const double gg = a.at(r, 2 * hs + j);
                const double og = a.at(r, 3 * hs + j);
                const double tc = a.at(r, 4 * hs + j);
                const double dh = dy.at(r, j);
                const double dcn = dy.at(r, hs + j) + dh * og * (1.0 - tc * tc);
                dg.at(r, j) = dcn * gg * ig * (1.0 - ig);
                dg.at(r, hs + j) = dcn * cprev.at(r, j) * fg * (1.0 - fg);
                dg.at(r, 2 * hs + j) = dcn * ig * (1.0 - gg * gg);
                dg.at(r, 3 * hs + j) = dh * tc * og * (1.0 - og);
                dc.at(r, j) = dcn * fg;
            }
        }
        if (gr.needs_grad(gates))
        {
            Tensor &t = gr.grad(gates);
            for (std::size_t i = 0; i < t.size(); ++i)
                t[i] += dg[i];
        }
        if (gr.needs_grad(c))
        {
            Tensor &t = gr.grad(c);
            for (std::size_t i = 0; i < t.size(); ++i)
                t[i] += dc[i];
        }
    }, std::move(aux));
}

Var attention(Graph &g, Var query, Var memory)
{
    const Tensor &qv = g.value(query);
    const Tensor &mv = g.value(memory);
    require(mv.rank() == 3, "attention: memory must be [B, T, D]");
    const std::size_t b = mv.dim(0);
    const std::size_t t_count = mv.dim(1);
    const std::size_t d = mv.dim(2);
    require(qv.rows() == b && qv.cols() == d,
            "attention: query " + shape_string(qv.shape()) + " vs memory " + shape_string(mv.shape()));

    Tensor weights({b, t_count});
    Tensor ctx({b, d});
    for (std::size_t r = 0; r < b; ++r)
    {
        const double *q = qv.data() + r * d;
        double max_score = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < t_count; ++t)
        {
            const double *m = mv.data() + (r * t_count + t) * d;
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                s += q[k] * m[k];
            weights.at(r, t) = s;
            max_score = std::max(max_score, s);
        }
        double z = 0.0;
        for (std::size_t t = 0; t < t_count; ++t)
        {
            weights.at(r, t) = std::exp(weights.at(r, t) - max_score);
            z += weights.at(r, t);
        }
        for (std::size_t t = 0; t < t_count; ++t)
        {
            weights.at(r, t) /= z;
            const double *m = mv.data() + (r * t_count + t) * d;
            for (std::size_t k = 0; k < d; ++k)
                ctx.at(r, k) += weights.at(r, t) * m[k];
        }
    }
    const bool need = g.needs_grad(query) || g.needs_grad(memory);
    return g.push(std::move(ctx), need, [query, memory, b, t_count, d](Graph &gr, int self) {
        const Tensor &dctx = gr.grad(self);
        const Tensor &w = gr.aux(self);
        const Tensor &q = gr.value(query);
        const Tensor &m = gr.value(memory);
        const bool need_q = gr.needs_grad(query);
        const bool need_m = gr.needs_grad(memory);
        std::vector<double> dw(t_count);
        for (std::size_t r = 0; r < b; ++r)
        {
            const double *dc = dctx.data() + r * d;
            double dot = 0.0;
            for (std::size_t t = 0; t < t_count; ++t)
            {
                const double *mm = m.data() + (r * t_count + t) * d;
                double s = 0.0;
                for (std::size_t k = 0; k < d; ++k)
                    s += dc[k] * mm[k];
                dw[t] = s;
                dot += w.at(r, t) * s;
            }
            for (std::size_t t = 0; t < t_count; ++t)
            {
                const double ds = w.at(r, t) * (dw[t] - dot);
                const double *mm = m.data() + (r * t_count + t) * d;
                if (need_q)
                {
                    double *dq = gr.grad(query).data() + r * d;
                    for (std::size_t k = 0; k < d; ++k)
                        dq[k] += ds * mm[k];
                }
                if (need_m)
                {
                    double *dm = gr.grad(memory).data() + (r * t_count + t) * d;
                    const double *qq = q.data() + r * d;
                    for (std::size_t k = 0; k < d; ++k)
                        dm[k] += w.at(r, t) * dc[k] + ds * qq[k];
                }
            }
        }
    }, std::move(weights));
}

Var softmax_xent(Graph &g, Var logits, std::span<const int> targets, double scale_by)
{
    const Tensor &lv = g.value(logits);
    const std::size_t b = lv.rows();
    const std::size_t v = lv.cols();
    require(targets.size() == b, "softmax_xent: one target per row required");

    Tensor probs({b, v});
    double loss = 0.0;
    for (std::size_t r = 0; r < b; ++r)
    {
        if (targets[r] < 0)
            continue;
        require(static_cast<std::size_t>(targets[r]) < v, "softmax_xent: target outside class range");
        const auto row = lv.row(r);
        const double mx = *std::max_element(row.begin(), row.end());
        double z = 0.0;
        for (std::size_t c = 0; c < v; ++c)
        {
            probs.at(r, c) = std::exp(row[c] - mx);
            z += probs.at(r, c);
        }
        for (std::size_t c = 0; c < v; ++c)
            probs.at(r, c) /= z;
        loss += -(row[static_cast<std::size_t>(targets[r])] - mx - std::log(z));
    }
    std::vector<int> saved(targets.begin(), targets.end());
    return g.push(Tensor({1}, {loss * scale_by}), g.needs_grad(logits),
                  [logits, saved, scale_by, v](Graph &gr, int self) {
                      const double up = gr.grad(self)[0] * scale_by;
                      const Tensor &p = gr.aux(self);
                      Tensor &d = gr.grad(logits);
                      for (std::size_t r = 0; r < saved.size(); ++r)
                      {
                          if (saved[r] < 0)
                              continue;
                          for (std::size_t c = 0; c < v; ++c)
                              d.at(r, c) += up * p.at(r, c);
                          d.at(r, static_cast<std::size_t>(saved[r])) -= up;
                      }
                  },
                  std::move(probs));
}

Var sum_scalars(Graph &g, std::span<const Var> scalars)
{
    double total = 0.0;
    bool ng = false;
    for (Var s : scalars)
    {
        require(g.value(s).size() == 1, "sum_scalars: inputs must be scalars");
        total += g.value(s)[0];
        ng = ng || g.needs_grad(s);
    }
    std::vector<Var> inputs(scalars.begin(), scalars.end());
    return g.push(Tensor({1}, {total}), ng, [inputs](Graph &gr, int self) {
        const double up = gr.grad(self)[0];
        for (Var s : inputs)
            if (gr.needs_grad(s))
                gr.grad(s)[0] += up;
    });
}

} // namespace chanlingo::neural
