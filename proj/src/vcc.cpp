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

#include "chanlingo/vcc.hpp"

#include "chanlingo/error.hpp"
#include "chanlingo/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chanlingo
{

namespace
{

// 1/step when it is (numerically) an integer, else 0.
double reciprocal_grid(double step)
{
    const double inv = 1.0 / step;
    const double r = std::round(inv);
    if (r >= 1.0 && std::abs(inv - r) <= 1e-9 * r)
        return r;
    return 0.0;
}

void require_step(double step)
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw InvalidArgument("quantization step must be positive");
}

bool same_step(double a, double b)
{
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

std::string canonical_entries(double step, const std::vector<VocabEntry> &entries)
{
    std::string out = "step=" + io::format_double(step) + "\n";
    for (const auto &e : entries)
    {
        out += std::to_string(e.id);
        out += ' ';
        out += io::format_double(e.cc.real());
        out += ' ';
        out += io::format_double(e.cc.imag());
        out += ' ';
        out += std::to_string(e.frequency);
        out += '\n';
    }
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size())
    {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > start)
            out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::optional<std::string_view> key_value(std::string_view token, std::string_view key)
{
    if (token.size() <= key.size() || token.substr(0, key.size()) != key ||
        token[key.size()] != '=')
        return std::nullopt;
    return token.substr(key.size() + 1);
}

} // namespace

std::int64_t grid_index(double x, double step)
{
    require_step(step);
    const double inv = reciprocal_grid(step);
    const double q = inv > 0.0 ? x * inv : x / step;
    // Nudge exact halves that landed a hair short (0.005 / 0.01 etc.).
    return static_cast<std::int64_t>(std::round(q + std::copysign(1e-9, q)));
}

double grid_value(std::int64_t idx, double step)
{
    const double inv = reciprocal_grid(step);
    const double v = inv > 0.0 ? static_cast<double>(idx) / inv : static_cast<double>(idx) * step;
    return v == 0.0 ? 0.0 : v;
}

GridPoint grid_point(Complex cc, double step)
{
    return {grid_index(cc.real(), step), grid_index(cc.imag(), step)};
}

Complex grid_change(GridPoint p, double step)
{
    return {grid_value(p.re, step), grid_value(p.im, step)};
}

ChangeSeries compute_changes(const ChannelSeries &series)
{
    if (series.samples.size() < 2)
        throw InvalidArgument("computing changes needs at least 2 samples");
    ChangeSeries out;
    out.source_interval_s = series.sample_interval_s;
    out.changes.resize(series.samples.size() - 1);
    for (std::size_t k = 0; k + 1 < series.samples.size(); ++k)
        out.changes[k] = series.samples[k + 1] - series.samples[k];
    return out;
}

ChangeSeries quantize(const ChangeSeries &changes, double quant_step)
{
    require_step(quant_step);
    ChangeSeries out;
    out.source_interval_s = changes.source_interval_s;
    out.quant_step = quant_step;
    out.changes.reserve(changes.changes.size());
    for (const auto &c : changes.changes)
        out.changes.push_back(grid_change(grid_point(c, quant_step), quant_step));
    return out;
}

std::string format_change(Complex cc)
{
    auto part = [](double v) {
        std::string s = io::format_double(v);
        return (v >= 0.0 ? "+" : "") + s;
    };
    return part(cc.real()) + part(cc.imag()) + "i";
}

Vocabulary::Vocabulary(double quant_step, std::vector<VocabEntry> entries, std::uint64_t oov_count)
    : quant_step_(quant_step), entries_(std::move(entries)), oov_count_(oov_count)
{
    require_step(quant_step_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
    {
        auto &e = entries_[i];
        if (e.id != static_cast<int>(i) + 1)
            throw InvalidArgument("vocabulary ids must be dense 1..X in order");
        if (e.frequency < 1)
            throw InvalidArgument("vocabulary frequencies must be >= 1");
        if (i > 0 && e.frequency > entries_[i - 1].frequency)
            throw InvalidArgument("vocabulary frequencies must be non-increasing by id");
        const GridPoint p = grid_point(e.cc, quant_step_);
        const Complex snapped = grid_change(p, quant_step_);
        if (std::abs(snapped.real() - e.cc.real()) > 1e-9 * quant_step_ ||
            std::abs(snapped.imag() - e.cc.imag()) > 1e-9 * quant_step_)
            throw InvalidArgument("vocabulary change " + format_change(e.cc) +
                                  " is not on the quantization grid");
        e.cc = snapped;
        if (!index_.emplace(p, e.id).second)
            throw InvalidArgument("duplicate change " + format_change(e.cc) + " in vocabulary");
    }
    hash_ = io::fnv1a64(canonical_entries(quant_step_, entries_));
}

int Vocabulary::id_of(Complex quantized_cc) const
{
    const auto it = index_.find(grid_point(quantized_cc, quant_step_));
    return it == index_.end() ? kUnkId : it->second;
}

Complex Vocabulary::change_of(int id) const
{
    if (id < 0 || id > size())
        throw CorruptToken("token id " + std::to_string(id) + " outside [0, " +
                           std::to_string(size()) + "]");
    if (id == kUnkId)
        return {0.0, 0.0};
    return entries_[static_cast<std::size_t>(id - 1)].cc;
}

Vocabulary build_vocabulary(std::span<const ChangeSeries> quantized, std::size_t max_size,
                            std::uint64_t min_frequency)
{
    if (max_size < 1 || min_frequency < 1)
        throw InvalidArgument("max_size and min_frequency must be >= 1");
    if (quantized.empty())
        throw InvalidArgument("no change series given");
    const auto &first_step = quantized.front().quant_step;
    if (!first_step)
        throw InvalidArgument("vocabulary input must be quantized");
    const double step = *first_step;

    std::map<GridPoint, std::uint64_t> counts;
    std::size_t total = 0;
    for (const auto &series : quantized)
    {
        if (!series.quant_step || !same_step(*series.quant_step, step))
            throw InvalidArgument("all vocabulary inputs must share one quantization step");
        for (const auto &c : series.changes)
            ++counts[grid_point(c, step)];
        total += series.changes.size();
    }
    if (total == 0)
        throw InvalidArgument("vocabulary input is empty");

    std::vector<std::pair<GridPoint, std::uint64_t>> ranked(counts.begin(), counts.end());
    // Descending frequency; ties by ascending (real, imag), which is the
    // GridPoint order because step > 0. stable_sort keeps the map order.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto &a, const auto &b) { return a.second > b.second; });

    std::vector<VocabEntry> entries;
    for (const auto &[point, freq] : ranked)
    {
        if (freq < min_frequency || entries.size() >= max_size)
            break;
        entries.push_back({static_cast<int>(entries.size()) + 1, grid_change(point, step), freq});
    }
    const std::uint64_t oov = ranked.size() - entries.size();
    return Vocabulary(step, std::move(entries), oov);
}

Vocabulary build_vocabulary(const ChangeSeries &quantized, std::size_t max_size,
                            std::uint64_t min_frequency)
{
    return build_vocabulary(std::span<const ChangeSeries>(&quantized, 1), max_size, min_frequency);
}

TokenSeries encode_changes(const ChangeSeries &changes, Complex anchor, const Vocabulary &vocab)
{
    if (changes.quant_step && !same_step(*changes.quant_step, vocab.quant_step()))
        throw InvalidArgument("change series quantized with step " +
                              io::format_double(*changes.quant_step) +
                              " but vocabulary uses " + io::format_double(vocab.quant_step()));
    TokenSeries out;
    out.anchor = anchor;
    out.vocabulary_hash = vocab.hash();
    out.sample_interval_s = changes.source_interval_s;
    out.ids.reserve(changes.changes.size());
    for (const auto &c : changes.changes)
        out.ids.push_back(vocab.id_of(c));
    return out;
}

TokenSeries encode(const ChannelSeries &series, const Vocabulary &vocab)
{
    if (series.samples.size() < 2)
        throw InvalidArgument("encoding needs at least 2 samples");
    return encode_changes(compute_changes(series), series.samples.front(), vocab);
}

ChannelSeries decode(const TokenSeries &tokens, const Vocabulary &vocab, DecodeStats *stats)
{
    if (tokens.vocabulary_hash != vocab.hash())
        throw VocabularyMismatch("token series was produced with vocabulary " +
                                 io::hex64(tokens.vocabulary_hash) + ", not " +
                                 io::hex64(vocab.hash()));
    ChannelSeries out;
    out.sample_interval_s = tokens.sample_interval_s;
    out.samples.reserve(tokens.ids.size());
    Complex acc = tokens.anchor;
    std::size_t unk = 0;
    for (int id : tokens.ids)
    {
        if (id == Vocabulary::kUnkId)
            ++unk;
        acc += vocab.change_of(id);
        out.samples.push_back(acc);
    }
    if (stats)
        stats->unk_count += unk;
    return out;
}

std::string format_vocabulary(const Vocabulary &vocab)
{
    std::string out = "# vccf v1 step=" + io::format_double(vocab.quant_step()) +
                      " X=" + std::to_string(vocab.size()) +
                      " L=" + std::to_string(vocab.oov_count()) + "\n";
    const std::string body = canonical_entries(vocab.quant_step(), vocab.entries());
    out += body.substr(body.find('\n') + 1);
    return out;
}

Vocabulary parse_vocabulary(std::string_view text, const std::string &source)
{
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool have_header = false;
    double step = 0.0;
    std::int64_t declared_x = 0;
    std::uint64_t oov = 0;
    std::vector<VocabEntry> entries;
    std::map<GridPoint, std::size_t> seen;

    while (pos <= text.size())
    {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const auto tokens = split_ws(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (!have_header)
        {
            if (tokens.size() != 6 || tokens[0] != "#" || tokens[1] != "vccf" || tokens[2] != "v1")
                throw ParseError(source, line_no, "expected '# vccf v1 step=<float> X=<int> L=<int>'");
            const auto s = key_value(tokens[3], "step");
            const auto x = key_value(tokens[4], "X");
            const auto l = key_value(tokens[5], "L");
            const auto sv = s ? io::parse_double(*s) : std::nullopt;
            const auto xv = x ? io::parse_int(*x) : std::nullopt;
            const auto lv = l ? io::parse_int(*l) : std::nullopt;
            if (!sv || !(*sv > 0.0) || !xv || *xv < 0 || !lv || *lv < 0)
                throw ParseError(source, line_no, "bad vccf header fields");
            step = *sv;
            declared_x = *xv;
            oov = static_cast<std::uint64_t>(*lv);
            have_header = true;
            continue;
        }
        if (tokens.empty())
            continue;
        if (tokens.size() != 4)
            throw ParseError(source, line_no, "expected '<id> <real> <imag> <frequency>'");
        const auto id = io::parse_int(tokens[0]);
        const auto re = io::parse_double(tokens[1]);
        const auto im = io::parse_double(tokens[2]);
        const auto freq = io::parse_int(tokens[3]);
        if (!id || !re || !im || !freq || !std::isfinite(*re) || !std::isfinite(*im))
            throw ParseError(source, line_no, "malformed entry");
        if (*id != static_cast<std::int64_t>(entries.size()) + 1)
            throw ParseError(source, line_no, "ids must be listed densely from 1 (id 0 is reserved)");
        if (*freq < 1)
            throw ParseError(source, line_no, "frequency must be >= 1");
        if (!entries.empty() && static_cast<std::uint64_t>(*freq) > entries.back().frequency)
            throw ParseError(source, line_no, "frequencies must be non-increasing by id");
        const Complex cc{*re, *im};
        const GridPoint p = grid_point(cc, step);
        const Complex snapped = grid_change(p, step);
        if (std::abs(snapped.real() - *re) > 1e-9 * step || std::abs(snapped.imag() - *im) > 1e-9 * step)
            throw ParseError(source, line_no, "change is not a multiple of step");
        if (const auto it = seen.find(p); it != seen.end())
            throw ParseError(source, line_no, "duplicate change " + format_change(snapped) +
                                                  " (first at line " + std::to_string(it->second) + ")");
        seen.emplace(p, line_no);
        entries.push_back({static_cast<int>(*id), snapped, static_cast<std::uint64_t>(*freq)});
    }
    if (!have_header)
        throw ParseError(source, 1, "empty file");
    if (static_cast<std::int64_t>(entries.size()) != declared_x)
        throw ParseError(source, line_no, "header declares X=" + std::to_string(declared_x) +
                                              " but " + std::to_string(entries.size()) +
                                              " entries follow");
    return Vocabulary(step, std::move(entries), oov);
}

void save_vocabulary(const Vocabulary &vocab, const std::filesystem::path &path)
{
    io::write_file_atomic(path, format_vocabulary(vocab));
}

Vocabulary load_vocabulary(const std::filesystem::path &path)
{
    return parse_vocabulary(io::read_file(path), path.string());
}

} // namespace chanlingo
