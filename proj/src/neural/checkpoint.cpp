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

#include "chanlingo/neural/checkpoint.hpp"

#include "chanlingo/error.hpp"
#include "chanlingo/io.hpp"

#include <bit>
#include <cstring>

namespace chanlingo::neural
{

namespace
{

constexpr char kMagic[4] = {'C', 'L', 'N', 'G'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::string &out, T v)
{
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

class Reader
{
public:
    Reader(const std::string &bytes, const std::string &source) : bytes_(bytes), source_(source) {}

    template <typename T>
    T get(const char *what)
    {
        need(sizeof(T), what);
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::string take(std::size_t n, const char *what)
    {
        need(n, what);
        std::string s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    bool done() const { return pos_ == bytes_.size(); }

    [[noreturn]] void fail(const std::string &msg) const
    {
        throw CheckpointMismatch("checkpoint-error", "format", source_ + ": " + msg);
    }

private:
    void need(std::size_t n, const char *what) const
    {
        if (bytes_.size() - pos_ < n)
            fail(std::string("truncated while reading ") + what);
    }

    const std::string &bytes_;
    std::string source_;
    std::size_t pos_ = 0;
};

} // namespace

const Tensor *Checkpoint::find(const std::string &name) const
{
    for (const auto &[n, t] : tensors)
        if (n == name)
            return &t;
    return nullptr;
}

const std::string &Checkpoint::get(const std::string &key) const
{
    const auto it = metadata.find(key);
    if (it == metadata.end())
        throw CheckpointMismatch("checkpoint-mismatch", key, "missing from checkpoint metadata");
    return it->second;
}

void Checkpoint::require(const std::string &key, const std::string &expected) const
{
    const std::string &have = get(key);
    if (have == expected)
        return;
    const std::string kind = key == "vocabulary_hash" ? "vocabulary-mismatch" : "checkpoint-mismatch";
    throw CheckpointMismatch(kind, key, "checkpoint has '" + have + "', expected '" + expected + "'");
}

std::string serialize_checkpoint(const Checkpoint &ckpt)
{
    std::string meta;
    for (const auto &[k, v] : ckpt.metadata)
    {
        if (k.empty() || k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos)
            throw InvalidArgument("checkpoint metadata key/value not representable: '" + k + "'");
        meta += k + "=" + v + "\n";
    }

    std::string out(kMagic, 4);
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
    out += meta;
    put<std::uint64_t>(out, ckpt.tensors.size());
    for (const auto &[name, t] : ckpt.tensors)
    {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
        out += name;
        put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
        for (std::size_t d : t.shape())
            put<std::uint64_t>(out, d);
        for (double v : t.values())
            put<float>(out, static_cast<float>(v));
    }
    return out;
}

Checkpoint deserialize_checkpoint(const std::string &bytes, const std::string &source)
{
    Reader r(bytes, source);
    if (r.take(4, "magic") != std::string(kMagic, 4))
        r.fail("not a CKPT file (bad magic)");
    const auto version = r.get<std::uint32_t>("version");
    if (version != kCheckpointVersion)
        throw CheckpointMismatch("checkpoint-mismatch", "version",
                                 "file has format version " + std::to_string(version) + ", expected " +
                                     std::to_string(kCheckpointVersion));

    Checkpoint ckpt;
    const auto meta_len = r.get<std::uint32_t>("metadata length");
    const std::string meta = r.take(meta_len, "metadata");
    std::size_t start = 0;
    while (start < meta.size())
    {
        const std::size_t end = meta.find('\n', start);
        if (end == std::string::npos)
            r.fail("unterminated metadata line");
        const std::string line = meta.substr(start, end - start);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            r.fail("metadata line without key=value: '" + line + "'");
        ckpt.metadata[line.substr(0, eq)] = line.substr(eq + 1);
        start = end + 1;
    }

    const auto count = r.get<std::uint64_t>("tensor count");
    for (std::uint64_t i = 0; i < count; ++i)
    {
        const auto name_len = r.get<std::uint32_t>("tensor name length");
        std::string name = r.take(name_len, "tensor name");
        const auto rank = r.get<std::uint32_t>("tensor rank");
        if (rank > 8)
            r.fail("tensor '" + name + "' has implausible rank " + std::to_string(rank));
        std::vector<std::size_t> shape(rank);
        std::size_t total = 1;
        for (auto &d : shape)
        {
            d = static_cast<std::size_t>(r.get<std::uint64_t>("tensor dims"));
            if (d != 0 && total > (bytes.size() / d))
                r.fail("tensor '" + name + "' is larger than the file");
            total *= d;
        }
        std::vector<double> data(total);
        for (auto &v : data)
            v = static_cast<double>(r.get<float>("tensor data"));
        ckpt.tensors.emplace_back(std::move(name), Tensor(std::move(shape), std::move(data)));
    }
    if (!r.done())
        r.fail("trailing bytes after last tensor");
    return ckpt;
}

void save_checkpoint(const Checkpoint &ckpt, const std::filesystem::path &path)
{
    io::write_file_atomic(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path &path)
{
    return deserialize_checkpoint(io::read_file(path), path.string());
}

} // namespace chanlingo::neural
