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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chanlingo
{

// Every error raised by the library carries a stable kind tag. The CLI prints
// it verbatim so scripts can match on e.g. "vocabulary-mismatch".
class Error : public std::runtime_error
{
public:
    Error(std::string kind, const std::string &message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string &kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InvalidArgument : Error
{
    explicit InvalidArgument(const std::string &msg) : Error("invalid-argument", msg) {}
};

struct InvalidState : Error
{
    explicit InvalidState(const std::string &msg) : Error("invalid-state", msg) {}
};

struct VocabularyMismatch : Error
{
    explicit VocabularyMismatch(const std::string &msg) : Error("vocabulary-mismatch", msg) {}
};

struct CorruptToken : Error
{
    explicit CorruptToken(const std::string &msg) : Error("corrupt-token", msg) {}
};

struct UndefinedNmse : Error
{
    explicit UndefinedNmse(const std::string &msg) : Error("undefined-nmse", msg) {}
};

struct NumericalError : Error
{
    explicit NumericalError(const std::string &msg) : Error("numerical-error", msg) {}
};

struct IoError : Error
{
    explicit IoError(const std::string &msg) : Error("io-error", msg) {}
};

class ParseError : public Error
{
public:
    ParseError(const std::string &source, std::size_t line, const std::string &msg)
        : Error("parse-error", source + ":" + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Checkpoint metadata disagreement; names the field that did not match.
class CheckpointMismatch : public Error
{
public:
    CheckpointMismatch(std::string kind, std::string field, const std::string &msg)
        : Error(std::move(kind), field + ": " + msg), field_(std::move(field)) {}

    const std::string &field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace chanlingo
