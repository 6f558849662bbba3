// Copyright 2026 The lfdpr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lfdpr {

enum class ErrorKind {
    FileNotFound,
    MalformedInput,
    IndexOutOfRange,
    InvalidConfig,
    DimensionMismatch,
    Unsupported,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace lfdpr
