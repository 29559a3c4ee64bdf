// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The landpatch authors

#pragma once

#include <stdexcept>
#include <string>

namespace landpatch {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or out-of-contract input: bad file contents, bad parameters,
/// violated preconditions. CLI exit code 2.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure: unreadable or unwritable paths. CLI exit code 3.
class IoError : public Error {
public:
    using Error::Error;
};

/// Numerical degeneracy not coverable by a documented fallback. CLI exit code 4.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace landpatch
