// Copyright (C) 2026 The selrel Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace selrel {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A dimension is too small, zero, or does not match.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Malformed binary file. `offset()` is the byte position where parsing failed.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), detail_(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }
    /// Message without the offset suffix.
    const std::string& detail() const { return detail_; }

private:
    std::string detail_;
    std::size_t offset_;
};

/// Caller supplied arguments that violate an operation's preconditions.
class InputError : public Error {
public:
    using Error::Error;
};

/// Model could not be assembled from architecture + weights. `layer()` names the culprit.
class LoadError : public Error {
public:
    LoadError(const std::string& layer, const std::string& what)
        : Error("layer '" + layer + "': " + what), layer_(layer) {}
    const std::string& layer() const { return layer_; }

private:
    std::string layer_;
};

/// A support-based metric was asked to divide by an empty support.
class EmptyRelevanceError : public Error {
public:
    explicit EmptyRelevanceError(const std::string& context)
        : Error("empty-relevance: " + context) {}
};

}  // namespace selrel
