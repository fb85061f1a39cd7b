// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace games {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a documented precondition (bad alphas, k = 0, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Reflection where a proper rotation was required.
class HandednessError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Degenerate geometry. Carries the offending face / element when known.
class GeometryError : public Error {
public:
    explicit GeometryError(const std::string &what, std::optional<std::size_t> face = std::nullopt)
        : Error(face ? what + " (face " + std::to_string(*face) + ")" : what), mFace(face) {}

    std::optional<std::size_t> face() const noexcept { return mFace; }

private:
    std::optional<std::size_t> mFace;
};

/// A batch operation found degenerate elements; lists every offending index.
class DegenerateElementsError : public GeometryError {
public:
    DegenerateElementsError(const std::string &what, std::vector<std::size_t> indices)
        : GeometryError(what + " (" + std::to_string(indices.size()) + " offending)"),
          mIndices(std::move(indices)) {}

    const std::vector<std::size_t> &indices() const noexcept { return mIndices; }

private:
    std::vector<std::size_t> mIndices;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// Internal invariant broken; indicates a bug rather than bad input.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// I/O and format errors. Binary codecs report a byte offset, text codecs a
/// line and column.
class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public IoError {
public:
    enum class Kind { MalformedHeader, WrongPropertyOrder, TruncatedPayload, BadMagic, Schema, Syntax };

    FormatError(Kind kind, const std::string &what, std::size_t byteOffset)
        : IoError(what + " at byte " + std::to_string(byteOffset)), mKind(kind), mOffset(byteOffset) {}

    FormatError(Kind kind, const std::string &what, std::size_t line, std::size_t column)
        : IoError(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          mKind(kind), mLine(line), mColumn(column) {}

    Kind kind() const noexcept { return mKind; }
    std::optional<std::size_t> byteOffset() const noexcept { return mOffset; }
    std::optional<std::size_t> line() const noexcept { return mLine; }
    std::optional<std::size_t> column() const noexcept { return mColumn; }

private:
    Kind mKind;
    std::optional<std::size_t> mOffset;
    std::optional<std::size_t> mLine;
    std::optional<std::size_t> mColumn;
};

} // namespace games
