// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "games/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace games::detail {

static_assert(std::endian::native == std::endian::little, "codecs assume a little-endian host");

class ByteWriter {
public:
    explicit ByteWriter(std::vector<std::uint8_t> &out) : mOut(out) {}

    template <class T> void put(T value) {
        const auto *p = reinterpret_cast<const std::uint8_t *>(&value);
        mOut.insert(mOut.end(), p, p + sizeof(T));
    }
    void putBytes(std::string_view s) { mOut.insert(mOut.end(), s.begin(), s.end()); }

private:
    std::vector<std::uint8_t> &mOut;
};

class ByteReader {
public:
    ByteReader(std::span<const std::uint8_t> bytes, const char *format) : mBytes(bytes), mFormat(format) {}

    template <class T> T get() {
        need(sizeof(T));
        T value;
        std::memcpy(&value, mBytes.data() + mPos, sizeof(T));
        mPos += sizeof(T);
        return value;
    }

    std::string_view getBytes(std::size_t n) {
        need(n);
        std::string_view s(reinterpret_cast<const char *>(mBytes.data() + mPos), n);
        mPos += n;
        return s;
    }

    std::size_t offset() const { return mPos; }
    std::size_t remaining() const { return mBytes.size() - mPos; }

    void expectEnd() const {
        if (mPos != mBytes.size())
            throw FormatError(FormatError::Kind::TruncatedPayload,
                              std::string(mFormat) + ": " + std::to_string(mBytes.size() - mPos) +
                                  " unexpected trailing bytes",
                              mPos);
    }

private:
    void need(std::size_t n) const {
        if (mBytes.size() - mPos < n)
            throw FormatError(FormatError::Kind::TruncatedPayload,
                              std::string(mFormat) + ": truncated payload, needed " + std::to_string(n) +
                                  " more bytes",
                              mPos);
    }

    std::span<const std::uint8_t> mBytes;
    std::size_t mPos = 0;
    const char *mFormat;
};

} // namespace games::detail
