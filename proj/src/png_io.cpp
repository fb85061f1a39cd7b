// Copyright Contributors to the games project
// SPDX-License-Identifier: Apache-2.0
//
#include "games/errors.hpp"
#include "games/io.hpp"

#include <png.h>

#include <cstring>

namespace games {

Bytes encodePng(const ImageBuffer &img) {
    if (img.width < 1 || img.height < 1)
        throw ValidationError("png: image must be at least 1x1");
    const std::vector<std::uint8_t> pixels = toRgba8(img);

    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = png_uint_32(img.width);
    image.height = png_uint_32(img.height);
    image.format = PNG_FORMAT_RGBA;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr))
        throw IoError(std::string("png: encode failed: ") + image.message);
    Bytes out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr))
        throw IoError(std::string("png: encode failed: ") + image.message);
    out.resize(size);
    return out;
}

ImageBuffer decodePng(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw IoError(std::string("png: cannot decode: ") + image.message);
    image.format = PNG_FORMAT_RGBA;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw IoError(std::string("png: cannot decode: ") + image.message);
    }
    return fromRgba8(pixels, int(image.width), int(image.height));
}

void writePng(const ImageBuffer &img, const std::filesystem::path &path) { writeFileBytes(path, encodePng(img)); }

ImageBuffer readPng(const std::filesystem::path &path) { return decodePng(readFileBytes(path)); }

} // namespace games
