/*
 * Copyright 2026 The isomer360 Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "isomer360/common.hpp"
#include "isomer360/geometry.hpp"

namespace iso360 {

/// 8-bit single-plane raster. The whole pipeline is luma-only; compression
/// size behaviour is driven by structure, not color.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;

    Image8() = default;
    Image8(int w, int h, uint8_t fill = 0) : width(w), height(h), data(size_t(w) * h, fill) {}

    uint8_t at(int x, int y) const { return data[size_t(y) * width + x]; }
    uint8_t& at(int x, int y) { return data[size_t(y) * width + x]; }

    bool operator==(const Image8& o) const {
        return width == o.width && height == o.height && data == o.data;
    }
};

/// Full-sphere frame in equirectangular projection (width = 2 x height).
struct EquirectFrame {
    Image8 luma;

    EquirectFrame() = default;
    explicit EquirectFrame(Image8 img) : luma(std::move(img)) {
        if (luma.width != 2 * luma.height)
            throw InputError("equirectangular frame must have width = 2 x height");
    }
    int width() const { return luma.width; }
    int height() const { return luma.height; }
};

/// Cubemap frame packed 2 rows x 3 columns:
///   row 0: [left, front, right]
///   row 1: [down, back, up]
struct CubemapFrame {
    int face_size = 0;
    Image8 raster;

    CubemapFrame() = default;
    CubemapFrame(int face, Image8 img) : face_size(face), raster(std::move(img)) {
        if (face_size <= 0 || raster.width != 3 * face_size || raster.height != 2 * face_size)
            throw InputError("cubemap raster must be 3 x face_size wide and 2 x face_size tall");
    }
    explicit CubemapFrame(int face) : face_size(face), raster(3 * face, 2 * face) {
        if (face <= 0) throw InputError("cubemap face size must be positive");
    }

    int width() const { return raster.width; }
    int height() const { return raster.height; }

    bool operator==(const CubemapFrame& o) const {
        return face_size == o.face_size && raster == o.raster;
    }
};

/// Raster column/row (in face units) of a face inside the 2x3 packing.
void face_cell(Face f, int* col, int* row);

/// Inverse of face_cell.
Face face_in_cell(int col, int row);

/// Face and in-face pixel for a raster position.
Face face_at(const CubemapFrame& frame, int x, int y, int* fx, int* fy);

}  // namespace iso360
