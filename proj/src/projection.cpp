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

#include "isomer360/projection.hpp"

#include <cmath>

namespace iso360 {

namespace {

// Catmull-Rom weights (cubic kernel with a = -0.5)
inline void catmull_rom_weights(double t, double w[4]) {
    double t2 = t * t, t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
    w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
    w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}

inline int wrap_mod(int v, int n) {
    v %= n;
    return v < 0 ? v + n : v;
}

inline int clamp_int(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline uint8_t quantize(double v) {
    long q = std::lround(v);
    return uint8_t(q < 0 ? 0 : (q > 255 ? 255 : q));
}

}  // namespace

double sample_bicubic_wrap(const Image8& img, double sx, double sy) {
    double fx = sx - 0.5, fy = sy - 0.5;
    int x0 = int(std::floor(fx)), y0 = int(std::floor(fy));
    double wx[4], wy[4];
    catmull_rom_weights(fx - x0, wx);
    catmull_rom_weights(fy - y0, wy);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        int yy = clamp_int(y0 - 1 + j, 0, img.height - 1);
        const uint8_t* row = &img.data[size_t(yy) * img.width];
        double r = 0.0;
        for (int i = 0; i < 4; ++i) {
            int xx = wrap_mod(x0 - 1 + i, img.width);
            r += wx[i] * row[xx];
        }
        acc += wy[j] * r;
    }
    return acc;
}

namespace {

// bicubic inside an axis-aligned rectangle [rx0, rx1] x [ry0, ry1]; taps clamp
// to the rectangle, so packed neighbors never bleed across face borders
double sample_bicubic_rect(const Image8& img, double sx, double sy, int rx0, int ry0, int rx1,
                           int ry1) {
    double fx = sx - 0.5, fy = sy - 0.5;
    int x0 = int(std::floor(fx)), y0 = int(std::floor(fy));
    double wx[4], wy[4];
    catmull_rom_weights(fx - x0, wx);
    catmull_rom_weights(fy - y0, wy);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        int yy = clamp_int(y0 - 1 + j, ry0, ry1);
        const uint8_t* row = &img.data[size_t(yy) * img.width];
        double r = 0.0;
        for (int i = 0; i < 4; ++i) {
            int xx = clamp_int(x0 - 1 + i, rx0, rx1);
            r += wx[i] * row[xx];
        }
        acc += wy[j] * r;
    }
    return acc;
}

}  // namespace

uint8_t project_pixel(const EquirectFrame& src, const Orientation& o, int face_size, int x,
                      int y) {
    Mat3 rot = rotation_of(o);
    CubemapFrame shape(face_size);
    int fx, fy;
    Face face = face_at(shape, x, y, &fx, &fy);
    FaceCoord fc{face, (fx + 0.5) / face_size, (fy + 0.5) / face_size};
    Vec3 d = rot * face_to_direction(fc);
    double ex, ey;
    direction_to_equirect(d, src.width(), src.height(), &ex, &ey);
    return quantize(sample_bicubic_wrap(src.luma, ex, ey));
}

namespace {

// Source sample coordinates for every output pixel, raster order. Independent
// of frame content, so a clip pays the trigonometry once per orientation.
std::vector<double> sample_coords(const Orientation& o, int face_size, int w, int h) {
    Mat3 rot = rotation_of(o);
    std::vector<double> coords(size_t(3 * face_size) * (2 * face_size) * 2);
    size_t k = 0;
    for (int y = 0; y < 2 * face_size; ++y) {
        for (int x = 0; x < 3 * face_size; ++x) {
            int col = x / face_size, row = y / face_size;
            int i = x - col * face_size, j = y - row * face_size;
            Face face = face_in_cell(col, row);
            FaceCoord fc{face, (i + 0.5) / face_size, (j + 0.5) / face_size};
            Vec3 d = rot * face_to_direction(fc);
            direction_to_equirect(d, w, h, &coords[k], &coords[k + 1]);
            k += 2;
        }
    }
    return coords;
}

CubemapFrame project_cached(const EquirectFrame& src, const std::vector<double>& coords,
                            int face_size) {
    CubemapFrame out(face_size);
    size_t k = 0;
    for (uint8_t& px : out.raster.data) {
        px = quantize(sample_bicubic_wrap(src.luma, coords[k], coords[k + 1]));
        k += 2;
    }
    return out;
}

}  // namespace

CubemapFrame project(const EquirectFrame& src, const Orientation& o, int face_size) {
    if (face_size < 8) throw InputError("cubemap face size must be at least 8");
    return project_cached(src, sample_coords(o, face_size, src.width(), src.height()), face_size);
}

std::vector<CubemapFrame> project_clip(const std::vector<EquirectFrame>& frames,
                                       const Orientation& o, int face_size) {
    if (frames.empty()) throw InputError("cannot project an empty clip");
    if (face_size < 8) throw InputError("cubemap face size must be at least 8");
    int w = frames[0].width(), h = frames[0].height();
    for (const auto& f : frames)
        if (f.width() != w || f.height() != h)
            throw InputError("clip frames must have uniform dimensions");
    std::vector<double> coords = sample_coords(o, face_size, w, h);
    std::vector<CubemapFrame> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(project_cached(f, coords, face_size));
    return out;
}

EquirectFrame project_to_equirect(const CubemapFrame& src, const Orientation& o, int width,
                                  int height) {
    if (width != 2 * height) throw InputError("equirect output must have width = 2 x height");
    Mat3 inv = rotation_of(o).transposed();
    int f = src.face_size;
    Image8 out(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            Vec3 d = inv * equirect_to_direction(x + 0.5, y + 0.5, width, height);
            FaceCoord fc = direction_to_face(d);
            int col, row;
            face_cell(fc.face, &col, &row);
            double sx = col * f + fc.u * f;
            double sy = row * f + fc.v * f;
            out.at(x, y) = quantize(sample_bicubic_rect(src.raster, sx, sy, col * f, row * f,
                                                        (col + 1) * f - 1, (row + 1) * f - 1));
        }
    }
    return EquirectFrame(std::move(out));
}

}  // namespace iso360
