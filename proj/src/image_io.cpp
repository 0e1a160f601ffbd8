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

#include "isomer360/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace iso360 {

namespace fs = std::filesystem;

void face_cell(Face f, int* col, int* row) {
    switch (f) {
        case Face::left: *col = 0; *row = 0; break;
        case Face::front: *col = 1; *row = 0; break;
        case Face::right: *col = 2; *row = 0; break;
        case Face::down: *col = 0; *row = 1; break;
        case Face::back: *col = 1; *row = 1; break;
        case Face::up: *col = 2; *row = 1; break;
    }
}

Face face_in_cell(int col, int row) {
    static const Face kCells[2][3] = {{Face::left, Face::front, Face::right},
                                      {Face::down, Face::back, Face::up}};
    return kCells[row][col];
}

Face face_at(const CubemapFrame& frame, int x, int y, int* fx, int* fy) {
    int f = frame.face_size;
    int col = x / f, row = y / f;
    *fx = x - col * f;
    *fy = y - row * f;
    return face_in_cell(col, row);
}

namespace {

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

}  // namespace

Image8 read_png(const std::string& path) {
    PngReadCloser c;
    c.fp = std::fopen(path.c_str(), "rb");
    if (!c.fp) throw InputError("cannot open PNG for reading: " + path);
    c.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    c.info = png_create_info_struct(c.png);
    if (!c.png || !c.info) throw InternalError("libpng init failed");
    if (setjmp(png_jmpbuf(c.png))) throw InputError("corrupt PNG file: " + path);

    png_init_io(c.png, c.fp);
    png_read_info(c.png, c.info);
    png_uint_32 w = png_get_image_width(c.png, c.info);
    png_uint_32 h = png_get_image_height(c.png, c.info);
    int color = png_get_color_type(c.png, c.info);
    int depth = png_get_bit_depth(c.png, c.info);

    if (depth == 16) png_set_strip_16(c.png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(c.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(c.png);
    if (png_get_valid(c.png, c.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(c.png);
    png_set_strip_alpha(c.png);
    png_read_update_info(c.png, c.info);

    int channels = png_get_channels(c.png, c.info);
    std::vector<uint8_t> row(size_t(w) * channels);
    Image8 img{int(w), int(h)};
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(c.png, row.data(), nullptr);
        if (channels == 1) {
            std::memcpy(&img.data[size_t(y) * w], row.data(), w);
        } else {
            // integer BT.601 luma
            for (png_uint_32 x = 0; x < w; ++x) {
                int r = row[size_t(x) * channels], g = row[size_t(x) * channels + 1],
                    b = row[size_t(x) * channels + 2];
                img.data[size_t(y) * w + x] = uint8_t((77 * r + 150 * g + 29 * b + 128) >> 8);
            }
        }
    }
    return img;
}

void write_png(const Image8& img, const std::string& path) {
    PngWriteCloser c;
    c.fp = std::fopen(path.c_str(), "wb");
    if (!c.fp) throw InputError("cannot open PNG for writing: " + path);
    c.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    c.info = png_create_info_struct(c.png);
    if (!c.png || !c.info) throw InternalError("libpng init failed");
    if (setjmp(png_jmpbuf(c.png))) throw InputError("PNG write failed: " + path);

    png_init_io(c.png, c.fp);
    png_set_IHDR(c.png, c.info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(c.png, c.info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(c.png, const_cast<png_bytep>(&img.data[size_t(y) * img.width]));
    png_write_end(c.png, nullptr);
}

namespace {

// fps as a reduced rational for the y4m header
void fps_to_ratio(double fps, long* num, long* den) {
    *den = 1000;
    *num = std::lround(fps * 1000.0);
    long g = std::gcd(*num, *den);
    if (g > 0) {
        *num /= g;
        *den /= g;
    }
}

}  // namespace

void write_y4m(const std::vector<Image8>& frames, double fps, const std::string& path,
               Y4mColorspace cs) {
    if (frames.empty()) throw InputError("cannot write empty y4m stream");
    int w = frames[0].width, h = frames[0].height;
    for (const auto& f : frames)
        if (f.width != w || f.height != h)
            throw InputError("y4m frames must have uniform dimensions");
    if (cs == Y4mColorspace::c420 && (w % 2 || h % 2))
        throw InputError("C420 y4m output requires even dimensions");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open y4m for writing: " + path);
    long num, den;
    fps_to_ratio(fps, &num, &den);
    out << "YUV4MPEG2 W" << w << " H" << h << " F" << num << ":" << den << " Ip A1:1 C"
        << (cs == Y4mColorspace::mono ? "mono" : "420jpeg") << "\n";
    std::vector<uint8_t> chroma;
    if (cs == Y4mColorspace::c420) chroma.assign(size_t(w / 2) * (h / 2), 128);
    for (const auto& f : frames) {
        out << "FRAME\n";
        out.write(reinterpret_cast<const char*>(f.data.data()), std::streamsize(f.data.size()));
        if (cs == Y4mColorspace::c420) {
            out.write(reinterpret_cast<const char*>(chroma.data()), std::streamsize(chroma.size()));
            out.write(reinterpret_cast<const char*>(chroma.data()), std::streamsize(chroma.size()));
        }
    }
    if (!out) throw InputError("y4m write failed: " + path);
}

FrameSequence read_y4m(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open y4m for reading: " + path);
    std::string header;
    std::getline(in, header);
    if (header.rfind("YUV4MPEG2", 0) != 0) throw InputError("not a YUV4MPEG2 stream: " + path);

    int w = 0, h = 0;
    long fn = 30, fd = 1;
    std::string cspace = "420";
    std::istringstream hs(header);
    std::string tok;
    hs >> tok;  // magic
    while (hs >> tok) {
        if (tok[0] == 'W') w = std::stoi(tok.substr(1));
        else if (tok[0] == 'H') h = std::stoi(tok.substr(1));
        else if (tok[0] == 'F') {
            size_t colon = tok.find(':');
            fn = std::stol(tok.substr(1, colon - 1));
            fd = std::stol(tok.substr(colon + 1));
        } else if (tok[0] == 'C') cspace = tok.substr(1);
    }
    if (w <= 0 || h <= 0) throw InputError("y4m header missing dimensions: " + path);

    size_t luma = size_t(w) * h;
    size_t chroma;
    if (cspace.rfind("mono", 0) == 0) chroma = 0;
    else if (cspace.rfind("420", 0) == 0) chroma = 2 * (size_t(w / 2) * (h / 2));
    else if (cspace.rfind("422", 0) == 0) chroma = 2 * (size_t(w / 2) * h);
    else if (cspace.rfind("444", 0) == 0) chroma = 2 * luma;
    else throw InputError("unsupported y4m colorspace C" + cspace);

    FrameSequence seq;
    seq.fps = fd > 0 ? double(fn) / double(fd) : 30.0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("FRAME", 0) != 0) {
            if (line.empty()) continue;
            throw InputError("malformed y4m frame marker in " + path);
        }
        Image8 img(w, h);
        in.read(reinterpret_cast<char*>(img.data.data()), std::streamsize(luma));
        if (size_t(in.gcount()) != luma) throw InputError("truncated y4m frame in " + path);
        in.ignore(std::streamsize(chroma));
        seq.frames.push_back(std::move(img));
    }
    if (seq.frames.empty()) throw InputError("y4m stream contains no frames: " + path);
    return seq;
}

FrameSequence load_frames(const std::string& path, double fallback_fps) {
    fs::path p(path);
    if (!fs::exists(p)) throw InputError("input path does not exist: " + path);
    if (fs::is_directory(p)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(p))
            if (e.path().extension() == ".png") files.push_back(e.path());
        if (files.empty()) throw InputError("no .png frames in directory: " + path);
        std::sort(files.begin(), files.end());
        FrameSequence seq;
        seq.fps = fallback_fps;
        for (const auto& f : files) seq.frames.push_back(read_png(f.string()));
        int w = seq.frames[0].width, h = seq.frames[0].height;
        for (const auto& f : seq.frames)
            if (f.width != w || f.height != h)
                throw InputError("frame dimensions differ inside: " + path);
        return seq;
    }
    return read_y4m(path);
}

void save_frames(const std::vector<Image8>& frames, double fps, const std::string& path) {
    fs::path p(path);
    if (p.extension() == ".y4m") {
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        write_y4m(frames, fps, path);
        return;
    }
    fs::create_directories(p);
    char name[32];
    for (size_t i = 0; i < frames.size(); ++i) {
        std::snprintf(name, sizeof(name), "frame_%06zu.png", i);
        write_png(frames[i], (p / name).string());
    }
}

}  // namespace iso360
