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

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "isomer360/features.hpp"
#include "isomer360/synth.hpp"

using namespace iso360;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("isomer360_feat_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

// Number of 4-connected components per label; a clean segmentation has
// exactly one component for every label.
bool labels_connected(const std::vector<int>& labels, int w, int h) {
    std::set<int> seen_roots;
    std::vector<uint8_t> visited(labels.size(), 0);
    std::vector<int> stack;
    for (size_t start = 0; start < labels.size(); ++start) {
        if (visited[start]) continue;
        if (!seen_roots.insert(labels[start]).second) return false;  // label split
        stack.assign(1, int(start));
        visited[start] = 1;
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            int x = p % w, y = p / w;
            const int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};
            for (int k = 0; k < 4; ++k) {
                int nx = x + dx[k], ny = y + dy[k];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                size_t n = size_t(ny) * w + nx;
                if (!visited[n] && labels[n] == labels[p]) {
                    visited[n] = 1;
                    stack.push_back(int(n));
                }
            }
        }
    }
    return true;
}

ClipSpec clip_from_rasters(std::vector<Image8> rasters) {
    ClipSpec clip;
    int face = rasters[0].width / 3;
    for (auto& r : rasters) clip.frames.emplace_back(face, std::move(r));
    return clip;
}

MotionField field(int bw, int bh, std::vector<MotionVector> mv, std::vector<uint8_t> intra) {
    MotionField f;
    f.blocks_x = bw;
    f.blocks_y = bh;
    f.mv = std::move(mv);
    f.intra = std::move(intra);
    return f;
}

}  // namespace

TEST_CASE("SLIC on a constant face recovers the seed grid") {
    Image8 face(32, 32, 128);
    SlicParams p;
    p.superpixels_per_face = 16;
    std::vector<int> labels = slic_labels(face, p);
    REQUIRE(labels.size() == 32u * 32u);

    std::set<int> distinct(labels.begin(), labels.end());
    CHECK(distinct.size() == 16);  // spacing 8 -> 4x4 centers, pure Voronoi
    CHECK(*distinct.begin() == 0);
    CHECK(*distinct.rbegin() == 15);
    CHECK(labels_connected(labels, 32, 32));
}

TEST_CASE("SLIC on texture yields connected labels near the requested count") {
    Image8 face = make_texture_raster(64, 64, 9);
    SlicParams p;
    p.superpixels_per_face = 64;
    std::vector<int> labels = slic_labels(face, p);
    std::set<int> distinct(labels.begin(), labels.end());
    CHECK(distinct.size() >= 16);
    CHECK(distinct.size() <= 256);
    CHECK(labels_connected(labels, 64, 64));
    for (int l : labels) {
        CHECK(l >= 0);
        CHECK(l < int(distinct.size()));
    }
}

TEST_CASE("SLIC parameter validation") {
    Image8 face(8, 8, 0);
    SlicParams p;
    p.superpixels_per_face = 256;
    CHECK_THROWS_AS(slic_labels(face, p), InputError);
    p.superpixels_per_face = 0;
    CHECK_THROWS_AS(slic_labels(face, p), InputError);
    p.superpixels_per_face = 4;
    p.compactness = 0.0;
    CHECK_THROWS_AS(slic_labels(face, p), InputError);
}

TEST_CASE("contour maps trace the superpixel lattice") {
    SlicParams p;
    p.superpixels_per_face = 16;

    // Constant input degenerates SLIC to a spatial Voronoi: 16 tiles of 8x8
    // per 32x32 face, so contours are exactly the tile boundary pairs at
    // x or y in {7, 8, 15, 16, 23, 24}, repeated identically on every face.
    CubemapFrame flat(32, Image8(96, 64, 200));
    Image8 lat = slic_contours(flat, p);
    REQUIRE(lat.width == 96);
    REQUIRE(lat.height == 64);
    auto on_boundary = [](int v) { return (v % 8 == 7 && v != 31) || (v % 8 == 0 && v != 0); };
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 3; ++col)
            for (int y = 0; y < 32; ++y)
                for (int x = 0; x < 32; ++x) {
                    int want = (on_boundary(x) || on_boundary(y)) ? 1 : 0;
                    REQUIRE(lat.at(col * 32 + x, row * 32 + y) == want);
                }

    CubemapFrame textured(32, make_texture_raster(96, 64, 4));
    Image8 edges = slic_contours(textured, p);
    int ones = 0;
    for (uint8_t v : edges.data) {
        CHECK((v == 0 || v == 1));
        ones += v;
    }
    CHECK(ones > 0);
    CHECK(edges.data != lat.data);  // content bends the segmentation
}

TEST_CASE("motion feature planes follow the documented layout") {
    // 16x8 frame -> 2x1 blocks; 3 frames, hand-built fields.
    const int bw = 2, bh = 1;
    EncodeResult fwd, bwd;
    fwd.motion = {
        field(bw, bh, {{0, 0, 0}, {0, 0, 0}}, {1, 1}),   // frame 0: all intra
        field(bw, bh, {{3, -2, -1}, {0, 0, 0}}, {0, 1}), // frame 1: inter, intra
        field(bw, bh, {{-5, 7, -1}, {1, 1, -1}}, {0, 0}),
    };
    // Reversed order: bwd.motion[k] covers source frame 2-k.
    bwd.motion = {
        field(bw, bh, {{0, 0, 0}, {0, 0, 0}}, {1, 1}),   // source frame 2
        field(bw, bh, {{4, 4, -1}, {0, 0, 0}}, {0, 1}),  // source frame 1
        field(bw, bh, {{-6, 2, -1}, {9, 9, -1}}, {0, 0}),// source frame 0
    };

    auto m = motion_features(fwd, bwd, 16, 8);
    REQUIRE(m.size() == 3);
    const size_t plane = 2;
    for (const auto& f : m) REQUIRE(f.size() == 6 * plane);

    // Frame 0: forward planes zero, backward comes from bwd.motion[2].
    for (size_t b = 0; b < 3 * plane; ++b) CHECK(m[0][b] == 0.0f);
    CHECK(m[0][3 * plane + 0] == -6.0f);
    CHECK(m[0][4 * plane + 0] == 2.0f);
    CHECK(m[0][5 * plane + 0] == 1.0f);
    CHECK(m[0][3 * plane + 1] == 9.0f);
    CHECK(m[0][5 * plane + 1] == 1.0f);

    // Frame 1: forward block 0 carries (3, -2, -1); intra block 1 stays zero.
    CHECK(m[1][0] == 3.0f);
    CHECK(m[1][plane + 0] == -2.0f);
    CHECK(m[1][2 * plane + 0] == -1.0f);
    CHECK(m[1][1] == 0.0f);
    CHECK(m[1][2 * plane + 1] == 0.0f);
    CHECK(m[1][3 * plane + 0] == 4.0f);
    CHECK(m[1][5 * plane + 1] == 0.0f);  // intra in the backward encode

    // Frame 2: forward from fwd.motion[2], backward all zero (last frame).
    CHECK(m[2][0] == -5.0f);
    CHECK(m[2][plane + 1] == 1.0f);
    for (size_t b = 3 * plane; b < 6 * plane; ++b) CHECK(m[2][b] == 0.0f);
}

TEST_CASE("motion feature validation") {
    EncodeResult fwd, bwd;
    CHECK_THROWS_AS(motion_features(fwd, bwd, 16, 8), InputError);
    fwd.motion = {field(2, 1, {{}, {}}, {1, 1})};
    bwd.motion = {field(2, 1, {{}, {}}, {1, 1}), field(2, 1, {{}, {}}, {1, 1})};
    CHECK_THROWS_AS(motion_features(fwd, bwd, 16, 8), InputError);
    bwd.motion.pop_back();
    CHECK_THROWS_AS(motion_features(fwd, bwd, 24, 8), InputError);  // wrong block count
}

TEST_CASE("feature tensors have the documented shape and ranges") {
    ClipSpec clip = clip_from_rasters(make_static_raster_clip(96, 64, 8, 12));
    FeatureTensor t = build_features(clip);

    CHECK(t.segments == 4);
    CHECK(t.channels == 7);
    CHECK(t.height == 8);
    CHECK(t.width == 12);
    REQUIRE(t.data.size() == size_t(4) * 7 * 8 * 12);

    for (int s = 0; s < 4; ++s)
        for (int y = 0; y < t.height; ++y)
            for (int x = 0; x < t.width; ++x) {
                CHECK(t.at(s, 0, y, x) >= 0.0f);
                CHECK(t.at(s, 0, y, x) <= 1.0f);
                // Static content: no displacement anywhere.
                CHECK(t.at(s, 1, y, x) == 0.0f);
                CHECK(t.at(s, 2, y, x) == 0.0f);
                CHECK(t.at(s, 4, y, x) == 0.0f);
                CHECK(t.at(s, 5, y, x) == 0.0f);
            }

    // dt averages pin the temporal quarters: 8 frames -> quarters of 2.
    // Forward: frame 0 is a boundary, so quarter 0 averages (0 - 1) / 2.
    CHECK(t.at(0, 3, 4, 6) == -0.5f);
    CHECK(t.at(1, 3, 4, 6) == -1.0f);
    CHECK(t.at(3, 3, 4, 6) == -1.0f);
    // Backward: frame 7 is a boundary, so quarter 3 averages (1 + 0) / 2.
    CHECK(t.at(0, 6, 4, 6) == 1.0f);
    CHECK(t.at(3, 6, 4, 6) == 0.5f);
}

TEST_CASE("uneven frame counts split at floor(i*n/4)") {
    // 5 frames: quarters are {0}, {1}, {2}, {3, 4}.
    ClipSpec clip = clip_from_rasters(make_static_raster_clip(48, 32, 5, 2));
    FeatureTensor t = build_features(clip);
    CHECK(t.at(0, 3, 2, 3) == 0.0f);   // only the boundary frame
    CHECK(t.at(1, 3, 2, 3) == -1.0f);
    CHECK(t.at(3, 3, 2, 3) == -1.0f);  // frames 3 and 4, both inter
    CHECK(t.at(0, 6, 2, 3) == 1.0f);
    CHECK(t.at(3, 6, 2, 3) == 0.5f);   // frame 4 is the backward boundary
}

TEST_CASE("panning clips produce signed displacements in both directions") {
    ClipSpec clip = clip_from_rasters(make_pan_raster_clip(96, 64, 8, 8, 0, 3));
    FeatureTensor t = build_features(clip);
    // Quarter 2 holds frames 4 and 5: interior blocks track the pan exactly,
    // forward +8 against the previous frame, backward -8 against the next.
    CHECK(t.at(2, 1, 4, 6) == 8.0f);
    CHECK(t.at(2, 2, 4, 6) == 0.0f);
    CHECK(t.at(2, 3, 4, 6) == -1.0f);
    CHECK(t.at(2, 4, 4, 6) == -8.0f);
    CHECK(t.at(2, 5, 4, 6) == 0.0f);
    CHECK(t.at(2, 6, 4, 6) == 1.0f);
}

TEST_CASE("feature extraction is deterministic") {
    ClipSpec clip = clip_from_rasters(make_pan_raster_clip(48, 32, 4, 2, 1, 6));
    FeatureTensor a = build_features(clip);
    FeatureTensor b = build_features(clip);
    CHECK(a.data == b.data);
}

TEST_CASE("feature extraction validation") {
    ClipSpec three = clip_from_rasters(make_static_raster_clip(48, 32, 3, 1));
    CHECK_THROWS_AS(build_features(three), InputError);

    // Face 12 -> 36x24 raster, width not divisible by 8.
    ClipSpec rough = clip_from_rasters(make_static_raster_clip(36, 24, 4, 1));
    CHECK_THROWS_AS(build_features(rough), InputError);

    ClipSpec clip = clip_from_rasters(make_static_raster_clip(48, 32, 4, 1));
    ClipSpec longer = clip_from_rasters(make_static_raster_clip(48, 32, 6, 1));
    std::vector<Image8> rasters;
    for (const auto& f : longer.frames) rasters.push_back(f.raster);
    EncodeResult mismatched = encode_reference_rasters(rasters);
    CHECK_THROWS_AS(build_feature_tensor(clip, mismatched), InputError);
}

TEST_CASE("explicit forward encodes match the convenience path") {
    ClipSpec clip = clip_from_rasters(make_pan_raster_clip(48, 32, 4, 3, -1, 7));
    std::vector<Image8> rasters;
    for (const auto& f : clip.frames) rasters.push_back(f.raster);
    EncodeResult forward = encode_reference_rasters(rasters);
    FeatureTensor a = build_feature_tensor(clip, forward);
    FeatureTensor b = build_features(clip);
    CHECK(a.data == b.data);
}

TEST_CASE("feature tensors round-trip through the binary format") {
    TempDir dir;
    ClipSpec clip = clip_from_rasters(make_pan_raster_clip(48, 32, 4, 2, 0, 5));
    FeatureTensor t = build_features(clip);

    write_feature_tensor(t, dir.file("f.bin"), dir.file("f.json"), "clip-7");
    FeatureTensor back = read_feature_tensor(dir.file("f.bin"), dir.file("f.json"));
    CHECK(back.segments == t.segments);
    CHECK(back.channels == t.channels);
    CHECK(back.height == t.height);
    CHECK(back.width == t.width);
    CHECK(back.data == t.data);

    std::ifstream js(dir.file("f.json"));
    nlohmann::json j = nlohmann::json::parse(js);
    CHECK(j["clip_id"] == "clip-7");
    CHECK(j["dtype"] == "float32le");
    REQUIRE(j["channel_names"].size() == 7);
    CHECK(j["channel_names"][0] == "contour");
    CHECK(j["channel_names"][6] == "bwd_dt");
    CHECK(j["height"] == t.height);

    // The sidecar implies more floats than the truncated payload holds.
    std::ofstream trunc(dir.file("short.bin"), std::ios::binary);
    trunc.write("\0\0\0", 3);
    trunc.close();
    CHECK_THROWS_AS(read_feature_tensor(dir.file("short.bin"), dir.file("f.json")), InputError);
    CHECK_THROWS_AS(read_feature_tensor(dir.file("f.bin"), dir.file("absent.json")), InputError);
    std::ofstream(dir.file("bad.json")) << "{not json";
    CHECK_THROWS_AS(read_feature_tensor(dir.file("f.bin"), dir.file("bad.json")), InputError);
}
