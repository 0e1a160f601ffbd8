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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "isomer360/synth.hpp"

using namespace iso360;

namespace {

double wrap180(double d) {
    d = std::fmod(d + 180.0, 360.0);
    if (d < 0.0) d += 360.0;
    return d - 180.0;
}

double row_mean(const Image8& img, int y) {
    double s = 0.0;
    for (int x = 0; x < img.width; ++x) s += img.at(x, y);
    return s / img.width;
}

bool frames_equal(const EquirectFrame& a, const EquirectFrame& b) {
    return a.luma.width == b.luma.width && a.luma.height == b.luma.height &&
           a.luma.data == b.luma.data;
}

}  // namespace

TEST_CASE("scene names round-trip") {
    for (SceneKind k : {SceneKind::flat, SceneKind::gradient, SceneKind::noise, SceneKind::pan,
                        SceneKind::seam, SceneKind::spheres, SceneKind::cue}) {
        auto back = scene_from_name(scene_name(k));
        REQUIRE(back.has_value());
        CHECK(*back == k);
    }
    CHECK_FALSE(scene_from_name("checker").has_value());
    CHECK_FALSE(scene_from_name("").has_value());
}

TEST_CASE("scene validation") {
    SceneConfig cfg;
    cfg.width = 15;
    CHECK_THROWS_AS(make_scene(cfg), InputError);
    cfg.width = 14;
    CHECK_THROWS_AS(make_scene(cfg), InputError);
    cfg.width = 64;
    cfg.frames = 0;
    CHECK_THROWS_AS(make_scene(cfg), InputError);
}

TEST_CASE("scenes are deterministic and equirect-shaped") {
    for (SceneKind k : {SceneKind::flat, SceneKind::gradient, SceneKind::noise, SceneKind::pan,
                        SceneKind::seam, SceneKind::spheres, SceneKind::cue}) {
        SceneConfig cfg;
        cfg.kind = k;
        cfg.width = 32;
        cfg.frames = 2;
        cfg.seed = 7;
        auto a = make_scene(cfg);
        auto b = make_scene(cfg);
        REQUIRE(a.size() == 2);
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].width() == 32);
            CHECK(a[i].height() == 16);
            CHECK(frames_equal(a[i], b[i]));
        }
    }
}

TEST_CASE("flat scenes are constant at the configured level") {
    SceneConfig cfg;
    cfg.kind = SceneKind::flat;
    cfg.width = 32;
    cfg.frames = 3;
    cfg.level = 96.0;
    auto clip = make_scene(cfg);
    for (const auto& f : clip)
        for (uint8_t v : f.luma.data) CHECK(v == 96);
    CHECK(frames_equal(clip[0], clip[2]));
}

TEST_CASE("gradient scenes are bright at the zenith and static in time") {
    SceneConfig cfg;
    cfg.kind = SceneKind::gradient;
    cfg.width = 64;
    cfg.frames = 2;
    auto clip = make_scene(cfg);
    const Image8& img = clip[0].luma;
    CHECK(row_mean(img, 0) > row_mean(img, img.height - 1) + 100.0);
    CHECK(frames_equal(clip[0], clip[1]));
}

TEST_CASE("noise scenes decorrelate across frames") {
    SceneConfig cfg;
    cfg.kind = SceneKind::noise;
    cfg.width = 32;
    cfg.frames = 2;
    cfg.seed = 3;
    auto clip = make_scene(cfg);
    CHECK_FALSE(frames_equal(clip[0], clip[1]));
    double m = 0.0;
    for (uint8_t v : clip[0].luma.data) m += v;
    m /= double(clip[0].luma.data.size());
    CHECK(m > 96.0);
    CHECK(m < 160.0);
}

TEST_CASE("pan scenes move and stay in range") {
    SceneConfig cfg;
    cfg.kind = SceneKind::pan;
    cfg.width = 64;
    cfg.frames = 3;
    cfg.seed = 9;
    auto clip = make_scene(cfg);
    CHECK_FALSE(frames_equal(clip[0], clip[1]));
    int lo = 255, hi = 0;
    for (uint8_t v : clip[0].luma.data) {
        lo = std::min(lo, int(v));
        hi = std::max(hi, int(v));
    }
    CHECK(hi - lo > 40);  // textured, not flat
}

TEST_CASE("seam scenes paint a checker window that scrolls") {
    SceneConfig cfg;
    cfg.kind = SceneKind::seam;
    cfg.width = 128;
    cfg.frames = 4;
    auto clip = make_scene(cfg);
    const Image8& f0 = clip[0].luma;

    // Pixel (124, 32) sits near longitude 170 and the equator: inside the
    // default window, so it takes a checker value.
    int v = f0.at(124, 32);
    CHECK((v == 220 || v == 35));

    // Both checker phases appear somewhere in the window.
    bool saw_dark = false, saw_light = false;
    for (uint8_t px : f0.data) {
        saw_dark = saw_dark || px == 35;
        saw_light = saw_light || px == 220;
    }
    CHECK(saw_dark);
    CHECK(saw_light);

    // Scrolling changes the window over time but leaves the far side alone.
    CHECK_FALSE(frames_equal(clip[0], clip[3]));
    for (int y = 0; y < f0.height; ++y)
        CHECK(f0.at(63, y) == clip[3].luma.at(63, y));  // column near longitude 0
}

TEST_CASE("cue longitudes are seeded, bounded and planted opposite the window") {
    for (uint64_t seed : {0ull, 1ull, 7ull, 42ull, 1234ull}) {
        double cue = cue_longitude(seed);
        CHECK(cue >= -45.0);
        CHECK(cue < 45.0);
        CHECK(cue == cue_longitude(seed));

        SceneConfig cfg = make_cue_config(seed);
        CHECK(cfg.kind == SceneKind::cue);
        CHECK(cfg.width == 256);
        CHECK(cfg.frames == 16);
        CHECK(cfg.seed == seed);
        CHECK(cfg.window_half_deg == doctest::Approx(35.0));
        CHECK(std::abs(wrap180(cfg.window_lon_deg - 180.0) - cue) < 1e-9);
    }
    CHECK(cue_longitude(1) != cue_longitude(2));

    SceneConfig small = make_cue_config(5, 64, 4);
    CHECK(small.width == 64);
    CHECK(small.frames == 4);
}

TEST_CASE("texture rasters are smooth and seeded") {
    Image8 img = make_texture_raster(48, 40, 5);
    REQUIRE(img.width == 48);
    REQUIRE(img.height == 40);
    // Bilinear upsampling from an 8x coarse grid bounds neighbor steps by
    // 255 / 8 plus rounding.
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (x + 1 < img.width) CHECK(std::abs(img.at(x + 1, y) - img.at(x, y)) <= 33);
            if (y + 1 < img.height) CHECK(std::abs(img.at(x, y + 1) - img.at(x, y)) <= 33);
        }

    Image8 again = make_texture_raster(48, 40, 5);
    CHECK(img.data == again.data);
    Image8 other = make_texture_raster(48, 40, 6);
    CHECK(img.data != other.data);

    CHECK_THROWS_AS(make_texture_raster(0, 8, 1), InputError);
    CHECK_THROWS_AS(make_texture_raster(8, -1, 1), InputError);
}

TEST_CASE("static raster clips repeat one texture") {
    auto clip = make_static_raster_clip(24, 16, 3, 8);
    REQUIRE(clip.size() == 3);
    Image8 base = make_texture_raster(24, 16, 8);
    for (const auto& f : clip) CHECK(f.data == base.data);
}

TEST_CASE("pan raster clips shift the base texture with wraparound") {
    const int w = 24, h = 16, dx = 3, dy = -2;
    auto clip = make_pan_raster_clip(w, h, 3, dx, dy, 8);
    Image8 base = make_texture_raster(w, h, 8);
    REQUIRE(clip.size() == 3);
    CHECK(clip[0].data == base.data);
    for (int t = 1; t < 3; ++t) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int sx = ((x - t * dx) % w + w) % w;
                int sy = ((y - t * dy) % h + h) % h;
                REQUIRE(clip[t].at(x, y) == base.at(sx, sy));
            }
    }
}

TEST_CASE("noise raster clips differ frame to frame") {
    auto clip = make_noise_raster_clip(16, 12, 2, 3);
    REQUIRE(clip.size() == 2);
    CHECK(clip[0].data != clip[1].data);
    CHECK_THROWS_AS(make_noise_raster_clip(0, 12, 2, 3), InputError);
    CHECK_THROWS_AS(make_noise_raster_clip(16, 12, 0, 3), InputError);
}
