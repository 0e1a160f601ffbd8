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

#include "isomer360/synth.hpp"

#include <cmath>

#include "isomer360/geometry.hpp"

namespace iso360 {

const char* scene_name(SceneKind k) {
    switch (k) {
        case SceneKind::flat: return "flat";
        case SceneKind::gradient: return "gradient";
        case SceneKind::noise: return "noise";
        case SceneKind::pan: return "pan";
        case SceneKind::seam: return "seam";
        case SceneKind::spheres: return "spheres";
        case SceneKind::cue: return "cue";
    }
    return "?";
}

std::optional<SceneKind> scene_from_name(const std::string& name) {
    for (SceneKind k : {SceneKind::flat, SceneKind::gradient, SceneKind::noise, SceneKind::pan,
                        SceneKind::seam, SceneKind::spheres, SceneKind::cue}) {
        if (name == scene_name(k)) return k;
    }
    return std::nullopt;
}

namespace {

uint8_t clamp_luma(double v) {
    long q = std::lround(v);
    return uint8_t(q < 0 ? 0 : (q > 255 ? 255 : q));
}

double wrap_deg(double d) {
    d = std::fmod(d + 180.0, 360.0);
    if (d < 0.0) d += 360.0;
    return d - 180.0;
}

void lonlat_of(const Vec3& d, double* lon, double* lat) {
    *lon = std::atan2(d.x, d.z) * (180.0 / kPi);
    *lat = std::asin(std::max(-1.0, std::min(1.0, d.y))) * (180.0 / kPi);
}

// Sum of random cosine plane waves over the sphere: smooth, seamless texture.
struct WaveField {
    struct Wave {
        Vec3 k;
        double freq, phase, amp;
    };
    std::vector<Wave> waves;
    double amp_sum = 0.0;

    WaveField(Pcg32& rng, int count) {
        waves.reserve(count);
        for (int i = 0; i < count; ++i) {
            Vec3 k{rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
            double n = k.norm();
            if (n < 1e-9) k = Vec3{0.0, 0.0, 1.0};
            else k = k * (1.0 / n);
            Wave w;
            w.k = k;
            w.freq = 3.0 + 6.0 * rng.next_double();
            w.phase = 2.0 * kPi * rng.next_double();
            w.amp = 0.4 + 0.6 * rng.next_double();
            waves.push_back(w);
            amp_sum += w.amp;
        }
    }

    double value(const Vec3& d) const {
        double s = 0.0;
        for (const auto& w : waves) s += w.amp * std::cos(w.freq * kPi * w.k.dot(d) + w.phase);
        return s / amp_sum;  // roughly [-1, 1]
    }
};

struct Disc {
    double lon, lat, radius, drift;
    int rings;
};

double checker_window_luma(double lon, double lat, const SceneConfig& cfg, double phase,
                           double background) {
    double dlon = wrap_deg(lon - cfg.window_lon_deg);
    if (std::abs(dlon) > cfg.window_half_deg || std::abs(lat) > cfg.window_half_deg)
        return background;
    long cx = long(std::floor((dlon + phase) / cfg.checker_period_deg));
    long cy = long(std::floor(lat / cfg.checker_period_deg));
    return ((cx + cy) & 1) ? 220.0 : 35.0;
}

}  // namespace

std::vector<EquirectFrame> make_scene(const SceneConfig& cfg) {
    if (cfg.width < 16 || cfg.width % 2 != 0) throw InputError("scene width must be even, >= 16");
    if (cfg.frames < 1) throw InputError("scene needs at least one frame");
    int w = cfg.width, h = cfg.width / 2;

    Pcg32 rng(cfg.seed, 11);
    WaveField waves(rng, 16);
    std::vector<Disc> discs;
    for (int i = 0; i < 5; ++i) {
        Disc d;
        d.lon = -180.0 + 360.0 * rng.next_double();
        d.lat = -50.0 + 100.0 * rng.next_double();
        d.radius = 10.0 + 15.0 * rng.next_double();
        d.drift = -1.5 + 3.0 * rng.next_double();
        d.rings = 3 + int(rng.next_below(4));
        discs.push_back(d);
    }

    std::vector<EquirectFrame> out;
    out.reserve(cfg.frames);
    for (int t = 0; t < cfg.frames; ++t) {
        Image8 img(w, h);
        Mat3 spin = rotation_of(Orientation{1.0 * t, 0.0});  // pan scene texture spin
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                Vec3 d = equirect_to_direction(x + 0.5, y + 0.5, w, h);
                double lon, lat;
                double v = cfg.level;
                switch (cfg.kind) {
                    case SceneKind::flat:
                        v = cfg.level;
                        break;
                    case SceneKind::gradient:
                        lonlat_of(d, &lon, &lat);
                        v = 127.5 + 100.0 * d.y + 25.0 * std::cos(2.0 * lon * (kPi / 180.0));
                        break;
                    case SceneKind::noise:
                        v = double(rng.next() & 0xFF);
                        break;
                    case SceneKind::pan:
                        v = 127.5 + 110.0 * std::tanh(2.0 * waves.value(spin * d));
                        break;
                    case SceneKind::seam:
                    case SceneKind::cue: {
                        lonlat_of(d, &lon, &lat);
                        double bg = 127.5 + 60.0 * d.y;
                        v = checker_window_luma(lon, lat, cfg, cfg.scroll_deg_per_frame * t, bg);
                        break;
                    }
                    case SceneKind::spheres: {
                        lonlat_of(d, &lon, &lat);
                        v = 127.5 + 80.0 * d.y;
                        for (const auto& disc : discs) {
                            double dl = (disc.lat) * (kPi / 180.0);
                            double dn = (disc.lon + disc.drift * t) * (kPi / 180.0);
                            Vec3 c{std::cos(dl) * std::sin(dn), std::sin(dl),
                                   std::cos(dl) * std::cos(dn)};
                            double cosang = std::max(-1.0, std::min(1.0, d.dot(c)));
                            double ang = std::acos(cosang) * (180.0 / kPi);
                            if (ang < disc.radius) {
                                v = 127.5 +
                                    100.0 * std::cos(ang / disc.radius * disc.rings * kPi);
                                break;
                            }
                        }
                        break;
                    }
                }
                img.at(x, y) = clamp_luma(v);
            }
        }
        out.emplace_back(std::move(img));
    }
    return out;
}

double cue_longitude(uint64_t seed) {
    Pcg32 rng(seed, 77);
    return -45.0 + 90.0 * rng.next_double();
}

SceneConfig make_cue_config(uint64_t seed, int width, int frames) {
    SceneConfig cfg;
    cfg.kind = SceneKind::cue;
    cfg.width = width;
    cfg.frames = frames;
    cfg.seed = seed;
    // Window opposite the cue: fully inside the back face only when yaw is
    // close to the cue longitude, so the cheap orientations track the cue.
    cfg.window_lon_deg = wrap_deg(cue_longitude(seed) + 180.0);
    cfg.window_half_deg = 35.0;
    cfg.checker_period_deg = 12.0;
    cfg.scroll_deg_per_frame = 3.0;
    return cfg;
}

Image8 make_texture_raster(int width, int height, uint64_t seed) {
    if (width < 1 || height < 1) throw InputError("raster dimensions must be positive");
    Pcg32 rng(seed, 11);
    int cw = (width >> 3) + 2, ch = (height >> 3) + 2;
    std::vector<uint8_t> coarse(size_t(cw) * ch);
    for (auto& c : coarse) c = uint8_t(rng.next() & 0xFF);

    Image8 img(width, height);
    for (int y = 0; y < height; ++y) {
        int gy = y >> 3, fy = y & 7;
        for (int x = 0; x < width; ++x) {
            int gx = x >> 3, fx = x & 7;
            int a = coarse[size_t(gy) * cw + gx];
            int b = coarse[size_t(gy) * cw + gx + 1];
            int c = coarse[size_t(gy + 1) * cw + gx];
            int d = coarse[size_t(gy + 1) * cw + gx + 1];
            img.at(x, y) = uint8_t(((8 - fx) * (8 - fy) * a + fx * (8 - fy) * b +
                                    (8 - fx) * fy * c + fx * fy * d + 32) >>
                                   6);
        }
    }
    return img;
}

std::vector<Image8> make_static_raster_clip(int width, int height, int frames, uint64_t seed) {
    Image8 base = make_texture_raster(width, height, seed);
    return std::vector<Image8>(size_t(frames), base);
}

std::vector<Image8> make_pan_raster_clip(int width, int height, int frames, int dx, int dy,
                                         uint64_t seed) {
    Image8 base = make_texture_raster(width, height, seed);
    std::vector<Image8> out;
    out.reserve(frames);
    for (int t = 0; t < frames; ++t) {
        Image8 f(width, height);
        int sx = ((t * dx) % width + width) % width;
        int sy = ((t * dy) % height + height) % height;
        for (int y = 0; y < height; ++y) {
            int yy = y - sy;
            yy = (yy % height + height) % height;
            for (int x = 0; x < width; ++x) {
                int xx = x - sx;
                xx = (xx % width + width) % width;
                f.at(x, y) = base.at(xx, yy);
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Image8> make_noise_raster_clip(int width, int height, int frames, uint64_t seed) {
    if (width < 1 || height < 1 || frames < 1) throw InputError("bad noise clip dimensions");
    Pcg32 rng(seed, 13);
    std::vector<Image8> out;
    out.reserve(frames);
    for (int t = 0; t < frames; ++t) {
        Image8 f(width, height);
        for (auto& px : f.data) px = uint8_t(rng.next() & 0xFF);
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace iso360
