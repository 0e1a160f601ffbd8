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

#include <optional>
#include <string>
#include <vector>

#include "isomer360/common.hpp"
#include "isomer360/image.hpp"

namespace iso360 {

/// Procedural equirectangular test scenes. Everything is a function of
/// (direction, time, seed), so clips are resolution independent and
/// reproducible from the seed alone.
///
///   flat      constant luma
///   gradient  static smooth ramp over the sphere
///   noise     per-pixel uniform noise, redrawn every frame
///   pan       smooth wave texture rotating about the vertical axis
///   seam      scrolling checkerboard inside a fixed angular window whose
///             placement straddles cube-face borders at some orientations
///   spheres   ring-textured discs drifting over a gradient background
///   cue       seam window re-centered opposite a seeded longitude, used as a
///             planted, learnable compressibility cue
enum class SceneKind { flat, gradient, noise, pan, seam, spheres, cue };

const char* scene_name(SceneKind k);
std::optional<SceneKind> scene_from_name(const std::string& name);

struct SceneConfig {
    SceneKind kind = SceneKind::seam;
    int width = 512;  ///< equirect width; height = width / 2
    int frames = 48;
    double fps = 30.0;
    uint64_t seed = 0;

    double level = 128.0;  ///< flat luma / background mid-level

    // window scenes (seam, cue)
    double window_lon_deg = 170.0;  ///< window center longitude
    double window_half_deg = 25.0;  ///< half extent in both angles
    double checker_period_deg = 8.0;
    double scroll_deg_per_frame = 1.5;
};

std::vector<EquirectFrame> make_scene(const SceneConfig& cfg);

/// Cue-scene config for one corpus member: the cue longitude is drawn
/// uniformly from [-45, 45] out of the seed, and the checker window is
/// centered at cue + 180 so the cheap yaw range tracks the cue.
SceneConfig make_cue_config(uint64_t seed, int width = 256, int frames = 16);

/// The cue longitude make_cue_config(seed, ...) plants.
double cue_longitude(uint64_t seed);

// --- raster-level clips for codec tests (integer-only, fully portable) ---

/// Smooth random texture: coarse seeded bytes upsampled 8x bilinearly with
/// integer arithmetic.
Image8 make_texture_raster(int width, int height, uint64_t seed);

/// frames copies of one texture; encodes to an all-zero motion field.
std::vector<Image8> make_static_raster_clip(int width, int height, int frames, uint64_t seed);

/// Texture translated by (dx, dy) pixels per frame with wraparound, so every
/// interior block has an exact motion match at (dx, dy).
std::vector<Image8> make_pan_raster_clip(int width, int height, int frames, int dx, int dy,
                                         uint64_t seed);

/// Per-pixel uniform noise, redrawn each frame.
std::vector<Image8> make_noise_raster_clip(int width, int height, int frames, uint64_t seed);

}  // namespace iso360
