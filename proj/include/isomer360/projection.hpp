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

#include <vector>

#include "isomer360/image.hpp"

namespace iso360 {

/// Renders one equirectangular frame into a 2x3-packed cubemap at orientation
/// `o`. Every output pixel samples the source with Catmull-Rom bicubic
/// interpolation (longitude wraps, latitude rows clamp at the poles).
CubemapFrame project(const EquirectFrame& src, const Orientation& o, int face_size);

/// Value of a single cubemap output pixel; `project` is this map applied per
/// pixel, so callers may evaluate pixels in any order with identical results.
uint8_t project_pixel(const EquirectFrame& src, const Orientation& o, int face_size, int x, int y);

/// Per-frame `project` over a clip; frames must share dimensions.
std::vector<CubemapFrame> project_clip(const std::vector<EquirectFrame>& frames,
                                       const Orientation& o, int face_size);

/// Inverse rendering, used for round-trip checks: samples the cubemap back
/// into an equirectangular raster. Bicubic taps clamp at face borders.
EquirectFrame project_to_equirect(const CubemapFrame& src, const Orientation& o, int width,
                                  int height);

/// Catmull-Rom (a = -0.5) sampling of an equirectangular raster at continuous
/// pixel coordinates; x wraps modulo width, y clamps.
double sample_bicubic_wrap(const Image8& img, double sx, double sy);

}  // namespace iso360
