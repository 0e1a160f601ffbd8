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

#include <string>
#include <vector>

#include "isomer360/image.hpp"

namespace iso360 {

/// A loaded frame sequence plus its frame rate. Frames are uniform-sized.
struct FrameSequence {
    double fps = 30.0;
    std::vector<Image8> frames;
};

// --- PNG (8-bit grayscale; color inputs are converted to luma) ---

Image8 read_png(const std::string& path);
void write_png(const Image8& img, const std::string& path);

// --- YUV4MPEG2 streams ---

enum class Y4mColorspace { mono, c420 };

/// Writes a y4m stream; c420 emits neutral chroma planes so that external
/// encoders without monochrome support accept the file.
void write_y4m(const std::vector<Image8>& frames, double fps, const std::string& path,
               Y4mColorspace cs = Y4mColorspace::mono);

/// Reads the luma plane of a y4m stream (Cmono/C420*/C422/C444 accepted).
FrameSequence read_y4m(const std::string& path);

// --- Directory-or-stream frontends used by the CLI ---

/// Loads frames from a .y4m file or a directory of .png files (sorted by name).
FrameSequence load_frames(const std::string& path, double fallback_fps = 30.0);

/// Saves frames to a .y4m file or, when `path` has no .y4m suffix, to
/// `path/frame_NNNNNN.png`.
void save_frames(const std::vector<Image8>& frames, double fps, const std::string& path);

}  // namespace iso360
