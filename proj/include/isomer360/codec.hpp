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

#include "isomer360/image.hpp"

namespace iso360 {

enum class CodecId { h264, hevc, vp9, reference };

const char* codec_name(CodecId c);
std::optional<CodecId> codec_from_name(const std::string& name);

/// One independently encoded unit: a 2-second run of cubemap frames (GOP =
/// clip, one intra frame per clip). Trailing clips shorter than
/// fps * clip_seconds are kept but flagged partial.
struct ClipSpec {
    std::vector<CubemapFrame> frames;
    double fps = 30.0;
    double clip_seconds = 2.0;
    bool partial = false;
};

std::vector<ClipSpec> split_clips(const std::vector<CubemapFrame>& frames, double fps,
                                  double clip_seconds = 2.0);

/// Block motion vector: content displacement from the reference frame to the
/// current frame (reference block sits at current position minus (dx, dy));
/// dt is the signed frame offset of the reference frame (-1 for forward
/// encodes, +1 when derived from a reversed encode, 0 for intra blocks).
struct MotionVector {
    int16_t dx = 0, dy = 0, dt = 0;
};

/// Per-frame forward motion field on the 8x8 block grid, plus the per-block
/// intra/inter mode map.
struct MotionField {
    int blocks_x = 0, blocks_y = 0;
    std::vector<MotionVector> mv;
    std::vector<uint8_t> intra;

    const MotionVector& at(int bx, int by) const { return mv[size_t(by) * blocks_x + bx]; }
    bool is_intra(int bx, int by) const { return intra[size_t(by) * blocks_x + bx] != 0; }
};

struct EncodeResult {
    CodecId codec = CodecId::reference;
    uint64_t bytes = 0;
    /// Motion fields and per-frame byte attribution; reference codec only.
    std::vector<MotionField> motion;
    std::vector<uint64_t> frame_bytes;
    std::vector<uint8_t> bitstream;
};

// --- built-in deterministic lossless codec ---
//
// Luma only. First frame intra with median-edge (left/top/top-left) predictor
// residuals. Later frames: 8x8 blocks, full-search motion estimation over
// +/-16 px in the previous frame by SAD, intra fallback when the best SAD
// exceeds the block's intra residual cost. Motion vectors delta-coded against
// the median of left/top/top-right neighbors. Every symbol goes through an
// adaptive binary arithmetic coder with integer-only arithmetic, so encoded
// sizes reproduce exactly across platforms.
//
// Bitstream: magic "I3RC", version u8, width u16le, height u16le,
// frame count u32le, then the arithmetic-coded payload.

EncodeResult encode_reference(const ClipSpec& clip);
EncodeResult encode_reference_rasters(const std::vector<Image8>& frames);
std::vector<Image8> decode_reference(const std::vector<uint8_t>& bitstream);

constexpr int kRefBlockSize = 8;
constexpr int kRefSearchRange = 16;

// --- external standard encoders (sizes only; bitstreams are never parsed) ---

/// Exact per-encoder parameter strings passed to ffmpeg.
const char* external_codec_flags(CodecId c);

/// Encodes via ffmpeg (x264/x265/libvpx) in lossless mode, audio disabled,
/// and reports the raw bitstream byte count. Missing tool -> environment
/// error; nonzero exit -> encode error carrying the captured log.
EncodeResult encode_external(const ClipSpec& clip, CodecId codec);

bool external_encoder_available();

/// project_clip + encode at one orientation: the atomic oracle measurement.
uint64_t size_at(const std::vector<EquirectFrame>& clip, const Orientation& o, CodecId codec,
                 int face_size, double fps = 30.0);

}  // namespace iso360
