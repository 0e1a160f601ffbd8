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

#include <array>
#include <string>
#include <vector>

#include "isomer360/codec.hpp"
#include "isomer360/image.hpp"

namespace iso360 {

struct SlicParams {
    int superpixels_per_face = 256;
    double compactness = 1.0;  ///< m; weight of spatial vs intensity distance
    int iterations = 10;
};

/// Predictor input: 4 temporal segments x 7 channels at 1/8 the cubemap
/// resolution. Channel order: contour, forward dx/dy/dt, backward dx/dy/dt.
/// Contour values lie in [0,1]; dx/dy are block displacements in pixels
/// (|v| <= search range); dt is the signed reference-frame offset (-1
/// forward, +1 backward, 0 for intra blocks and boundary frames).
struct FeatureTensor {
    int segments = 4;
    int channels = 7;
    int height = 0;  ///< cubemap height / 8
    int width = 0;   ///< cubemap width / 8
    std::vector<float> data;  ///< [segment][channel][y][x]

    float at(int s, int c, int y, int x) const {
        return data[((size_t(s) * channels + c) * height + y) * width + x];
    }
    float& at(int s, int c, int y, int x) {
        return data[((size_t(s) * channels + c) * height + y) * width + x];
    }
};

extern const std::array<const char*, 7> kFeatureChannelNames;

/// SLIC superpixel labels for one face raster (grayscale, from scratch).
/// Returns labels in [0, n); approximately `superpixels_per_face` survive
/// connectivity enforcement. Errors when the face has fewer pixels than the
/// requested superpixel count.
std::vector<int> slic_labels(const Image8& face, const SlicParams& p);

/// Binary contour map of a packed cubemap frame: each face segmented
/// independently, pixel = 1 iff some 4-neighbor inside the same face carries
/// a different label.
Image8 slic_contours(const CubemapFrame& frame, const SlicParams& p);

/// Per-frame 6-channel motion maps at block (1/8) resolution, plane-major
/// [fdx, fdy, fdt, bdx, bdy, bdt]. Forward vectors come from the
/// natural-order encode (reference = previous frame, dt = -1); backward
/// vectors from the reversed-order encode, re-aligned to source frame order
/// (reference = next frame, dt = +1). Intra blocks, the first frame
/// (forward) and the last frame (backward) are zero.
std::vector<std::vector<float>> motion_features(const EncodeResult& forward,
                                                const EncodeResult& backward, int frame_width,
                                                int frame_height);

/// Full tensor from a clip and its natural-order reference encode; the
/// reversed-order encode runs internally. Contours are max-pooled 8x8, then
/// every channel is averaged per temporal quarter (frame boundaries at
/// floor(i*N/4)). Requires >= 4 frames and dimensions divisible by 8.
FeatureTensor build_feature_tensor(const ClipSpec& clip, const EncodeResult& forward,
                                   const SlicParams& p = {});

/// Convenience: runs the forward encode too.
FeatureTensor build_features(const ClipSpec& clip, const SlicParams& p = {});

/// Raw little-endian float32 in data order, dims in the JSON sidecar.
void write_feature_tensor(const FeatureTensor& t, const std::string& bin_path,
                          const std::string& json_path, const std::string& clip_id);
FeatureTensor read_feature_tensor(const std::string& bin_path, const std::string& json_path);

}  // namespace iso360
