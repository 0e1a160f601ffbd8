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

#include "isomer360/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

namespace iso360 {

using nlohmann::json;

const std::array<const char*, 7> kFeatureChannelNames = {
    "contour", "fwd_dx", "fwd_dy", "fwd_dt", "bwd_dx", "bwd_dy", "bwd_dt"};

namespace {

struct SlicCenter {
    double x, y, luma;
};

double face_gradient(const Image8& face, int x, int y) {
    int xm = std::max(0, x - 1), xp = std::min(face.width - 1, x + 1);
    int ym = std::max(0, y - 1), yp = std::min(face.height - 1, y + 1);
    double gx = double(face.at(xp, y)) - double(face.at(xm, y));
    double gy = double(face.at(x, yp)) - double(face.at(x, ym));
    return gx * gx + gy * gy;
}

// Relabels connected components; fragments smaller than min_size merge into
// the label of the previous pixel in scan order.
std::vector<int> enforce_connectivity(const std::vector<int>& labels, int w, int h, int min_size) {
    std::vector<int> out(labels.size(), -1);
    std::vector<int> stack;
    int next_label = 0;
    const int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            size_t idx = size_t(y) * w + x;
            if (out[idx] >= 0) continue;
            int adjacent = 0;
            if (x > 0) adjacent = out[idx - 1];
            else if (y > 0) adjacent = out[idx - w];

            int label = next_label;
            out[idx] = label;
            stack.assign(1, int(idx));
            std::vector<int> members(1, int(idx));
            while (!stack.empty()) {
                int p = stack.back();
                stack.pop_back();
                int px = p % w, py = p / w;
                for (int k = 0; k < 4; ++k) {
                    int nx = px + dx[k], ny = py + dy[k];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    size_t n = size_t(ny) * w + nx;
                    if (out[n] < 0 && labels[n] == labels[idx]) {
                        out[n] = label;
                        stack.push_back(int(n));
                        members.push_back(int(n));
                    }
                }
            }
            if (int(members.size()) < min_size && (x > 0 || y > 0)) {
                for (int p : members) out[p] = adjacent;
            } else {
                ++next_label;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<int> slic_labels(const Image8& face, const SlicParams& p) {
    int w = face.width, h = face.height;
    if (p.superpixels_per_face < 1 || p.compactness <= 0.0)
        throw InputError("invalid SLIC parameters");
    if (w * h < p.superpixels_per_face)
        throw InputError("face smaller than the requested superpixel count");

    double spacing = std::sqrt(double(w) * h / p.superpixels_per_face);
    int nx = std::max(1, int(std::lround(w / spacing)));
    int ny = std::max(1, int(std::lround(h / spacing)));

    std::vector<SlicCenter> centers;
    centers.reserve(size_t(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int cx = int((i + 0.5) * w / nx);
            int cy = int((j + 0.5) * h / ny);
            // nudge to the lowest-gradient pixel in the 3x3 neighborhood
            int bx = cx, by = cy;
            double bg = std::numeric_limits<double>::infinity();
            for (int oy = -1; oy <= 1; ++oy) {
                for (int ox = -1; ox <= 1; ++ox) {
                    int x = std::clamp(cx + ox, 0, w - 1), y = std::clamp(cy + oy, 0, h - 1);
                    double g = face_gradient(face, x, y);
                    if (g < bg) {
                        bg = g;
                        bx = x;
                        by = y;
                    }
                }
            }
            centers.push_back({double(bx), double(by), double(face.at(bx, by))});
        }
    }

    double m2 = p.compactness * p.compactness;
    double inv_s2 = 1.0 / (spacing * spacing);
    std::vector<int> labels(size_t(w) * h, 0);
    std::vector<double> best(size_t(w) * h);

    for (int iter = 0; iter < p.iterations; ++iter) {
        std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
        for (size_t c = 0; c < centers.size(); ++c) {
            const SlicCenter& ctr = centers[c];
            int x0 = std::max(0, int(ctr.x - 2.0 * spacing));
            int x1 = std::min(w - 1, int(ctr.x + 2.0 * spacing));
            int y0 = std::max(0, int(ctr.y - 2.0 * spacing));
            int y1 = std::min(h - 1, int(ctr.y + 2.0 * spacing));
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    double di = double(face.at(x, y)) - ctr.luma;
                    double sx = x - ctr.x, sy = y - ctr.y;
                    double d = di * di + m2 * (sx * sx + sy * sy) * inv_s2;
                    size_t idx = size_t(y) * w + x;
                    if (d < best[idx]) {
                        best[idx] = d;
                        labels[idx] = int(c);
                    }
                }
            }
        }
        std::vector<double> sx(centers.size(), 0.0), sy(centers.size(), 0.0),
            sl(centers.size(), 0.0);
        std::vector<int> count(centers.size(), 0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                int l = labels[size_t(y) * w + x];
                sx[l] += x;
                sy[l] += y;
                sl[l] += face.at(x, y);
                ++count[l];
            }
        }
        for (size_t c = 0; c < centers.size(); ++c) {
            if (count[c] == 0) continue;
            centers[c].x = sx[c] / count[c];
            centers[c].y = sy[c] / count[c];
            centers[c].luma = sl[c] / count[c];
        }
    }

    int min_size = (w * h / p.superpixels_per_face) / 4;
    return enforce_connectivity(labels, w, h, min_size);
}

Image8 slic_contours(const CubemapFrame& frame, const SlicParams& p) {
    int f = frame.face_size;
    Image8 out(frame.width(), frame.height(), 0);
    for (int row = 0; row < 2; ++row) {
        for (int col = 0; col < 3; ++col) {
            Image8 face(f, f);
            for (int y = 0; y < f; ++y)
                for (int x = 0; x < f; ++x) face.at(x, y) = frame.raster.at(col * f + x, row * f + y);
            std::vector<int> labels = slic_labels(face, p);
            for (int y = 0; y < f; ++y) {
                for (int x = 0; x < f; ++x) {
                    int l = labels[size_t(y) * f + x];
                    bool edge = (x > 0 && labels[size_t(y) * f + x - 1] != l) ||
                                (x + 1 < f && labels[size_t(y) * f + x + 1] != l) ||
                                (y > 0 && labels[size_t(y - 1) * f + x] != l) ||
                                (y + 1 < f && labels[size_t(y + 1) * f + x] != l);
                    out.at(col * f + x, row * f + y) = edge ? 1 : 0;
                }
            }
        }
    }
    return out;
}

std::vector<std::vector<float>> motion_features(const EncodeResult& forward,
                                                const EncodeResult& backward, int frame_width,
                                                int frame_height) {
    if (forward.motion.empty() || backward.motion.empty())
        throw InputError("motion features need motion fields; encode with the reference codec");
    if (forward.motion.size() != backward.motion.size())
        throw InputError("forward/backward encodes cover different frame counts");

    size_t n = forward.motion.size();
    int bw = (frame_width + kRefBlockSize - 1) / kRefBlockSize;
    int bh = (frame_height + kRefBlockSize - 1) / kRefBlockSize;
    for (const auto& m : forward.motion)
        if (m.blocks_x != bw || m.blocks_y != bh)
            throw InputError("motion field does not match the frame dimensions");

    std::vector<std::vector<float>> out(n, std::vector<float>(size_t(6) * bh * bw, 0.0f));
    size_t plane = size_t(bh) * bw;
    for (size_t i = 0; i < n; ++i) {
        // forward: frame i predicted from frame i-1; frame 0 stays zero
        if (i > 0) {
            const MotionField& mf = forward.motion[i];
            for (size_t b = 0; b < plane; ++b) {
                if (mf.intra[b]) continue;
                out[i][b] = float(mf.mv[b].dx);
                out[i][plane + b] = float(mf.mv[b].dy);
                out[i][2 * plane + b] = -1.0f;
            }
        }
        // backward: reversed-order frame n-1-i covers source frame i and is
        // predicted from source frame i+1; the source's last frame stays zero
        if (i + 1 < n) {
            const MotionField& mb = backward.motion[n - 1 - i];
            for (size_t b = 0; b < plane; ++b) {
                if (mb.intra[b]) continue;
                out[i][3 * plane + b] = float(mb.mv[b].dx);
                out[i][4 * plane + b] = float(mb.mv[b].dy);
                out[i][5 * plane + b] = 1.0f;
            }
        }
    }
    return out;
}

FeatureTensor build_feature_tensor(const ClipSpec& clip, const EncodeResult& forward,
                                   const SlicParams& p) {
    size_t n = clip.frames.size();
    if (n < 4) throw InputError("feature extraction needs at least 4 frames");
    int w = clip.frames[0].width(), h = clip.frames[0].height();
    if (w % 8 != 0 || h % 8 != 0)
        throw InputError("feature extraction needs dimensions divisible by 8");
    if (forward.motion.size() != n)
        throw InputError("encode does not match the clip; use the reference codec encode");

    std::vector<Image8> reversed_frames;
    reversed_frames.reserve(n);
    for (size_t i = 0; i < n; ++i) reversed_frames.push_back(clip.frames[n - 1 - i].raster);
    EncodeResult backward = encode_reference_rasters(reversed_frames);

    auto motion = motion_features(forward, backward, w, h);

    int fw = w / 8, fh = h / 8;
    size_t plane = size_t(fw) * fh;

    FeatureTensor t;
    t.height = fh;
    t.width = fw;
    t.data.assign(size_t(t.segments) * t.channels * plane, 0.0f);

    std::vector<double> acc(size_t(7) * plane);
    for (int seg = 0; seg < t.segments; ++seg) {
        size_t begin = seg * n / 4, end = (seg + 1) * n / 4;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (size_t i = begin; i < end; ++i) {
            Image8 contour = slic_contours(clip.frames[i], p);
            for (int by = 0; by < fh; ++by) {
                for (int bx = 0; bx < fw; ++bx) {
                    uint8_t mx = 0;
                    for (int y = by * 8; y < by * 8 + 8; ++y)
                        for (int x = bx * 8; x < bx * 8 + 8; ++x)
                            mx = std::max(mx, contour.at(x, y));
                    acc[size_t(by) * fw + bx] += mx;
                }
            }
            for (int c = 0; c < 6; ++c)
                for (size_t b = 0; b < plane; ++b)
                    acc[size_t(c + 1) * plane + b] += double(motion[i][size_t(c) * plane + b]);
        }
        double inv = 1.0 / double(end - begin);
        for (int c = 0; c < 7; ++c)
            for (size_t b = 0; b < plane; ++b)
                t.data[(size_t(seg) * 7 + c) * plane + b] = float(acc[size_t(c) * plane + b] * inv);
    }
    return t;
}

FeatureTensor build_features(const ClipSpec& clip, const SlicParams& p) {
    std::vector<Image8> rasters;
    rasters.reserve(clip.frames.size());
    for (const auto& f : clip.frames) rasters.push_back(f.raster);
    EncodeResult forward = encode_reference_rasters(rasters);
    return build_feature_tensor(clip, forward, p);
}

void write_feature_tensor(const FeatureTensor& t, const std::string& bin_path,
                          const std::string& json_path, const std::string& clip_id) {
    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw InputError("cannot open for writing: " + bin_path);
    for (float v : t.data) {
        uint32_t u;
        static_assert(sizeof(u) == sizeof(v));
        std::memcpy(&u, &v, sizeof(u));
        uint8_t bytes[4] = {uint8_t(u), uint8_t(u >> 8), uint8_t(u >> 16), uint8_t(u >> 24)};
        bin.write(reinterpret_cast<const char*>(bytes), 4);
    }
    if (!bin) throw InputError("write failed: " + bin_path);

    json j;
    j["clip_id"] = clip_id;
    j["segments"] = t.segments;
    j["channels"] = t.channels;
    j["height"] = t.height;
    j["width"] = t.width;
    j["dtype"] = "float32le";
    j["channel_names"] = kFeatureChannelNames;
    std::ofstream js(json_path);
    if (!js) throw InputError("cannot open for writing: " + json_path);
    js << j.dump(2) << "\n";
}

FeatureTensor read_feature_tensor(const std::string& bin_path, const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) throw InputError("cannot open feature sidecar: " + json_path);
    json j = json::parse(js, nullptr, false);
    if (j.is_discarded()) throw InputError("invalid feature sidecar: " + json_path);

    FeatureTensor t;
    t.segments = j.at("segments").get<int>();
    t.channels = j.at("channels").get<int>();
    t.height = j.at("height").get<int>();
    t.width = j.at("width").get<int>();
    size_t count = size_t(t.segments) * t.channels * t.height * t.width;

    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw InputError("cannot open feature tensor: " + bin_path);
    t.data.resize(count);
    for (size_t i = 0; i < count; ++i) {
        uint8_t bytes[4];
        if (!bin.read(reinterpret_cast<char*>(bytes), 4))
            throw InputError("feature tensor truncated: " + bin_path);
        uint32_t u = uint32_t(bytes[0]) | (uint32_t(bytes[1]) << 8) | (uint32_t(bytes[2]) << 16) |
                     (uint32_t(bytes[3]) << 24);
        std::memcpy(&t.data[i], &u, sizeof(float));
    }
    return t;
}

}  // namespace iso360
