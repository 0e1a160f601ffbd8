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

#include <algorithm>
#include <cstring>

#include "isomer360/codec.hpp"

namespace iso360 {

const char* codec_name(CodecId c) {
    switch (c) {
        case CodecId::h264: return "h264";
        case CodecId::hevc: return "hevc";
        case CodecId::vp9: return "vp9";
        case CodecId::reference: return "reference";
    }
    return "?";
}

std::optional<CodecId> codec_from_name(const std::string& name) {
    if (name == "h264") return CodecId::h264;
    if (name == "hevc" || name == "h265") return CodecId::hevc;
    if (name == "vp9") return CodecId::vp9;
    if (name == "reference" || name == "ref") return CodecId::reference;
    return std::nullopt;
}

std::vector<ClipSpec> split_clips(const std::vector<CubemapFrame>& frames, double fps,
                                  double clip_seconds) {
    if (frames.empty()) throw InputError("cannot split an empty frame sequence into clips");
    if (fps <= 0.0) throw InputError("fps must be positive");
    if (clip_seconds <= 0.0) throw InputError("clip duration must be positive");
    size_t per_clip = size_t(std::max(1L, std::lround(fps * clip_seconds)));
    std::vector<ClipSpec> clips;
    for (size_t start = 0; start < frames.size(); start += per_clip) {
        size_t end = std::min(frames.size(), start + per_clip);
        ClipSpec c;
        c.frames.assign(frames.begin() + long(start), frames.begin() + long(end));
        c.fps = fps;
        c.clip_seconds = clip_seconds;
        c.partial = (end - start) != per_clip;
        clips.push_back(std::move(c));
    }
    return clips;
}

namespace {

// ---------------------------------------------------------------------------
// Adaptive binary arithmetic coder (carry-less range coder, 12-bit
// probabilities, shift-5 adaptation). Integer arithmetic only.
// ---------------------------------------------------------------------------

constexpr uint32_t kProbBits = 12;
constexpr uint32_t kProbOne = 1u << kProbBits;   // 4096
constexpr uint32_t kProbInit = kProbOne / 2;
constexpr uint32_t kAdaptShift = 5;
constexpr uint32_t kTopValue = 1u << 24;

struct BitCtx {
    uint16_t prob = uint16_t(kProbInit);
};

class RangeEncoder {
  public:
    explicit RangeEncoder(std::vector<uint8_t>& out) : out_(out) {}

    void encode_bit(BitCtx& ctx, int bit) {
        uint32_t bound = (range_ >> kProbBits) * ctx.prob;
        if (!bit) {
            range_ = bound;
            ctx.prob = uint16_t(ctx.prob + ((kProbOne - ctx.prob) >> kAdaptShift));
        } else {
            low_ += bound;
            range_ -= bound;
            ctx.prob = uint16_t(ctx.prob - (ctx.prob >> kAdaptShift));
        }
        while (range_ < kTopValue) {
            shift_low();
            range_ <<= 8;
        }
    }

    void encode_bypass(int bit) {
        range_ >>= 1;
        if (bit) low_ += range_;
        while (range_ < kTopValue) {
            shift_low();
            range_ <<= 8;
        }
    }

    void flush() {
        for (int i = 0; i < 5; ++i) shift_low();
    }

  private:
    void shift_low() {
        if (uint32_t(low_) < 0xFF000000u || (low_ >> 32) != 0) {
            uint8_t carry = uint8_t(low_ >> 32);
            uint8_t b = cache_;
            do {
                out_.push_back(uint8_t(b + carry));
                b = 0xFF;
            } while (--cache_size_ != 0);
            cache_ = uint8_t(low_ >> 24);
        }
        ++cache_size_;
        // 32-bit shift on purpose: the top byte was just consumed (emitted or
        // counted as a pending 0xFF) and must drop out of low.
        low_ = uint32_t(low_) << 8;
    }

    std::vector<uint8_t>& out_;
    uint64_t low_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
    uint8_t cache_ = 0;
    uint64_t cache_size_ = 1;
};

class RangeDecoder {
  public:
    RangeDecoder(const uint8_t* data, size_t size) : data_(data), size_(size) {
        ++pos_;  // first byte emitted by the encoder is always zero
        for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
    }

    int decode_bit(BitCtx& ctx) {
        uint32_t bound = (range_ >> kProbBits) * ctx.prob;
        int bit;
        if (code_ < bound) {
            range_ = bound;
            ctx.prob = uint16_t(ctx.prob + ((kProbOne - ctx.prob) >> kAdaptShift));
            bit = 0;
        } else {
            code_ -= bound;
            range_ -= bound;
            ctx.prob = uint16_t(ctx.prob - (ctx.prob >> kAdaptShift));
            bit = 1;
        }
        normalize();
        return bit;
    }

    int decode_bypass() {
        range_ >>= 1;
        int bit = 0;
        if (code_ >= range_) {
            code_ -= range_;
            bit = 1;
        }
        normalize();
        return bit;
    }

  private:
    void normalize() {
        while (range_ < kTopValue) {
            range_ <<= 8;
            code_ = (code_ << 8) | next_byte();
        }
    }

    uint8_t next_byte() { return pos_ < size_ ? data_[pos_++] : 0; }

    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
    uint32_t code_ = 0;
};

// Signed symbol binarization: adaptive zero flag and sign, then the magnitude
// as an Elias-gamma style code whose prefix bits adapt per position and whose
// suffix bits bypass.
struct SymCtx {
    BitCtx zero;
    BitCtx sign;
    BitCtx len[16];
};

void encode_signed(RangeEncoder& enc, SymCtx& ctx, int v) {
    enc.encode_bit(ctx.zero, v != 0);
    if (v == 0) return;
    enc.encode_bit(ctx.sign, v < 0);
    uint32_t m = uint32_t(v < 0 ? -v : v);  // >= 1
    int nbits = 32 - __builtin_clz(m);
    for (int i = 0; i < nbits - 1; ++i) enc.encode_bit(ctx.len[std::min(i, 15)], 1);
    enc.encode_bit(ctx.len[std::min(nbits - 1, 15)], 0);
    for (int i = nbits - 2; i >= 0; --i) enc.encode_bypass(int((m >> i) & 1u));
}

int decode_signed(RangeDecoder& dec, SymCtx& ctx) {
    if (!dec.decode_bit(ctx.zero)) return 0;
    int neg = dec.decode_bit(ctx.sign);
    int nbits = 0;
    while (dec.decode_bit(ctx.len[std::min(nbits, 15)])) ++nbits;
    ++nbits;
    uint32_t m = 1;
    for (int i = nbits - 2; i >= 0; --i) m = (m << 1) | uint32_t(dec.decode_bypass());
    return neg ? -int(m) : int(m);
}

struct CodecContexts {
    SymCtx intra_res;
    SymCtx inter_res;
    SymCtx mv_x;
    SymCtx mv_y;
    BitCtx mode;
};

// ---------------------------------------------------------------------------
// Prediction helpers
// ---------------------------------------------------------------------------

// Median edge detector (left / top / top-left), as in lossless image coding.
inline int med_predict(const Image8& img, int x, int y) {
    if (x == 0 && y == 0) return 128;
    if (y == 0) return img.at(x - 1, 0);
    if (x == 0) return img.at(0, y - 1);
    int a = img.at(x - 1, y);
    int b = img.at(x, y - 1);
    int c = img.at(x - 1, y - 1);
    int mx = std::max(a, b), mn = std::min(a, b);
    if (c >= mx) return mn;
    if (c <= mn) return mx;
    return a + b - c;
}

inline uint32_t block_sad(const Image8& cur, const Image8& ref, int x0, int y0, int rx, int ry,
                          int bw, int bh, uint32_t cutoff) {
    uint32_t sad = 0;
    for (int j = 0; j < bh; ++j) {
        const uint8_t* cp = &cur.data[size_t(y0 + j) * cur.width + x0];
        const uint8_t* rp = &ref.data[size_t(ry + j) * ref.width + rx];
        for (int i = 0; i < bw; ++i) sad += uint32_t(std::abs(int(cp[i]) - int(rp[i])));
        if (sad >= cutoff) return sad;
    }
    return sad;
}

// Full search over +/-16 px, zero vector preferred, strict improvement only;
// scan order (dy, dx ascending) is part of the bitstream contract.
void motion_search(const Image8& cur, const Image8& ref, int x0, int y0, int bw, int bh,
                   int* best_dx, int* best_dy, uint32_t* best_sad) {
    *best_dx = 0;
    *best_dy = 0;
    *best_sad = block_sad(cur, ref, x0, y0, x0, y0, bw, bh, UINT32_MAX);
    if (*best_sad == 0) return;
    int w = cur.width, h = cur.height;
    for (int dy = -kRefSearchRange; dy <= kRefSearchRange; ++dy) {
        int ry = y0 - dy;
        if (ry < 0 || ry + bh > h) continue;
        for (int dx = -kRefSearchRange; dx <= kRefSearchRange; ++dx) {
            if (dx == 0 && dy == 0) continue;
            int rx = x0 - dx;
            if (rx < 0 || rx + bw > w) continue;
            uint32_t sad = block_sad(cur, ref, x0, y0, rx, ry, bw, bh, *best_sad);
            if (sad < *best_sad) {
                *best_sad = sad;
                *best_dx = dx;
                *best_dy = dy;
                if (sad == 0) return;
            }
        }
    }
}

inline int median3(int a, int b, int c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

// Median MV predictor from left / top / top-right neighbors; missing or
// intra neighbors contribute (0, 0).
MotionVector predict_mv(const MotionField& field, int bx, int by) {
    auto get = [&](int x, int y) -> MotionVector {
        if (x < 0 || y < 0 || x >= field.blocks_x || y >= field.blocks_y) return {};
        if (field.intra[size_t(y) * field.blocks_x + x]) return {};
        return field.mv[size_t(y) * field.blocks_x + x];
    };
    MotionVector l = get(bx - 1, by), t = get(bx, by - 1), tr = get(bx + 1, by - 1);
    MotionVector p;
    p.dx = int16_t(median3(l.dx, t.dx, tr.dx));
    p.dy = int16_t(median3(l.dy, t.dy, tr.dy));
    return p;
}

constexpr char kMagic[4] = {'I', '3', 'R', 'C'};
constexpr uint8_t kVersion = 1;
constexpr size_t kHeaderSize = 13;

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(uint8_t(v & 0xFF));
    out.push_back(uint8_t(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(uint8_t((v >> (8 * i)) & 0xFF));
}

}  // namespace

EncodeResult encode_reference_rasters(const std::vector<Image8>& frames) {
    if (frames.empty()) throw InputError("cannot encode an empty clip");
    int w = frames[0].width, h = frames[0].height;
    if (w <= 0 || h <= 0) throw InputError("cannot encode zero-sized frames");
    if (w > 0xFFFF || h > 0xFFFF) throw InputError("frame dimensions exceed codec limits");
    for (const auto& f : frames)
        if (f.width != w || f.height != h)
            throw InputError("all frames in a clip must share dimensions");

    EncodeResult res;
    res.codec = CodecId::reference;
    res.bitstream.insert(res.bitstream.end(), kMagic, kMagic + 4);
    res.bitstream.push_back(kVersion);
    put_u16(res.bitstream, uint16_t(w));
    put_u16(res.bitstream, uint16_t(h));
    put_u32(res.bitstream, uint32_t(frames.size()));

    RangeEncoder enc(res.bitstream);
    CodecContexts ctx;
    int blocks_x = (w + kRefBlockSize - 1) / kRefBlockSize;
    int blocks_y = (h + kRefBlockSize - 1) / kRefBlockSize;

    for (size_t t = 0; t < frames.size(); ++t) {
        size_t frame_start = res.bitstream.size();
        const Image8& cur = frames[t];
        MotionField field;
        field.blocks_x = blocks_x;
        field.blocks_y = blocks_y;
        field.mv.assign(size_t(blocks_x) * blocks_y, MotionVector{});
        field.intra.assign(size_t(blocks_x) * blocks_y, 0);

        if (t == 0) {
            std::fill(field.intra.begin(), field.intra.end(), uint8_t(1));
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    encode_signed(enc, ctx.intra_res, int(cur.at(x, y)) - med_predict(cur, x, y));
        } else {
            const Image8& prev = frames[t - 1];
            for (int by = 0; by < blocks_y; ++by) {
                for (int bx = 0; bx < blocks_x; ++bx) {
                    int x0 = bx * kRefBlockSize, y0 = by * kRefBlockSize;
                    int bw = std::min(kRefBlockSize, w - x0);
                    int bh = std::min(kRefBlockSize, h - y0);

                    int dx, dy;
                    uint32_t sad;
                    motion_search(cur, prev, x0, y0, bw, bh, &dx, &dy, &sad);

                    uint32_t intra_cost = 0;
                    for (int j = 0; j < bh; ++j)
                        for (int i = 0; i < bw; ++i)
                            intra_cost += uint32_t(std::abs(int(cur.at(x0 + i, y0 + j)) -
                                                            med_predict(cur, x0 + i, y0 + j)));

                    bool use_intra = sad > intra_cost;
                    enc.encode_bit(ctx.mode, use_intra);
                    size_t bidx = size_t(by) * blocks_x + bx;
                    if (use_intra) {
                        field.intra[bidx] = 1;
                        for (int j = 0; j < bh; ++j)
                            for (int i = 0; i < bw; ++i)
                                encode_signed(enc, ctx.intra_res,
                                              int(cur.at(x0 + i, y0 + j)) -
                                                  med_predict(cur, x0 + i, y0 + j));
                    } else {
                        MotionVector pred = predict_mv(field, bx, by);
                        encode_signed(enc, ctx.mv_x, dx - pred.dx);
                        encode_signed(enc, ctx.mv_y, dy - pred.dy);
                        field.mv[bidx] = {int16_t(dx), int16_t(dy), int16_t(-1)};
                        for (int j = 0; j < bh; ++j)
                            for (int i = 0; i < bw; ++i)
                                encode_signed(enc, ctx.inter_res,
                                              int(cur.at(x0 + i, y0 + j)) -
                                                  int(prev.at(x0 + i - dx, y0 + j - dy)));
                    }
                }
            }
        }
        res.motion.push_back(std::move(field));
        res.frame_bytes.push_back(res.bitstream.size() - frame_start);
    }
    enc.flush();
    // attribute the coder flush to the last frame
    if (!res.frame_bytes.empty()) {
        uint64_t attributed = kHeaderSize;
        for (uint64_t b : res.frame_bytes) attributed += b;
        res.frame_bytes.back() += res.bitstream.size() - attributed;
    }
    res.bytes = res.bitstream.size();
    return res;
}

EncodeResult encode_reference(const ClipSpec& clip) {
    std::vector<Image8> rasters;
    rasters.reserve(clip.frames.size());
    for (const auto& f : clip.frames) rasters.push_back(f.raster);
    return encode_reference_rasters(rasters);
}

std::vector<Image8> decode_reference(const std::vector<uint8_t>& bitstream) {
    if (bitstream.size() < kHeaderSize || std::memcmp(bitstream.data(), kMagic, 4) != 0)
        throw InputError("not a reference-codec bitstream");
    if (bitstream[4] != kVersion) throw InputError("unsupported reference-codec version");
    int w = bitstream[5] | (bitstream[6] << 8);
    int h = bitstream[7] | (bitstream[8] << 8);
    uint32_t frame_count = 0;
    for (int i = 0; i < 4; ++i) frame_count |= uint32_t(bitstream[9 + i]) << (8 * i);

    RangeDecoder dec(bitstream.data() + kHeaderSize, bitstream.size() - kHeaderSize);
    CodecContexts ctx;
    int blocks_x = (w + kRefBlockSize - 1) / kRefBlockSize;
    int blocks_y = (h + kRefBlockSize - 1) / kRefBlockSize;

    std::vector<Image8> frames;
    frames.reserve(frame_count);
    for (uint32_t t = 0; t < frame_count; ++t) {
        Image8 cur(w, h);
        if (t == 0) {
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    cur.at(x, y) =
                        uint8_t(med_predict(cur, x, y) + decode_signed(dec, ctx.intra_res));
        } else {
            const Image8& prev = frames.back();
            MotionField field;
            field.blocks_x = blocks_x;
            field.blocks_y = blocks_y;
            field.mv.assign(size_t(blocks_x) * blocks_y, MotionVector{});
            field.intra.assign(size_t(blocks_x) * blocks_y, 0);
            for (int by = 0; by < blocks_y; ++by) {
                for (int bx = 0; bx < blocks_x; ++bx) {
                    int x0 = bx * kRefBlockSize, y0 = by * kRefBlockSize;
                    int bw = std::min(kRefBlockSize, w - x0);
                    int bh = std::min(kRefBlockSize, h - y0);
                    size_t bidx = size_t(by) * blocks_x + bx;
                    if (dec.decode_bit(ctx.mode)) {
                        field.intra[bidx] = 1;
                        for (int j = 0; j < bh; ++j)
                            for (int i = 0; i < bw; ++i)
                                cur.at(x0 + i, y0 + j) =
                                    uint8_t(med_predict(cur, x0 + i, y0 + j) +
                                            decode_signed(dec, ctx.intra_res));
                    } else {
                        MotionVector pred = predict_mv(field, bx, by);
                        int dx = pred.dx + decode_signed(dec, ctx.mv_x);
                        int dy = pred.dy + decode_signed(dec, ctx.mv_y);
                        field.mv[bidx] = {int16_t(dx), int16_t(dy), int16_t(-1)};
                        for (int j = 0; j < bh; ++j)
                            for (int i = 0; i < bw; ++i)
                                cur.at(x0 + i, y0 + j) =
                                    uint8_t(int(prev.at(x0 + i - dx, y0 + j - dy)) +
                                            decode_signed(dec, ctx.inter_res));
                    }
                }
            }
        }
        frames.push_back(std::move(cur));
    }
    return frames;
}

}  // namespace iso360
