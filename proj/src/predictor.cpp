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

#include "isomer360/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace iso360 {

namespace {

struct Tensor3 {
    int c = 0, h = 0, w = 0;
    std::vector<double> v;

    Tensor3() = default;
    Tensor3(int c_, int h_, int w_) : c(c_), h(h_), w(w_), v(size_t(c_) * h_ * w_, 0.0) {}
    double& at(int ci, int y, int x) { return v[(size_t(ci) * h + y) * w + x]; }
    double at(int ci, int y, int x) const { return v[(size_t(ci) * h + y) * w + x]; }
};

double xavier_draw(Pcg32& rng, double limit) { return (2.0 * rng.next_double() - 1.0) * limit; }

// Each layer keeps a LIFO cache of forward activations; backward pops them,
// which makes weight sharing across segments work as long as backward calls
// mirror forward calls in reverse.

struct Conv2d {
    int in_c = 0, out_c = 0, k = 1, pad = 0;
    std::vector<double> w, b, gw, gb;
    std::vector<Tensor3> cache;

    Conv2d() = default;
    Conv2d(int ic, int oc, int kk) : in_c(ic), out_c(oc), k(kk), pad(kk / 2) {
        w.assign(size_t(oc) * ic * k * k, 0.0);
        b.assign(size_t(oc), 0.0);
        gw.assign(w.size(), 0.0);
        gb.assign(b.size(), 0.0);
    }

    void init_xavier(Pcg32& rng) {
        double limit = std::sqrt(6.0 / (double(in_c) * k * k + double(out_c) * k * k));
        for (auto& x : w) x = xavier_draw(rng, limit);
        std::fill(b.begin(), b.end(), 0.0);
    }

    Tensor3 forward(const Tensor3& x) {
        Tensor3 y(out_c, x.h, x.w);
        for (int oc = 0; oc < out_c; ++oc) {
            for (int yy = 0; yy < x.h; ++yy) {
                for (int xx = 0; xx < x.w; ++xx) {
                    double acc = b[oc];
                    for (int ic = 0; ic < in_c; ++ic) {
                        for (int ky = 0; ky < k; ++ky) {
                            int sy = yy + ky - pad;
                            if (sy < 0 || sy >= x.h) continue;
                            const double* wrow = &w[((size_t(oc) * in_c + ic) * k + ky) * k];
                            for (int kx = 0; kx < k; ++kx) {
                                int sx = xx + kx - pad;
                                if (sx < 0 || sx >= x.w) continue;
                                acc += wrow[kx] * x.at(ic, sy, sx);
                            }
                        }
                    }
                    y.at(oc, yy, xx) = acc;
                }
            }
        }
        cache.push_back(x);
        return y;
    }

    Tensor3 backward(const Tensor3& gy) {
        Tensor3 x = std::move(cache.back());
        cache.pop_back();
        Tensor3 gx(in_c, x.h, x.w);
        for (int oc = 0; oc < out_c; ++oc) {
            for (int yy = 0; yy < x.h; ++yy) {
                for (int xx = 0; xx < x.w; ++xx) {
                    double g = gy.at(oc, yy, xx);
                    if (g == 0.0) continue;
                    gb[oc] += g;
                    for (int ic = 0; ic < in_c; ++ic) {
                        for (int ky = 0; ky < k; ++ky) {
                            int sy = yy + ky - pad;
                            if (sy < 0 || sy >= x.h) continue;
                            size_t wbase = ((size_t(oc) * in_c + ic) * k + ky) * k;
                            for (int kx = 0; kx < k; ++kx) {
                                int sx = xx + kx - pad;
                                if (sx < 0 || sx >= x.w) continue;
                                gw[wbase + kx] += g * x.at(ic, sy, sx);
                                gx.at(ic, sy, sx) += g * w[wbase + kx];
                            }
                        }
                    }
                }
            }
        }
        return gx;
    }
};

struct ReLU {
    std::vector<Tensor3> cache;

    Tensor3 forward(const Tensor3& x) {
        Tensor3 y = x;
        for (auto& v : y.v) v = v > 0.0 ? v : 0.0;
        cache.push_back(x);
        return y;
    }

    Tensor3 backward(const Tensor3& gy) {
        Tensor3 x = std::move(cache.back());
        cache.pop_back();
        Tensor3 gx = gy;
        for (size_t i = 0; i < gx.v.size(); ++i)
            if (x.v[i] <= 0.0) gx.v[i] = 0.0;
        return gx;
    }
};

// 2x2 max pooling, floor output dims; a dimension already at 1 passes
// through. First maximum in scan order wins ties.
struct MaxPool2 {
    struct Cache {
        int in_h = 0, in_w = 0, c = 0;
        std::vector<size_t> argmax;
    };
    std::vector<Cache> cache;

    static int out_dim(int d) { return d > 1 ? d / 2 : 1; }

    Tensor3 forward(const Tensor3& x) {
        int oh = out_dim(x.h), ow = out_dim(x.w);
        int sy = x.h > 1 ? 2 : 1, sx = x.w > 1 ? 2 : 1;
        Tensor3 y(x.c, oh, ow);
        Cache cc;
        cc.in_h = x.h;
        cc.in_w = x.w;
        cc.c = x.c;
        cc.argmax.resize(y.v.size());
        size_t o = 0;
        for (int ci = 0; ci < x.c; ++ci) {
            for (int oy = 0; oy < oh; ++oy) {
                for (int ox = 0; ox < ow; ++ox, ++o) {
                    double best = -std::numeric_limits<double>::infinity();
                    size_t bidx = 0;
                    for (int dy = 0; dy < sy; ++dy) {
                        for (int dx = 0; dx < sx; ++dx) {
                            int iy = oy * sy + dy, ix = ox * sx + dx;
                            size_t idx = (size_t(ci) * x.h + iy) * x.w + ix;
                            if (x.v[idx] > best) {
                                best = x.v[idx];
                                bidx = idx;
                            }
                        }
                    }
                    y.v[o] = best;
                    cc.argmax[o] = bidx;
                }
            }
        }
        cache.push_back(std::move(cc));
        return y;
    }

    Tensor3 backward(const Tensor3& gy) {
        Cache cc = std::move(cache.back());
        cache.pop_back();
        Tensor3 gx(cc.c, cc.in_h, cc.in_w);
        for (size_t o = 0; o < gy.v.size(); ++o) gx.v[cc.argmax[o]] += gy.v[o];
        return gx;
    }
};

struct Linear {
    int in_n = 0, out_n = 0;
    std::vector<double> w, b, gw, gb;
    std::vector<std::vector<double>> cache;

    Linear() = default;
    Linear(int in, int out) : in_n(in), out_n(out) {
        w.assign(size_t(out) * in, 0.0);
        b.assign(size_t(out), 0.0);
        gw.assign(w.size(), 0.0);
        gb.assign(b.size(), 0.0);
    }

    void init_xavier(Pcg32& rng) {
        double limit = std::sqrt(6.0 / (double(in_n) + double(out_n)));
        for (auto& x : w) x = xavier_draw(rng, limit);
        std::fill(b.begin(), b.end(), 0.0);
    }

    std::vector<double> forward(const std::vector<double>& x) {
        std::vector<double> y(out_n);
        for (int o = 0; o < out_n; ++o) {
            double acc = b[o];
            const double* wr = &w[size_t(o) * in_n];
            for (int i = 0; i < in_n; ++i) acc += wr[i] * x[i];
            y[o] = acc;
        }
        cache.push_back(x);
        return y;
    }

    std::vector<double> backward(const std::vector<double>& gy) {
        std::vector<double> x = std::move(cache.back());
        cache.pop_back();
        std::vector<double> gx(in_n, 0.0);
        for (int o = 0; o < out_n; ++o) {
            double g = gy[o];
            gb[o] += g;
            double* gwr = &gw[size_t(o) * in_n];
            const double* wr = &w[size_t(o) * in_n];
            for (int i = 0; i < in_n; ++i) {
                gwr[i] += g * x[i];
                gx[i] += g * wr[i];
            }
        }
        return gx;
    }
};

// Inverted dropout: kept units scale by 1/(1-p) at train time, eval is the
// identity. One uniform draw per element in train mode.
struct Dropout {
    double p = 0.5;
    std::vector<std::vector<double>> cache;  // empty mask = identity pass

    std::vector<double> forward(const std::vector<double>& x, bool train, Pcg32* rng) {
        if (!train || p <= 0.0) {
            cache.emplace_back();
            return x;
        }
        if (!rng) throw InternalError("train-mode dropout needs an RNG");
        std::vector<double> mask(x.size());
        double keep = 1.0 / (1.0 - p);
        for (auto& mv : mask) mv = rng->next_double() >= p ? keep : 0.0;
        std::vector<double> y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] * mask[i];
        cache.push_back(std::move(mask));
        return y;
    }

    std::vector<double> backward(const std::vector<double>& gy) {
        std::vector<double> mask = std::move(cache.back());
        cache.pop_back();
        if (mask.empty()) return gy;
        std::vector<double> gx(gy.size());
        for (size_t i = 0; i < gy.size(); ++i) gx[i] = gy[i] * mask[i];
        return gx;
    }
};

struct Trunk {
    Conv2d c1, c2, c3, reduce;
    ReLU r1, r2, r3;
    MaxPool2 p1, p2, p3;

    Trunk() = default;
    Trunk(const ModelConfig& cfg)
        : c1(cfg.channels, cfg.trunk_channels[0], 3),
          c2(cfg.trunk_channels[0], cfg.trunk_channels[1], 3),
          c3(cfg.trunk_channels[1], cfg.trunk_channels[2], 3),
          reduce(cfg.trunk_channels[2], cfg.trunk_out_channels, 1) {}

    void init_xavier(Pcg32& rng) {
        c1.init_xavier(rng);
        c2.init_xavier(rng);
        c3.init_xavier(rng);
        reduce.init_xavier(rng);
    }

    Tensor3 forward(const Tensor3& x) {
        return reduce.forward(p3.forward(r3.forward(c3.forward(
            p2.forward(r2.forward(c2.forward(p1.forward(r1.forward(c1.forward(x))))))))));
    }

    Tensor3 backward(const Tensor3& gy) {
        return c1.backward(r1.backward(p1.backward(
            c2.backward(r2.backward(p2.backward(c3.backward(r3.backward(p3.backward(
                reduce.backward(gy))))))))));
    }

    void clear_caches() {
        c1.cache.clear();
        c2.cache.clear();
        c3.cache.clear();
        reduce.cache.clear();
        r1.cache.clear();
        r2.cache.clear();
        r3.cache.clear();
        p1.cache.clear();
        p2.cache.clear();
        p3.cache.clear();
    }
};

}  // namespace

struct PredictorModel::Impl {
    ModelConfig cfg;
    TargetScaling scaling;
    std::vector<Trunk> trunks;  // size 1 when shared, else one per segment
    Conv2d skip;
    Dropout drop;
    Linear fc;
    int th = 0, tw = 0;   // trunk output spatial dims
    size_t seg_dim = 0;   // flattened per-segment vector length

    explicit Impl(const ModelConfig& c) : cfg(c) {
        if (cfg.segments < 1 || cfg.channels < 1 || cfg.height < 1 || cfg.width < 1 ||
            cfg.out_dim < 1)
            throw InputError("invalid model configuration");
        int n = cfg.shared_trunk ? 1 : cfg.segments;
        for (int i = 0; i < n; ++i) trunks.emplace_back(cfg);
        skip = Conv2d(cfg.channels, cfg.skip_channels, 1);
        th = MaxPool2::out_dim(MaxPool2::out_dim(MaxPool2::out_dim(cfg.height)));
        tw = MaxPool2::out_dim(MaxPool2::out_dim(MaxPool2::out_dim(cfg.width)));
        seg_dim = size_t(cfg.trunk_out_channels) * th * tw +
                  size_t(cfg.skip_channels) * cfg.height * cfg.width;
        fc = Linear(int(seg_dim * cfg.segments), cfg.out_dim);
        drop.p = cfg.dropout_rate;

        Pcg32 rng(cfg.init_seed, 1);
        for (auto& t : trunks) t.init_xavier(rng);
        skip.init_xavier(rng);
        fc.init_xavier(rng);
    }

    Trunk& trunk_for(int seg) { return trunks[cfg.shared_trunk ? 0 : seg]; }

    void clear_caches() {
        for (auto& t : trunks) t.clear_caches();
        skip.cache.clear();
        fc.cache.clear();
        drop.cache.clear();
    }
};

PredictorModel::PredictorModel(const ModelConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
PredictorModel::PredictorModel(PredictorModel&&) noexcept = default;
PredictorModel& PredictorModel::operator=(PredictorModel&&) noexcept = default;
PredictorModel::~PredictorModel() = default;

const ModelConfig& PredictorModel::config() const { return impl_->cfg; }
const TargetScaling& PredictorModel::scaling() const { return impl_->scaling; }
void PredictorModel::set_scaling(const TargetScaling& s) { impl_->scaling = s; }

std::vector<double> PredictorModel::forward(const FeatureTensor& x, bool train_mode,
                                            Pcg32* dropout_rng) {
    const ModelConfig& cfg = impl_->cfg;
    if (x.segments != cfg.segments || x.channels != cfg.channels || x.height != cfg.height ||
        x.width != cfg.width)
        throw InputError("feature tensor shape does not match the model");
    impl_->clear_caches();

    std::vector<double> concat;
    concat.reserve(impl_->seg_dim * cfg.segments);
    size_t plane = size_t(cfg.height) * cfg.width;
    for (int seg = 0; seg < cfg.segments; ++seg) {
        Tensor3 in(cfg.channels, cfg.height, cfg.width);
        for (size_t i = 0; i < in.v.size(); ++i)
            in.v[i] = double(x.data[size_t(seg) * cfg.channels * plane + i]);
        Tensor3 t = impl_->trunk_for(seg).forward(in);
        Tensor3 s = impl_->skip.forward(in);
        concat.insert(concat.end(), t.v.begin(), t.v.end());
        concat.insert(concat.end(), s.v.begin(), s.v.end());
    }
    return impl_->fc.forward(impl_->drop.forward(concat, train_mode, dropout_rng));
}

void PredictorModel::backward(const std::vector<double>& grad_out) {
    const ModelConfig& cfg = impl_->cfg;
    if (int(grad_out.size()) != cfg.out_dim) throw InputError("gradient length mismatch");
    std::vector<double> gconcat = impl_->drop.backward(impl_->fc.backward(grad_out));

    size_t trunk_n = size_t(cfg.trunk_out_channels) * impl_->th * impl_->tw;
    for (int seg = cfg.segments - 1; seg >= 0; --seg) {
        size_t base = size_t(seg) * impl_->seg_dim;
        Tensor3 gt(cfg.trunk_out_channels, impl_->th, impl_->tw);
        std::copy(gconcat.begin() + base, gconcat.begin() + base + trunk_n, gt.v.begin());
        Tensor3 gs(cfg.skip_channels, cfg.height, cfg.width);
        std::copy(gconcat.begin() + base + trunk_n, gconcat.begin() + base + impl_->seg_dim,
                  gs.v.begin());
        impl_->skip.backward(gs);
        impl_->trunk_for(seg).backward(gt);
    }
}

void PredictorModel::zero_grad() {
    for (auto& p : params()) std::fill(p.grad, p.grad + p.size, 0.0);
}

std::vector<ParamBlock> PredictorModel::params() {
    std::vector<ParamBlock> out;
    auto add = [&](const std::string& name, std::vector<double>& v, std::vector<double>& g) {
        out.push_back({name, v.data(), g.data(), v.size()});
    };
    for (size_t t = 0; t < impl_->trunks.size(); ++t) {
        std::string p = "trunk" + std::to_string(t) + ".";
        Trunk& tr = impl_->trunks[t];
        add(p + "c1.w", tr.c1.w, tr.c1.gw);
        add(p + "c1.b", tr.c1.b, tr.c1.gb);
        add(p + "c2.w", tr.c2.w, tr.c2.gw);
        add(p + "c2.b", tr.c2.b, tr.c2.gb);
        add(p + "c3.w", tr.c3.w, tr.c3.gw);
        add(p + "c3.b", tr.c3.b, tr.c3.gb);
        add(p + "reduce.w", tr.reduce.w, tr.reduce.gw);
        add(p + "reduce.b", tr.reduce.b, tr.reduce.gb);
    }
    add("skip.w", impl_->skip.w, impl_->skip.gw);
    add("skip.b", impl_->skip.b, impl_->skip.gb);
    add("fc.w", impl_->fc.w, impl_->fc.gw);
    add("fc.b", impl_->fc.b, impl_->fc.gb);
    return out;
}

size_t PredictorModel::param_count() {
    size_t n = 0;
    for (const auto& p : params()) n += p.size;
    return n;
}

TargetScaling fit_target_scaling(const std::vector<std::vector<double>>& raw_targets) {
    if (raw_targets.empty()) throw InputError("cannot fit scaling to an empty corpus");
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& t : raw_targets) {
        for (double v : t) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
    }
    if (!(mx > mn)) mx = mn + 1.0;  // flat corpus still scales finitely
    return TargetScaling{mn, mx};
}

std::vector<double> scale_targets(const std::vector<double>& raw, const TargetScaling& s) {
    std::vector<double> out(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) out[i] = s.scale(raw[i]);
    return out;
}

double mse_loss(const std::vector<double>& pred, const std::vector<double>& target) {
    if (pred.size() != target.size() || pred.empty()) throw InputError("loss length mismatch");
    double s = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        double d = pred[i] - target[i];
        s += d * d;
    }
    return s / double(pred.size());
}

std::vector<double> mse_loss_grad(const std::vector<double>& pred,
                                  const std::vector<double>& target) {
    if (pred.size() != target.size() || pred.empty()) throw InputError("loss length mismatch");
    std::vector<double> g(pred.size());
    double scale = 2.0 / double(pred.size());
    for (size_t i = 0; i < pred.size(); ++i) g[i] = scale * (pred[i] - target[i]);
    return g;
}

TrainResult train(const std::vector<FeatureTensor>& inputs,
                  const std::vector<std::vector<double>>& targets, const ModelConfig& mcfg,
                  const TrainConfig& cfg) {
    if (inputs.empty() || inputs.size() != targets.size())
        throw InputError("training needs matched, nonempty inputs and targets");
    if (cfg.iterations < 1 || cfg.batch_size < 1 || cfg.lr < 0.0 || cfg.weight_decay < 0.0)
        throw InputError("invalid training configuration");
    for (const auto& t : targets)
        if (int(t.size()) != mcfg.out_dim) throw InputError("target length != model output");

    TrainResult res{PredictorModel(mcfg), {}};
    PredictorModel& model = res.model;
    auto blocks = model.params();
    size_t total = 0;
    for (const auto& b : blocks) total += b.size;
    std::vector<double> adam_m(total, 0.0), adam_v(total, 0.0);

    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    Pcg32 batch_rng(cfg.seed, 2);
    Pcg32 dropout_rng(cfg.seed, 3);
    size_t n = inputs.size();

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        double lr = iter >= cfg.iterations / 2 ? cfg.lr * cfg.lr_decay : cfg.lr;
        model.zero_grad();
        double loss_sum = 0.0;
        for (int s = 0; s < cfg.batch_size; ++s) {
            size_t idx = std::min(n - 1, size_t(batch_rng.next_double() * double(n)));
            std::vector<double> pred = model.forward(inputs[idx], true, &dropout_rng);
            loss_sum += mse_loss(pred, targets[idx]);
            model.backward(mse_loss_grad(pred, targets[idx]));
        }
        double loss = loss_sum / cfg.batch_size;
        if (!std::isfinite(loss)) {
            std::ostringstream msg;
            msg << "training diverged: non-finite loss at iteration " << iter << " (lr " << lr
                << ", batch " << cfg.batch_size << ")";
            throw InternalError(msg.str());
        }

        double t = double(iter + 1);
        double bc1 = 1.0 - std::pow(beta1, t), bc2 = 1.0 - std::pow(beta2, t);
        size_t off = 0;
        for (auto& b : blocks) {
            for (size_t i = 0; i < b.size; ++i) {
                double g = b.grad[i] / double(cfg.batch_size) + cfg.weight_decay * b.value[i];
                adam_m[off + i] = beta1 * adam_m[off + i] + (1.0 - beta1) * g;
                adam_v[off + i] = beta2 * adam_v[off + i] + (1.0 - beta2) * g * g;
                double mh = adam_m[off + i] / bc1;
                double vh = adam_v[off + i] / bc2;
                b.value[i] -= lr * mh / (std::sqrt(vh) + eps);
            }
            off += b.size;
        }
        res.log.push_back({iter, loss, lr});
    }
    return res;
}

void write_train_log(const std::vector<TrainLogRow>& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path);
    out << "iteration,loss,lr\n";
    out.precision(17);
    for (const auto& row : log) out << row.iteration << "," << row.loss << "," << row.lr << "\n";
    if (!out) throw InputError("write failed: " + path);
}

Orientation predict_orientation(PredictorModel& m, const FeatureTensor& x,
                                const OrientationGrid& grid) {
    if (grid.size() != size_t(m.config().out_dim))
        throw InputError("grid size does not match the model output");
    std::vector<double> pred = m.forward(x, false, nullptr);
    size_t best = 0;
    for (size_t i = 1; i < pred.size(); ++i)
        if (pred[i] < pred[best]) best = i;
    return grid.at(best);
}

double gradient_check(PredictorModel& m, const FeatureTensor& x,
                      const std::vector<double>& target, double epsilon, int samples,
                      uint64_t seed, bool train_mode) {
    if (train_mode && m.config().dropout_rate > 0.0)
        throw InputError("gradient check under active dropout is not well-defined; "
                         "use a zero-dropout model or eval mode");

    m.zero_grad();
    std::vector<double> pred = m.forward(x, false, nullptr);
    m.backward(mse_loss_grad(pred, target));
    auto blocks = m.params();
    size_t total = 0;
    for (const auto& b : blocks) total += b.size;

    auto loss_at = [&]() { return mse_loss(m.forward(x, false, nullptr), target); };

    Pcg32 rng(seed, 5);
    double max_err = 0.0;
    int n = std::min<size_t>(samples, total);
    for (int s = 0; s < n; ++s) {
        size_t pick = size_t(rng.next_double() * double(total));
        pick = std::min(pick, total - 1);
        size_t off = pick;
        ParamBlock* blk = nullptr;
        for (auto& b : blocks) {
            if (off < b.size) {
                blk = &b;
                break;
            }
            off -= b.size;
        }
        double saved = blk->value[off];
        blk->value[off] = saved + epsilon;
        double lp = loss_at();
        blk->value[off] = saved - epsilon;
        double lm = loss_at();
        blk->value[off] = saved;

        double gn = (lp - lm) / (2.0 * epsilon);
        double ga = blk->grad[off];
        if (std::abs(ga) < 1e-9 && std::abs(gn) < 1e-9) continue;
        double err = std::abs(ga - gn) / std::max(std::abs(ga) + std::abs(gn), 1e-8);
        max_err = std::max(max_err, err);
    }
    return max_err;
}

// --- checkpoint ---

namespace {

constexpr char kModelMagic[4] = {'I', '3', 'M', 'D'};
constexpr uint8_t kModelVersion = 1;

void put_u8(std::ostream& o, uint8_t v) { o.put(char(v)); }
void put_u32(std::ostream& o, uint32_t v) {
    for (int i = 0; i < 4; ++i) o.put(char(v >> (8 * i)));
}
void put_u64(std::ostream& o, uint64_t v) {
    for (int i = 0; i < 8; ++i) o.put(char(v >> (8 * i)));
}
void put_f64(std::ostream& o, double d) {
    uint64_t u;
    std::memcpy(&u, &d, sizeof(u));
    put_u64(o, u);
}
uint8_t get_u8(std::istream& in) {
    int c = in.get();
    if (c < 0) throw InputError("truncated model file");
    return uint8_t(c);
}
uint32_t get_u32(std::istream& in) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(get_u8(in)) << (8 * i);
    return v;
}
uint64_t get_u64(std::istream& in) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(get_u8(in)) << (8 * i);
    return v;
}
double get_f64(std::istream& in) {
    uint64_t u = get_u64(in);
    double d;
    std::memcpy(&d, &u, sizeof(d));
    return d;
}

}  // namespace

void save_model(PredictorModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path);
    out.write(kModelMagic, 4);
    put_u8(out, kModelVersion);

    const ModelConfig& c = m.config();
    put_u32(out, uint32_t(c.segments));
    put_u32(out, uint32_t(c.channels));
    put_u32(out, uint32_t(c.height));
    put_u32(out, uint32_t(c.width));
    put_u32(out, uint32_t(c.out_dim));
    for (int i = 0; i < 3; ++i) put_u32(out, uint32_t(c.trunk_channels[i]));
    put_u32(out, uint32_t(c.skip_channels));
    put_u32(out, uint32_t(c.trunk_out_channels));
    put_u8(out, c.shared_trunk ? 1 : 0);
    put_f64(out, c.dropout_rate);
    put_u64(out, c.init_seed);
    put_f64(out, m.scaling().raw_min);
    put_f64(out, m.scaling().raw_max);

    auto blocks = m.params();
    put_u32(out, uint32_t(blocks.size()));
    for (const auto& b : blocks) {
        put_u32(out, uint32_t(b.name.size()));
        out.write(b.name.data(), std::streamsize(b.name.size()));
        put_u64(out, b.size);
        for (size_t i = 0; i < b.size; ++i) put_f64(out, b.value[i]);
    }
    if (!out) throw InputError("write failed: " + path);
}

PredictorModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open model file: " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0)
        throw InputError("not a model checkpoint: " + path);
    if (get_u8(in) != kModelVersion) throw InputError("unsupported model version: " + path);

    ModelConfig c;
    c.segments = int(get_u32(in));
    c.channels = int(get_u32(in));
    c.height = int(get_u32(in));
    c.width = int(get_u32(in));
    c.out_dim = int(get_u32(in));
    for (int i = 0; i < 3; ++i) c.trunk_channels[i] = int(get_u32(in));
    c.skip_channels = int(get_u32(in));
    c.trunk_out_channels = int(get_u32(in));
    c.shared_trunk = get_u8(in) != 0;
    c.dropout_rate = get_f64(in);
    c.init_seed = get_u64(in);

    TargetScaling scaling;
    scaling.raw_min = get_f64(in);
    scaling.raw_max = get_f64(in);

    PredictorModel m(c);
    m.set_scaling(scaling);
    auto blocks = m.params();
    uint32_t count = get_u32(in);
    if (count != blocks.size()) throw InputError("model block count mismatch: " + path);
    for (auto& b : blocks) {
        uint32_t name_len = get_u32(in);
        std::string name(name_len, '\0');
        if (!in.read(name.data(), name_len)) throw InputError("truncated model file");
        if (name != b.name) throw InputError("model block order mismatch: " + name);
        uint64_t sz = get_u64(in);
        if (sz != b.size) throw InputError("model block size mismatch: " + name);
        for (size_t i = 0; i < b.size; ++i) b.value[i] = get_f64(in);
    }
    return m;
}

}  // namespace iso360
