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

#include "isomer360/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "isomer360/image_io.hpp"
#include "isomer360/parallel.hpp"

namespace iso360 {

using nlohmann::json;

SizeTable build_size_table(const std::vector<EquirectFrame>& clip, const OrientationGrid& grid,
                           CodecId codec, int face_size, const std::string& clip_id, double fps,
                           int jobs) {
    if (clip.empty()) throw InputError("cannot build a size table for an empty clip");
    if (grid.size() == 0) throw InputError("empty orientation grid");

    SizeTable t;
    t.grid = grid;
    t.codec = codec;
    t.clip_id = clip_id;
    t.sizes.assign(grid.size(), 0);

    std::atomic<size_t> completed{0};
    try {
        parallel_for(grid.size(), jobs, [&](size_t i) {
            t.sizes[i] = size_at(clip, grid.at(i), codec, face_size, fps);
            completed.fetch_add(1, std::memory_order_relaxed);
        });
    } catch (const Error& e) {
        std::ostringstream msg;
        msg << "size table for '" << clip_id << "' incomplete (" << completed.load() << "/"
            << grid.size() << " orientations measured): " << e.what();
        throw Error(e.code(), msg.str());
    }
    return t;
}

namespace {

// First strict win in grid order; equal values keep the earlier index, which
// is the smallest (pitch, yaw) pair by construction of the enumeration.
size_t scan_extreme(const std::vector<uint64_t>& v, bool want_max) {
    size_t best = 0;
    for (size_t i = 1; i < v.size(); ++i) {
        if (want_max ? v[i] > v[best] : v[i] < v[best]) best = i;
    }
    return best;
}

}  // namespace

double reduction(const SizeTable& t) {
    if (t.sizes.empty()) throw InputError("reduction of an empty table");
    uint64_t mn = t.sizes[scan_extreme(t.sizes, false)];
    uint64_t mx = t.sizes[scan_extreme(t.sizes, true)];
    // A zero-byte encode cannot happen (streams carry a header), so any zero
    // entry marks a broken measurement rather than a very compressible clip.
    if (mn == 0) throw InputError("size table contains zero-byte entries");
    return 100.0 * double(mx - mn) / double(mx);
}

std::vector<double> normalized_sizes(const SizeTable& t, bool* degenerate) {
    if (t.sizes.empty()) throw InputError("normalized_sizes of an empty table");
    uint64_t mn = t.sizes[scan_extreme(t.sizes, false)];
    uint64_t mx = t.sizes[scan_extreme(t.sizes, true)];
    std::vector<double> out(t.sizes.size(), 0.0);
    if (mx == mn) {
        if (degenerate) *degenerate = true;
        return out;
    }
    if (degenerate) *degenerate = false;
    double span = double(mx - mn);
    for (size_t i = 0; i < t.sizes.size(); ++i)
        out[i] = 100.0 * double(t.sizes[i] - mn) / span;
    return out;
}

std::vector<double> relative_sizes(const SizeTable& t) {
    auto origin = t.grid.index_of(Orientation{0.0, 0.0});
    if (!origin) throw InputError("relative_sizes needs (0, 0) in the grid");
    double s0 = double(t.sizes[*origin]);
    std::vector<double> out(t.sizes.size());
    for (size_t i = 0; i < t.sizes.size(); ++i) out[i] = double(t.sizes[i]) - s0;
    return out;
}

ClipMetrics compute_metrics(const SizeTable& t) {
    if (t.sizes.size() != t.grid.size() || t.sizes.empty())
        throw InputError("size table does not match its grid");
    ClipMetrics m;
    size_t imin = scan_extreme(t.sizes, false);
    size_t imax = scan_extreme(t.sizes, true);
    m.omega_min = t.grid.at(imin);
    m.omega_max = t.grid.at(imax);
    m.min_bytes = t.sizes[imin];
    m.max_bytes = t.sizes[imax];
    m.reduction_r = reduction(t);
    m.normalized = normalized_sizes(t, &m.degenerate);
    m.relative = relative_sizes(t);
    return m;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw InputError("pearson needs two equal vectors");
    double n = double(a.size());
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

double cross_codec_correlation(const std::vector<std::vector<double>>& relative_a,
                               const std::vector<std::vector<double>>& relative_b) {
    if (relative_a.size() != relative_b.size())
        throw InputError("cross_codec_correlation needs matched clip sets");
    size_t clips = relative_a.size();
    if (clips < 2) throw InputError("cross_codec_correlation needs at least 2 clips");
    size_t dims = relative_a[0].size();
    for (const auto& v : relative_a)
        if (v.size() != dims) throw InputError("mismatched table sizes (codec A)");
    for (const auto& v : relative_b)
        if (v.size() != dims) throw InputError("mismatched table sizes (codec B)");

    double sum = 0.0;
    size_t counted = 0;
    std::vector<double> xa(clips), xb(clips);
    for (size_t d = 0; d < dims; ++d) {
        for (size_t c = 0; c < clips; ++c) {
            xa[c] = relative_a[c][d];
            xb[c] = relative_b[c][d];
        }
        double rho = pearson(xa, xb);
        if (std::isnan(rho)) continue;  // zero variance at this orientation
        sum += rho;
        ++counted;
    }
    if (counted == 0)
        throw InputError("cross_codec_correlation undefined: no orientation varies across clips");
    return sum / double(counted);
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

ClusterModel cluster_distributions(const std::vector<std::vector<double>>& normalized, int k,
                                   Pcg32& rng, int max_iters) {
    size_t n = normalized.size();
    if (k < 1) throw InputError("cluster count must be >= 1");
    if (n < size_t(k)) throw InputError("fewer clips than clusters");
    size_t dims = normalized[0].size();
    for (const auto& v : normalized)
        if (v.size() != dims) throw InputError("cluster inputs must share one grid");

    ClusterModel model;
    model.k = k;

    // k-means++ seeding: first center uniform, later centers proportional to
    // squared distance from the nearest already-chosen center.
    std::vector<size_t> seed_ids;
    seed_ids.push_back(rng.next_below(uint32_t(n)));
    std::vector<double> d2(n);
    while (seed_ids.size() < size_t(k)) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (size_t s : seed_ids) best = std::min(best, sq_dist(normalized[i], normalized[s]));
            d2[i] = best;
            total += best;
        }
        size_t pick;
        if (total <= 0.0) {
            pick = rng.next_below(uint32_t(n));  // all points coincide with centers
        } else {
            double r = rng.next_double() * total;
            double acc = 0.0;
            pick = n - 1;
            for (size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
        }
        seed_ids.push_back(pick);
    }
    model.centers.reserve(k);
    for (size_t s : seed_ids) model.centers.push_back(normalized[s]);

    model.assignment.assign(n, -1);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (size_t i = 0; i < n; ++i) {
            int best = 0;
            double bestd = sq_dist(normalized[i], model.centers[0]);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(normalized[i], model.centers[c]);
                if (d < bestd) {
                    bestd = d;
                    best = c;
                }
            }
            if (model.assignment[i] != best) {
                model.assignment[i] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        std::vector<std::vector<double>> sums(k, std::vector<double>(dims, 0.0));
        std::vector<size_t> counts(k, 0);
        for (size_t i = 0; i < n; ++i) {
            auto& s = sums[model.assignment[i]];
            for (size_t d = 0; d < dims; ++d) s[d] += normalized[i][d];
            ++counts[model.assignment[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // re-seed an emptied cluster with the point farthest from its
                // current center assignment
                size_t far = 0;
                double fard = -1.0;
                for (size_t i = 0; i < n; ++i) {
                    double d = sq_dist(normalized[i], model.centers[model.assignment[i]]);
                    if (d > fard) {
                        fard = d;
                        far = i;
                    }
                }
                model.centers[c] = normalized[far];
                model.assignment[far] = c;
                continue;
            }
            for (size_t d = 0; d < dims; ++d) model.centers[c][d] = sums[c][d] / double(counts[c]);
        }
    }

    model.objective = 0.0;
    for (size_t i = 0; i < n; ++i)
        model.objective += sq_dist(normalized[i], model.centers[model.assignment[i]]);

    model.representative_ids.assign(k, 0);
    for (int c = 0; c < k; ++c) {
        double bestd = std::numeric_limits<double>::infinity();
        size_t best = 0;
        bool found = false;
        for (size_t i = 0; i < n; ++i) {
            if (model.assignment[i] != c) continue;
            double d = sq_dist(normalized[i], model.centers[c]);
            if (d < bestd) {
                bestd = d;
                best = i;
                found = true;
            }
        }
        if (!found) {
            for (size_t i = 0; i < n; ++i) {
                double d = sq_dist(normalized[i], model.centers[c]);
                if (d < bestd) {
                    bestd = d;
                    best = i;
                }
            }
        }
        model.representative_ids[c] = best;
    }
    return model;
}

SymmetryResult rotational_symmetry_check(const std::vector<EquirectFrame>& clip, CodecId codec,
                                         int face_size, double offset_deg, double yaw_step,
                                         double fps, int jobs) {
    if (yaw_step <= 0.0) throw InputError("yaw_step must be positive");
    std::vector<double> yaws;
    for (double y = -45.0; y <= 45.0 + 1e-9; y += yaw_step) yaws.push_back(y);

    SymmetryResult res;
    res.base.assign(yaws.size(), 0.0);
    res.shifted.assign(yaws.size(), 0.0);
    parallel_for(yaws.size() * 2, jobs, [&](size_t i) {
        size_t j = i / 2;
        bool shifted = (i % 2) != 0;
        Orientation o{yaws[j] + (shifted ? offset_deg : 0.0), 0.0};
        double v = double(size_at(clip, o, codec, face_size, fps));
        (shifted ? res.shifted : res.base)[j] = v;
    });

    double rho = pearson(res.base, res.shifted);
    if (std::isnan(rho)) {
        res.degenerate = true;
        res.rho = 0.0;
    } else {
        res.rho = rho;
    }
    return res;
}

// --- persistence ---

void write_size_table_csv(const SizeTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path);
    out << "theta_deg,phi_deg,bytes\n";
    for (size_t i = 0; i < t.sizes.size(); ++i) {
        Orientation o = t.grid.at(i);
        out << o.pitch_deg << "," << o.yaw_deg << "," << t.sizes[i] << "\n";
    }
    if (!out) throw InputError("write failed: " + path);
}

SizeTable read_size_table_csv(const std::string& path, CodecId codec, const std::string& clip_id) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open size table: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("theta_deg,phi_deg,bytes", 0) != 0)
        throw InputError("bad size table header in " + path);

    std::vector<double> pitches, yaws;
    std::vector<std::pair<Orientation, uint64_t>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double theta, phi;
        uint64_t bytes;
        char c1, c2;
        if (!(ls >> theta >> c1 >> phi >> c2 >> bytes) || c1 != ',' || c2 != ',')
            throw InputError("bad size table row in " + path + ": " + line);
        rows.push_back({Orientation{phi, theta}, bytes});
        if (std::find(pitches.begin(), pitches.end(), theta) == pitches.end())
            pitches.push_back(theta);
        if (std::find(yaws.begin(), yaws.end(), phi) == yaws.end()) yaws.push_back(phi);
    }
    std::sort(pitches.begin(), pitches.end());
    std::sort(yaws.begin(), yaws.end());

    SizeTable t;
    t.grid = OrientationGrid(yaws, pitches);
    t.codec = codec;
    t.clip_id = clip_id;
    t.sizes.assign(t.grid.size(), 0);
    std::vector<uint8_t> seen(t.grid.size(), 0);
    for (const auto& [o, bytes] : rows) {
        auto idx = t.grid.index_of(o);
        if (!idx) throw InputError("size table rows do not form a grid: " + path);
        t.sizes[*idx] = bytes;
        seen[*idx] = 1;
    }
    for (uint8_t s : seen)
        if (!s) throw InputError("size table has missing grid entries: " + path);
    return t;
}

void write_metrics_json(const SizeTable& t, const ClipMetrics& m, const std::string& path) {
    json j;
    j["clip_id"] = t.clip_id;
    j["codec"] = codec_name(t.codec);
    j["grid"] = {{"yaw_deg", t.grid.yaw_values()}, {"pitch_deg", t.grid.pitch_values()}};
    j["omega_min"] = {{"yaw_deg", m.omega_min.yaw_deg}, {"pitch_deg", m.omega_min.pitch_deg}};
    j["omega_max"] = {{"yaw_deg", m.omega_max.yaw_deg}, {"pitch_deg", m.omega_max.pitch_deg}};
    j["min_bytes"] = m.min_bytes;
    j["max_bytes"] = m.max_bytes;
    j["reduction_percent"] = m.reduction_r;
    j["degenerate"] = m.degenerate;
    j["normalized"] = m.normalized;
    j["relative"] = m.relative;
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

void write_heatmap_csv(const SizeTable& t, const ClipMetrics& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path);
    const auto& yaws = t.grid.yaw_values();
    const auto& pitches = t.grid.pitch_values();
    out << "pitch_deg\\yaw_deg";
    for (double y : yaws) out << "," << y;
    out << "\n";
    for (size_t r = 0; r < pitches.size(); ++r) {
        out << pitches[r];
        for (size_t c = 0; c < yaws.size(); ++c) out << "," << m.normalized[r * yaws.size() + c];
        out << "\n";
    }
    if (!out) throw InputError("write failed: " + path);
}

void write_heatmap_png(const SizeTable& t, const ClipMetrics& m, const std::string& path) {
    Image8 img;
    img.width = int(t.grid.yaw_values().size());
    img.height = int(t.grid.pitch_values().size());
    img.data.resize(size_t(img.width) * img.height);
    for (size_t i = 0; i < m.normalized.size(); ++i)
        img.data[i] = uint8_t(std::lround(m.normalized[i] * 255.0 / 100.0));
    write_png(img, path);
}

}  // namespace iso360
