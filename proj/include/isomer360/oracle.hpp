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

#include "isomer360/codec.hpp"
#include "isomer360/common.hpp"
#include "isomer360/geometry.hpp"

namespace iso360 {

/// Encoded byte counts for one clip over the orientation grid, row-major with
/// pitch as the outer index (same order as OrientationGrid::at).
struct SizeTable {
    OrientationGrid grid;
    std::vector<uint64_t> sizes;
    CodecId codec = CodecId::reference;
    std::string clip_id;

    uint64_t at(const Orientation& o) const {
        auto i = grid.index_of(o);
        if (!i) throw InputError("orientation not in table grid");
        return sizes[*i];
    }
};

/// Derived statistics for one table. Orientation naming across file formats:
/// theta = pitch, phi = yaw.
struct ClipMetrics {
    Orientation omega_min;  ///< argmin size; ties -> smallest (pitch, yaw)
    Orientation omega_max;  ///< argmax size; same tie rule
    uint64_t min_bytes = 0;
    uint64_t max_bytes = 0;
    double reduction_r = 0.0;        ///< 100 * (max - min) / max
    bool degenerate = false;         ///< flat table; normalized forced to zero
    std::vector<double> normalized;  ///< 100 * (S - min) / (max - min), grid order
    std::vector<double> relative;    ///< S - S(0,0) in bytes, signed, grid order
};

/// K-means summary of normalized size maps. Centers live in the same
/// grid-ordered vector space as ClipMetrics::normalized; each cluster is
/// represented by the member clip nearest to its center.
struct ClusterModel {
    int k = 16;
    std::vector<std::vector<double>> centers;
    std::vector<size_t> representative_ids;
    std::vector<int> assignment;  ///< cluster index per input clip
    double objective = 0.0;       ///< final sum of squared distances
};

struct SymmetryResult {
    double rho = 0.0;
    bool degenerate = false;  ///< either size vector was flat
    std::vector<double> base;
    std::vector<double> shifted;
};

/// Measures size_at for every grid orientation. Work fans out across `jobs`
/// threads; each result lands in its own slot so aggregation order never
/// changes the table. On encode failure the first error is rethrown with a
/// note of how many orientations had completed.
SizeTable build_size_table(const std::vector<EquirectFrame>& clip, const OrientationGrid& grid,
                           CodecId codec, int face_size, const std::string& clip_id,
                           double fps = 30.0, int jobs = 1);

double reduction(const SizeTable& t);

/// 100 * (S - min) / (max - min) per orientation. A flat table yields all
/// zeros and sets *degenerate instead of dividing by zero.
std::vector<double> normalized_sizes(const SizeTable& t, bool* degenerate = nullptr);

/// S - S(0,0) per orientation, signed. The grid must contain (0, 0).
std::vector<double> relative_sizes(const SizeTable& t);

ClipMetrics compute_metrics(const SizeTable& t);

/// Pearson correlation; returns NaN when either input has zero variance.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Agreement between two codecs on relative sizes: for each orientation,
/// Pearson correlation of S' across clips, then the mean over orientations.
/// Orientations where either codec shows zero variance across clips are
/// skipped ((0,0) always is, since S'(0,0) = 0 by construction).
double cross_codec_correlation(const std::vector<std::vector<double>>& relative_a,
                               const std::vector<std::vector<double>>& relative_b);

/// Single-run K-means with k-means++ style seeding from `rng`. Lloyd
/// iterations until assignments stabilize (or max_iters); an emptied cluster
/// is re-seeded with the point farthest from its center. Fixed seed gives
/// identical clusters.
ClusterModel cluster_distributions(const std::vector<std::vector<double>>& normalized, int k,
                                   Pcg32& rng, int max_iters = 100);

/// Compares sizes on the pitch-0 yaw line against the same line shifted by
/// offset_deg of yaw. A 90-degree offset lands on the same cube geometry, so
/// rho should be high there and low at 45 degrees for structured content.
SymmetryResult rotational_symmetry_check(const std::vector<EquirectFrame>& clip, CodecId codec,
                                         int face_size, double offset_deg = 90.0,
                                         double yaw_step = 15.0, double fps = 30.0, int jobs = 1);

// --- persistence ---

/// CSV with header "theta_deg,phi_deg,bytes"; theta = pitch, phi = yaw,
/// rows in grid order.
void write_size_table_csv(const SizeTable& t, const std::string& path);
SizeTable read_size_table_csv(const std::string& path, CodecId codec = CodecId::reference,
                              const std::string& clip_id = "");

/// Metrics bundle as JSON (grid, extremes, reduction, normalized, relative).
void write_metrics_json(const SizeTable& t, const ClipMetrics& m, const std::string& path);

/// Normalized sizes as a CSV matrix (pitch rows ascending, yaw columns
/// ascending) plus an 8-bit grayscale image, dark = small = cheap to encode.
void write_heatmap_csv(const SizeTable& t, const ClipMetrics& m, const std::string& path);
void write_heatmap_png(const SizeTable& t, const ClipMetrics& m, const std::string& path);

}  // namespace iso360
