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

#include "isomer360/oracle.hpp"

namespace iso360 {

/// Orientation policies scored against oracle size tables.
///   RANDOM     expectation over seeded uniform draws (not a single draw)
///   CENTER     always (0, 0), the orientation the footage shipped with
///   PREDICTED  model-chosen orientation per clip
///   ORACLE     true per-clip minimum; defines 100 on the r-tilde scale
enum class EvalMethod { random, center, predicted, oracle };

const char* method_name(EvalMethod m);

struct MethodResult {
    EvalMethod method = EvalMethod::oracle;
    double r_tilde = 0.0;         ///< 0..100; see report doc
    double achieved_bytes = 0.0;  ///< summed over clips (RANDOM: expectation)
    std::vector<Orientation> chosen;  ///< per clip; empty for RANDOM
};

/// Video-level scoring: max_total and min_total sum each clip's worst / best
/// size; a method's achieved bytes sum its chosen sizes, and
/// r_tilde = 100 * (max_total - achieved) / (max_total - min_total).
/// A corpus with max_total == min_total is flagged degenerate and scores 100.
struct EvalReport {
    std::string codec;
    std::string transfer_source;  ///< codec the predictions came from, if different
    std::vector<std::string> clip_ids;
    uint64_t min_total = 0;
    uint64_t max_total = 0;
    bool degenerate = false;
    std::vector<MethodResult> methods;
};

/// Scores the requested methods over one set of size tables. PREDICTED needs
/// one orientation per clip; every prediction must lie on the table grid.
/// RANDOM draws `random_draws` grid orientations per clip from the seed and
/// reports the mean.
EvalReport evaluate(const std::vector<SizeTable>& tables,
                    const std::vector<EvalMethod>& methods,
                    const std::vector<Orientation>* predictions = nullptr, uint64_t seed = 0,
                    int random_draws = 100);

/// Scores codec-A predictions against codec-B tables (always PREDICTED plus
/// the reference methods), stamping the training source.
EvalReport transfer_eval(const std::vector<SizeTable>& tables_b,
                         const std::vector<Orientation>& predictions_from_a,
                         const std::string& source_codec, uint64_t seed = 0,
                         int random_draws = 100);

/// Fold index per clip, splitting by source video so clips of one video
/// never straddle folds. Sources are shuffled from the seed, then dealt
/// round-robin. Errors when there are fewer sources than folds.
std::vector<int> kfold_split(const std::vector<std::string>& source_per_clip, int k,
                             uint64_t seed);

void write_report_json(const EvalReport& r, const std::string& path);

/// Aligned table, one row per method.
std::string format_report_text(const EvalReport& r);

/// Count matrix over the grid (pitch rows, yaw columns) of chosen
/// orientations; the predicted-vs-true distribution comparison artifact.
void write_orientation_distribution_csv(const OrientationGrid& grid,
                                        const std::vector<Orientation>& chosen,
                                        const std::string& path);

}  // namespace iso360
