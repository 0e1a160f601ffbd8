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

#include "isomer360/geometry.hpp"

namespace iso360 {

// Batch job layer shared by the C API and the command line. Each run
// validates its config, writes artifacts under the output location and drops
// a manifest.json echoing the config verbatim. File naming per clip:
//   <clip_id>.sizes.csv / .metrics.json / .heatmap.csv / .heatmap.png
//   <clip_id>.features.bin / .features.json
//   <clip_id>.prediction.json
// where clip_id = <input stem>-segNNN in temporal order.

struct GridSpec {
    double yaw_step_deg = 5.0;
    double pitch_step_deg = 5.0;
    double half_range_deg = 45.0;
};

OrientationGrid grid_from_spec(const GridSpec& spec);

struct SynthJob {
    std::string scene = "seam";
    int width = 512;
    int frames = 48;
    double fps = 30.0;
    uint64_t seed = 0;
    std::string output;  ///< .y4m file or directory (PNG frames)
};
void run_synth(const SynthJob& job);

struct ProjectJob {
    std::string input;  ///< equirect frames: .y4m or PNG directory
    std::string output;
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;
    int face_size = 64;
};
void run_project(const ProjectJob& job);

struct SearchJob {
    std::string input;  ///< equirect frames
    std::string output_dir;
    GridSpec grid;
    std::string codec = "reference";
    int face_size = 64;
    double clip_seconds = 2.0;
    double fps = 0.0;  ///< <= 0: taken from the input
    int jobs = 1;
    uint64_t seed = 0;
};
void run_search(const SearchJob& job);

struct FeaturesJob {
    std::string input;  ///< equirect frames
    std::string output_dir;
    int face_size = 64;
    double clip_seconds = 2.0;
    double fps = 0.0;
    int superpixels = 256;
    double compactness = 1.0;
};
void run_features(const FeaturesJob& job);

struct TrainJob {
    std::string data_dir;  ///< paired <id>.features.* and <id>.sizes.csv
    std::string output_dir;
    GridSpec grid;
    int iterations = 4000;
    int batch_size = 64;
    double lr = 1e-3;
    double weight_decay = 5e-4;
    double dropout = 0.5;
    bool shared_trunk = true;
    uint64_t seed = 0;
};
void run_train(const TrainJob& job);  // writes model.bin + train_log.csv

struct PredictJob {
    std::string model_path;
    std::string features_path;  ///< <id>.features.bin with sidecar .features.json
    std::string output;         ///< prediction JSON path
    GridSpec grid;
};
struct PredictOutcome {
    Orientation chosen;
    int rank = 1;  ///< of the chosen orientation by predicted size; 1 = smallest
};
PredictOutcome run_predict(const PredictJob& job);

struct EvalJob {
    std::string tables_dir;       ///< *.sizes.csv for the eval clips
    std::string predictions_dir;  ///< *.prediction.json; required for PREDICTED
    std::string output_dir;
    std::string methods = "all";  ///< "all" or comma list of random,center,predicted,oracle
    std::string codec = "reference";
    std::string transfer_source;  ///< codec the predictions came from, if different
    uint64_t seed = 0;
    int random_draws = 100;
};
void run_eval(const EvalJob& job);  // report.json, report.txt, distribution CSVs

}  // namespace iso360
