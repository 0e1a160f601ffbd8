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

// isomer360 command line: batch frontend over the shared-library C API.
// Exit codes: 0 ok, 1 internal, 2 input, 3 environment, 4 encode.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "isomer360.h"

namespace {

int finish(iso360_status st) {
    if (st != ISO360_OK) std::fprintf(stderr, "error: %s\n", iso360_last_error());
    return int(st);
}

void add_grid_flags(CLI::App* cmd, iso360_grid_spec* grid) {
    grid->yaw_step_deg = 5.0;
    grid->pitch_step_deg = 5.0;
    grid->half_range_deg = 45.0;
    cmd->add_option("--yaw-step", grid->yaw_step_deg, "Yaw step in degrees")
        ->capture_default_str();
    cmd->add_option("--pitch-step", grid->pitch_step_deg, "Pitch step in degrees")
        ->capture_default_str();
    cmd->add_option("--half-range", grid->half_range_deg,
                    "Grid covers [-half-range, +half-range] in both angles")
        ->capture_default_str();
}

struct FramesGuard {
    iso360_frames* f = nullptr;
    ~FramesGuard() { iso360_frames_free(f); }
};

int cmd_synth(const std::string& scene, int width, int frames, double fps, uint64_t seed,
              const std::string& output) {
    FramesGuard g;
    iso360_status st = iso360_frames_synth(scene.c_str(), width, frames, fps, seed, &g.f);
    if (st == ISO360_OK) st = iso360_frames_save(g.f, output.c_str());
    return finish(st);
}

int cmd_project(const std::string& input, const std::string& output, double yaw, double pitch,
                int face_size) {
    FramesGuard in, out;
    iso360_status st = iso360_frames_load(input.c_str(), &in.f);
    if (st == ISO360_OK) st = iso360_frames_project(in.f, yaw, pitch, face_size, &out.f);
    if (st == ISO360_OK) st = iso360_frames_save(out.f, output.c_str());
    return finish(st);
}

int cmd_predict(const iso360_predict_job& job) {
    double yaw = 0.0;
    double pitch = 0.0;
    int rank = 0;
    iso360_status st = iso360_run_predict(&job, &yaw, &pitch, &rank);
    if (st == ISO360_OK) std::printf("%g %g %d\n", pitch, yaw, rank);
    return finish(st);
}

int cmd_eval(const iso360_eval_job& job, const std::string& output_dir) {
    iso360_status st = iso360_run_eval(&job);
    if (st != ISO360_OK) return finish(st);
    std::ifstream report(output_dir + "/report.txt");
    std::cout << report.rdbuf();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Find and predict the most compressible cubemap rotation of a 360 video"};
    app.require_subcommand(1);
    app.set_version_flag("--version", iso360_version());

    // synth
    std::string sy_scene = "seam", sy_output;
    int sy_width = 512, sy_frames = 48;
    double sy_fps = 30.0;
    uint64_t sy_seed = 0;
    auto* synth = app.add_subcommand("synth", "Generate a procedural equirect test clip");
    synth->add_option("output", sy_output, ".y4m file or PNG directory")->required();
    synth->add_option("--scene", sy_scene, "flat|gradient|noise|pan|seam|spheres|cue")
        ->capture_default_str();
    synth->add_option("--width", sy_width, "Equirect width (height = width/2)")
        ->capture_default_str();
    synth->add_option("--frames", sy_frames, "Frame count")->capture_default_str();
    synth->add_option("--fps", sy_fps, "Frame rate")->capture_default_str();
    synth->add_option("--seed", sy_seed, "Scene seed")->capture_default_str();

    // project
    std::string pr_input, pr_output;
    double pr_yaw = 0.0, pr_pitch = 0.0;
    int pr_face = 64;
    auto* project = app.add_subcommand("project", "Rotate and project equirect frames to a 2x3 cubemap");
    project->add_option("input", pr_input, "Equirect frames: .y4m or PNG directory")->required();
    project->add_option("output", pr_output, ".y4m file or PNG directory")->required();
    project->add_option("--yaw", pr_yaw, "Yaw (phi) in degrees")->capture_default_str();
    project->add_option("--pitch", pr_pitch, "Pitch (theta) in degrees")->capture_default_str();
    project->add_option("--face-size", pr_face, "Cube face edge in pixels")->capture_default_str();

    // search
    std::string se_input, se_out, se_codec = "reference";
    iso360_grid_spec se_grid{};
    int se_face = 64, se_jobs = 0;
    double se_clip_seconds = 2.0, se_fps = 0.0;
    uint64_t se_seed = 0;
    auto* search = app.add_subcommand("search", "Measure encoded size for every grid orientation");
    search->add_option("input", se_input, "Equirect frames: .y4m or PNG directory")->required();
    search->add_option("--out", se_out, "Output directory")->required();
    add_grid_flags(search, &se_grid);
    search->add_option("--codec", se_codec, "reference|h264|hevc|vp9")->capture_default_str();
    search->add_option("--face-size", se_face, "Cube face edge in pixels")->capture_default_str();
    search->add_option("--clip-seconds", se_clip_seconds, "Clip length in seconds")
        ->capture_default_str();
    search->add_option("--fps", se_fps, "Frame rate override (0: from input)")
        ->capture_default_str();
    search->add_option("--jobs", se_jobs, "Worker threads (0: hardware)")->capture_default_str();
    search->add_option("--seed", se_seed, "Run seed, echoed into the manifest")
        ->capture_default_str();

    // features
    std::string fe_input, fe_out;
    int fe_face = 64, fe_superpixels = 256;
    double fe_clip_seconds = 2.0, fe_fps = 0.0, fe_compactness = 1.0;
    auto* features = app.add_subcommand("features", "Extract contour and motion feature tensors");
    features->add_option("input", fe_input, "Equirect frames: .y4m or PNG directory")->required();
    features->add_option("--out", fe_out, "Output directory")->required();
    features->add_option("--face-size", fe_face, "Cube face edge in pixels")->capture_default_str();
    features->add_option("--clip-seconds", fe_clip_seconds, "Clip length in seconds")
        ->capture_default_str();
    features->add_option("--fps", fe_fps, "Frame rate override (0: from input)")
        ->capture_default_str();
    features->add_option("--superpixels", fe_superpixels, "Superpixel target per face")
        ->capture_default_str();
    features->add_option("--compactness", fe_compactness, "Superpixel compactness m")
        ->capture_default_str();

    // train
    std::string tr_data, tr_out;
    iso360_grid_spec tr_grid{};
    int tr_iterations = 4000, tr_batch = 64;
    double tr_lr = 1e-3, tr_wd = 5e-4, tr_dropout = 0.5;
    bool tr_per_segment = false;
    uint64_t tr_seed = 0;
    auto* train = app.add_subcommand("train", "Train the size-map regressor on paired artifacts");
    train->add_option("--data", tr_data, "Directory of paired *.features.* and *.sizes.csv")
        ->required();
    train->add_option("--out", tr_out, "Output directory")->required();
    add_grid_flags(train, &tr_grid);
    train->add_option("--iterations", tr_iterations, "Adam iterations")->capture_default_str();
    train->add_option("--batch-size", tr_batch, "Minibatch size")->capture_default_str();
    train->add_option("--lr", tr_lr, "Learning rate")->capture_default_str();
    train->add_option("--weight-decay", tr_wd, "L2 weight decay")->capture_default_str();
    train->add_option("--dropout", tr_dropout, "Dropout rate before the head")
        ->capture_default_str();
    train->add_flag("--per-segment-trunk", tr_per_segment,
                    "Use one trunk per temporal segment instead of shared weights");
    train->add_option("--seed", tr_seed, "Training seed")->capture_default_str();

    // predict
    std::string pd_model, pd_features, pd_out;
    iso360_grid_spec pd_grid{};
    auto* predict = app.add_subcommand("predict", "Predict the cheapest orientation for one clip");
    predict->add_option("--model", pd_model, "Model checkpoint")->required();
    predict->add_option("--features", pd_features, "Clip feature tensor (*.features.bin)")
        ->required();
    predict->add_option("--out", pd_out, "Prediction JSON path")->required();
    add_grid_flags(predict, &pd_grid);

    // eval
    std::string ev_tables, ev_predictions, ev_out, ev_methods = "all", ev_codec = "reference";
    std::string ev_transfer;
    uint64_t ev_seed = 0;
    int ev_draws = 100;
    auto* eval = app.add_subcommand("eval", "Score methods against the oracle tables");
    eval->add_option("--tables", ev_tables, "Directory of *.sizes.csv")->required();
    eval->add_option("--predictions", ev_predictions, "Directory of *.prediction.json");
    eval->add_option("--out", ev_out, "Output directory")->required();
    eval->add_option("--methods", ev_methods, "\"all\" or comma list of random,center,predicted,oracle")
        ->capture_default_str();
    eval->add_option("--codec", ev_codec, "Codec the tables were measured with")
        ->capture_default_str();
    eval->add_option("--transfer-source", ev_transfer,
                     "Codec the predictions were trained on, when different");
    eval->add_option("--seed", ev_seed, "Seed for the RANDOM baseline")->capture_default_str();
    eval->add_option("--random-draws", ev_draws, "Draw count for the RANDOM baseline")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (synth->parsed()) return cmd_synth(sy_scene, sy_width, sy_frames, sy_fps, sy_seed, sy_output);
    if (project->parsed()) return cmd_project(pr_input, pr_output, pr_yaw, pr_pitch, pr_face);
    if (search->parsed()) {
        iso360_search_job job{};
        job.input = se_input.c_str();
        job.output_dir = se_out.c_str();
        job.grid = se_grid;
        job.codec = se_codec.c_str();
        job.face_size = se_face;
        job.clip_seconds = se_clip_seconds;
        job.fps = se_fps;
        job.jobs = se_jobs;
        job.seed = se_seed;
        return finish(iso360_run_search(&job));
    }
    if (features->parsed()) {
        iso360_features_job job{};
        job.input = fe_input.c_str();
        job.output_dir = fe_out.c_str();
        job.face_size = fe_face;
        job.clip_seconds = fe_clip_seconds;
        job.fps = fe_fps;
        job.superpixels = fe_superpixels;
        job.compactness = fe_compactness;
        return finish(iso360_run_features(&job));
    }
    if (train->parsed()) {
        iso360_train_job job{};
        job.data_dir = tr_data.c_str();
        job.output_dir = tr_out.c_str();
        job.grid = tr_grid;
        job.iterations = tr_iterations;
        job.batch_size = tr_batch;
        job.lr = tr_lr;
        job.weight_decay = tr_wd;
        job.dropout = tr_dropout;
        job.shared_trunk = tr_per_segment ? 0 : 1;
        job.seed = tr_seed;
        return finish(iso360_run_train(&job));
    }
    if (predict->parsed()) {
        iso360_predict_job job{};
        job.model_path = pd_model.c_str();
        job.features_path = pd_features.c_str();
        job.output = pd_out.c_str();
        job.grid = pd_grid;
        return cmd_predict(job);
    }
    if (eval->parsed()) {
        iso360_eval_job job{};
        job.tables_dir = ev_tables.c_str();
        job.predictions_dir = ev_predictions.empty() ? nullptr : ev_predictions.c_str();
        job.output_dir = ev_out.c_str();
        job.methods = ev_methods.c_str();
        job.codec = ev_codec.c_str();
        job.transfer_source = ev_transfer.empty() ? nullptr : ev_transfer.c_str();
        job.seed = ev_seed;
        job.random_draws = ev_draws;
        return cmd_eval(job, ev_out);
    }
    return 2;
}
