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

#include "isomer360.h"

#include <string>
#include <vector>

#include "isomer360/image_io.hpp"
#include "isomer360/jobs.hpp"
#include "isomer360/projection.hpp"
#include "isomer360/synth.hpp"

using namespace iso360;

namespace {

thread_local std::string t_last_error;

iso360_status set_error(StatusCode code, const char* what) {
    t_last_error = what ? what : "";
    return iso360_status(int(code));
}

template <typename Fn>
iso360_status guarded(Fn&& fn) {
    try {
        fn();
        t_last_error.clear();
        return ISO360_OK;
    } catch (const Error& e) {
        return set_error(e.code(), e.what());
    } catch (const std::exception& e) {
        return set_error(StatusCode::internal, e.what());
    } catch (...) {
        return set_error(StatusCode::internal, "unknown error");
    }
}

GridSpec grid_of(const iso360_grid_spec& g) {
    GridSpec out;
    if (g.yaw_step_deg > 0.0) out.yaw_step_deg = g.yaw_step_deg;
    if (g.pitch_step_deg > 0.0) out.pitch_step_deg = g.pitch_step_deg;
    if (g.half_range_deg > 0.0) out.half_range_deg = g.half_range_deg;
    return out;
}

const char* or_default(const char* s, const char* fallback) {
    return (s && *s) ? s : fallback;
}

}  // namespace

struct iso360_frames {
    double fps = 30.0;
    std::vector<Image8> rasters;
};

extern "C" {

const char* iso360_last_error(void) { return t_last_error.c_str(); }

const char* iso360_version(void) { return "0.1.0"; }

iso360_status iso360_frames_load(const char* path, iso360_frames** out) {
    return guarded([&] {
        if (!path || !out) throw InputError("null argument");
        FrameSequence seq = load_frames(path);
        auto* f = new iso360_frames;
        f->fps = seq.fps;
        f->rasters = std::move(seq.frames);
        *out = f;
    });
}

iso360_status iso360_frames_save(const iso360_frames* frames, const char* path) {
    return guarded([&] {
        if (!frames || !path) throw InputError("null argument");
        save_frames(frames->rasters, frames->fps, path);
    });
}

iso360_status iso360_frames_synth(const char* scene, int width, int frame_count, double fps,
                                  unsigned long long seed, iso360_frames** out) {
    return guarded([&] {
        if (!scene || !out) throw InputError("null argument");
        auto kind = scene_from_name(scene);
        if (!kind) throw InputError(std::string("unknown scene: ") + scene);
        SceneConfig cfg;
        cfg.kind = *kind;
        if (*kind == SceneKind::cue) {
            cfg = make_cue_config(seed, width > 0 ? width : 256, frame_count > 0 ? frame_count : 16);
        } else {
            if (width > 0) cfg.width = width;
            if (frame_count > 0) cfg.frames = frame_count;
            cfg.seed = seed;
        }
        cfg.fps = fps > 0.0 ? fps : 30.0;
        std::vector<EquirectFrame> frames = make_scene(cfg);
        auto* f = new iso360_frames;
        f->fps = cfg.fps;
        f->rasters.reserve(frames.size());
        for (auto& fr : frames) f->rasters.push_back(std::move(fr.luma));
        *out = f;
    });
}

iso360_status iso360_frames_project(const iso360_frames* equirect, double yaw_deg,
                                    double pitch_deg, int face_size, iso360_frames** out) {
    return guarded([&] {
        if (!equirect || !out) throw InputError("null argument");
        std::vector<EquirectFrame> frames;
        frames.reserve(equirect->rasters.size());
        for (const auto& r : equirect->rasters) frames.emplace_back(r);
        std::vector<CubemapFrame> cube =
            project_clip(frames, Orientation{yaw_deg, pitch_deg}, face_size);
        auto* f = new iso360_frames;
        f->fps = equirect->fps;
        f->rasters.reserve(cube.size());
        for (auto& c : cube) f->rasters.push_back(std::move(c.raster));
        *out = f;
    });
}

int iso360_frames_count(const iso360_frames* frames) {
    return frames ? int(frames->rasters.size()) : 0;
}

iso360_status iso360_frames_dims(const iso360_frames* frames, int* width, int* height) {
    return guarded([&] {
        if (!frames || !width || !height) throw InputError("null argument");
        if (frames->rasters.empty()) throw InputError("empty frame sequence");
        *width = frames->rasters[0].width;
        *height = frames->rasters[0].height;
    });
}

void iso360_frames_free(iso360_frames* frames) { delete frames; }

iso360_status iso360_run_search(const iso360_search_job* job) {
    return guarded([&] {
        if (!job || !job->input || !job->output_dir) throw InputError("null argument");
        SearchJob j;
        j.input = job->input;
        j.output_dir = job->output_dir;
        j.grid = grid_of(job->grid);
        j.codec = or_default(job->codec, "reference");
        if (job->face_size > 0) j.face_size = job->face_size;
        if (job->clip_seconds > 0.0) j.clip_seconds = job->clip_seconds;
        j.fps = job->fps;
        j.jobs = job->jobs;
        j.seed = job->seed;
        run_search(j);
    });
}

iso360_status iso360_run_features(const iso360_features_job* job) {
    return guarded([&] {
        if (!job || !job->input || !job->output_dir) throw InputError("null argument");
        FeaturesJob j;
        j.input = job->input;
        j.output_dir = job->output_dir;
        if (job->face_size > 0) j.face_size = job->face_size;
        if (job->clip_seconds > 0.0) j.clip_seconds = job->clip_seconds;
        j.fps = job->fps;
        if (job->superpixels > 0) j.superpixels = job->superpixels;
        if (job->compactness > 0.0) j.compactness = job->compactness;
        run_features(j);
    });
}

iso360_status iso360_run_train(const iso360_train_job* job) {
    return guarded([&] {
        if (!job || !job->data_dir || !job->output_dir) throw InputError("null argument");
        TrainJob j;
        j.data_dir = job->data_dir;
        j.output_dir = job->output_dir;
        j.grid = grid_of(job->grid);
        if (job->iterations > 0) j.iterations = job->iterations;
        if (job->batch_size > 0) j.batch_size = job->batch_size;
        if (job->lr > 0.0) j.lr = job->lr;
        if (job->weight_decay >= 0.0) j.weight_decay = job->weight_decay;
        if (job->dropout >= 0.0) j.dropout = job->dropout;
        if (job->shared_trunk >= 0) j.shared_trunk = job->shared_trunk != 0;
        j.seed = job->seed;
        run_train(j);
    });
}

iso360_status iso360_run_predict(const iso360_predict_job* job, double* yaw_deg,
                                 double* pitch_deg, int* rank) {
    return guarded([&] {
        if (!job || !job->model_path || !job->features_path || !job->output)
            throw InputError("null argument");
        PredictJob j;
        j.model_path = job->model_path;
        j.features_path = job->features_path;
        j.output = job->output;
        j.grid = grid_of(job->grid);
        PredictOutcome o = run_predict(j);
        if (yaw_deg) *yaw_deg = o.chosen.yaw_deg;
        if (pitch_deg) *pitch_deg = o.chosen.pitch_deg;
        if (rank) *rank = o.rank;
    });
}

iso360_status iso360_run_eval(const iso360_eval_job* job) {
    return guarded([&] {
        if (!job || !job->tables_dir || !job->output_dir) throw InputError("null argument");
        EvalJob j;
        j.tables_dir = job->tables_dir;
        if (job->predictions_dir) j.predictions_dir = job->predictions_dir;
        j.output_dir = job->output_dir;
        j.methods = or_default(job->methods, "all");
        j.codec = or_default(job->codec, "reference");
        if (job->transfer_source) j.transfer_source = job->transfer_source;
        j.seed = job->seed;
        if (job->random_draws > 0) j.random_draws = job->random_draws;
        run_eval(j);
    });
}

}  // extern "C"
