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

/* C interface to the isomer360 shared library.
 *
 * Every function returns an iso360_status; on failure the thread-local
 * message from iso360_last_error() describes the problem. Handles are opaque
 * and must be released with their matching free function. Batch jobs write
 * their artifacts to disk (see the tool documentation for the layout) and
 * are driven by plain config structs so the ABI stays small.
 */

#ifndef ISOMER360_H_
#define ISOMER360_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iso360_status {
    ISO360_OK = 0,
    ISO360_ERR_INTERNAL = 1,
    ISO360_ERR_INPUT = 2,
    ISO360_ERR_ENVIRONMENT = 3,
    ISO360_ERR_ENCODE = 4
} iso360_status;

/* Message from the most recent failing call on this thread ("" if none). */
const char* iso360_last_error(void);

const char* iso360_version(void);

/* ------------------------------------------------------------------ */
/* Frame sequences (equirectangular or cubemap rasters, 8-bit luma).  */

typedef struct iso360_frames iso360_frames;

/* path: .y4m file or a directory of PNG frames */
iso360_status iso360_frames_load(const char* path, iso360_frames** out);
iso360_status iso360_frames_save(const iso360_frames* frames, const char* path);

/* scene: flat|gradient|noise|pan|seam|spheres|cue */
iso360_status iso360_frames_synth(const char* scene, int width, int frame_count, double fps,
                                  unsigned long long seed, iso360_frames** out);

/* equirect -> packed 2x3 cubemap at (yaw, pitch) */
iso360_status iso360_frames_project(const iso360_frames* equirect, double yaw_deg,
                                    double pitch_deg, int face_size, iso360_frames** out);

int iso360_frames_count(const iso360_frames* frames);
iso360_status iso360_frames_dims(const iso360_frames* frames, int* width, int* height);
void iso360_frames_free(iso360_frames* frames);

/* ------------------------------------------------------------------ */
/* Batch jobs. Zero/empty fields take the documented defaults.        */

typedef struct iso360_grid_spec {
    double yaw_step_deg;   /* <= 0: 5 */
    double pitch_step_deg; /* <= 0: 5 */
    double half_range_deg; /* <= 0: 45 */
} iso360_grid_spec;

typedef struct iso360_search_job {
    const char* input; /* equirect frames: .y4m or PNG directory */
    const char* output_dir;
    iso360_grid_spec grid;
    const char* codec; /* reference|h264|hevc|vp9; NULL: reference */
    int face_size;     /* <= 0: 64 */
    double clip_seconds; /* <= 0: 2 */
    double fps;          /* <= 0: from input */
    int jobs;            /* <= 0: hardware threads */
    unsigned long long seed;
} iso360_search_job;
iso360_status iso360_run_search(const iso360_search_job* job);

typedef struct iso360_features_job {
    const char* input;
    const char* output_dir;
    int face_size;       /* <= 0: 64 */
    double clip_seconds; /* <= 0: 2 */
    double fps;
    int superpixels;    /* <= 0: 256 */
    double compactness; /* <= 0: 1 */
} iso360_features_job;
iso360_status iso360_run_features(const iso360_features_job* job);

typedef struct iso360_train_job {
    const char* data_dir; /* paired <id>.features.* and <id>.sizes.csv */
    const char* output_dir;
    iso360_grid_spec grid;
    int iterations;      /* <= 0: 4000 */
    int batch_size;      /* <= 0: 64 */
    double lr;           /* <= 0: 1e-3 */
    double weight_decay; /* < 0: 5e-4 */
    double dropout;      /* < 0: 0.5 */
    int shared_trunk;    /* 0/1; negative: 1 */
    unsigned long long seed;
} iso360_train_job;
iso360_status iso360_run_train(const iso360_train_job* job);

typedef struct iso360_predict_job {
    const char* model_path;
    const char* features_path; /* <id>.features.bin */
    const char* output;        /* prediction JSON */
    iso360_grid_spec grid;
} iso360_predict_job;
/* On success fills the chosen orientation and its predicted-size rank. */
iso360_status iso360_run_predict(const iso360_predict_job* job, double* yaw_deg,
                                 double* pitch_deg, int* rank);

typedef struct iso360_eval_job {
    const char* tables_dir;
    const char* predictions_dir; /* may be NULL unless PREDICTED requested */
    const char* output_dir;
    const char* methods;         /* "all" or comma list; NULL: all */
    const char* codec;           /* NULL: reference */
    const char* transfer_source; /* codec predictions came from; NULL: same */
    unsigned long long seed;
    int random_draws; /* <= 0: 100 */
} iso360_eval_job;
iso360_status iso360_run_eval(const iso360_eval_job* job);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ISOMER360_H_ */
