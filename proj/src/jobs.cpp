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

#include "isomer360/jobs.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "isomer360/evaluation.hpp"
#include "isomer360/features.hpp"
#include "isomer360/image_io.hpp"
#include "isomer360/oracle.hpp"
#include "isomer360/parallel.hpp"
#include "isomer360/predictor.hpp"
#include "isomer360/projection.hpp"
#include "isomer360/synth.hpp"

namespace iso360 {

namespace fs = std::filesystem;
using nlohmann::json;

OrientationGrid grid_from_spec(const GridSpec& spec) {
    return make_grid(spec.yaw_step_deg, spec.pitch_step_deg, spec.half_range_deg);
}

namespace {

std::string input_stem(const std::string& path) {
    fs::path p(path);
    std::string stem = fs::is_directory(p) ? p.filename().string() : p.stem().string();
    if (stem.empty()) stem = "clip";
    return stem;
}

std::string seg_id(const std::string& stem, size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "-seg%03zu", index);
    return stem + buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory: " + dir);
}

void write_manifest(const std::string& dir, const std::string& command, const json& config,
                    const std::vector<std::string>& artifacts) {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["artifacts"] = artifacts;
    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw InputError("cannot write manifest in " + dir);
    out << j.dump(2) << "\n";
}

json grid_json(const GridSpec& g) {
    return {{"yaw_step_deg", g.yaw_step_deg},
            {"pitch_step_deg", g.pitch_step_deg},
            {"half_range_deg", g.half_range_deg}};
}

double effective_fps(double requested, double from_input) {
    return requested > 0.0 ? requested : from_input;
}

// Sorted paths in `dir` whose name ends with `suffix`.
std::vector<fs::path> files_with_suffix(const std::string& dir, const std::string& suffix) {
    if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir);
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::string name = e.path().filename().string();
        if (name.size() > suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string strip_suffix(const std::string& name, const std::string& suffix) {
    return name.substr(0, name.size() - suffix.size());
}

std::vector<ClipSpec> load_and_split(const std::string& input, int face_size, double clip_seconds,
                                     double* fps_io, std::vector<CubemapFrame>* projected_at_0) {
    FrameSequence seq = load_frames(input);
    double fps = effective_fps(*fps_io, seq.fps);
    *fps_io = fps;
    std::vector<EquirectFrame> frames;
    frames.reserve(seq.frames.size());
    for (auto& f : seq.frames) frames.emplace_back(std::move(f));
    std::vector<CubemapFrame> cube = project_clip(frames, Orientation{0.0, 0.0}, face_size);
    if (projected_at_0) *projected_at_0 = cube;
    return split_clips(cube, fps, clip_seconds);
}

}  // namespace

void run_synth(const SynthJob& job) {
    auto kind = scene_from_name(job.scene);
    if (!kind) throw InputError("unknown scene: " + job.scene);
    SceneConfig cfg;
    cfg.kind = *kind;
    cfg.width = job.width;
    cfg.frames = job.frames;
    cfg.fps = job.fps;
    cfg.seed = job.seed;
    if (cfg.kind == SceneKind::cue) cfg = make_cue_config(job.seed, job.width, job.frames);

    std::vector<EquirectFrame> frames = make_scene(cfg);
    std::vector<Image8> rasters;
    rasters.reserve(frames.size());
    for (auto& f : frames) rasters.push_back(std::move(f.luma));
    save_frames(rasters, job.fps, job.output);
}

void run_project(const ProjectJob& job) {
    FrameSequence seq = load_frames(job.input);
    std::vector<EquirectFrame> frames;
    frames.reserve(seq.frames.size());
    for (auto& f : seq.frames) frames.emplace_back(std::move(f));
    std::vector<CubemapFrame> cube =
        project_clip(frames, Orientation{job.yaw_deg, job.pitch_deg}, job.face_size);
    std::vector<Image8> rasters;
    rasters.reserve(cube.size());
    for (auto& f : cube) rasters.push_back(std::move(f.raster));
    save_frames(rasters, seq.fps, job.output);
}

void run_search(const SearchJob& job) {
    auto codec = codec_from_name(job.codec);
    if (!codec) throw InputError("unknown codec: " + job.codec);
    if (*codec != CodecId::reference && !external_encoder_available())
        throw EnvironmentError("codec '" + job.codec + "' needs ffmpeg on PATH");
    OrientationGrid grid = grid_from_spec(job.grid);
    ensure_dir(job.output_dir);

    FrameSequence seq = load_frames(job.input);
    double fps = effective_fps(job.fps, seq.fps);
    std::vector<EquirectFrame> frames;
    frames.reserve(seq.frames.size());
    for (auto& f : seq.frames) frames.emplace_back(std::move(f));
    std::vector<std::vector<EquirectFrame>> clips;
    {
        size_t per_clip = size_t(std::max(1L, std::lround(fps * job.clip_seconds)));
        for (size_t start = 0; start < frames.size(); start += per_clip) {
            size_t end = std::min(frames.size(), start + per_clip);
            clips.emplace_back(frames.begin() + long(start), frames.begin() + long(end));
        }
    }

    std::string stem = input_stem(job.input);
    std::vector<std::string> artifacts;
    int jobs = job.jobs > 0 ? job.jobs : default_jobs();
    for (size_t c = 0; c < clips.size(); ++c) {
        std::string id = seg_id(stem, c);
        SizeTable t = build_size_table(clips[c], grid, *codec, job.face_size, id, fps, jobs);
        ClipMetrics m = compute_metrics(t);
        fs::path base = fs::path(job.output_dir) / id;
        write_size_table_csv(t, base.string() + ".sizes.csv");
        write_metrics_json(t, m, base.string() + ".metrics.json");
        write_heatmap_csv(t, m, base.string() + ".heatmap.csv");
        write_heatmap_png(t, m, base.string() + ".heatmap.png");
        for (const char* ext : {".sizes.csv", ".metrics.json", ".heatmap.csv", ".heatmap.png"})
            artifacts.push_back(id + ext);
    }

    json cfg{{"input", job.input},       {"grid", grid_json(job.grid)},
             {"codec", job.codec},       {"face_size", job.face_size},
             {"clip_seconds", job.clip_seconds}, {"fps", fps},
             {"jobs", job.jobs},         {"seed", job.seed}};
    write_manifest(job.output_dir, "search", cfg, artifacts);
}

void run_features(const FeaturesJob& job) {
    ensure_dir(job.output_dir);
    double fps = job.fps;
    std::vector<ClipSpec> clips =
        load_and_split(job.input, job.face_size, job.clip_seconds, &fps, nullptr);

    SlicParams params;
    params.superpixels_per_face = job.superpixels;
    params.compactness = job.compactness;

    std::string stem = input_stem(job.input);
    std::vector<std::string> artifacts;
    for (size_t c = 0; c < clips.size(); ++c) {
        std::string id = seg_id(stem, c);
        FeatureTensor t = build_features(clips[c], params);
        fs::path base = fs::path(job.output_dir) / id;
        write_feature_tensor(t, base.string() + ".features.bin", base.string() + ".features.json",
                             id);
        artifacts.push_back(id + ".features.bin");
        artifacts.push_back(id + ".features.json");
    }

    json cfg{{"input", job.input},
             {"face_size", job.face_size},
             {"clip_seconds", job.clip_seconds},
             {"fps", fps},
             {"superpixels", job.superpixels},
             {"compactness", job.compactness}};
    write_manifest(job.output_dir, "features", cfg, artifacts);
}

void run_train(const TrainJob& job) {
    OrientationGrid grid = grid_from_spec(job.grid);
    ensure_dir(job.output_dir);

    std::vector<FeatureTensor> inputs;
    std::vector<std::vector<double>> raw_targets;
    for (const fs::path& sidecar : files_with_suffix(job.data_dir, ".features.json")) {
        std::string id = strip_suffix(sidecar.filename().string(), ".features.json");
        fs::path bin = sidecar.parent_path() / (id + ".features.bin");
        fs::path csv = sidecar.parent_path() / (id + ".sizes.csv");
        if (!fs::exists(csv))
            throw InputError("no size table for clip '" + id + "' (expected " + csv.string() +
                             ")");
        inputs.push_back(read_feature_tensor(bin.string(), sidecar.string()));
        SizeTable t = read_size_table_csv(csv.string(), CodecId::reference, id);
        if (!(t.grid == grid))
            throw InputError("size table grid mismatch for clip '" + id + "'");
        raw_targets.push_back(relative_sizes(t));
    }
    if (inputs.empty()) throw InputError("no training pairs found in " + job.data_dir);

    TargetScaling scaling = fit_target_scaling(raw_targets);
    std::vector<std::vector<double>> targets;
    targets.reserve(raw_targets.size());
    for (const auto& r : raw_targets) targets.push_back(scale_targets(r, scaling));

    ModelConfig mcfg;
    mcfg.segments = inputs[0].segments;
    mcfg.channels = inputs[0].channels;
    mcfg.height = inputs[0].height;
    mcfg.width = inputs[0].width;
    mcfg.out_dim = int(grid.size());
    mcfg.shared_trunk = job.shared_trunk;
    mcfg.dropout_rate = job.dropout;
    mcfg.init_seed = job.seed;

    TrainConfig tcfg;
    tcfg.lr = job.lr;
    tcfg.iterations = job.iterations;
    tcfg.batch_size = job.batch_size;
    tcfg.weight_decay = job.weight_decay;
    tcfg.seed = job.seed;

    TrainResult res = train(inputs, targets, mcfg, tcfg);
    res.model.set_scaling(scaling);
    save_model(res.model, (fs::path(job.output_dir) / "model.bin").string());
    write_train_log(res.log, (fs::path(job.output_dir) / "train_log.csv").string());

    json cfg{{"data_dir", job.data_dir},   {"grid", grid_json(job.grid)},
             {"iterations", job.iterations}, {"batch_size", job.batch_size},
             {"lr", job.lr},               {"weight_decay", job.weight_decay},
             {"dropout", job.dropout},     {"shared_trunk", job.shared_trunk},
             {"seed", job.seed},           {"clips", inputs.size()}};
    write_manifest(job.output_dir, "train", cfg, {"model.bin", "train_log.csv"});
}

PredictOutcome run_predict(const PredictJob& job) {
    OrientationGrid grid = grid_from_spec(job.grid);
    PredictorModel model = load_model(job.model_path);
    if (size_t(model.config().out_dim) != grid.size())
        throw InputError("model output does not match the grid");

    std::string bin = job.features_path;
    std::string sidecar = bin;
    const std::string bin_suffix = ".features.bin";
    if (bin.size() > bin_suffix.size() &&
        bin.compare(bin.size() - bin_suffix.size(), bin_suffix.size(), bin_suffix) == 0)
        sidecar = bin.substr(0, bin.size() - 4) + ".json";
    else
        throw InputError("features path must end in .features.bin");
    FeatureTensor x = read_feature_tensor(bin, sidecar);

    std::vector<double> pred = model.forward(x, false, nullptr);
    size_t best = 0;
    for (size_t i = 1; i < pred.size(); ++i)
        if (pred[i] < pred[best]) best = i;

    PredictOutcome outcome;
    outcome.chosen = grid.at(best);
    outcome.rank = 1;
    for (size_t i = 0; i < pred.size(); ++i)
        if (pred[i] < pred[best]) ++outcome.rank;

    json j;
    j["features"] = job.features_path;
    j["model"] = job.model_path;
    j["grid"] = {{"yaw_deg", grid.yaw_values()}, {"pitch_deg", grid.pitch_values()}};
    j["chosen"] = {{"yaw_deg", outcome.chosen.yaw_deg},
                   {"pitch_deg", outcome.chosen.pitch_deg}};
    j["rank"] = outcome.rank;
    j["predicted"] = pred;
    // Other jobs create their output directory; the prediction file gets the
    // same courtesy for its parent.
    fs::path parent = fs::path(job.output).parent_path();
    if (!parent.empty()) ensure_dir(parent.string());
    std::ofstream out(job.output);
    if (!out) throw InputError("cannot open for writing: " + job.output);
    out << j.dump(2) << "\n";
    return outcome;
}

void run_eval(const EvalJob& job) {
    ensure_dir(job.output_dir);
    auto codec = codec_from_name(job.codec);
    if (!codec) throw InputError("unknown codec: " + job.codec);

    std::vector<EvalMethod> methods;
    if (job.methods == "all") {
        methods = {EvalMethod::random, EvalMethod::center, EvalMethod::predicted,
                   EvalMethod::oracle};
    } else {
        std::istringstream in(job.methods);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok == "random") methods.push_back(EvalMethod::random);
            else if (tok == "center") methods.push_back(EvalMethod::center);
            else if (tok == "predicted") methods.push_back(EvalMethod::predicted);
            else if (tok == "oracle") methods.push_back(EvalMethod::oracle);
            else throw InputError("unknown eval method: " + tok);
        }
        if (methods.empty()) throw InputError("no eval methods given");
    }
    bool wants_predicted =
        std::find(methods.begin(), methods.end(), EvalMethod::predicted) != methods.end();

    std::vector<SizeTable> tables;
    std::vector<Orientation> predictions;
    for (const fs::path& csv : files_with_suffix(job.tables_dir, ".sizes.csv")) {
        std::string id = strip_suffix(csv.filename().string(), ".sizes.csv");
        tables.push_back(read_size_table_csv(csv.string(), *codec, id));
        if (wants_predicted) {
            if (job.predictions_dir.empty())
                throw InputError("PREDICTED method needs --predictions");
            fs::path pj = fs::path(job.predictions_dir) / (id + ".prediction.json");
            std::ifstream in(pj);
            if (!in) throw InputError("missing prediction for clip '" + id + "'");
            json j = json::parse(in, nullptr, false);
            if (j.is_discarded() || !j.contains("chosen"))
                throw InputError("invalid prediction file: " + pj.string());
            predictions.push_back(Orientation{j["chosen"]["yaw_deg"].get<double>(),
                                              j["chosen"]["pitch_deg"].get<double>()});
        }
    }
    if (tables.empty()) throw InputError("no size tables found in " + job.tables_dir);

    EvalReport rep = evaluate(tables, methods, wants_predicted ? &predictions : nullptr, job.seed,
                              job.random_draws);
    if (!job.transfer_source.empty() && job.transfer_source != rep.codec)
        rep.transfer_source = job.transfer_source;

    write_report_json(rep, (fs::path(job.output_dir) / "report.json").string());
    {
        std::ofstream txt(fs::path(job.output_dir) / "report.txt");
        if (!txt) throw InputError("cannot write report.txt");
        txt << format_report_text(rep);
    }
    std::vector<std::string> artifacts{"report.json", "report.txt"};
    for (const auto& m : rep.methods) {
        if (m.chosen.empty()) continue;
        std::string name = std::string("distribution_") + method_name(m.method) + ".csv";
        write_orientation_distribution_csv(tables[0].grid, m.chosen,
                                           (fs::path(job.output_dir) / name).string());
        artifacts.push_back(name);
    }

    json cfg{{"tables_dir", job.tables_dir},
             {"predictions_dir", job.predictions_dir},
             {"methods", job.methods},
             {"codec", job.codec},
             {"transfer_source", job.transfer_source},
             {"seed", job.seed},
             {"random_draws", job.random_draws}};
    write_manifest(job.output_dir, "eval", cfg, artifacts);
}

}  // namespace iso360
