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

#include "isomer360/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace iso360 {

using nlohmann::json;

const char* method_name(EvalMethod m) {
    switch (m) {
        case EvalMethod::random: return "RANDOM";
        case EvalMethod::center: return "CENTER";
        case EvalMethod::predicted: return "PREDICTED";
        case EvalMethod::oracle: return "ORACLE";
    }
    return "?";
}

namespace {

double r_tilde_of(double achieved, uint64_t min_total, uint64_t max_total) {
    if (max_total == min_total) return 100.0;
    return 100.0 * (double(max_total) - achieved) / double(max_total - min_total);
}

}  // namespace

EvalReport evaluate(const std::vector<SizeTable>& tables,
                    const std::vector<EvalMethod>& methods,
                    const std::vector<Orientation>* predictions, uint64_t seed,
                    int random_draws) {
    if (tables.empty()) throw InputError("evaluate needs at least one size table");
    if (methods.empty()) throw InputError("evaluate needs at least one method");
    const OrientationGrid& grid = tables[0].grid;
    for (const auto& t : tables) {
        if (!(t.grid == grid)) throw InputError("size tables use different grids");
        if (t.sizes.size() != grid.size()) throw InputError("size table does not match its grid");
    }

    EvalReport rep;
    rep.codec = codec_name(tables[0].codec);
    std::vector<ClipMetrics> metrics;
    metrics.reserve(tables.size());
    for (const auto& t : tables) {
        rep.clip_ids.push_back(t.clip_id);
        metrics.push_back(compute_metrics(t));
        rep.min_total += metrics.back().min_bytes;
        rep.max_total += metrics.back().max_bytes;
    }
    rep.degenerate = rep.min_total == rep.max_total;

    for (EvalMethod m : methods) {
        MethodResult res;
        res.method = m;
        switch (m) {
            case EvalMethod::oracle: {
                double total = 0.0;
                for (size_t c = 0; c < tables.size(); ++c) {
                    res.chosen.push_back(metrics[c].omega_min);
                    total += double(metrics[c].min_bytes);
                }
                res.achieved_bytes = total;
                break;
            }
            case EvalMethod::center: {
                Orientation center{0.0, 0.0};
                double total = 0.0;
                for (const auto& t : tables) {
                    res.chosen.push_back(center);
                    total += double(t.at(center));
                }
                res.achieved_bytes = total;
                break;
            }
            case EvalMethod::predicted: {
                if (!predictions || predictions->size() != tables.size())
                    throw InputError("PREDICTED needs one prediction per clip");
                double total = 0.0;
                for (size_t c = 0; c < tables.size(); ++c) {
                    const Orientation& o = (*predictions)[c];
                    if (!grid.contains(o))
                        throw InputError("prediction lies outside the table grid");
                    res.chosen.push_back(o);
                    total += double(tables[c].at(o));
                }
                res.achieved_bytes = total;
                break;
            }
            case EvalMethod::random: {
                if (random_draws < 1) throw InputError("RANDOM needs at least one draw");
                Pcg32 rng(seed, 21);
                double total = 0.0;
                for (int d = 0; d < random_draws; ++d)
                    for (const auto& t : tables)
                        total += double(t.sizes[rng.next_below(uint32_t(grid.size()))]);
                res.achieved_bytes = total / double(random_draws);
                break;
            }
        }
        res.r_tilde = r_tilde_of(res.achieved_bytes, rep.min_total, rep.max_total);
        rep.methods.push_back(std::move(res));
    }
    return rep;
}

EvalReport transfer_eval(const std::vector<SizeTable>& tables_b,
                         const std::vector<Orientation>& predictions_from_a,
                         const std::string& source_codec, uint64_t seed, int random_draws) {
    EvalReport rep = evaluate(tables_b,
                              {EvalMethod::random, EvalMethod::center, EvalMethod::predicted,
                               EvalMethod::oracle},
                              &predictions_from_a, seed, random_draws);
    if (source_codec != rep.codec) rep.transfer_source = source_codec;
    return rep;
}

std::vector<int> kfold_split(const std::vector<std::string>& source_per_clip, int k,
                             uint64_t seed) {
    if (k < 1) throw InputError("fold count must be >= 1");
    if (source_per_clip.empty()) throw InputError("kfold_split needs clips");

    std::vector<std::string> sources;  // first-appearance order
    for (const auto& s : source_per_clip)
        if (std::find(sources.begin(), sources.end(), s) == sources.end()) sources.push_back(s);
    if (int(sources.size()) < k) throw InputError("fewer source videos than folds");

    Pcg32 rng(seed, 31);
    for (size_t i = sources.size() - 1; i > 0; --i)
        std::swap(sources[i], sources[rng.next_below(uint32_t(i + 1))]);

    std::vector<int> fold_of_source(sources.size());
    for (size_t i = 0; i < sources.size(); ++i) fold_of_source[i] = int(i % size_t(k));

    std::vector<int> out;
    out.reserve(source_per_clip.size());
    for (const auto& s : source_per_clip) {
        size_t idx = size_t(std::find(sources.begin(), sources.end(), s) - sources.begin());
        out.push_back(fold_of_source[idx]);
    }
    return out;
}

void write_report_json(const EvalReport& r, const std::string& path) {
    json j;
    j["codec"] = r.codec;
    if (!r.transfer_source.empty()) j["transfer_source"] = r.transfer_source;
    j["clip_ids"] = r.clip_ids;
    j["min_total_bytes"] = r.min_total;
    j["max_total_bytes"] = r.max_total;
    j["degenerate"] = r.degenerate;
    j["methods"] = json::array();
    for (const auto& m : r.methods) {
        json jm;
        jm["method"] = method_name(m.method);
        jm["r_tilde"] = m.r_tilde;
        jm["achieved_bytes"] = m.achieved_bytes;
        if (!m.chosen.empty()) {
            json c = json::array();
            for (const auto& o : m.chosen)
                c.push_back({{"yaw_deg", o.yaw_deg}, {"pitch_deg", o.pitch_deg}});
            jm["chosen"] = c;
        }
        j["methods"].push_back(jm);
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

std::string format_report_text(const EvalReport& r) {
    std::ostringstream out;
    out << "codec: " << r.codec;
    if (!r.transfer_source.empty()) out << " (predictions from " << r.transfer_source << ")";
    out << "\nclips: " << r.clip_ids.size() << "  best-total: " << r.min_total
        << " B  worst-total: " << r.max_total << " B";
    if (r.degenerate) out << "  [degenerate: no size spread]";
    out << "\n\n";
    out << std::left << std::setw(11) << "method" << std::right << std::setw(9) << "r_tilde"
        << std::setw(16) << "achieved_bytes" << "\n";
    for (const auto& m : r.methods) {
        out << std::left << std::setw(11) << method_name(m.method) << std::right << std::fixed
            << std::setprecision(2) << std::setw(9) << m.r_tilde << std::setw(16)
            << std::setprecision(1) << m.achieved_bytes << "\n";
    }
    return out.str();
}

void write_orientation_distribution_csv(const OrientationGrid& grid,
                                        const std::vector<Orientation>& chosen,
                                        const std::string& path) {
    std::vector<int> counts(grid.size(), 0);
    for (const auto& o : chosen) {
        auto idx = grid.index_of(o);
        if (!idx) throw InputError("chosen orientation lies outside the grid");
        ++counts[*idx];
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path);
    const auto& yaws = grid.yaw_values();
    const auto& pitches = grid.pitch_values();
    out << "pitch_deg\\yaw_deg";
    for (double y : yaws) out << "," << y;
    out << "\n";
    for (size_t r = 0; r < pitches.size(); ++r) {
        out << pitches[r];
        for (size_t c = 0; c < yaws.size(); ++c) out << "," << counts[r * yaws.size() + c];
        out << "\n";
    }
    if (!out) throw InputError("write failed: " + path);
}

}  // namespace iso360
