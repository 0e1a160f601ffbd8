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

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "isomer360/evaluation.hpp"

using namespace iso360;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("isomer360_eval_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

SizeTable table_3x3(std::vector<uint64_t> sizes, const std::string& id) {
    SizeTable t;
    t.grid = OrientationGrid({-10.0, 0.0, 10.0}, {-10.0, 0.0, 10.0});
    t.sizes = std::move(sizes);
    t.clip_id = id;
    return t;
}

// min 100 at (10, 10), max 900 at (-10, -10), center 500, mean 500
SizeTable steep() { return table_3x3({900, 800, 700, 600, 500, 400, 300, 200, 100}, "steep"); }
// min 300 at (-10, -10), max 380 at (10, 10), center 330, mean 340
SizeTable gentle() { return table_3x3({300, 340, 320, 310, 330, 350, 360, 370, 380}, "gentle"); }

const MethodResult& result_for(const EvalReport& r, EvalMethod m) {
    for (const auto& res : r.methods)
        if (res.method == m) return res;
    REQUIRE(false);
    return r.methods.front();
}

}  // namespace

TEST_CASE("method names are fixed") {
    CHECK(std::string(method_name(EvalMethod::random)) == "RANDOM");
    CHECK(std::string(method_name(EvalMethod::center)) == "CENTER");
    CHECK(std::string(method_name(EvalMethod::predicted)) == "PREDICTED");
    CHECK(std::string(method_name(EvalMethod::oracle)) == "ORACLE");
}

TEST_CASE("hand tables score exactly") {
    std::vector<SizeTable> tables = {steep(), gentle()};
    std::vector<Orientation> preds = {Orientation{10.0, 10.0}, Orientation{0.0, 10.0}};
    EvalReport rep = evaluate(
        tables, {EvalMethod::oracle, EvalMethod::center, EvalMethod::predicted}, &preds);

    CHECK(rep.codec == "reference");
    CHECK(rep.transfer_source.empty());
    CHECK(rep.clip_ids == std::vector<std::string>{"steep", "gentle"});
    CHECK(rep.min_total == 400);   // 100 + 300
    CHECK(rep.max_total == 1280);  // 900 + 380
    CHECK_FALSE(rep.degenerate);

    const MethodResult& oracle = result_for(rep, EvalMethod::oracle);
    CHECK(oracle.achieved_bytes == 400.0);
    CHECK(oracle.r_tilde == 100.0);
    REQUIRE(oracle.chosen.size() == 2);
    CHECK(oracle.chosen[0].yaw_deg == doctest::Approx(10.0));
    CHECK(oracle.chosen[0].pitch_deg == doctest::Approx(10.0));
    CHECK(oracle.chosen[1].yaw_deg == doctest::Approx(-10.0));

    const MethodResult& center = result_for(rep, EvalMethod::center);
    CHECK(center.achieved_bytes == 830.0);  // 500 + 330
    CHECK(std::abs(center.r_tilde - 100.0 * 450.0 / 880.0) < 1e-12);
    for (const auto& o : center.chosen) {
        CHECK(o.yaw_deg == 0.0);
        CHECK(o.pitch_deg == 0.0);
    }

    // Prediction (0, 10) lands on table index 7 of "gentle": 370 bytes.
    const MethodResult& pred = result_for(rep, EvalMethod::predicted);
    CHECK(pred.achieved_bytes == 470.0);
    CHECK(std::abs(pred.r_tilde - 100.0 * 810.0 / 880.0) < 1e-12);
    CHECK(pred.chosen[1].yaw_deg == doctest::Approx(0.0));
    CHECK(pred.chosen[1].pitch_deg == doctest::Approx(10.0));
}

TEST_CASE("RANDOM converges to the analytic expectation and is seeded") {
    std::vector<SizeTable> tables = {steep(), gentle()};
    EvalReport rep = evaluate(tables, {EvalMethod::random}, nullptr, 0, 1000);
    const MethodResult& rnd = result_for(rep, EvalMethod::random);

    // Per-draw expectation = table means: 500 + 340 = 840. The 1000-draw
    // mean has standard deviation about 8.2, so 26 is a 3-sigma band.
    CHECK(rnd.chosen.empty());
    CHECK(std::abs(rnd.achieved_bytes - 840.0) < 26.0);
    CHECK(rnd.r_tilde > 40.0);
    CHECK(rnd.r_tilde < 60.0);

    EvalReport again = evaluate(tables, {EvalMethod::random}, nullptr, 0, 1000);
    CHECK(result_for(again, EvalMethod::random).achieved_bytes == rnd.achieved_bytes);
    EvalReport other = evaluate(tables, {EvalMethod::random}, nullptr, 1, 1000);
    CHECK(result_for(other, EvalMethod::random).achieved_bytes != rnd.achieved_bytes);
}

TEST_CASE("a spreadless corpus is degenerate and scores 100 everywhere") {
    std::vector<SizeTable> tables = {table_3x3(std::vector<uint64_t>(9, 200), "a"),
                                     table_3x3(std::vector<uint64_t>(9, 300), "b")};
    EvalReport rep =
        evaluate(tables, {EvalMethod::random, EvalMethod::center, EvalMethod::oracle});
    CHECK(rep.degenerate);
    CHECK(rep.min_total == rep.max_total);
    for (const auto& m : rep.methods) CHECK(m.r_tilde == 100.0);
}

TEST_CASE("evaluation validation") {
    std::vector<SizeTable> tables = {steep(), gentle()};

    CHECK_THROWS_AS(evaluate({}, {EvalMethod::oracle}), InputError);
    CHECK_THROWS_AS(evaluate(tables, {}), InputError);
    CHECK_THROWS_AS(evaluate(tables, {EvalMethod::predicted}), InputError);

    std::vector<Orientation> one = {Orientation{0.0, 0.0}};
    CHECK_THROWS_AS(evaluate(tables, {EvalMethod::predicted}, &one), InputError);

    std::vector<Orientation> off = {Orientation{7.0, 0.0}, Orientation{0.0, 0.0}};
    CHECK_THROWS_AS(evaluate(tables, {EvalMethod::predicted}, &off), InputError);

    CHECK_THROWS_AS(evaluate(tables, {EvalMethod::random}, nullptr, 0, 0), InputError);

    std::vector<SizeTable> mixed = {steep()};
    SizeTable small;
    small.grid = OrientationGrid({0.0}, {0.0});
    small.sizes = {10};
    mixed.push_back(small);
    CHECK_THROWS_AS(evaluate(mixed, {EvalMethod::oracle}), InputError);

    std::vector<SizeTable> ragged = {steep()};
    ragged[0].sizes.pop_back();
    CHECK_THROWS_AS(evaluate(ragged, {EvalMethod::oracle}), InputError);
}

TEST_CASE("transfer evaluation stamps the prediction source") {
    std::vector<SizeTable> tables = {steep(), gentle()};
    std::vector<Orientation> preds = {Orientation{10.0, 10.0}, Orientation{-10.0, -10.0}};

    EvalReport cross = transfer_eval(tables, preds, "h264");
    CHECK(cross.codec == "reference");
    CHECK(cross.transfer_source == "h264");
    REQUIRE(cross.methods.size() == 4);

    EvalReport same = transfer_eval(tables, preds, "reference");
    CHECK(same.transfer_source.empty());

    // The stamp changes provenance only, not the scores.
    EvalReport direct = evaluate(
        tables, {EvalMethod::random, EvalMethod::center, EvalMethod::predicted, EvalMethod::oracle},
        &preds);
    for (size_t i = 0; i < direct.methods.size(); ++i) {
        CHECK(cross.methods[i].method == direct.methods[i].method);
        CHECK(cross.methods[i].achieved_bytes == direct.methods[i].achieved_bytes);
        CHECK(cross.methods[i].r_tilde == direct.methods[i].r_tilde);
    }
}

TEST_CASE("k-fold splitting groups by source and balances folds") {
    std::vector<std::string> sources = {"a", "a", "b", "b", "c", "c", "d", "d"};
    std::vector<int> folds = kfold_split(sources, 2, 0);
    REQUIRE(folds.size() == 8);
    for (int f : folds) {
        CHECK(f >= 0);
        CHECK(f < 2);
    }
    CHECK(folds[0] == folds[1]);
    CHECK(folds[2] == folds[3]);
    CHECK(folds[4] == folds[5]);
    CHECK(folds[6] == folds[7]);
    int in_zero = 0;
    for (int f : folds) in_zero += f == 0 ? 1 : 0;
    CHECK(in_zero == 4);  // 4 sources dealt round-robin into 2 folds

    CHECK(kfold_split(sources, 2, 5) == kfold_split(sources, 2, 5));
    std::vector<std::string> six = {"a", "b", "c", "d", "e", "f"};
    bool any_differs = false;
    std::vector<int> base = kfold_split(six, 3, 0);
    for (uint64_t seed = 1; seed <= 10; ++seed)
        any_differs = any_differs || kfold_split(six, 3, seed) != base;
    CHECK(any_differs);

    CHECK_THROWS_AS(kfold_split(sources, 0, 0), InputError);
    CHECK_THROWS_AS(kfold_split({}, 2, 0), InputError);
    CHECK_THROWS_AS(kfold_split({"a", "a", "b"}, 3, 0), InputError);
}

TEST_CASE("report JSON carries methods with their chosen orientations") {
    TempDir dir;
    std::vector<SizeTable> tables = {steep(), gentle()};
    std::vector<Orientation> preds = {Orientation{10.0, 10.0}, Orientation{0.0, 10.0}};
    EvalReport rep = evaluate(
        tables, {EvalMethod::random, EvalMethod::center, EvalMethod::predicted, EvalMethod::oracle},
        &preds, 0, 50);
    rep.transfer_source = "h264";

    write_report_json(rep, dir.file("report.json"));
    std::ifstream in(dir.file("report.json"));
    nlohmann::json j = nlohmann::json::parse(in);

    CHECK(j["codec"] == "reference");
    CHECK(j["transfer_source"] == "h264");
    CHECK(j["min_total_bytes"] == 400);
    CHECK(j["max_total_bytes"] == 1280);
    CHECK(j["degenerate"] == false);
    REQUIRE(j["methods"].size() == 4);
    CHECK(j["methods"][0]["method"] == "RANDOM");
    CHECK_FALSE(j["methods"][0].contains("chosen"));  // expectation, no picks
    CHECK(j["methods"][3]["method"] == "ORACLE");
    REQUIRE(j["methods"][3]["chosen"].size() == 2);
    CHECK(j["methods"][3]["chosen"][0]["yaw_deg"] == doctest::Approx(10.0));
    CHECK(j["methods"][3]["r_tilde"] == doctest::Approx(100.0));
}

TEST_CASE("text reports are stable and aligned") {
    std::vector<SizeTable> tables = {steep(), gentle()};
    std::vector<Orientation> preds = {Orientation{10.0, 10.0}, Orientation{0.0, 10.0}};
    EvalReport rep = evaluate(tables, {EvalMethod::center, EvalMethod::oracle}, &preds);

    std::string text = format_report_text(rep);
    CHECK(text == format_report_text(rep));
    CHECK(text.find("codec: reference") == 0);
    CHECK(text.find("clips: 2  best-total: 400 B  worst-total: 1280 B") != std::string::npos);
    CHECK(text.find("ORACLE        100.00           400.0\n") != std::string::npos);
    CHECK(text.find("CENTER         51.14           830.0\n") != std::string::npos);

    rep.transfer_source = "vp9";
    CHECK(format_report_text(rep).find("(predictions from vp9)") != std::string::npos);
}

TEST_CASE("orientation distribution CSV counts grid cells") {
    TempDir dir;
    OrientationGrid grid({-10.0, 0.0, 10.0}, {-10.0, 0.0, 10.0});
    std::vector<Orientation> chosen = {Orientation{10.0, 10.0}, Orientation{-10.0, -10.0},
                                       Orientation{10.0, 10.0}, Orientation{0.0, 0.0}};
    write_orientation_distribution_csv(grid, chosen, dir.file("dist.csv"));

    std::ifstream in(dir.file("dist.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "pitch_deg\\yaw_deg,-10,0,10");
    REQUIRE(std::getline(in, line));
    CHECK(line == "-10,1,0,0");
    REQUIRE(std::getline(in, line));
    CHECK(line == "0,0,1,0");
    REQUIRE(std::getline(in, line));
    CHECK(line == "10,0,0,2");

    std::vector<Orientation> off = {Orientation{5.0, 5.0}};
    CHECK_THROWS_AS(write_orientation_distribution_csv(grid, off, dir.file("bad.csv")),
                    InputError);
}
