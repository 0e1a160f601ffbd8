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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "isomer360/geometry.hpp"

using namespace iso360;

namespace {

// Independent rotation oracle: Rodrigues' formula for an axis-angle rotation,
// written without reusing any production code path.
std::array<double, 9> rodrigues(double ax, double ay, double az, double angle_deg) {
    double t = angle_deg * kPi / 180.0;
    double c = std::cos(t), s = std::sin(t), v = 1.0 - c;
    return {
        ax * ax * v + c,      ax * ay * v - az * s, ax * az * v + ay * s,
        ax * ay * v + az * s, ay * ay * v + c,      ay * az * v - ax * s,
        ax * az * v - ay * s, ay * az * v + ax * s, az * az * v + c,
    };
}

std::array<double, 9> matmul(const std::array<double, 9>& a, const std::array<double, 9>& b) {
    std::array<double, 9> r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
    return r;
}

Vec3 random_unit(Pcg32& rng) {
    for (;;) {
        Vec3 v{rng.next_double() * 2.0 - 1.0, rng.next_double() * 2.0 - 1.0,
               rng.next_double() * 2.0 - 1.0};
        double n = v.norm();
        if (n > 0.1 && n <= 1.0) return v.normalized();
    }
}

}  // namespace

TEST_CASE("default grid enumerates 19x19 orientations, pitch outer, yaw inner") {
    OrientationGrid g = make_grid(5.0, 5.0, 45.0);
    CHECK(g.size() == 361);
    CHECK(g.yaw_values().size() == 19);
    CHECK(g.pitch_values().size() == 19);
    CHECK(g.yaw_values().front() == -45.0);
    CHECK(g.yaw_values().back() == 45.0);

    CHECK(g.at(0) == Orientation{-45.0, -45.0});
    CHECK(g.at(1) == Orientation{-40.0, -45.0});   // yaw advances first
    CHECK(g.at(19) == Orientation{-45.0, -40.0});  // then pitch
    CHECK(g.at(180) == Orientation{0.0, 0.0});     // dead center
    CHECK(g.at(360) == Orientation{45.0, 45.0});

    for (size_t i = 0; i < g.size(); ++i) {
        auto back = g.index_of(g.at(i));
        REQUIRE(back.has_value());
        CHECK(*back == i);
    }
}

TEST_CASE("grid membership is tolerant of float noise but rejects off-grid points") {
    OrientationGrid g = make_grid(5.0, 5.0, 45.0);
    CHECK(g.contains({5.0 + 1e-10, -10.0}));
    CHECK_FALSE(g.contains({2.5, 0.0}));
    CHECK_FALSE(g.contains({50.0, 0.0}));
    CHECK_THROWS_AS((void)g.at(361), InputError);
}

TEST_CASE("grid construction validates steps and ordering") {
    CHECK(make_grid(15.0, 15.0, 45.0).size() == 49);
    CHECK(make_grid(9.0, 5.0, 45.0).yaw_values().size() == 11);
    CHECK_THROWS_AS(make_grid(7.0, 5.0, 45.0), InputError);   // 7 does not divide 45
    CHECK_THROWS_AS(make_grid(-5.0, 5.0, 45.0), InputError);
    CHECK_THROWS_AS(make_grid(5.0, 5.0, 50.0), InputError);   // beyond symmetry period
    CHECK_THROWS_AS(make_grid(5.0, 5.0, 0.0), InputError);
    CHECK_THROWS_AS(OrientationGrid({0.0, 0.0}, {0.0}), InputError);
    CHECK_THROWS_AS(OrientationGrid({5.0, 0.0}, {0.0}), InputError);
}

TEST_CASE("rotation matches a Rodrigues-formula oracle: pitch about +x after yaw about +y") {
    Pcg32 rng(2024, 1);
    for (int trial = 0; trial < 50; ++trial) {
        double yaw = rng.next_double() * 360.0 - 180.0;
        double pitch = rng.next_double() * 360.0 - 180.0;
        // Positive yaw turns +z toward +x: right-hand rotation about +y.
        // Positive pitch takes +y toward +z: right-hand rotation about +x.
        auto expect = matmul(rodrigues(1, 0, 0, pitch), rodrigues(0, 1, 0, yaw));
        Mat3 got = rotation_of({yaw, pitch});
        for (int i = 0; i < 9; ++i) CHECK(got.m[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
}

TEST_CASE("rotation of cardinal orientations lands the front direction on known axes") {
    Vec3 front{0.0, 0.0, 1.0};

    Vec3 a = rotation_of({90.0, 0.0}) * front;
    CHECK(a.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(a.z) < 1e-12);

    Vec3 b = rotation_of({0.0, 90.0}) * front;  // front tilts down
    CHECK(std::abs(b.x) < 1e-12);
    CHECK(b.y == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(b.z) < 1e-12);

    // Hand-derived composition: yaw 45 then pitch 30.
    Vec3 c = rotation_of({45.0, 30.0}) * front;
    CHECK(c.x == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(-std::sqrt(2.0) / 4.0).epsilon(1e-12));
    CHECK(c.z == doctest::Approx(std::sqrt(6.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("rotation matrices are orthonormal") {
    Pcg32 rng(7, 1);
    for (int trial = 0; trial < 20; ++trial) {
        Mat3 r = rotation_of({rng.next_double() * 90.0 - 45.0, rng.next_double() * 90.0 - 45.0});
        Mat3 rt = r.transposed();
        Mat3 id = r * rt;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(id.m[i * 3 + j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("face centers map to the six axis directions") {
    auto center = [](Face f) { return face_to_direction({f, 0.5, 0.5}); };
    CHECK(center(Face::front).z == doctest::Approx(1.0));
    CHECK(center(Face::back).z == doctest::Approx(-1.0));
    CHECK(center(Face::left).x == doctest::Approx(-1.0));
    CHECK(center(Face::right).x == doctest::Approx(1.0));
    CHECK(center(Face::up).y == doctest::Approx(1.0));
    CHECK(center(Face::down).y == doctest::Approx(-1.0));
    for (Face f : {Face::front, Face::back, Face::left, Face::right, Face::up, Face::down})
        CHECK(center(f).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("face coordinates round-trip through directions") {
    Pcg32 rng(11, 1);
    for (int trial = 0; trial < 200; ++trial) {
        FaceCoord fc;
        fc.face = static_cast<Face>(rng.next_below(6));
        // Stay off the exact edge so the dominant axis is unambiguous.
        fc.u = 0.01 + 0.98 * rng.next_double();
        fc.v = 0.01 + 0.98 * rng.next_double();
        FaceCoord back = direction_to_face(face_to_direction(fc));
        CHECK(back.face == fc.face);
        CHECK(back.u == doctest::Approx(fc.u).epsilon(1e-12));
        CHECK(back.v == doctest::Approx(fc.v).epsilon(1e-12));
    }
}

TEST_CASE("in-face axes follow the raster convention: u right, v down") {
    // On the front face, growing u moves toward +x and growing v toward -y.
    Vec3 right_of_center = face_to_direction({Face::front, 0.75, 0.5});
    CHECK(right_of_center.x > 0.0);
    CHECK(right_of_center.y == doctest::Approx(0.0));
    Vec3 below_center = face_to_direction({Face::front, 0.5, 0.75});
    CHECK(below_center.y < 0.0);
    CHECK(below_center.x == doctest::Approx(0.0));
}

TEST_CASE("equirect mapping places the cardinal directions") {
    int w = 512, h = 256;
    double x = 0.0, y = 0.0;

    direction_to_equirect({0, 0, 1}, w, h, &x, &y);  // front: image center
    CHECK(x == doctest::Approx(w / 2.0).epsilon(1e-12));
    CHECK(y == doctest::Approx(h / 2.0).epsilon(1e-12));

    direction_to_equirect({1, 0, 0}, w, h, &x, &y);  // +x: quarter turn east
    CHECK(x == doctest::Approx(3.0 * w / 4.0).epsilon(1e-12));

    direction_to_equirect({0, 1, 0}, w, h, &x, &y);  // zenith: top edge
    CHECK(y == doctest::Approx(0.0).epsilon(1e-10));

    direction_to_equirect({0, -1, 0}, w, h, &x, &y);  // nadir: bottom edge
    CHECK(y == doctest::Approx(double(h)).epsilon(1e-10));
}

TEST_CASE("equirect coordinates round-trip through directions") {
    int w = 512, h = 256;
    Pcg32 rng(13, 1);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 d = random_unit(rng);
        double x = 0.0, y = 0.0;
        direction_to_equirect(d, w, h, &x, &y);
        CHECK(x >= 0.0);
        CHECK(x <= double(w));
        CHECK(y >= 0.0);
        CHECK(y <= double(h));
        Vec3 back = equirect_to_direction(x, y, w, h);
        CHECK(back.x == doctest::Approx(d.x).epsilon(1e-9));
        CHECK(back.y == doctest::Approx(d.y).epsilon(1e-9));
        CHECK(back.z == doctest::Approx(d.z).epsilon(1e-9));
    }
}

TEST_CASE("pcg32 reproduces the published reference stream") {
    // First outputs of the reference implementation for seed 42, stream 54.
    Pcg32 rng(42, 54);
    const uint32_t expect[] = {0xa15c02b7u, 0x7b47f409u, 0xba1d3330u,
                               0x83d2f293u, 0xbfa4784bu, 0xcbed606eu};
    for (uint32_t e : expect) CHECK(rng.next() == e);
}

TEST_CASE("pcg32 streams are independent and deterministic") {
    Pcg32 a(123, 1), b(123, 1), c(123, 2);
    bool diverged = false;
    for (int i = 0; i < 64; ++i) {
        uint32_t va = a.next();
        CHECK(va == b.next());
        if (va != c.next()) diverged = true;
    }
    CHECK(diverged);

    Pcg32 d(99, 3);
    for (int i = 0; i < 1000; ++i) {
        double v = d.next_double();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        uint32_t below = d.next_below(17);
        CHECK(below < 17u);
    }
}
