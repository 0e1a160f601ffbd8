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

#include "isomer360/geometry.hpp"

#include <cmath>

namespace iso360 {

namespace {
double deg2rad(double d) { return d * (kPi / 180.0); }
}  // namespace

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Vec3::normalized() const {
    double n = norm();
    return {x / n, y / n, z / n};
}

Vec3 Mat3::operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m[i * 3 + k] * o.m[k * 3 + j];
            r.m[i * 3 + j] = s;
        }
    }
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i * 3 + j] = m[j * 3 + i];
    return r;
}

const char* face_name(Face f) {
    switch (f) {
        case Face::front: return "front";
        case Face::back: return "back";
        case Face::left: return "left";
        case Face::right: return "right";
        case Face::up: return "up";
        case Face::down: return "down";
    }
    return "?";
}

OrientationGrid::OrientationGrid(std::vector<double> yaw_values, std::vector<double> pitch_values)
    : yaw_values_(std::move(yaw_values)), pitch_values_(std::move(pitch_values)) {
    for (size_t i = 1; i < yaw_values_.size(); ++i)
        if (yaw_values_[i] <= yaw_values_[i - 1])
            throw InputError("orientation grid yaw values must be strictly increasing");
    for (size_t i = 1; i < pitch_values_.size(); ++i)
        if (pitch_values_[i] <= pitch_values_[i - 1])
            throw InputError("orientation grid pitch values must be strictly increasing");
}

Orientation OrientationGrid::at(size_t index) const {
    size_t ny = yaw_values_.size();
    if (index >= size()) throw InputError("orientation grid index out of range");
    return {yaw_values_[index % ny], pitch_values_[index / ny]};
}

std::optional<size_t> OrientationGrid::index_of(const Orientation& o) const {
    auto find = [](const std::vector<double>& vals, double v) -> std::optional<size_t> {
        for (size_t i = 0; i < vals.size(); ++i)
            if (std::abs(vals[i] - v) < 1e-9) return i;
        return std::nullopt;
    };
    auto yi = find(yaw_values_, o.yaw_deg);
    auto pi = find(pitch_values_, o.pitch_deg);
    if (!yi || !pi) return std::nullopt;
    return *pi * yaw_values_.size() + *yi;
}

OrientationGrid make_grid(double yaw_step_deg, double pitch_step_deg, double half_range_deg) {
    if (half_range_deg <= 0.0 || half_range_deg > 45.0)
        throw InputError("grid half range must be in (0, 45] degrees");
    auto axis = [&](double step) {
        if (step <= 0.0) throw InputError("grid step must be positive");
        double k = half_range_deg / step;
        long n = std::lround(k);
        if (n < 1 || std::abs(k - static_cast<double>(n)) > 1e-9)
            throw InputError("grid step must divide the half range evenly");
        std::vector<double> vals;
        vals.reserve(2 * n + 1);
        for (long i = -n; i <= n; ++i) vals.push_back(static_cast<double>(i) * step);
        return vals;
    };
    return OrientationGrid(axis(yaw_step_deg), axis(pitch_step_deg));
}

Mat3 rotation_of(const Orientation& o) {
    double cy = std::cos(deg2rad(o.yaw_deg));
    double sy = std::sin(deg2rad(o.yaw_deg));
    double cp = std::cos(deg2rad(o.pitch_deg));
    double sp = std::sin(deg2rad(o.pitch_deg));
    Mat3 yaw;    // about +y: takes +z toward +x
    yaw.m = {cy, 0, sy, 0, 1, 0, -sy, 0, cy};
    Mat3 pitch;  // about +x: takes +y toward +z
    pitch.m = {1, 0, 0, 0, cp, -sp, 0, sp, cp};
    return pitch * yaw;
}

Vec3 face_to_direction(const FaceCoord& fc) {
    double a = 2.0 * fc.u - 1.0;
    double b = 2.0 * fc.v - 1.0;
    Vec3 d;
    switch (fc.face) {
        case Face::front: d = {a, -b, 1.0}; break;
        case Face::back: d = {-a, -b, -1.0}; break;
        case Face::left: d = {-1.0, -b, a}; break;
        case Face::right: d = {1.0, -b, -a}; break;
        case Face::up: d = {a, 1.0, b}; break;
        case Face::down: d = {a, -1.0, -b}; break;
    }
    return d.normalized();
}

FaceCoord direction_to_face(const Vec3& d) {
    double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
    Face face;
    double a, b;
    if (ax >= ay && ax >= az) {
        if (d.x > 0) {
            face = Face::right;
            a = -d.z / ax;
        } else {
            face = Face::left;
            a = d.z / ax;
        }
        b = -d.y / ax;
    } else if (ay >= az) {
        if (d.y > 0) {
            face = Face::up;
            a = d.x / ay;
            b = d.z / ay;
        } else {
            face = Face::down;
            a = d.x / ay;
            b = -d.z / ay;
        }
    } else {
        if (d.z > 0) {
            face = Face::front;
            a = d.x / az;
        } else {
            face = Face::back;
            a = -d.x / az;
        }
        b = -d.y / az;
    }
    auto clamp01 = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
    return {face, clamp01((a + 1.0) * 0.5), clamp01((b + 1.0) * 0.5)};
}

void direction_to_equirect(const Vec3& d, int width, int height, double* x, double* y) {
    double lon = std::atan2(d.x, d.z);                           // radians, 0 at +z
    double yy = d.y < -1.0 ? -1.0 : (d.y > 1.0 ? 1.0 : d.y);
    double lat = std::asin(yy);
    *x = (lon / kPi * 180.0 + 180.0) / 360.0 * static_cast<double>(width);
    *y = (90.0 - lat / kPi * 180.0) / 180.0 * static_cast<double>(height);
}

Vec3 equirect_to_direction(double x, double y, int width, int height) {
    double lon = deg2rad(x / static_cast<double>(width) * 360.0 - 180.0);
    double lat = deg2rad(90.0 - y / static_cast<double>(height) * 180.0);
    double cl = std::cos(lat);
    return {cl * std::sin(lon), std::sin(lat), cl * std::cos(lon)};
}

}  // namespace iso360
