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

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "isomer360/common.hpp"

namespace iso360 {

// Coordinate convention, used everywhere in this project:
//   - right-handed, y-up; the "front" cube face looks along +z
//   - equirectangular x is longitude in [-180, 180) mapped linearly across the
//     image; longitude 0 = +z, longitude +90 = +x
//   - equirectangular y is latitude, +90 (up, +y) at the top row
//   - yaw rotates about +y (positive turns the front face toward +x), pitch
//     rotates about +x (positive tilts the front face toward -y, i.e. down)
//   - a cubemap orientation (yaw, pitch) samples source direction
//     R_pitch * R_yaw * face_direction, yaw applied first
// Angles are kept in degrees end to end.

/// A cubemap orientation: yaw and pitch in degrees.
struct Orientation {
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;

    bool operator==(const Orientation& o) const {
        return yaw_deg == o.yaw_deg && pitch_deg == o.pitch_deg;
    }
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& v) const { return {x + v.x, y + v.y, z + v.z}; }
    Vec3 operator-(const Vec3& v) const { return {x - v.x, y - v.y, z - v.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& v) const { return x * v.x + y * v.y + z * v.z; }
    double norm() const;
    Vec3 normalized() const;
};

/// Row-major 3x3 matrix; just enough linear algebra for rotations.
struct Mat3 {
    std::array<double, 9> m = {1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return Mat3{}; }
    Vec3 operator*(const Vec3& v) const;
    Mat3 operator*(const Mat3& o) const;
    Mat3 transposed() const;
};

enum class Face : int { front = 0, back, left, right, up, down };

constexpr int kFaceCount = 6;
const char* face_name(Face f);

/// A point on one cube face; u grows rightward, v grows downward, both in [0,1].
struct FaceCoord {
    Face face = Face::front;
    double u = 0.0;
    double v = 0.0;
};

/// The discrete (yaw, pitch) search space. Orientations are enumerated
/// row-major with pitch as the outer (row) axis and yaw inner.
class OrientationGrid {
  public:
    OrientationGrid() = default;
    OrientationGrid(std::vector<double> yaw_values, std::vector<double> pitch_values);

    size_t size() const { return yaw_values_.size() * pitch_values_.size(); }
    Orientation at(size_t index) const;
    std::optional<size_t> index_of(const Orientation& o) const;
    bool contains(const Orientation& o) const { return index_of(o).has_value(); }

    const std::vector<double>& yaw_values() const { return yaw_values_; }
    const std::vector<double>& pitch_values() const { return pitch_values_; }

    bool operator==(const OrientationGrid& o) const {
        return yaw_values_ == o.yaw_values_ && pitch_values_ == o.pitch_values_;
    }

  private:
    std::vector<double> yaw_values_;
    std::vector<double> pitch_values_;
};

/// Builds the symmetric grid {-half_range, ..., +half_range} on both axes.
/// Steps must divide half_range evenly so that (0, 0) is a member; violations
/// raise an input error.
OrientationGrid make_grid(double yaw_step_deg, double pitch_step_deg, double half_range_deg);

/// Rotation applied to cube-face sampling directions: R_pitch(theta) * R_yaw(phi).
Mat3 rotation_of(const Orientation& o);

/// Unit direction through a cube face point; (front, 0.5, 0.5) -> (0, 0, 1).
Vec3 face_to_direction(const FaceCoord& fc);

/// Inverse of face_to_direction: dominant-axis face selection.
FaceCoord direction_to_face(const Vec3& d);

/// Continuous equirectangular pixel coordinates of a unit direction.
/// (0,0,1) maps to the image center (width/2, height/2); x wraps modulo width.
void direction_to_equirect(const Vec3& d, int width, int height, double* x, double* y);

/// Unit direction of a continuous equirectangular pixel position.
Vec3 equirect_to_direction(double x, double y, int width, int height);

}  // namespace iso360
