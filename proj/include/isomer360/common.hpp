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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace iso360 {

inline constexpr double kPi = 3.14159265358979323846;

/// Status codes shared by the C++ core, the C API and the CLI exit codes.
enum class StatusCode : int {
    ok = 0,
    internal = 1,
    input = 2,
    environment = 3,
    encode = 4,
};

class Error : public std::runtime_error {
  public:
    Error(StatusCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    StatusCode code() const { return code_; }

  private:
    StatusCode code_;
};

struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(StatusCode::input, msg) {}
};

struct EnvironmentError : Error {
    explicit EnvironmentError(const std::string& msg) : Error(StatusCode::environment, msg) {}
};

struct EncodeError : Error {
    explicit EncodeError(const std::string& msg) : Error(StatusCode::encode, msg) {}
};

struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(StatusCode::internal, msg) {}
};

/// PCG32 generator (O'Neill). Used for every random decision in the toolkit so
/// that results are reproducible bit-for-bit across platforms; std::random
/// distributions are not portable, the raw engine below is.
class Pcg32 {
  public:
    explicit Pcg32(uint64_t seed, uint64_t stream = 0) {
        state_ = 0u;
        inc_ = (stream << 1u) | 1u;
        next();
        state_ += seed;
        next();
    }

    uint32_t next() {
        uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
        uint32_t rot = static_cast<uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    /// Unbiased integer in [0, n). n must be > 0.
    uint32_t next_below(uint32_t n) {
        uint32_t threshold = (0u - n) % n;
        for (;;) {
            uint32_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        uint64_t hi = next();
        uint64_t lo = next();
        uint64_t v = ((hi << 32) | lo) >> 11;
        return static_cast<double>(v) * (1.0 / 9007199254740992.0);
    }

    /// Standard normal via Box-Muller. Always consumes exactly two uniform
    /// draws; no spare is cached, so the stream position stays predictable.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

  private:
    uint64_t state_;
    uint64_t inc_;
};

}  // namespace iso360
