// SPDX-License-Identifier: Apache-2.0
//
// phasecs — compressive sampling and sparse recovery of phase-modulated signals
// Copyright (C) 2026 phasecs project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace phasecs {

// Seed derivation and Gaussian draws are fully specified here so that other
// implementations can reproduce every random object bit-exactly:
//
//   * base generator: std::mt19937_64 (64-bit Mersenne Twister, ISO-specified)
//   * uniforms:       the top 53 bits of each output word, scaled by 2^-53
//   * normals:        Box-Muller; each pair of uniforms (u1, u2) yields
//                     sqrt(-2 ln(1-u1)) * {cos, sin}(2*pi*u2), consumed
//                     cosine first
//   * sub-streams:    sub_seed(seed, stream) = splitmix64(seed XOR
//                     splitmix64(stream + golden)), golden = 0x9E3779B97F4A7C15

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent named stream derived from a user seed.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x9E3779B97F4A7C15ull));
}

// Uniform double in [0, 1) from one generator word (53-bit resolution).
inline double unit_uniform(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Deterministic stream of standard normal variates (Box-Muller over mt19937_64).
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = unit_uniform(gen_());
        const double u2 = unit_uniform(gen_());
        const double radius = std::sqrt(-2.0 * std::log(1.0 - u1)); // 1-u1 in (0,1]
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline Eigen::VectorXd gaussian_vector(Eigen::Index n, std::uint64_t seed) {
    GaussianStream g(seed);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = g.next();
    return v;
}

// Unbiased uniform index in [0, bound) by rejection (portable across stdlibs,
// unlike std::uniform_int_distribution).
inline std::uint64_t uniform_index(std::mt19937_64 &gen, std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t w = gen();
    while (w >= limit) w = gen();
    return w % bound;
}

} // namespace phasecs
