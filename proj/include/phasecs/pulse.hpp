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
#include <numbers>
#include <stdexcept>

namespace phasecs {

/**
 * Pulse-shaping filter taps. Taps are peak-normalized (largest tap equals 1)
 * so that dictionary coefficients remain directly comparable to constellation
 * amplitudes. `peak_index` is the group delay compensated by the filter
 * matrix: a symbol impulse at sample p produces its pulse peak at sample p.
 */
struct PulseShape {
    enum class Kind { Srrc, HalfSine, Custom };

    Eigen::VectorXd taps;
    Kind kind = Kind::Custom;
    int samples_per_symbol = 1;
    int peak_index = 0;
    double rolloff = 0.0;   // SRRC only
    int span_symbols = 0;   // pulse length in symbol periods

    Eigen::Index length() const { return taps.size(); }
};

// Unit-energy-free (amplitude) square-root raised cosine impulse response at
// time t in symbol periods. The removable singularities at t = 0 and
// |t| = 1/(4*alpha) are evaluated through their analytic limits.
inline double srrc_impulse(double t, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("srrc_impulse: roll-off must lie in (0, 1]");
    const double pi = std::numbers::pi;
    if (t == 0.0) return 1.0 - alpha + 4.0 * alpha / pi;
    const double x = 4.0 * alpha * t;
    if (std::abs(std::abs(x) - 1.0) < 1e-10) {
        const double arg = pi / (4.0 * alpha);
        return alpha / std::sqrt(2.0) *
               ((1.0 + 2.0 / pi) * std::sin(arg) + (1.0 - 2.0 / pi) * std::cos(arg));
    }
    const double num = std::sin(pi * t * (1.0 - alpha)) + x * std::cos(pi * t * (1.0 + alpha));
    return num / (pi * t * (1.0 - x * x));
}

/**
 * SRRC taps sampled at t = k/n_s symbol periods, k centered on zero,
 * peak-normalized. Produces span*n_s + 1 taps.
 */
inline PulseShape srrc_taps(double rolloff, int span_symbols, int n_s) {
    if (!(rolloff > 0.0) || rolloff > 1.0)
        throw std::invalid_argument("srrc_taps: roll-off must lie in (0, 1]");
    if (span_symbols < 2) throw std::invalid_argument("srrc_taps: span must be >= 2 symbols");
    if (n_s < 2) throw std::invalid_argument("srrc_taps: samples per symbol must be >= 2");
    if ((static_cast<long>(span_symbols) * n_s) % 2 != 0)
        throw std::invalid_argument("srrc_taps: span*n_s must be even so the peak falls on a sample");

    const Eigen::Index len = static_cast<Eigen::Index>(span_symbols) * n_s + 1;
    const Eigen::Index center = (len - 1) / 2;
    PulseShape p;
    p.kind = PulseShape::Kind::Srrc;
    p.samples_per_symbol = n_s;
    p.peak_index = static_cast<int>(center);
    p.rolloff = rolloff;
    p.span_symbols = span_symbols;
    p.taps.resize(len);
    const double peak = srrc_impulse(0.0, rolloff);
    for (Eigen::Index k = 0; k < len; ++k) {
        const double t = static_cast<double>(k - center) / n_s;
        p.taps[k] = srrc_impulse(t, rolloff) / peak;
    }
    return p;
}

/**
 * Half-sine pulse over two bit periods: sin(pi*k/(2*n_s)) for k = 0..2*n_s-1,
 * where n_s is the number of samples per *bit*. The pulse spans one symbol
 * (two bits) of the offset-quadrature model, with its peak at k = n_s.
 */
inline PulseShape halfsine_taps(int n_s) {
    if (n_s < 2 || n_s % 2 != 0)
        throw std::invalid_argument("halfsine_taps: samples per bit must be even and >= 2");
    PulseShape p;
    p.kind = PulseShape::Kind::HalfSine;
    p.samples_per_symbol = 2 * n_s; // one symbol = two bit periods
    p.peak_index = n_s;
    p.span_symbols = 1;
    p.taps.resize(2 * n_s);
    for (int k = 0; k < 2 * n_s; ++k)
        p.taps[k] = std::sin(std::numbers::pi * k / (2.0 * n_s));
    return p;
}

// Single-tap delta pulse (identity filtering); used by tests and degenerate models.
inline PulseShape delta_pulse(int n_s = 1) {
    PulseShape p;
    p.kind = PulseShape::Kind::Custom;
    p.samples_per_symbol = n_s;
    p.peak_index = 0;
    p.span_symbols = 1;
    p.taps = Eigen::VectorXd::Ones(1);
    return p;
}

} // namespace phasecs
