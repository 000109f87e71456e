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
//
// Independent brute-force references used by the test suites. Everything here
// is deliberately written as plain sequential array loops, not in terms of the
// model matrices it cross-checks. Test-only API.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "phasecs/constellation.hpp"
#include "phasecs/pulse.hpp"
#include "phasecs/solver.hpp"

namespace phasecs::oracle {

// Straightforward O(N*L) truncating convolution with a compensated delay:
// out[i] = sum_k taps[k] * x[i + delay - k].
inline Eigen::VectorXcd direct_convolve(const Eigen::VectorXcd &x, const Eigen::VectorXd &taps,
                                        Eigen::Index delay) {
    const Eigen::Index n = x.size();
    const Eigen::Index len = taps.size();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::complex<double> acc(0.0, 0.0);
        for (Eigen::Index k = 0; k < len; ++k) {
            const Eigen::Index m = i + delay - k;
            if (m >= 0 && m < n) acc += taps[k] * x[m];
        }
        out[i] = acc;
    }
    return out;
}

/**
 * Conventional sample-domain modulator: constellation map -> upsample ->
 * pulse filter -> carrier, as sequential array operations. When
 * offset_quadrature is set, in-phase and quadrature symbol parts are shaped
 * separately and the quadrature rail is delayed by half a symbol.
 */
struct DirectPipeline {
    PulseShape pulse;
    double f_c = 0.0;
    double f_s = 1.0;
    int samples_per_symbol = 1;
    bool offset_quadrature = false;
};

inline Eigen::VectorXcd direct_modulate(const Eigen::VectorXcd &symbols, const DirectPipeline &p) {
    const Eigen::Index m_count = symbols.size();
    if (m_count < 1) throw std::invalid_argument("direct_modulate: empty symbol vector");
    const Eigen::Index n = m_count * p.samples_per_symbol;
    const Eigen::Index delay = p.pulse.peak_index;

    Eigen::VectorXcd shaped(n);
    if (!p.offset_quadrature) {
        Eigen::VectorXcd up = Eigen::VectorXcd::Zero(n);
        for (Eigen::Index m = 0; m < m_count; ++m) up[m * p.samples_per_symbol] = symbols[m];
        shaped = direct_convolve(up, p.pulse.taps, delay);
    } else {
        Eigen::VectorXcd up_i = Eigen::VectorXcd::Zero(n);
        Eigen::VectorXcd up_q = Eigen::VectorXcd::Zero(n);
        for (Eigen::Index m = 0; m < m_count; ++m) {
            up_i[m * p.samples_per_symbol] = symbols[m].real();
            up_q[m * p.samples_per_symbol] = symbols[m].imag();
        }
        const Eigen::VectorXcd s_i = direct_convolve(up_i, p.pulse.taps, delay);
        const Eigen::VectorXcd s_q = direct_convolve(up_q, p.pulse.taps, delay);
        const Eigen::Index shift = p.samples_per_symbol / 2;
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::complex<double> q =
                (i >= shift) ? s_q[i - shift] : std::complex<double>(0.0, 0.0);
            shaped[i] = s_i[i] + std::complex<double>(0.0, 1.0) * q;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        shaped[i] *= std::polar(1.0, 2.0 * std::numbers::pi * p.f_c * static_cast<double>(i) / p.f_s);
    return shaped;
}

/**
 * Exhaustive reference for the constrained l1 problem on tiny instances.
 * Enumerates every indicator-structured coefficient vector (one unit atom per
 * block), keeps those with residual <= epsilon, and returns the feasible one
 * of minimal l1 norm; ties and the no-feasible fallback resolve to the lowest
 * lexicographic atom-index tuple and the least residual respectively.
 */
inline Eigen::VectorXcd exhaustive_l1_reference(const LinearOperator &a, const Eigen::VectorXcd &y,
                                                Eigen::Index num_symbols, Eigen::Index dict_size,
                                                double epsilon,
                                                std::vector<int> *support_out = nullptr) {
    if (num_symbols < 1 || dict_size < 1)
        throw std::invalid_argument("exhaustive_l1_reference: dimensions must be positive");
    const double combos = std::pow(static_cast<double>(dict_size), static_cast<double>(num_symbols));
    if (combos > 1e6) throw std::invalid_argument("exhaustive_l1_reference: combinatorial budget exceeded");
    if (a.cols() != num_symbols * dict_size)
        throw std::invalid_argument("exhaustive_l1_reference: operator width mismatch");

    // columns of A for indicator candidates
    std::vector<Eigen::VectorXcd> cols;
    cols.reserve(static_cast<std::size_t>(a.cols()));
    Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(a.cols());
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        unit[i] = 1.0;
        cols.push_back(a.apply(unit));
        unit[i] = 0.0;
    }

    std::vector<int> assign(static_cast<std::size_t>(num_symbols), 0);
    std::vector<int> best_assign;
    bool found_feasible = false;
    double best_residual = std::numeric_limits<double>::infinity();

    Eigen::VectorXcd sum(a.rows());
    for (;;) {
        sum.setZero();
        for (Eigen::Index m = 0; m < num_symbols; ++m)
            sum += cols[static_cast<std::size_t>(m * dict_size + assign[static_cast<std::size_t>(m)])];
        const double residual = (y - sum).norm();
        if (!found_feasible && residual <= epsilon) {
            // all indicators share l1 = M, so the first feasible tuple in
            // lexicographic order is the minimal-l1 answer
            found_feasible = true;
            best_assign = assign;
        }
        if (!found_feasible && residual < best_residual) {
            best_residual = residual;
            best_assign = assign;
        }
        if (found_feasible) break;
        // next tuple, lexicographic
        Eigen::Index pos = num_symbols - 1;
        while (pos >= 0) {
            if (++assign[static_cast<std::size_t>(pos)] < dict_size) break;
            assign[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }

    Eigen::VectorXcd theta = Eigen::VectorXcd::Zero(a.cols());
    for (Eigen::Index m = 0; m < num_symbols; ++m)
        theta[m * dict_size + best_assign[static_cast<std::size_t>(m)]] = 1.0;
    if (support_out) *support_out = best_assign;
    return theta;
}

} // namespace phasecs::oracle
