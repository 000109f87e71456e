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
#include <limits>
#include <stdexcept>
#include <vector>

#include "phasecs/model.hpp"

namespace phasecs {

/**
 * Hard-decision result of a recovered coefficient vector. `symbols` carries
 * the raw per-block synthesis bhat = D*theta_hat (no quantization);
 * `atom_indices` the nearest-alphabet decision per symbol, -1 flagging an
 * erasure (an all-zero coefficient block). Quality metrics are filled by the
 * caller, which knows the transmitted reference.
 */
struct DecodedFrame {
    Eigen::VectorXcd symbols;       // bhat = D * theta_hat
    std::vector<int> atom_indices;  // decided alphabet index per symbol, -1 = erasure
    Eigen::VectorXcd reconstructed; // rhat = Psi * theta_hat
    double ser = std::numeric_limits<double>::quiet_NaN();
    double nmse = std::numeric_limits<double>::quiet_NaN();
    double lambda0 = 0.0;           // sparse ratio of theta_hat
    double eta = std::numeric_limits<double>::quiet_NaN();
    int edge_symbols = 0;           // excluded from SER by default
};

// Fraction of entries with modulus above zero_tol.
inline double sparse_ratio(const Eigen::VectorXcd &theta, double zero_tol) {
    if (zero_tol < 0.0) throw std::invalid_argument("sparse_ratio: tolerance must be >= 0");
    if (theta.size() == 0) return 0.0;
    Eigen::Index nonzero = 0;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        if (std::abs(theta[i]) > zero_tol) ++nonzero;
    return static_cast<double>(nonzero) / static_cast<double>(theta.size());
}

inline double compression_ratio(Eigen::Index k, Eigen::Index n) {
    if (k < 1 || k > n) throw std::invalid_argument("compression_ratio: need 1 <= K <= N");
    return static_cast<double>(k) / static_cast<double>(n);
}

// Measurement count K = ceil(c * M * ln J) suggested by the sparsity scaling.
inline Eigen::Index required_measurements(Eigen::Index num_symbols, Eigen::Index dictionary_size,
                                          double c) {
    if (!(c > 0.0)) throw std::invalid_argument("required_measurements: constant must be positive");
    if (num_symbols < 1 || dictionary_size < 1)
        throw std::invalid_argument("required_measurements: dimensions must be positive");
    const double k = c * static_cast<double>(num_symbols) *
                     std::log(static_cast<double>(dictionary_size));
    return static_cast<Eigen::Index>(std::ceil(k));
}

// ||rhat - r||^2 / ||r||^2
inline double nmse(const Eigen::VectorXcd &estimate, const Eigen::VectorXcd &reference) {
    if (estimate.size() != reference.size()) throw std::invalid_argument("nmse: length mismatch");
    const double ref = reference.squaredNorm();
    if (ref == 0.0) throw std::invalid_argument("nmse: zero reference");
    return (estimate - reference).squaredNorm() / ref;
}

// Least-squares common rotation angle arg(sum decided * conj(transmitted)).
inline double estimate_rotation(const Eigen::VectorXcd &decided,
                                const Eigen::VectorXcd &transmitted) {
    if (decided.size() != transmitted.size())
        throw std::invalid_argument("estimate_rotation: length mismatch");
    if (transmitted.norm() == 0.0)
        throw std::invalid_argument("estimate_rotation: transmitted sequence is zero");
    const Complex c = decided.cwiseProduct(transmitted.conjugate()).sum();
    if (std::abs(c) <= 1e-15 * decided.norm() * transmitted.norm() || std::abs(c) == 0.0)
        throw std::invalid_argument("estimate_rotation: zero cross-correlation, angle undefined");
    return std::arg(c);
}

namespace detail {

inline double default_zero_tol(const Eigen::VectorXcd &theta, double zero_tol) {
    if (zero_tol >= 0.0) return zero_tol;
    const double peak = theta.size() ? theta.cwiseAbs().maxCoeff() : 0.0;
    return 1e-6 * peak;
}

} // namespace detail

/**
 * Per-block hard decision. The decided symbol is the alphabet point closest
 * to the block synthesis bhat[m]; blocks whose coefficients are all below the
 * zero tolerance (default 1e-6 of the peak modulus) become erasures. Pass
 * zero_tol < 0 for the default.
 */
inline DecodedFrame decide_symbols(const Eigen::VectorXcd &theta_hat, const SignalModel &model,
                                   double zero_tol = -1.0) {
    const Eigen::Index j = model.dictionary_size();
    DecodedFrame frame;
    frame.symbols = model.symbols_from(theta_hat);
    frame.reconstructed = model.apply(theta_hat);
    frame.edge_symbols = model.edge_symbols;
    const double tol = detail::default_zero_tol(theta_hat, zero_tol);
    frame.lambda0 = sparse_ratio(theta_hat, tol);
    frame.atom_indices.resize(static_cast<std::size_t>(model.num_symbols));
    for (Eigen::Index m = 0; m < model.num_symbols; ++m) {
        const double block_peak = theta_hat.segment(m * j, j).cwiseAbs().maxCoeff();
        frame.atom_indices[static_cast<std::size_t>(m)] =
            (block_peak <= tol) ? -1 : nearest_atom(model.alphabet, frame.symbols[m]);
    }
    return frame;
}

inline DecodedFrame decide_symbols(const Eigen::VectorXcd &theta_hat,
                                   const StackedSignalModel &model, double zero_tol = -1.0) {
    const Eigen::Index j = model.dictionary_size();
    const Eigen::Index half = j * model.num_symbols;
    DecodedFrame frame;
    frame.symbols = model.symbols_from(theta_hat);
    frame.reconstructed = model.apply(theta_hat);
    frame.edge_symbols = model.edge_symbols;
    const double tol = detail::default_zero_tol(theta_hat, zero_tol);
    frame.lambda0 = sparse_ratio(theta_hat, tol);
    frame.atom_indices.resize(static_cast<std::size_t>(model.num_symbols));
    for (Eigen::Index m = 0; m < model.num_symbols; ++m) {
        const double peak_i = theta_hat.segment(m * j, j).cwiseAbs().maxCoeff();
        const double peak_q = theta_hat.segment(half + m * j, j).cwiseAbs().maxCoeff();
        frame.atom_indices[static_cast<std::size_t>(m)] =
            (std::max(peak_i, peak_q) <= tol) ? -1 : nearest_atom(model.alphabet, frame.symbols[m]);
    }
    return frame;
}

/**
 * Symbol error rate of decided against transmitted atom indices. Symbols whose
 * pulses are truncated by the frame edge are excluded unless include_edges is
 * set; erasures always count as errors.
 */
inline double symbol_error_rate(const std::vector<int> &decided, const std::vector<int> &transmitted,
                                int edge_symbols, bool include_edges = false) {
    if (decided.size() != transmitted.size())
        throw std::invalid_argument("symbol_error_rate: length mismatch");
    const auto m = static_cast<int>(decided.size());
    const int lo = include_edges ? 0 : std::min(edge_symbols, m / 2);
    const int hi = include_edges ? m : m - std::min(edge_symbols, m / 2);
    if (hi <= lo) throw std::invalid_argument("symbol_error_rate: no symbols left to score");
    int errors = 0;
    for (int i = lo; i < hi; ++i)
        if (decided[static_cast<std::size_t>(i)] != transmitted[static_cast<std::size_t>(i)])
            ++errors;
    return static_cast<double>(errors) / static_cast<double>(hi - lo);
}

} // namespace phasecs
