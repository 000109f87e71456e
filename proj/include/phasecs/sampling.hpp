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
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "phasecs/rng.hpp"

namespace phasecs {

/**
 * Compressive measurement operator y = Phi * r. Entries of Phi are iid
 * N(0, 1/K) so column l2 norms concentrate near 1; Phi is real by default
 * and applied to real and imaginary parts independently. Entries are drawn
 * row-major from the documented Box-Muller/mt19937_64 stream, so the matrix
 * is reproducible bit-exactly from the seed alone.
 */
struct MeasurementSystem {
    Eigen::MatrixXd phi;       // K x N
    Eigen::MatrixXd phi_imag;  // empty unless the complex-valued variant was requested
    std::uint64_t seed = 0;
    double epsilon = 0.0;      // residual budget for the recovery problem

    Eigen::Index measurements() const { return phi.rows(); } // K
    Eigen::Index samples() const { return phi.cols(); }      // N
    bool is_complex() const { return phi_imag.size() > 0; }

    double frobenius_norm() const {
        const double f2 = phi.squaredNorm() + (is_complex() ? phi_imag.squaredNorm() : 0.0);
        return std::sqrt(f2);
    }
};

inline MeasurementSystem gaussian_matrix(Eigen::Index k, Eigen::Index n, std::uint64_t seed,
                                         bool allow_oversampling = false) {
    if (k < 1 || n < 1) throw std::invalid_argument("gaussian_matrix: dimensions must be positive");
    if (k > n && !allow_oversampling)
        throw std::invalid_argument("gaussian_matrix: K > N oversamples; pass allow_oversampling to permit");
    MeasurementSystem sys;
    sys.seed = seed;
    sys.phi.resize(k, n);
    GaussianStream g(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < n; ++c) sys.phi(r, c) = scale * g.next();
    return sys;
}

// Complex-valued variant: entry = (g1 + j*g2)/sqrt(2K); real part drawn first.
inline MeasurementSystem gaussian_matrix_complex(Eigen::Index k, Eigen::Index n, std::uint64_t seed,
                                                 bool allow_oversampling = false) {
    if (k < 1 || n < 1) throw std::invalid_argument("gaussian_matrix: dimensions must be positive");
    if (k > n && !allow_oversampling)
        throw std::invalid_argument("gaussian_matrix: K > N oversamples; pass allow_oversampling to permit");
    MeasurementSystem sys;
    sys.seed = seed;
    sys.phi.resize(k, n);
    sys.phi_imag.resize(k, n);
    GaussianStream g(seed);
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(k));
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            sys.phi(r, c) = scale * g.next();
            sys.phi_imag(r, c) = scale * g.next();
        }
    return sys;
}

// Phi = I (K = N); degenerate full-sampling system for tests.
inline MeasurementSystem identity_measurement(Eigen::Index n) {
    MeasurementSystem sys;
    sys.phi = Eigen::MatrixXd::Identity(n, n);
    return sys;
}

inline Eigen::VectorXcd measure(const MeasurementSystem &sys, const Eigen::VectorXcd &r) {
    if (r.size() != sys.samples())
        throw std::invalid_argument("measure: signal length does not match the measurement matrix");
    const Eigen::VectorXd re = r.real();
    const Eigen::VectorXd im = r.imag();
    Eigen::VectorXd y_re = sys.phi * re;
    Eigen::VectorXd y_im = sys.phi * im;
    if (sys.is_complex()) {
        y_re -= sys.phi_imag * im;
        y_im += sys.phi_imag * re;
    }
    Eigen::VectorXcd y(sys.measurements());
    y.real() = y_re;
    y.imag() = y_im;
    return y;
}

// Phi^H * y (conjugate transpose; plain transpose for real Phi).
inline Eigen::VectorXcd measure_adjoint(const MeasurementSystem &sys, const Eigen::VectorXcd &y) {
    if (y.size() != sys.measurements())
        throw std::invalid_argument("measure_adjoint: measurement length mismatch");
    const Eigen::VectorXd re = y.real();
    const Eigen::VectorXd im = y.imag();
    Eigen::VectorXd x_re = sys.phi.transpose() * re;
    Eigen::VectorXd x_im = sys.phi.transpose() * im;
    if (sys.is_complex()) {
        x_re += sys.phi_imag.transpose() * im;
        x_im -= sys.phi_imag.transpose() * re;
    }
    Eigen::VectorXcd x(sys.samples());
    x.real() = x_re;
    x.imag() = x_im;
    return x;
}

// Dense Phi * Psi for a complex basis matrix.
inline Eigen::MatrixXcd measured_basis(const MeasurementSystem &sys, const Eigen::MatrixXcd &psi) {
    if (psi.rows() != sys.samples())
        throw std::invalid_argument("measured_basis: basis row count does not match the matrix");
    Eigen::MatrixXd a_re = sys.phi * psi.real();
    Eigen::MatrixXd a_im = sys.phi * psi.imag();
    if (sys.is_complex()) {
        a_re -= sys.phi_imag * psi.imag();
        a_im += sys.phi_imag * psi.real();
    }
    Eigen::MatrixXcd a(a_re.rows(), a_re.cols());
    a.real() = a_re;
    a.imag() = a_im;
    return a;
}

/**
 * Channel impairments applied in the fixed order timing -> frequency ->
 * phase -> noise. `timing_offset` is in (possibly fractional) samples and must
 * stay below one symbol period; `snr_db` absent means noiseless.
 */
struct Impairments {
    double phase_offset = 0.0;   // rad
    double freq_offset = 0.0;    // Hz
    double timing_offset = 0.0;  // samples
    std::optional<double> snr_db;
};

// Per-sample complex noise standard deviation that realizes the requested SNR.
inline double awgn_sigma_for_snr(const Eigen::VectorXcd &r, double snr_db) {
    if (!std::isfinite(snr_db)) throw std::invalid_argument("awgn_sigma_for_snr: SNR must be finite");
    const double power = r.squaredNorm() / static_cast<double>(r.size());
    return std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
}

// Discrepancy-principle residual budget for noise of std sigma propagated
// through Phi: epsilon = sigma * ||Phi||_F * (1 + 2/sqrt(K)).
inline double discrepancy_epsilon(const MeasurementSystem &sys, double noise_sigma) {
    const double k = static_cast<double>(sys.measurements());
    return noise_sigma * sys.frobenius_norm() * (1.0 + 2.0 / std::sqrt(k));
}

namespace detail {

// Band-limited fractional delay: 8-tap Kaiser-windowed sinc (beta = 8).
inline Eigen::VectorXcd fractional_delay(const Eigen::VectorXcd &r, double delay) {
    const Eigen::Index n = r.size();
    const auto whole = static_cast<Eigen::Index>(std::floor(delay));
    const double frac = delay - static_cast<double>(whole);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    if (frac == 0.0) {
        for (Eigen::Index i = whole; i < n; ++i) out[i] = r[i - whole];
        return out;
    }
    constexpr double kBeta = 8.0;
    const double i0_beta = std::cyl_bessel_i(0.0, kBeta);
    double taps[8];
    for (int k = -3; k <= 4; ++k) {
        const double x = static_cast<double>(k) - frac;
        const double sinc = std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
        const double u = x / 4.0; // support [-4, 4]
        const double window = std::cyl_bessel_i(0.0, kBeta * std::sqrt(1.0 - u * u)) / i0_beta;
        taps[k + 3] = sinc * window;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        std::complex<double> acc(0.0, 0.0);
        for (int k = -3; k <= 4; ++k) {
            const Eigen::Index m = i - whole - k;
            if (m >= 0 && m < n) acc += taps[k + 3] * r[m];
        }
        out[i] = acc;
    }
    return out;
}

} // namespace detail

// Complex AWGN of per-sample standard deviation sigma (real part drawn first).
inline Eigen::VectorXcd add_awgn(const Eigen::VectorXcd &r, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("add_awgn: sigma must be >= 0");
    Eigen::VectorXcd out = r;
    const double component = sigma / std::sqrt(2.0);
    GaussianStream g(seed);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double re = g.next();
        const double im = g.next();
        out[i] += std::complex<double>(component * re, component * im);
    }
    return out;
}

inline Eigen::VectorXcd apply_impairments(const Eigen::VectorXcd &r, const Impairments &imp,
                                          double f_s, std::uint64_t noise_seed) {
    if (!(f_s > 0.0)) throw std::invalid_argument("apply_impairments: sampling rate must be positive");
    if (imp.timing_offset < 0.0 || imp.timing_offset >= static_cast<double>(r.size()))
        throw std::invalid_argument("apply_impairments: timing offset out of range");

    Eigen::VectorXcd out = r;
    if (imp.timing_offset != 0.0) out = detail::fractional_delay(out, imp.timing_offset);
    if (imp.freq_offset != 0.0 || imp.phase_offset != 0.0) {
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            const double angle =
                2.0 * std::numbers::pi * imp.freq_offset * static_cast<double>(i) / f_s +
                imp.phase_offset;
            out[i] *= std::polar(1.0, angle);
        }
    }
    if (imp.snr_db) out = add_awgn(out, awgn_sigma_for_snr(out, *imp.snr_db), noise_seed);
    return out;
}

} // namespace phasecs
