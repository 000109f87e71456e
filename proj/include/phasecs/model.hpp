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
// The sampled waveform of a linearly modulated signal factors into
//
//     r = E * F1 * U * b,         b = D * theta
//
// where E is the diagonal carrier matrix, F1 a banded filtering matrix, U the
// interpolation (upsampling) matrix, D the block-diagonal symbol dictionary
// and theta a block-sparse coefficient vector with one block per symbol.
// Offset-quadrature schemes (OQPSK, MSK) filter in-phase and quadrature rails
// separately and recombine them through a half-symbol delay matrix P:
//
//     r = E * P * F1bar * Ubar * Dbar * theta_bar
//
// SignalModel / StackedSignalModel hold the ingredients and provide both a
// matrix-free apply/adjoint pair and dense materializations for testing.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "phasecs/constellation.hpp"
#include "phasecs/pulse.hpp"

namespace phasecs {

using Complex = std::complex<double>;

enum class DictionaryMode { AlphabetAtom, PhaseGrid };

// Diagonal of the carrier matrix: exp(j*2*pi*f_c*t_i) with t_i = i/f_s, t_0 = 0.
inline Eigen::VectorXcd build_carrier(double f_c, double f_s, Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("build_carrier: sample count must be >= 1");
    if (!(f_s > 0.0)) throw std::invalid_argument("build_carrier: sampling rate must be positive");
    if (f_c < 0.0 || f_c >= f_s / 2.0)
        throw std::invalid_argument("build_carrier: carrier must satisfy 0 <= f_c < f_s/2 (aliasing)");
    Eigen::VectorXcd e(n);
    for (Eigen::Index i = 0; i < n; ++i)
        e[i] = std::polar(1.0, 2.0 * std::numbers::pi * f_c * static_cast<double>(i) / f_s);
    return e;
}

/**
 * Banded filtering matrix realizing truncated convolution with the pulse taps,
 * compensated by the pulse group delay: (F1*x)[i] = sum_k c[k] * x[i + d - k]
 * with d = pulse.peak_index and out-of-range x read as zero. A unit impulse at
 * an interior position p reproduces the taps centered (peak) at p.
 */
inline Eigen::MatrixXd build_filter_matrix(const PulseShape &pulse, Eigen::Index n) {
    const Eigen::Index len = pulse.length();
    if (len > n) throw std::invalid_argument("build_filter_matrix: more taps than samples");
    Eigen::MatrixXd f1 = Eigen::MatrixXd::Zero(n, n);
    const Eigen::Index d = pulse.peak_index;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < len; ++k) {
            const Eigen::Index m = i + d - k;
            if (m >= 0 && m < n) f1(i, m) = pulse.taps[k];
        }
    }
    return f1;
}

// U = I_M ⊗ [1 0 ... 0]^T: places symbol m at sample m*n_s.
inline Eigen::MatrixXd build_interpolation(Eigen::Index num_symbols, int n_s) {
    if (num_symbols < 1) throw std::invalid_argument("build_interpolation: symbol count must be >= 1");
    if (n_s < 1) throw std::invalid_argument("build_interpolation: samples per symbol must be >= 1");
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(num_symbols * n_s, num_symbols);
    for (Eigen::Index m = 0; m < num_symbols; ++m) u(m * n_s, m) = 1.0;
    return u;
}

// Block-diagonal dictionary: M copies of the 1xJ row [atom_0 ... atom_{J-1}].
inline Eigen::MatrixXcd build_dictionary(const Eigen::VectorXcd &atoms, Eigen::Index num_symbols) {
    const Eigen::Index j = atoms.size();
    if (j < 1) throw std::invalid_argument("build_dictionary: dictionary needs at least one atom");
    if (num_symbols < 1) throw std::invalid_argument("build_dictionary: symbol count must be >= 1");
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(num_symbols, j * num_symbols);
    for (Eigen::Index m = 0; m < num_symbols; ++m) d.block(m, m * j, 1, j) = atoms.transpose();
    return d;
}

// J unit-modulus atoms on uniformly spaced angles 2*pi*k/J.
inline Eigen::VectorXcd phase_grid_atoms(int grid_size) {
    if (grid_size < 1) throw std::invalid_argument("phase_grid_atoms: grid size must be >= 1");
    Eigen::VectorXcd atoms(grid_size);
    for (int k = 0; k < grid_size; ++k)
        atoms[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / grid_size);
    return atoms;
}

/**
 * Minimal-l1 nonnegative representation of z on the J-point phase grid: the
 * aligned atom alone when arg(z) falls on the grid, otherwise the two
 * neighbouring atoms with the (positive) weights solving the 2x2 system.
 * Weights are appended to theta at the block starting at `offset`.
 */
inline void phase_grid_decompose(Complex z, int grid_size, Eigen::VectorXcd &theta,
                                 Eigen::Index offset) {
    const double mag = std::abs(z);
    if (mag == 0.0) return;
    const double two_pi = 2.0 * std::numbers::pi;
    double phase = std::arg(z);
    if (phase < 0.0) phase += two_pi;
    const double step = two_pi / grid_size;
    const double pos = phase / step;
    const auto lower = static_cast<Eigen::Index>(std::floor(pos));
    const double frac = pos - static_cast<double>(lower);
    const Eigen::Index k0 = lower % grid_size;
    const Eigen::Index k1 = (lower + 1) % grid_size;
    if (frac < 1e-9 || frac > 1.0 - 1e-9) {
        theta[offset + (frac < 1e-9 ? k0 : k1)] = mag;
        return;
    }
    const double phi0 = static_cast<double>(k0) * step;
    const double phi1 = phi0 + step;
    const double det = std::sin(step);
    const double w0 = (z.real() * std::sin(phi1) - z.imag() * std::cos(phi1)) / det;
    const double w1 = (z.imag() * std::cos(phi0) - z.real() * std::sin(phi0)) / det;
    theta[offset + k0] = w0;
    theta[offset + k1] = w1;
}

namespace detail {

// s[i] += sum over symbols of b[m] * taps[k] at i = m*n_s - d + k.
inline void upsample_filter(const Eigen::VectorXcd &b, const PulseShape &pulse, int n_s,
                            Eigen::VectorXcd &out) {
    const Eigen::Index n = out.size();
    const Eigen::Index len = pulse.length();
    const Eigen::Index d = pulse.peak_index;
    for (Eigen::Index m = 0; m < b.size(); ++m) {
        const Complex v = b[m];
        if (v == Complex(0.0, 0.0)) continue;
        const Eigen::Index base = m * n_s - d;
        const Eigen::Index k_lo = std::max<Eigen::Index>(0, -base);
        const Eigen::Index k_hi = std::min<Eigen::Index>(len, n - base);
        for (Eigen::Index k = k_lo; k < k_hi; ++k) out[base + k] += v * pulse.taps[k];
    }
}

// g[m] = sum_k taps[k] * w[m*n_s - d + k]  (adjoint of upsample_filter).
inline void filter_downsample(const Eigen::VectorXcd &w, const PulseShape &pulse, int n_s,
                              Eigen::VectorXcd &g) {
    const Eigen::Index n = w.size();
    const Eigen::Index len = pulse.length();
    const Eigen::Index d = pulse.peak_index;
    for (Eigen::Index m = 0; m < g.size(); ++m) {
        const Eigen::Index base = m * n_s - d;
        const Eigen::Index k_lo = std::max<Eigen::Index>(0, -base);
        const Eigen::Index k_hi = std::min<Eigen::Index>(len, n - base);
        Complex acc(0.0, 0.0);
        for (Eigen::Index k = k_lo; k < k_hi; ++k) acc += pulse.taps[k] * w[base + k];
        g[m] = acc;
    }
}

} // namespace detail

/**
 * Sparse synthesis model of a single linearly modulated signal. Immutable
 * once built; apply() and apply_adjoint() are safe to call concurrently.
 */
struct SignalModel {
    ConstellationAlphabet alphabet;    // decision alphabet
    DictionaryMode mode = DictionaryMode::AlphabetAtom;
    Eigen::VectorXcd dictionary_row;   // the J atoms of every block
    PulseShape pulse;
    Eigen::VectorXcd carrier;          // diagonal of E
    double f_c = 0.0;
    double f_s = 1.0;
    Eigen::Index num_symbols = 0;      // M
    Eigen::Index num_samples = 0;      // N = M * n_s
    int samples_per_symbol = 1;        // n_s
    int edge_symbols = 0;              // symbols whose pulse is truncated at the frame edge

    Eigen::Index dictionary_size() const { return dictionary_row.size(); } // J
    Eigen::Index coeff_dim() const { return dictionary_size() * num_symbols; }
    double symbol_rate() const { return f_s / samples_per_symbol; }

    // b = D * theta
    Eigen::VectorXcd symbols_from(const Eigen::VectorXcd &theta) const {
        const Eigen::Index j = dictionary_size();
        if (theta.size() != coeff_dim())
            throw std::invalid_argument("SignalModel: coefficient vector has wrong length");
        Eigen::VectorXcd b(num_symbols);
        for (Eigen::Index m = 0; m < num_symbols; ++m)
            b[m] = dictionary_row.cwiseProduct(theta.segment(m * j, j)).sum();
        return b;
    }

    // Psi * theta without materializing Psi.
    Eigen::VectorXcd apply(const Eigen::VectorXcd &theta) const {
        const Eigen::VectorXcd b = symbols_from(theta);
        Eigen::VectorXcd s = Eigen::VectorXcd::Zero(num_samples);
        detail::upsample_filter(b, pulse, samples_per_symbol, s);
        return carrier.cwiseProduct(s);
    }

    // Psi^H * r
    Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd &r) const {
        if (r.size() != num_samples)
            throw std::invalid_argument("SignalModel: sample vector has wrong length");
        const Eigen::VectorXcd w = carrier.conjugate().cwiseProduct(r);
        Eigen::VectorXcd g(num_symbols);
        detail::filter_downsample(w, pulse, samples_per_symbol, g);
        const Eigen::Index j = dictionary_size();
        Eigen::VectorXcd theta(coeff_dim());
        for (Eigen::Index m = 0; m < num_symbols; ++m)
            theta.segment(m * j, j) = dictionary_row.conjugate() * g[m];
        return theta;
    }

    // Dense Psi, column by column: Psi[:, m*J+j] = atom_j * (E ⊙ pulse at symbol m).
    Eigen::MatrixXcd materialize() const {
        const Eigen::Index j = dictionary_size();
        Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(num_samples, coeff_dim());
        const Eigen::Index len = pulse.length();
        const Eigen::Index d = pulse.peak_index;
        Eigen::VectorXcd col(num_samples);
        for (Eigen::Index m = 0; m < num_symbols; ++m) {
            col.setZero();
            const Eigen::Index base = m * static_cast<Eigen::Index>(samples_per_symbol) - d;
            const Eigen::Index k_lo = std::max<Eigen::Index>(0, -base);
            const Eigen::Index k_hi = std::min<Eigen::Index>(len, num_samples - base);
            for (Eigen::Index k = k_lo; k < k_hi; ++k)
                col[base + k] = pulse.taps[k] * carrier[base + k];
            for (Eigen::Index a = 0; a < j; ++a) psi.col(m * j + a) = dictionary_row[a] * col;
        }
        return psi;
    }

    /**
     * Coefficient vector synthesizing exactly the given transmitted atoms:
     * a 0/1 indicator in alphabet-atom mode, the minimal nonnegative grid
     * decomposition of each symbol value in phase-grid mode.
     */
    Eigen::VectorXcd ideal_theta(const std::vector<int> &atom_indices) const {
        if (static_cast<Eigen::Index>(atom_indices.size()) != num_symbols)
            throw std::invalid_argument("SignalModel: need one transmitted atom per symbol");
        const Eigen::Index j = dictionary_size();
        Eigen::VectorXcd theta = Eigen::VectorXcd::Zero(coeff_dim());
        for (Eigen::Index m = 0; m < num_symbols; ++m) {
            const int idx = atom_indices[static_cast<std::size_t>(m)];
            if (idx < 0 || idx >= alphabet.size())
                throw std::invalid_argument("SignalModel: transmitted atom index out of range");
            if (mode == DictionaryMode::AlphabetAtom) {
                theta[m * j + idx] = 1.0;
            } else {
                phase_grid_decompose(alphabet.atoms[static_cast<std::size_t>(idx)],
                                     static_cast<int>(j), theta, m * j);
            }
        }
        return theta;
    }
};

inline SignalModel make_signal_model(ConstellationAlphabet alphabet, DictionaryMode mode,
                                     int grid_size, PulseShape pulse, double f_c, double f_s,
                                     Eigen::Index num_symbols) {
    if (num_symbols < 1) throw std::invalid_argument("make_signal_model: symbol count must be >= 1");
    if (alphabet.atoms.empty()) throw std::invalid_argument("make_signal_model: empty alphabet");
    SignalModel m;
    m.alphabet = std::move(alphabet);
    m.mode = mode;
    m.dictionary_row = (mode == DictionaryMode::AlphabetAtom)
                           ? Eigen::Map<const Eigen::VectorXcd>(m.alphabet.atoms.data(),
                                                                m.alphabet.size())
                                 .eval()
                           : phase_grid_atoms(grid_size);
    m.pulse = std::move(pulse);
    m.f_c = f_c;
    m.f_s = f_s;
    m.num_symbols = num_symbols;
    m.samples_per_symbol = m.pulse.samples_per_symbol;
    m.num_samples = num_symbols * m.samples_per_symbol;
    if (m.pulse.length() > m.num_samples)
        throw std::invalid_argument("make_signal_model: pulse longer than the frame");
    m.carrier = build_carrier(f_c, f_s, m.num_samples);
    m.edge_symbols = static_cast<int>(
        std::min<Eigen::Index>((m.pulse.span_symbols + 1) / 2, num_symbols / 2));
    return m;
}

// Dense Psi = E * F1 * U * D with dimension checks; test-oriented reference route.
inline Eigen::MatrixXcd compose_basis(const Eigen::VectorXcd &carrier, const Eigen::MatrixXd &f1,
                                      const Eigen::MatrixXd &u, const Eigen::MatrixXcd &d) {
    const Eigen::Index n = carrier.size();
    if (f1.rows() != n || f1.cols() != n || u.rows() != n || d.rows() != u.cols())
        throw std::invalid_argument("compose_basis: factor dimensions do not chain");
    Eigen::MatrixXcd psi = (f1 * u).cast<Complex>() * d;
    psi.array().colwise() *= carrier.array();
    return psi;
}

/**
 * Delay matrix P (N x 2N): maps stacked [I; Q] rails to the complex vector
 * r[i] = I[i] + j*Q[i - n_s/2], indices below zero reading as zero. Pass
 * n_s = 0 for the no-delay variant.
 */
inline Eigen::MatrixXcd build_delay_matrix(Eigen::Index n, int n_s) {
    if (n_s < 0 || n_s % 2 != 0)
        throw std::invalid_argument("build_delay_matrix: samples per symbol must be even");
    const Eigen::Index h = n_s / 2;
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        p(i, i) = Complex(1.0, 0.0);
        if (i >= h) p(i, n + i - h) = Complex(0.0, 1.0);
    }
    return p;
}

/**
 * Offset-quadrature synthesis model (OQPSK and MSK). The coefficient vector
 * stacks an in-phase and a quadrature half, each with M blocks of J entries;
 * Dbar = [[Re D, 0], [0, Im D]]. Solved over real coefficients.
 */
struct StackedSignalModel {
    ConstellationAlphabet alphabet;
    Eigen::VectorXcd dictionary_row;
    PulseShape pulse;
    Eigen::VectorXcd carrier;
    double f_c = 0.0;
    double f_s = 1.0;
    Eigen::Index num_symbols = 0;
    Eigen::Index num_samples = 0;
    int samples_per_symbol = 1;
    int half_shift = 0;      // quadrature delay in samples, n_s/2
    int edge_symbols = 0;

    Eigen::Index dictionary_size() const { return dictionary_row.size(); }
    Eigen::Index coeff_dim() const { return 2 * dictionary_size() * num_symbols; }
    double symbol_rate() const { return f_s / samples_per_symbol; }

    // bhat[m] = (Re row) · theta_I-block + j * (Im row) · theta_Q-block
    Eigen::VectorXcd symbols_from(const Eigen::VectorXcd &theta_bar) const {
        const Eigen::Index j = dictionary_size();
        const Eigen::Index half = j * num_symbols;
        if (theta_bar.size() != coeff_dim())
            throw std::invalid_argument("StackedSignalModel: coefficient vector has wrong length");
        Eigen::VectorXcd b(num_symbols);
        for (Eigen::Index m = 0; m < num_symbols; ++m) {
            Complex bi(0.0, 0.0), bq(0.0, 0.0);
            for (Eigen::Index a = 0; a < j; ++a) {
                bi += dictionary_row[a].real() * theta_bar[m * j + a];
                bq += dictionary_row[a].imag() * theta_bar[half + m * j + a];
            }
            b[m] = bi + Complex(0.0, 1.0) * bq;
        }
        return b;
    }

    Eigen::VectorXcd apply(const Eigen::VectorXcd &theta_bar) const {
        const Eigen::Index j = dictionary_size();
        const Eigen::Index half = j * num_symbols;
        if (theta_bar.size() != coeff_dim())
            throw std::invalid_argument("StackedSignalModel: coefficient vector has wrong length");
        Eigen::VectorXcd b_i(num_symbols), b_q(num_symbols);
        for (Eigen::Index m = 0; m < num_symbols; ++m) {
            Complex bi(0.0, 0.0), bq(0.0, 0.0);
            for (Eigen::Index a = 0; a < j; ++a) {
                bi += dictionary_row[a].real() * theta_bar[m * j + a];
                bq += dictionary_row[a].imag() * theta_bar[half + m * j + a];
            }
            b_i[m] = bi;
            b_q[m] = bq;
        }
        Eigen::VectorXcd s_i = Eigen::VectorXcd::Zero(num_samples);
        Eigen::VectorXcd s_q = Eigen::VectorXcd::Zero(num_samples);
        detail::upsample_filter(b_i, pulse, samples_per_symbol, s_i);
        detail::upsample_filter(b_q, pulse, samples_per_symbol, s_q);
        Eigen::VectorXcd r(num_samples);
        for (Eigen::Index i = 0; i < num_samples; ++i) {
            const Complex q = (i >= half_shift) ? s_q[i - half_shift] : Complex(0.0, 0.0);
            r[i] = carrier[i] * (s_i[i] + Complex(0.0, 1.0) * q);
        }
        return r;
    }

    Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd &r) const {
        if (r.size() != num_samples)
            throw std::invalid_argument("StackedSignalModel: sample vector has wrong length");
        const Eigen::Index j = dictionary_size();
        const Eigen::Index half = j * num_symbols;
        const Eigen::VectorXcd w = carrier.conjugate().cwiseProduct(r);
        Eigen::VectorXcd w_q = Eigen::VectorXcd::Zero(num_samples);
        for (Eigen::Index q = 0; q + half_shift < num_samples; ++q)
            w_q[q] = Complex(0.0, -1.0) * w[q + half_shift];
        Eigen::VectorXcd g_i(num_symbols), g_q(num_symbols);
        detail::filter_downsample(w, pulse, samples_per_symbol, g_i);
        detail::filter_downsample(w_q, pulse, samples_per_symbol, g_q);
        Eigen::VectorXcd theta(coeff_dim());
        for (Eigen::Index m = 0; m < num_symbols; ++m) {
            for (Eigen::Index a = 0; a < j; ++a) {
                theta[m * j + a] = dictionary_row[a].real() * g_i[m];
                theta[half + m * j + a] = dictionary_row[a].imag() * g_q[m];
            }
        }
        return theta;
    }

    Eigen::MatrixXcd materialize() const {
        const Eigen::Index j = dictionary_size();
        const Eigen::Index half = j * num_symbols;
        Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(num_samples, coeff_dim());
        const Eigen::Index len = pulse.length();
        const Eigen::Index d = pulse.peak_index;
        Eigen::VectorXcd col(num_samples);
        for (Eigen::Index m = 0; m < num_symbols; ++m) {
            // in-phase rail: pulse at m*n_s
            col.setZero();
            Eigen::Index base = m * static_cast<Eigen::Index>(samples_per_symbol) - d;
            Eigen::Index k_lo = std::max<Eigen::Index>(0, -base);
            Eigen::Index k_hi = std::min<Eigen::Index>(len, num_samples - base);
            for (Eigen::Index k = k_lo; k < k_hi; ++k)
                col[base + k] = pulse.taps[k] * carrier[base + k];
            for (Eigen::Index a = 0; a < j; ++a)
                psi.col(m * j + a) = dictionary_row[a].real() * col;
            // quadrature rail: pulse delayed by half a symbol and rotated to j
            // axis; the rail is truncated to [0, N) before the delay, so
            // entries whose pre-delay index would be negative stay zero
            col.setZero();
            base += half_shift;
            k_lo = std::max<Eigen::Index>(0, half_shift - base);
            k_hi = std::min<Eigen::Index>(len, num_samples - base);
            for (Eigen::Index k = k_lo; k < k_hi; ++k)
                col[base + k] = Complex(0.0, 1.0) * pulse.taps[k] * carrier[base + k];
            for (Eigen::Index a = 0; a < j; ++a)
                psi.col(half + m * j + a) = dictionary_row[a].imag() * col;
        }
        return psi;
    }

    // Stacked indicator [theta; theta]: Dbar * [theta; theta] = [Re b; Im b].
    Eigen::VectorXcd ideal_theta(const std::vector<int> &atom_indices) const {
        if (static_cast<Eigen::Index>(atom_indices.size()) != num_symbols)
            throw std::invalid_argument("StackedSignalModel: need one transmitted atom per symbol");
        const Eigen::Index j = dictionary_size();
        const Eigen::Index half = j * num_symbols;
        Eigen::VectorXcd theta = Eigen::VectorXcd::Zero(coeff_dim());
        for (Eigen::Index m = 0; m < num_symbols; ++m) {
            const int idx = atom_indices[static_cast<std::size_t>(m)];
            if (idx < 0 || idx >= static_cast<int>(j))
                throw std::invalid_argument("StackedSignalModel: transmitted atom index out of range");
            theta[m * j + idx] = 1.0;
            theta[half + m * j + idx] = 1.0;
        }
        return theta;
    }
};

inline StackedSignalModel make_stacked_model(ConstellationAlphabet alphabet, PulseShape pulse,
                                             double f_c, double f_s, Eigen::Index num_symbols) {
    if (num_symbols < 1)
        throw std::invalid_argument("make_stacked_model: symbol count must be >= 1");
    if (alphabet.atoms.empty()) throw std::invalid_argument("make_stacked_model: empty alphabet");
    StackedSignalModel m;
    m.alphabet = std::move(alphabet);
    m.dictionary_row =
        Eigen::Map<const Eigen::VectorXcd>(m.alphabet.atoms.data(), m.alphabet.size());
    m.pulse = std::move(pulse);
    m.f_c = f_c;
    m.f_s = f_s;
    m.num_symbols = num_symbols;
    m.samples_per_symbol = m.pulse.samples_per_symbol;
    if (m.samples_per_symbol % 2 != 0)
        throw std::invalid_argument("make_stacked_model: samples per symbol must be even");
    m.half_shift = m.samples_per_symbol / 2;
    m.num_samples = num_symbols * m.samples_per_symbol;
    if (m.pulse.length() > m.num_samples)
        throw std::invalid_argument("make_stacked_model: pulse longer than the frame");
    m.carrier = build_carrier(f_c, f_s, m.num_samples);
    m.edge_symbols = static_cast<int>(
        std::min<Eigen::Index>((m.pulse.span_symbols + 1) / 2, num_symbols / 2));
    return m;
}

// Dense Psibar = E * P * F1bar * Ubar * Dbar; test-oriented reference route.
inline Eigen::MatrixXcd compose_stacked_basis(const Eigen::VectorXcd &carrier,
                                              const Eigen::MatrixXcd &p, const Eigen::MatrixXd &f1bar,
                                              const Eigen::MatrixXd &ubar,
                                              const Eigen::MatrixXd &dbar) {
    const Eigen::Index n = carrier.size();
    if (p.rows() != n || p.cols() != f1bar.rows() || f1bar.cols() != ubar.rows() ||
        ubar.cols() != dbar.rows())
        throw std::invalid_argument("compose_stacked_basis: factor dimensions do not chain");
    Eigen::MatrixXcd psi = p * (f1bar * ubar * dbar).cast<Complex>();
    psi.array().colwise() *= carrier.array();
    return psi;
}

} // namespace phasecs
