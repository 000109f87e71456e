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

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace phasecs {

enum class Scheme { Psk, Rqam, Apsk, Oqpsk, Msk };

inline const char *scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Psk: return "psk";
        case Scheme::Rqam: return "qam";
        case Scheme::Apsk: return "apsk";
        case Scheme::Oqpsk: return "oqpsk";
        case Scheme::Msk: return "msk";
    }
    return "?";
}

/**
 * Ordered list of constellation points. Atom order is fixed by the generator
 * functions below and never depends on runtime state, so coefficient-block
 * indices are reproducible across runs.
 */
struct ConstellationAlphabet {
    std::vector<std::complex<double>> atoms;
    Scheme scheme = Scheme::Psk;

    int size() const { return static_cast<int>(atoms.size()); }
};

namespace detail {

inline void check_atoms_distinct(const std::vector<std::complex<double>> &atoms, const char *who) {
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t k = i + 1; k < atoms.size(); ++k)
            if (std::abs(atoms[i] - atoms[k]) <= 1e-9)
                throw std::invalid_argument(std::string(who) + ": atoms are not pairwise distinct");
}

} // namespace detail

// M'-ary PSK: atom m (0-based) sits at angle 2*pi*m/M' on the unit circle.
inline ConstellationAlphabet psk_alphabet(int num_phases) {
    if (num_phases < 1) throw std::invalid_argument("psk_alphabet: number of phases must be >= 1");
    ConstellationAlphabet a;
    a.scheme = Scheme::Psk;
    a.atoms.reserve(static_cast<std::size_t>(num_phases));
    for (int m = 0; m < num_phases; ++m)
        a.atoms.push_back(std::polar(1.0, 2.0 * std::numbers::pi * m / num_phases));
    detail::check_atoms_distinct(a.atoms, "psk_alphabet");
    return a;
}

/**
 * Rectangular QAM over the amplitude sets {±d, ±3d, ..., ±(I-1)d} in-phase and
 * {±d, ±3d, ..., ±(Q-1)d} quadrature. Ordering is row-major: in-phase level
 * ascending outer, quadrature level ascending inner. Atoms are not
 * energy-normalized; `spacing` is taken literally.
 */
inline ConstellationAlphabet qam_alphabet(int i_levels, int q_levels, double spacing) {
    if (i_levels < 2 || i_levels % 2 != 0)
        throw std::invalid_argument("qam_alphabet: in-phase level count must be even and >= 2");
    if (q_levels < 2 || q_levels % 2 != 0)
        throw std::invalid_argument("qam_alphabet: quadrature level count must be even and >= 2");
    if (!(spacing > 0.0)) throw std::invalid_argument("qam_alphabet: spacing must be positive");
    ConstellationAlphabet a;
    a.scheme = Scheme::Rqam;
    a.atoms.reserve(static_cast<std::size_t>(i_levels) * static_cast<std::size_t>(q_levels));
    for (int li = 0; li < i_levels; ++li) {
        const double amp_i = (2 * li - (i_levels - 1)) * spacing;
        for (int lq = 0; lq < q_levels; ++lq) {
            const double amp_q = (2 * lq - (q_levels - 1)) * spacing;
            a.atoms.emplace_back(amp_i, amp_q);
        }
    }
    detail::check_atoms_distinct(a.atoms, "qam_alphabet");
    return a;
}

struct ApskRing {
    int count = 0;        // points on this ring
    double radius = 0.0;  // ring radius, strictly increasing across rings
    double phase = 0.0;   // relative phase shift of the ring [rad]
};

// Concatenation over rings of radius * exp(j*(2*pi*k/count + phase)), k = 0..count-1.
inline ConstellationAlphabet apsk_alphabet(const std::vector<ApskRing> &rings) {
    if (rings.empty()) throw std::invalid_argument("apsk_alphabet: at least one ring required");
    double prev_radius = 0.0;
    ConstellationAlphabet a;
    a.scheme = Scheme::Apsk;
    for (const ApskRing &ring : rings) {
        if (ring.count < 1) throw std::invalid_argument("apsk_alphabet: ring point count must be >= 1");
        if (!(ring.radius > prev_radius))
            throw std::invalid_argument("apsk_alphabet: ring radii must be strictly increasing");
        prev_radius = ring.radius;
        for (int k = 0; k < ring.count; ++k)
            a.atoms.push_back(std::polar(ring.radius, 2.0 * std::numbers::pi * k / ring.count + ring.phase));
    }
    detail::check_atoms_distinct(a.atoms, "apsk_alphabet");
    return a;
}

// Offset-quadrature schemes use the rotated QPSK point set {(±1±j)/sqrt(2)}:
// every atom has in-phase and quadrature parts of magnitude 1/sqrt(2).
inline ConstellationAlphabet oqpsk_alphabet() {
    ConstellationAlphabet a = apsk_alphabet({{4, 1.0, std::numbers::pi / 4.0}});
    a.scheme = Scheme::Oqpsk;
    return a;
}

inline ConstellationAlphabet msk_alphabet() {
    ConstellationAlphabet a = apsk_alphabet({{4, 1.0, std::numbers::pi / 4.0}});
    a.scheme = Scheme::Msk;
    return a;
}

// Index of the alphabet point closest to z (lowest index wins ties).
inline int nearest_atom(const ConstellationAlphabet &alphabet, std::complex<double> z) {
    if (alphabet.atoms.empty()) throw std::invalid_argument("nearest_atom: empty alphabet");
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < alphabet.size(); ++j) {
        const double d = std::norm(z - alphabet.atoms[static_cast<std::size_t>(j)]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

} // namespace phasecs
