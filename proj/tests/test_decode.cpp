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

#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "phasecs/decode.hpp"
#include "phasecs/model.hpp"
#include "phasecs/rng.hpp"

using namespace phasecs;
using Catch::Approx;
using cplx = std::complex<double>;

namespace {

std::vector<int> random_indices(Eigen::Index count, int bound, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> idx(static_cast<std::size_t>(count));
    for (int &i : idx) i = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(bound)));
    return idx;
}

} // namespace

TEST_CASE("decide_symbols on ideal and perturbed coefficients") {
    auto model = make_signal_model(psk_alphabet(4), DictionaryMode::AlphabetAtom, 0,
                                   srrc_taps(0.35, 2, 4), 100.0, 400.0, 8);
    const auto tx = random_indices(8, 4, 3);
    const auto theta = model.ideal_theta(tx);

    const auto frame = decide_symbols(theta, model);
    CHECK(frame.atom_indices == tx);
    CHECK(symbol_error_rate(frame.atom_indices, tx, frame.edge_symbols) == 0.0);
    CHECK(symbol_error_rate(frame.atom_indices, tx, frame.edge_symbols, true) == 0.0);
    // bhat = D * theta within 1e-12
    for (Eigen::Index m = 0; m < 8; ++m)
        CHECK(std::abs(frame.symbols[m] -
                       model.alphabet.atoms[static_cast<std::size_t>(tx[static_cast<std::size_t>(m)])]) <
              1e-12);
    CHECK(frame.lambda0 == Approx(0.25).margin(1e-15)); // 1/J for the ideal indicator

    // dominant-coefficient block with a small spurious entry still decides right
    Eigen::VectorXcd noisy = theta;
    noisy[0 * 4 + tx[0]] = 0.9;
    noisy[0 * 4 + ((tx[0] + 2) % 4)] = 0.05;
    const auto frame2 = decide_symbols(noisy, model);
    CHECK(frame2.atom_indices[0] == tx[0]);

    // an all-zero block is an erasure and scores as an error
    Eigen::VectorXcd erased = theta;
    erased.segment(4 * 4, 4).setZero();
    const auto frame3 = decide_symbols(erased, model);
    CHECK(frame3.atom_indices[4] == -1);
    CHECK(symbol_error_rate(frame3.atom_indices, tx, 0) == Approx(1.0 / 8.0));
}

TEST_CASE("small perturbations below the decision gap never flip symbols") {
    auto model = make_signal_model(psk_alphabet(4), DictionaryMode::AlphabetAtom, 0,
                                   srrc_taps(0.35, 2, 4), 100.0, 400.0, 8);
    const auto tx = random_indices(8, 4, 5);
    GaussianStream g(77);
    Eigen::VectorXcd theta = model.ideal_theta(tx);
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        theta[i] += 0.05 * cplx(g.next(), g.next()); // well below half the atom distance
    const auto frame = decide_symbols(theta, model);
    CHECK(symbol_error_rate(frame.atom_indices, tx, 0) == 0.0);
}

TEST_CASE("sparse ratio") {
    auto model = make_signal_model(psk_alphabet(4), DictionaryMode::PhaseGrid, 8,
                                   srrc_taps(0.35, 2, 4), 100.0, 400.0, 16);
    const auto theta = model.ideal_theta(random_indices(16, 4, 9));
    CHECK(sparse_ratio(theta, 1e-9) == Approx(1.0 / 8.0).margin(1e-15));

    CHECK(sparse_ratio(Eigen::VectorXcd::Zero(64), 0.0) == 0.0);

    // ideal alphabet-atom coefficients have ratio exactly 1/J for every scheme
    for (int j : {2, 4, 8, 16}) {
        auto m = make_signal_model(psk_alphabet(j), DictionaryMode::AlphabetAtom, 0,
                                   srrc_taps(0.35, 2, 4), 100.0, 400.0, 8);
        const auto t = m.ideal_theta(random_indices(8, j, 11));
        CHECK(sparse_ratio(t, 0.0) == Approx(1.0 / j).margin(1e-15));
    }

    // phase-grid 16QAM: a frame with on-grid and off-grid points lands in (1/J, 2/J)
    auto qam = make_signal_model(qam_alphabet(4, 4, 1.0), DictionaryMode::PhaseGrid, 8,
                                 srrc_taps(0.35, 2, 4), 100.0, 400.0, 16);
    std::vector<int> tx(16);
    for (int m = 0; m < 16; ++m) tx[static_cast<std::size_t>(m)] = m % 16; // all 16 atoms once
    const double ratio = sparse_ratio(qam.ideal_theta(tx), 1e-9);
    CHECK(ratio > 1.0 / 8.0);
    CHECK(ratio < 2.0 / 8.0);

    CHECK_THROWS_AS(sparse_ratio(theta, -1.0), std::invalid_argument);
}

TEST_CASE("compression ratio") {
    CHECK(compression_ratio(192, 1024) == Approx(0.1875).margin(1e-15));
    CHECK(compression_ratio(1024, 1024) == 1.0);
    CHECK(compression_ratio(256, 1024) == 0.25);
    CHECK_THROWS_AS(compression_ratio(0, 1024), std::invalid_argument);
    CHECK_THROWS_AS(compression_ratio(1025, 1024), std::invalid_argument);
}

TEST_CASE("required measurements") {
    CHECK(required_measurements(64, 8, 1.45) == 193);
    CHECK(required_measurements(64, 1, 2.0) == 0);
    CHECK(required_measurements(32, 4, 2.0) == 89);
    CHECK_THROWS_AS(required_measurements(32, 4, 0.0), std::invalid_argument);
}

TEST_CASE("rotation estimation") {
    GaussianStream g(13);
    Eigen::VectorXcd tx(32);
    for (Eigen::Index i = 0; i < 32; ++i) tx[i] = cplx(g.next(), g.next());

    CHECK(estimate_rotation(tx, tx) == Approx(0.0).margin(1e-15));

    const cplx w = std::polar(1.0, std::numbers::pi / 4.0);
    CHECK(estimate_rotation((tx.array() * w).matrix(), tx) ==
          Approx(std::numbers::pi / 4.0).margin(1e-12));

    // invariant to positive real scaling of either argument
    CHECK(estimate_rotation((tx.array() * w * 3.7).matrix(), tx) ==
          Approx(std::numbers::pi / 4.0).margin(1e-12));
    CHECK(estimate_rotation((tx.array() * w).matrix(), (tx.array() * 0.2).matrix()) ==
          Approx(std::numbers::pi / 4.0).margin(1e-12));

    CHECK_THROWS_AS(estimate_rotation(Eigen::VectorXcd::Zero(32), tx), std::invalid_argument);
    CHECK_THROWS_AS(estimate_rotation(tx, Eigen::VectorXcd::Zero(32)), std::invalid_argument);
}

TEST_CASE("nmse") {
    GaussianStream g(15);
    Eigen::VectorXcd r(64);
    for (Eigen::Index i = 0; i < 64; ++i) r[i] = cplx(g.next(), g.next());
    CHECK(nmse(r, r) <= 1e-20);
    CHECK(nmse(2.0 * r, r) == Approx(1.0).margin(1e-12));
    CHECK_THROWS_AS(nmse(r, Eigen::VectorXcd::Zero(64)), std::invalid_argument);
}

TEST_CASE("stacked decisions combine the two halves") {
    auto model = make_stacked_model(oqpsk_alphabet(), srrc_taps(0.35, 2, 4), 100.0, 400.0, 8);
    const auto tx = random_indices(8, 4, 21);
    const auto theta = model.ideal_theta(tx);
    const auto frame = decide_symbols(theta, model);
    CHECK(frame.atom_indices == tx);
    for (Eigen::Index m = 0; m < 8; ++m)
        CHECK(std::abs(frame.symbols[m] -
                       model.alphabet.atoms[static_cast<std::size_t>(tx[static_cast<std::size_t>(m)])]) <
              1e-12);

    // spreading the in-phase weight across the two atoms sharing a real part
    // leaves the synthesized symbol, and hence the decision, unchanged
    Eigen::VectorXcd spread = theta;
    const Eigen::Index block = 3 * 4;
    const int sent = tx[3];
    int partner = -1;
    for (int a = 0; a < 4; ++a)
        if (a != sent && std::abs(model.dictionary_row[a].real() -
                                  model.dictionary_row[sent].real()) < 1e-12)
            partner = a;
    REQUIRE(partner >= 0);
    spread[block + sent] = 0.5;
    spread[block + partner] = 0.5;
    const auto frame2 = decide_symbols(spread, model);
    CHECK(frame2.atom_indices[3] == sent);
}
