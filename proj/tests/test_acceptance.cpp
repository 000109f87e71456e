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
// Acceptance suite: one test case per release criterion, each printing a
// single [PASS]/[FAIL] line. Thresholds are fixed here, not tuned at runtime.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <iostream>
#include <numbers>

#include "phasecs/phasecs.hpp"

using namespace phasecs;

namespace {

const std::filesystem::path kScenarioDir(PHASECS_SCENARIO_DIR);

void verdict(int number, const std::string &label, bool pass) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << label << "\n";
}

Scenario load(const char *name) {
    return parse_scenario_file((kScenarioDir / name).string());
}

double worst_block_dominance(const Eigen::VectorXcd &theta, Eigen::Index block_size) {
    double worst = std::numeric_limits<double>::infinity();
    for (Eigen::Index b = 0; b < theta.size() / block_size; ++b) {
        double first = 0.0, second = 0.0;
        for (Eigen::Index j = 0; j < block_size; ++j) {
            const double v = std::abs(theta[b * block_size + j]);
            if (v > first) {
                second = first;
                first = v;
            } else if (v > second) {
                second = v;
            }
        }
        worst = std::min(worst, first / std::max(second, 1e-300));
    }
    return worst;
}

int count_magnitude_clusters(const Eigen::VectorXcd &theta, double rel_floor, double rel_gap) {
    const double peak = theta.cwiseAbs().maxCoeff();
    std::vector<double> mags;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double v = std::abs(theta[i]);
        if (v > rel_floor * peak) mags.push_back(v);
    }
    std::sort(mags.begin(), mags.end());
    if (mags.empty()) return 0;
    int clusters = 1;
    for (std::size_t i = 1; i < mags.size(); ++i)
        if (mags[i] > mags[i - 1] * (1.0 + rel_gap)) ++clusters;
    return clusters;
}

std::vector<int> random_indices(Eigen::Index count, int bound, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> idx(static_cast<std::size_t>(count));
    for (int &i : idx) i = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(bound)));
    return idx;
}

} // namespace

TEST_CASE("criterion 1: qpsk reconstruction, phase-grid dictionary") {
    const Scenario sc = load("qpsk_fig2.scn");
    int good = 0;
    bool runtime_ok = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const RunOutcome o = simulate(sc, seed);
        runtime_ok = runtime_ok && o.runtime_seconds <= 60.0;
        const SignalOutcome &s = o.signals[0];
        const bool exact = o.converged && s.frame.ser == 0.0 && s.frame.nmse <= 1e-3 &&
                           worst_block_dominance(s.theta_hat, 8) >= 10.0;
        if (exact) ++good;
    }
    const bool pass = good >= 9 && runtime_ok;
    verdict(1, "qpsk ser 0 / nmse <= 1e-3 / one dominant entry per 8-block, >= 9 of 10 seeds",
            pass);
    REQUIRE(pass);
}

TEST_CASE("criterion 2: 16qam and 4+12-apsk reconstruction") {
    int good_qam = 0, good_apsk = 0;
    const Scenario qam = load("qam16_fig3.scn");
    const Scenario apsk = load("apsk_fig4.scn");
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const RunOutcome oq = simulate(qam, seed);
        if (oq.converged && oq.signals[0].frame.ser == 0.0) ++good_qam;
        const RunOutcome oa = simulate(apsk, seed);
        if (oa.converged && oa.signals[0].frame.ser == 0.0) ++good_apsk;
    }
    // phase-grid mode: off-grid QAM points split over two atoms, so the
    // nonzero coefficients carry more than one distinct magnitude
    const RunOutcome grid = simulate(load("qam16_grid.scn"), 1);
    const int clusters = count_magnitude_clusters(grid.signals[0].theta_hat, 1e-3, 0.05);

    const bool pass = good_qam >= 9 && good_apsk >= 9 && clusters > 1;
    verdict(2, "16qam and apsk ser 0 in >= 9 of 10 seeds; several coefficient amplitudes", pass);
    REQUIRE(pass);
}

TEST_CASE("criterion 3: oqpsk stacked model identity and recovery") {
    const auto alphabet = oqpsk_alphabet();
    const auto pulse = srrc_taps(0.35, 8, 16);
    auto model = make_stacked_model(alphabet, pulse, 400.0, 1600.0, 32);

    double worst_identity = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto tx = random_indices(32, 4, seed);
        Eigen::VectorXcd b(32);
        for (Eigen::Index m = 0; m < 32; ++m)
            b[m] = alphabet.atoms[static_cast<std::size_t>(tx[static_cast<std::size_t>(m)])];
        oracle::DirectPipeline pipeline{pulse, 400.0, 1600.0, 16, true};
        const auto direct = oracle::direct_modulate(b, pipeline);
        worst_identity = std::max(
            worst_identity, (model.apply(model.ideal_theta(tx)) - direct).cwiseAbs().maxCoeff());
    }

    int recovered = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto tx = random_indices(32, 4, sub_seed(seed, 100));
        const auto theta = model.ideal_theta(tx);
        const auto phi = gaussian_matrix(96, model.num_samples, sub_seed(seed, 1)); // K = 3M
        const auto y = measure(phi, model.apply(theta));
        BasisOperator<StackedSignalModel> basis(model);
        MeasuredOperator a(phi, basis);
        SolverConfig cfg;
        cfg.epsilon = 1e-6 * y.norm();
        cfg.domain = CoefficientDomain::Real;
        const auto sol = bpdn_solve(a, y, cfg);
        const auto frame = decide_symbols(sol.theta_hat, model);
        if (sol.converged &&
            symbol_error_rate(frame.atom_indices, tx, frame.edge_symbols) == 0.0)
            ++recovered;
    }

    const bool pass = worst_identity <= 1e-10 && recovered == 10;
    verdict(3, "oqpsk basis equals the direct generator (1e-10); K=3M recovery exact", pass);
    REQUIRE(pass);
}

TEST_CASE("criterion 4: joint recovery of a qpsk + 16qam mixture") {
    const Scenario sc = load("mixed_fig6.scn");
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const RunOutcome o = simulate(sc, seed);
        if (o.converged && o.signals[0].frame.ser == 0.0 && o.signals[1].frame.ser == 0.0) ++good;
    }
    const bool pass = good >= 8;
    verdict(4, "both mixed streams ser 0 in >= 8 of 10 seeds", pass);
    REQUIRE(pass);
}

TEST_CASE("criterion 5: measurement scaling sweep") {
    bool pass = true;
    for (const char *name : {"sweep_psk_j4.swp", "sweep_psk_j8.swp"}) {
        const SweepSpec sweep = parse_sweep_file((kScenarioDir / name).string());
        const auto rows = run_sweep(sweep);
        // success >= 0.9 at some K <= 3 M ln J (the c = 3 grid point)
        bool reached = false;
        for (const auto &r : rows)
            if (r.measurements <= required_measurements(sweep.base.signals[0].num_symbols,
                                                        r.dict_size, 3.0) &&
                r.success_rate >= 0.9)
                reached = true;
        // monotone nondecreasing up to one inversion of at most 0.1
        int inversions = 0;
        double worst_drop = 0.0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].success_rate < rows[i - 1].success_rate) {
                ++inversions;
                worst_drop = std::max(worst_drop, rows[i - 1].success_rate - rows[i].success_rate);
            }
        pass = pass && reached && inversions <= 1 && worst_drop <= 0.1;
    }
    verdict(5, "success >= 0.9 within K <= 3 M ln J; success rate monotone in K", pass);
    REQUIRE(pass);
}

TEST_CASE("criterion 6: impairment behaviour") {
    const RunOutcome rotated = simulate(load("impair_fig7a.scn"), 1);
    const bool rotation_ok =
        std::abs(rotated.signals[0].rotation - std::numbers::pi / 4.0) <= 0.05;

    int noisy_ok = 0;
    const Scenario noisy = load("impair_fig7d.scn");
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const RunOutcome o = simulate(noisy, seed);
        if (o.signals[0].frame.ser <= 0.05) ++noisy_ok;
    }
    const bool pass = rotation_ok && noisy_ok >= 9;
    verdict(6, "pi/4 phase deviation estimated within 0.05 rad; ser <= 0.05 at 20 dB", pass);
    REQUIRE(pass);
}

TEST_CASE("criterion 7: solver unit contract") {
    bool threshold_ok = true;
    GaussianStream g(123);
    for (int i = 0; i < 1000; ++i) {
        const Complex z(10.0 * g.next(), 10.0 * g.next());
        const double lambda = std::abs(4.0 * g.next());
        const double mag = std::abs(z);
        const Complex want = mag <= lambda ? Complex(0, 0) : z * ((mag - lambda) / mag);
        threshold_ok = threshold_ok && std::abs(complex_soft_threshold(z, lambda) - want) <= 1e-12;
    }

    auto model = make_signal_model(psk_alphabet(4), DictionaryMode::PhaseGrid, 8,
                                   srrc_taps(0.35, 4, 8), 400.0, 1600.0, 16);
    BasisOperator<SignalModel> basis(model);
    auto phi = gaussian_matrix(48, model.num_samples, 3);
    MeasuredOperator a(phi, basis);
    bool adjoint_ok = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GaussianStream gu(sub_seed(seed, 5)), gv(sub_seed(seed, 6));
        Eigen::VectorXcd u(a.cols()), v(a.rows());
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = Complex(gu.next(), gu.next());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(gv.next(), gv.next());
        const Complex lhs = a.apply(u).dot(v);
        const Complex rhs = u.dot(a.apply_adjoint(v));
        adjoint_ok = adjoint_ok && std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs));
    }

    bool feasibility_ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto tx = random_indices(16, 4, seed);
        const auto y = measure(phi, model.apply(model.ideal_theta(tx)));
        SolverConfig cfg;
        cfg.epsilon = 1e-6 * y.norm();
        cfg.domain = CoefficientDomain::NonnegativeReal;
        const auto sol = bpdn_solve(a, y, cfg);
        feasibility_ok = feasibility_ok && sol.converged &&
                         (y - a.apply(sol.theta_hat)).norm() <= cfg.epsilon + 1e-6 * y.norm();
    }

    const bool pass = threshold_ok && adjoint_ok && feasibility_ok;
    verdict(7, "soft-threshold closed form, adjoint pairing, residual feasibility", pass);
    REQUIRE(pass);
}

TEST_CASE("criterion 8: solver matches the exhaustive reference on tiny instances") {
    int agree = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto model = make_signal_model(psk_alphabet(4), DictionaryMode::AlphabetAtom, 0,
                                       srrc_taps(0.35, 2, 6), 100.0, 600.0, 4);
        const auto tx = random_indices(4, 4, sub_seed(seed, 100));
        const auto theta = model.ideal_theta(tx);
        const auto phi = gaussian_matrix(24, model.num_samples, sub_seed(seed, 1));
        const auto y = measure(phi, model.apply(theta));
        BasisOperator<SignalModel> basis(model);
        MeasuredOperator a(phi, basis);
        SolverConfig cfg;
        cfg.epsilon = 1e-6 * y.norm();
        cfg.domain = CoefficientDomain::Complex;
        const auto sol = bpdn_solve(a, y, cfg);
        const auto frame = decide_symbols(sol.theta_hat, model);
        std::vector<int> reference;
        oracle::exhaustive_l1_reference(a, y, 4, 4, cfg.epsilon, &reference);
        if (sol.converged && frame.atom_indices == reference) ++agree;
    }
    const bool pass = agree >= 19;
    verdict(8, "decided symbols equal the exhaustive-search reference in >= 19 of 20", pass);
    REQUIRE(pass);
}

TEST_CASE("criterion 9: matrix builder identities") {
    const auto u = build_interpolation(64, 16);
    const bool u_ok =
        ((u.transpose() * u) - Eigen::MatrixXd::Identity(64, 64)).cwiseAbs().maxCoeff() == 0.0;

    const auto e = build_carrier(400.0, 1600.0, 1024);
    bool e_ok = true;
    for (Eigen::Index i = 0; i < e.size(); ++i)
        e_ok = e_ok && std::abs(std::abs(e[i]) - 1.0) <= 1e-12;

    const auto pulse = srrc_taps(0.35, 8, 16);
    bool srrc_ok = true;
    for (Eigen::Index k = 0; k < pulse.taps.size(); ++k)
        srrc_ok = srrc_ok &&
                  std::abs(pulse.taps[k] - pulse.taps[pulse.taps.size() - 1 - k]) <= 1e-12;

    auto model =
        make_signal_model(psk_alphabet(4), DictionaryMode::PhaseGrid, 8, pulse, 400.0, 1600.0, 64);
    const auto psi = model.materialize();
    GaussianStream g(9);
    Eigen::VectorXcd theta(model.coeff_dim());
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = Complex(g.next(), g.next());
    const bool apply_ok = (psi * theta - model.apply(theta)).cwiseAbs().maxCoeff() <= 1e-12;

    const auto tx = random_indices(64, 4, 77);
    const auto ideal = model.ideal_theta(tx);
    Eigen::VectorXcd b(64);
    for (Eigen::Index m = 0; m < 64; ++m)
        b[m] = model.alphabet.atoms[static_cast<std::size_t>(tx[static_cast<std::size_t>(m)])];
    oracle::DirectPipeline pipeline{pulse, 400.0, 1600.0, 16, false};
    const bool direct_ok =
        (model.apply(ideal) - oracle::direct_modulate(b, pipeline)).cwiseAbs().maxCoeff() <= 1e-10;

    const bool pass = u_ok && e_ok && srrc_ok && apply_ok && direct_ok;
    verdict(9, "U^T U = I, E unitary, srrc symmetric, basis = apply = direct pipeline", pass);
    REQUIRE(pass);
}
