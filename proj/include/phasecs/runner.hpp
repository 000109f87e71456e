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
// End-to-end experiment runner: generate -> impair -> measure -> solve ->
// decode, with CSV/report artifacts. Seed usage (see rng.hpp for the stream
// definition): sub-stream 1 draws the measurement matrix, sub-stream 2 the
// channel noise, sub-streams 100+i the symbols of signal i. All randomness is
// derived from the scenario seed, so identical scenarios produce identical
// artifacts.

#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "phasecs/decode.hpp"
#include "phasecs/model.hpp"
#include "phasecs/rng.hpp"
#include "phasecs/sampling.hpp"
#include "phasecs/scenario.hpp"
#include "phasecs/solver.hpp"

namespace phasecs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitIo = 4;

struct RunOptions {
    std::string out_dir = ".";
    bool quiet = false;
    std::optional<std::uint64_t> seed_override;
};

struct SignalOutcome {
    SignalSpec spec;
    std::variant<SignalModel, StackedSignalModel> model;
    std::vector<int> tx_indices;
    Eigen::VectorXcd tx_symbols;
    Eigen::VectorXcd clean_waveform; // the signal's own frame, pre-impairment
    Eigen::VectorXcd theta_hat;
    DecodedFrame frame;
    double rotation = std::numeric_limits<double>::quiet_NaN();

    const ConstellationAlphabet &alphabet() const {
        return std::visit([](const auto &m) -> const ConstellationAlphabet & { return m.alphabet; },
                          model);
    }
    Eigen::Index dict_size() const {
        return std::visit([](const auto &m) { return m.dictionary_size(); }, model);
    }
    Eigen::Index frame_samples() const {
        return std::visit([](const auto &m) { return m.num_samples; }, model);
    }
};

struct RunOutcome {
    std::uint64_t seed = 0;
    Eigen::Index measurements = 0; // K
    Eigen::Index num_samples = 0;  // N
    double epsilon = 0.0;
    bool converged = false;
    double residual_norm = 0.0;
    int iterations = 0;
    int stages = 0;
    double final_lambda = 0.0;
    double runtime_seconds = 0.0;
    std::vector<SignalOutcome> signals;

    // exact recovery on the scored (non-edge) symbols of every signal
    bool all_symbols_recovered() const {
        for (const SignalOutcome &s : signals)
            if (!(s.frame.ser == 0.0)) return false;
        return !signals.empty();
    }
};

namespace detail {

struct BuiltSignal {
    std::variant<SignalModel, StackedSignalModel> model;
    CoefficientDomain domain = CoefficientDomain::NonnegativeReal;
};

inline BuiltSignal build_signal(const SignalSpec &spec, double f_s) {
    ConstellationAlphabet alphabet = make_alphabet(spec);
    PulseShape pulse = make_pulse(spec);
    BuiltSignal out;
    if (is_offset_scheme(spec.scheme)) {
        out.model = make_stacked_model(std::move(alphabet), std::move(pulse), spec.f_c, f_s,
                                       spec.num_symbols);
        out.domain = CoefficientDomain::Real;
    } else {
        out.model = make_signal_model(std::move(alphabet), spec.mode, spec.grid_size,
                                      std::move(pulse), spec.f_c, f_s, spec.num_symbols);
        out.domain = CoefficientDomain::NonnegativeReal;
    }
    return out;
}

} // namespace detail

/**
 * Run one scenario in memory. Throws ScenarioError on invalid scenarios and
 * std::invalid_argument on internal contract violations; never writes files.
 */
inline RunOutcome simulate(const Scenario &scenario_in,
                           std::optional<std::uint64_t> seed_override = {},
                           const SolverConfig &solver_defaults = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    Scenario sc = scenario_in;
    if (seed_override) sc.seed = *seed_override;
    validate_scenario(sc);

    RunOutcome out;
    out.seed = sc.seed;
    out.measurements = sc.measurements;
    out.num_samples = sc.num_samples;

    // 1. transmitted symbols and clean mixture
    Eigen::VectorXcd mixture = Eigen::VectorXcd::Zero(sc.num_samples);
    CoefficientDomain domain = CoefficientDomain::NonnegativeReal;
    std::vector<Eigen::VectorXcd> theta_true;
    for (std::size_t i = 0; i < sc.signals.size(); ++i) {
        detail::BuiltSignal built = detail::build_signal(sc.signals[i], sc.f_s);
        domain = built.domain; // uniform across signals (validated: multi => plain)
        SignalOutcome sig;
        sig.spec = sc.signals[i];
        sig.model = std::move(built.model);

        std::mt19937_64 rng(sub_seed(sc.seed, 100 + static_cast<std::uint64_t>(i)));
        const int alphabet_size = sig.alphabet().size();
        sig.tx_indices.resize(static_cast<std::size_t>(sc.signals[i].num_symbols));
        for (int &idx : sig.tx_indices)
            idx = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(alphabet_size)));
        sig.tx_symbols.resize(sc.signals[i].num_symbols);
        for (Eigen::Index m = 0; m < sig.tx_symbols.size(); ++m)
            sig.tx_symbols[m] =
                sig.alphabet().atoms[static_cast<std::size_t>(sig.tx_indices[static_cast<std::size_t>(m)])];

        const Eigen::VectorXcd theta = std::visit(
            [&](const auto &m) { return m.ideal_theta(sig.tx_indices); }, sig.model);
        sig.clean_waveform = std::visit([&](const auto &m) { return m.apply(theta); }, sig.model);
        mixture.head(sig.clean_waveform.size()) += sig.clean_waveform;
        theta_true.push_back(theta);
        out.signals.push_back(std::move(sig));
    }

    // 2. channel impairments; noise sigma is needed for the residual budget
    Impairments noiseless = sc.impairments;
    noiseless.snr_db.reset();
    Eigen::VectorXcd received = apply_impairments(mixture, noiseless, sc.f_s, 0);
    double noise_sigma = 0.0;
    if (sc.impairments.snr_db) {
        noise_sigma = awgn_sigma_for_snr(received, *sc.impairments.snr_db);
        received = add_awgn(received, noise_sigma, sub_seed(sc.seed, 2));
    }

    // 3. compressive measurements
    MeasurementSystem phi =
        sc.complex_phi ? gaussian_matrix_complex(sc.measurements, sc.num_samples, sub_seed(sc.seed, 1))
                       : gaussian_matrix(sc.measurements, sc.num_samples, sub_seed(sc.seed, 1));
    const Eigen::VectorXcd y = measure(phi, received);

    double epsilon;
    if (sc.epsilon_override) epsilon = *sc.epsilon_override;
    else if (sc.impairments.snr_db) epsilon = discrepancy_epsilon(phi, noise_sigma);
    else epsilon = 1e-6 * y.norm();
    phi.epsilon = epsilon;
    out.epsilon = epsilon;

    // 4. recovery
    SolverConfig cfg = solver_defaults;
    cfg.epsilon = epsilon;
    cfg.domain = domain;

    std::vector<std::unique_ptr<LinearOperator>> bases;
    std::vector<const LinearOperator *> base_ptrs;
    std::vector<Eigen::Index> block_sizes;
    for (SignalOutcome &sig : out.signals) {
        std::unique_ptr<LinearOperator> op = std::visit(
            [](const auto &m) -> std::unique_ptr<LinearOperator> {
                using ModelT = std::decay_t<decltype(m)>;
                return std::make_unique<BasisOperator<ModelT>>(m);
            },
            sig.model);
        if (op->rows() < sc.num_samples) {
            bases.push_back(std::move(op));
            op = std::make_unique<PaddedOperator>(*bases.back(), sc.num_samples);
        }
        bases.push_back(std::move(op));
        base_ptrs.push_back(bases.back().get());
        block_sizes.push_back(sig.dict_size());
    }

    std::vector<SparseSolution> solutions =
        multi_signal_solve(base_ptrs, phi, y, cfg, block_sizes);

    out.converged = solutions.front().converged;
    out.residual_norm = solutions.front().residual_norm;
    out.iterations = solutions.front().iterations;
    out.stages = solutions.front().stages_used;
    out.final_lambda = solutions.front().final_lambda;

    // 5. decoding and metrics
    for (std::size_t i = 0; i < out.signals.size(); ++i) {
        SignalOutcome &sig = out.signals[i];
        sig.theta_hat = std::move(solutions[i].theta_hat);
        sig.frame = std::visit([&](const auto &m) { return decide_symbols(sig.theta_hat, m); },
                               sig.model);
        sig.frame.ser =
            symbol_error_rate(sig.frame.atom_indices, sig.tx_indices, sig.frame.edge_symbols);
        sig.frame.nmse = nmse(sig.frame.reconstructed, sig.clean_waveform);
        sig.frame.eta = compression_ratio(sc.measurements, sc.num_samples);
        try {
            sig.rotation = estimate_rotation(sig.frame.symbols, sig.tx_symbols);
        } catch (const std::invalid_argument &) {
            sig.rotation = std::numeric_limits<double>::quiet_NaN();
        }
    }

    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

namespace detail {

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path &path) : out_(path) {
        out_ << std::setprecision(17);
        ok_ = static_cast<bool>(out_);
    }
    template <typename... Ts>
    void row(const Ts &...fields) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, out_ << fields), ...);
        out_ << "\n";
    }
    bool good() { return ok_ && static_cast<bool>(out_); }

  private:
    std::ofstream out_;
    bool ok_ = false;
};

inline bool write_signal_tables(const SignalOutcome &sig, const std::filesystem::path &dir,
                                const std::string &suffix) {
    CsvWriter constellation(dir / ("constellation" + suffix + ".csv"));
    constellation.row("symbol_index", "is_edge", "tx_atom", "tx_re", "tx_im", "raw_re", "raw_im",
                      "decided_atom", "decided_re", "decided_im");
    const int m_count = static_cast<int>(sig.tx_symbols.size());
    for (int m = 0; m < m_count; ++m) {
        const bool edge = m < sig.frame.edge_symbols || m >= m_count - sig.frame.edge_symbols;
        const int decided = sig.frame.atom_indices[static_cast<std::size_t>(m)];
        const Complex dec_pt =
            decided >= 0 ? sig.alphabet().atoms[static_cast<std::size_t>(decided)] : Complex(0, 0);
        constellation.row(m, edge ? 1 : 0, sig.tx_indices[static_cast<std::size_t>(m)],
                          sig.tx_symbols[m].real(), sig.tx_symbols[m].imag(),
                          sig.frame.symbols[m].real(), sig.frame.symbols[m].imag(), decided,
                          dec_pt.real(), dec_pt.imag());
    }

    CsvWriter theta(dir / ("theta" + suffix + ".csv"));
    theta.row("index", "block", "atom", "magnitude", "re", "im");
    const Eigen::Index j = sig.dict_size();
    for (Eigen::Index i = 0; i < sig.theta_hat.size(); ++i)
        theta.row(i, i / j, i % j, std::abs(sig.theta_hat[i]), sig.theta_hat[i].real(),
                  sig.theta_hat[i].imag());

    CsvWriter waveform(dir / ("waveform" + suffix + ".csv"));
    waveform.row("sample_index", "time_s", "tx_re", "tx_im", "recon_re", "recon_im");
    const double f_s = sig.spec.symbol_rate * sig.spec.n_s;
    for (Eigen::Index i = 0; i < sig.clean_waveform.size(); ++i)
        waveform.row(i, static_cast<double>(i) / f_s, sig.clean_waveform[i].real(),
                     sig.clean_waveform[i].imag(), sig.frame.reconstructed[i].real(),
                     sig.frame.reconstructed[i].imag());

    return constellation.good() && theta.good() && waveform.good();
}

} // namespace detail

/**
 * Run a scenario and write its artifacts (per-signal constellation/theta/
 * waveform tables plus one key=value report). Returns the process exit code:
 * 0 ok, 3 when the solver missed the residual budget (artifacts still
 * written), 4 on I/O failure.
 */
inline int run_scenario(const Scenario &scenario, const RunOptions &options = {}) {
    const RunOutcome outcome = simulate(scenario, options.seed_override);

    namespace fs = std::filesystem;
    const fs::path dir(options.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory '" << options.out_dir << "'\n";
        return kExitIo;
    }

    bool io_ok = true;
    for (std::size_t i = 0; i < outcome.signals.size(); ++i) {
        const std::string suffix =
            outcome.signals.size() > 1 ? "_s" + std::to_string(i + 1) : std::string();
        io_ok = detail::write_signal_tables(outcome.signals[i], dir, suffix) && io_ok;
    }

    std::ofstream report(dir / "report.txt");
    report << std::setprecision(17);
    report << "seed=" << outcome.seed << "\n";
    report << "K=" << outcome.measurements << "\n";
    report << "N=" << outcome.num_samples << "\n";
    report << "epsilon=" << outcome.epsilon << "\n";
    report << "converged=" << (outcome.converged ? 1 : 0) << "\n";
    report << "residual=" << outcome.residual_norm << "\n";
    report << "iterations=" << outcome.iterations << "\n";
    report << "continuation_stages=" << outcome.stages << "\n";
    report << "final_lambda=" << outcome.final_lambda << "\n";
    report << "runtime_s=" << outcome.runtime_seconds << "\n";
    for (std::size_t i = 0; i < outcome.signals.size(); ++i) {
        const SignalOutcome &sig = outcome.signals[i];
        const std::string p =
            outcome.signals.size() > 1 ? "s" + std::to_string(i + 1) + "_" : std::string();
        report << p << "scheme=" << scheme_name(sig.spec.scheme) << "\n";
        report << p << "dictionary="
               << (sig.spec.mode == DictionaryMode::PhaseGrid ? "phase-grid" : "alphabet-atom")
               << "\n";
        report << p << "M=" << sig.spec.num_symbols << "\n";
        report << p << "J=" << sig.dict_size() << "\n";
        report << p << "n_s=" << sig.spec.n_s << "\n";
        report << p << "f_c=" << sig.spec.f_c << "\n";
        report << p << "R_s=" << sig.spec.symbol_rate << "\n";
        report << p << "ser=" << sig.frame.ser << "\n";
        report << p << "nmse=" << sig.frame.nmse << "\n";
        report << p << "lambda0=" << sig.frame.lambda0 << "\n";
        report << p << "eta=" << sig.frame.eta << "\n";
        report << p << "rotation_rad=" << sig.rotation << "\n";
        report << p << "edge_symbols=" << sig.frame.edge_symbols << "\n";
    }
    io_ok = io_ok && static_cast<bool>(report);
    report.close();

    if (!options.quiet) {
        std::cout << "K=" << outcome.measurements << " N=" << outcome.num_samples
                  << " eta=" << compression_ratio(outcome.measurements, outcome.num_samples)
                  << " converged=" << (outcome.converged ? "yes" : "no")
                  << " residual=" << outcome.residual_norm << " (budget " << outcome.epsilon << ")\n";
        for (std::size_t i = 0; i < outcome.signals.size(); ++i) {
            const SignalOutcome &sig = outcome.signals[i];
            std::cout << "  signal " << (i + 1) << " [" << scheme_name(sig.spec.scheme)
                      << "]: ser=" << sig.frame.ser << " nmse=" << sig.frame.nmse
                      << " lambda0=" << sig.frame.lambda0 << " rotation=" << sig.rotation << "\n";
        }
    }

    if (!io_ok) return kExitIo;
    return outcome.converged ? kExitOk : kExitNonConvergence;
}

struct SweepRow {
    std::string scheme;
    Eigen::Index dict_size = 0;
    Eigen::Index measurements = 0;
    int seeds = 0;
    int successes = 0;
    double success_rate = 0.0;
};

/**
 * Phase-transition sweep: for every grid point, the fraction of seeds with
 * exact recovery of all scored symbols. Seeds run base_seed .. base_seed+n-1.
 */
inline std::vector<SweepRow> run_sweep(const SweepSpec &sweep,
                                       const SolverConfig &solver_defaults = {}) {
    std::vector<SweepRow> rows;
    const std::size_t points = sweep.k_grid.empty() ? sweep.c_grid.size() : sweep.k_grid.size();
    for (std::size_t g = 0; g < points; ++g) {
        Scenario sc = sweep.base;
        if (!sweep.k_grid.empty()) sc.measurements = sweep.k_grid[g];
        else sc.c = sweep.c_grid[g];
        validate_scenario(sc);

        SweepRow row;
        row.scheme = scheme_name(sc.signals.front().scheme);
        row.dict_size = sc.signals.front().dict_size;
        row.measurements = sc.measurements;
        row.seeds = sweep.num_seeds;
        for (int s = 0; s < sweep.num_seeds; ++s) {
            const RunOutcome outcome =
                simulate(sc, sweep.base.seed + static_cast<std::uint64_t>(s), solver_defaults);
            if (outcome.converged && outcome.all_symbols_recovered()) ++row.successes;
        }
        row.success_rate = static_cast<double>(row.successes) / row.seeds;
        rows.push_back(row);
    }
    return rows;
}

inline int write_sweep_table(const std::vector<SweepRow> &rows, const RunOptions &options) {
    namespace fs = std::filesystem;
    const fs::path dir(options.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return kExitIo;
    std::ofstream out(dir / "sweep.csv");
    out << "scheme,J,K,seeds,successes,success_rate\n";
    out << std::setprecision(17);
    for (const SweepRow &r : rows) {
        out << r.scheme << "," << r.dict_size << "," << r.measurements << "," << r.seeds << ","
            << r.successes << "," << r.success_rate << "\n";
        if (!options.quiet)
            std::cout << r.scheme << " J=" << r.dict_size << " K=" << r.measurements << " -> "
                      << r.successes << "/" << r.seeds << " (" << r.success_rate << ")\n";
    }
    return out ? kExitOk : kExitIo;
}

} // namespace phasecs
