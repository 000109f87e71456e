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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "phasecs/runner.hpp"
#include "phasecs/scenario.hpp"

using namespace phasecs;
using Catch::Approx;

namespace {

Scenario from_string(const std::string &text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

const std::string kSmallScenario = R"(
seed = 7
K = 48
f_s = 800
scheme = psk
psk_order = 4
M = 12
dictionary = alphabet-atom
alpha = 0.35
span_symbols = 4
f_c = 200
R_s = 100
)";

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("bundled scenarios parse and validate") {
    const std::filesystem::path dir(PHASECS_SCENARIO_DIR);
    const auto fig2 = parse_scenario_file((dir / "qpsk_fig2.scn").string());
    CHECK(fig2.signals.size() == 1);
    CHECK(fig2.measurements == 192);
    CHECK(fig2.num_samples == 1024);
    CHECK(fig2.signals[0].n_s == 16);
    CHECK(fig2.signals[0].mode == DictionaryMode::PhaseGrid);
    CHECK(fig2.signals[0].dict_size == 8);
    CHECK(compression_ratio(fig2.measurements, fig2.num_samples) == Approx(0.1875));

    const auto fig6 = parse_scenario_file((dir / "mixed_fig6.scn").string());
    CHECK(fig6.signals.size() == 2);
    CHECK(fig6.signals[0].n_s == 32);
    CHECK(fig6.signals[1].n_s == 16);
    CHECK(fig6.num_samples == 512);
    // K = ceil(3*16*ln 4) + ceil(3*16*ln 16) = 67 + 134
    CHECK(fig6.measurements == 201);

    for (const char *name : {"qam16_fig3.scn", "apsk_fig4.scn", "oqpsk_fig5.scn",
                             "impair_fig7a.scn", "impair_fig7d.scn", "qam16_grid.scn",
                             "qpsk_small.scn"})
        CHECK_NOTHROW(parse_scenario_file((dir / name).string()));

    const auto sweep = parse_sweep_file((dir / "sweep_psk_j8.swp").string());
    CHECK(sweep.c_grid.size() == 4);
    CHECK(sweep.num_seeds == 20);
}

TEST_CASE("scenario validation failures carry diagnostics") {
    // K = 0
    CHECK_THROWS_AS(from_string("K = 0\nf_s = 800\nscheme = psk\nM = 12\nR_s = 100\n"
                                "span_symbols = 4\nf_c = 200\n"),
                    ScenarioError);
    // non-integer f_s / R_s
    CHECK_THROWS_WITH(from_string("K = 48\nf_s = 800\nscheme = psk\nM = 12\nR_s = 300\n"
                                  "span_symbols = 4\nf_c = 200\n"),
                      Catch::Matchers::ContainsSubstring("integer multiple"));
    // aliasing carrier
    CHECK_THROWS_WITH(from_string("K = 48\nf_s = 800\nscheme = psk\nM = 12\nR_s = 100\n"
                                  "span_symbols = 4\nf_c = 400\n"),
                      Catch::Matchers::ContainsSubstring("f_c"));
    // K > N
    CHECK_THROWS_WITH(from_string("K = 97\nf_s = 800\nscheme = psk\nM = 12\nR_s = 100\n"
                                  "span_symbols = 4\nf_c = 200\n"),
                      Catch::Matchers::ContainsSubstring("exceeds"));
    // unknown key reports its line
    try {
        from_string("seed = 1\nK = 48\nbogus_key = 3\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError &e) {
        CHECK(e.line() == 3);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("bogus_key"));
    }
    // duplicate key
    CHECK_THROWS_WITH(from_string("K = 48\nK = 49\n"),
                      Catch::Matchers::ContainsSubstring("duplicate"));
    // K and c are mutually exclusive
    CHECK_THROWS_WITH(from_string("K = 48\nc = 3\n"),
                      Catch::Matchers::ContainsSubstring("only one of"));
    // phase-grid is not available for offset schemes
    CHECK_THROWS_WITH(from_string("K = 48\nf_s = 800\nscheme = oqpsk\nM = 12\nR_s = 100\n"
                                  "span_symbols = 4\nf_c = 200\ndictionary = phase-grid\nJ = 8\n"),
                      Catch::Matchers::ContainsSubstring("alphabet-atom"));
    // alphabet-atom J must match the alphabet
    CHECK_THROWS_WITH(from_string("K = 48\nf_s = 800\nscheme = psk\npsk_order = 4\nM = 12\n"
                                  "R_s = 100\nspan_symbols = 4\nf_c = 200\nJ = 8\n"),
                      Catch::Matchers::ContainsSubstring("alphabet size"));
    // timing offset beyond one symbol
    CHECK_THROWS_WITH(from_string("K = 48\nf_s = 800\ntiming_offset = 8\nscheme = psk\nM = 12\n"
                                  "R_s = 100\nspan_symbols = 4\nf_c = 200\n"),
                      Catch::Matchers::ContainsSubstring("timing_offset"));
}

TEST_CASE("simulate recovers the small scenario and is deterministic") {
    const Scenario sc = from_string(kSmallScenario);
    const RunOutcome a = simulate(sc);
    REQUIRE(a.converged);
    CHECK(a.signals.size() == 1);
    CHECK(a.signals[0].frame.ser == 0.0);
    CHECK(a.signals[0].frame.nmse < 1e-6);

    const RunOutcome b = simulate(sc);
    CHECK((a.signals[0].theta_hat - b.signals[0].theta_hat).norm() == 0.0);

    // a different seed gives different symbols
    const RunOutcome c = simulate(sc, 8);
    CHECK(c.signals[0].tx_indices != a.signals[0].tx_indices);
}

TEST_CASE("complex measurement matrices are available behind a scenario flag") {
    const Scenario sc = from_string("complex_phi = true\n" + kSmallScenario);
    REQUIRE(sc.complex_phi);
    const RunOutcome o = simulate(sc);
    REQUIRE(o.converged);
    CHECK(o.signals[0].frame.ser == 0.0);
}

TEST_CASE("run_scenario writes the artifact set") {
    const Scenario sc = from_string(kSmallScenario);
    const auto dir = std::filesystem::temp_directory_path() / "phasecs_run_test";
    std::filesystem::remove_all(dir);

    RunOptions opt;
    opt.out_dir = dir.string();
    opt.quiet = true;
    CHECK(run_scenario(sc, opt) == kExitOk);

    for (const char *name : {"constellation.csv", "theta.csv", "waveform.csv", "report.txt"})
        CHECK(std::filesystem::exists(dir / name));

    const std::string report = read_file(dir / "report.txt");
    CHECK_THAT(report, Catch::Matchers::ContainsSubstring("ser=0"));
    CHECK_THAT(report, Catch::Matchers::ContainsSubstring("converged=1"));
    CHECK_THAT(report, Catch::Matchers::ContainsSubstring("eta="));

    // identical scenario and seed -> bit-identical artifacts
    const std::string theta_first = read_file(dir / "theta.csv");
    const auto dir2 = std::filesystem::temp_directory_path() / "phasecs_run_test2";
    std::filesystem::remove_all(dir2);
    RunOptions opt2 = opt;
    opt2.out_dir = dir2.string();
    CHECK(run_scenario(sc, opt2) == kExitOk);
    CHECK(read_file(dir2 / "theta.csv") == theta_first);

    // multi-signal scenarios emit per-signal tables
    const std::filesystem::path scen_dir(PHASECS_SCENARIO_DIR);
    const auto fig6 = parse_scenario_file((scen_dir / "mixed_fig6.scn").string());
    const auto dir3 = std::filesystem::temp_directory_path() / "phasecs_run_test3";
    std::filesystem::remove_all(dir3);
    RunOptions opt3 = opt;
    opt3.out_dir = dir3.string();
    CHECK(run_scenario(fig6, opt3) == kExitOk);
    for (const char *name : {"constellation_s1.csv", "constellation_s2.csv", "theta_s1.csv",
                             "theta_s2.csv", "waveform_s1.csv", "waveform_s2.csv", "report.txt"})
        CHECK(std::filesystem::exists(dir3 / name));
    const std::string report6 = read_file(dir3 / "report.txt");
    CHECK_THAT(report6, Catch::Matchers::ContainsSubstring("s1_ser="));
    CHECK_THAT(report6, Catch::Matchers::ContainsSubstring("s2_ser="));
}

TEST_CASE("an unreachable residual budget exits 3 but still writes artifacts") {
    // overdetermined (K > J*M) and noisy, with a budget below the noise floor
    const Scenario sc = from_string(
        "K = 64\nepsilon = 1e-8\nsnr_db = 0\nf_s = 800\nscheme = psk\npsk_order = 4\n"
        "M = 12\ndictionary = alphabet-atom\nalpha = 0.35\nspan_symbols = 4\n"
        "f_c = 200\nR_s = 100\n");
    const auto dir = std::filesystem::temp_directory_path() / "phasecs_nonconv_test";
    std::filesystem::remove_all(dir);
    RunOptions opt;
    opt.out_dir = dir.string();
    opt.quiet = true;
    CHECK(run_scenario(sc, opt) == kExitNonConvergence);
    for (const char *name : {"constellation.csv", "theta.csv", "waveform.csv", "report.txt"})
        CHECK(std::filesystem::exists(dir / name));
    CHECK_THAT(read_file(dir / "report.txt"), Catch::Matchers::ContainsSubstring("converged=0"));
}

TEST_CASE("run_sweep emits one row per grid point with rates in range") {
    SweepSpec sweep;
    std::istringstream in("seed = 1\nf_s = 800\nK_grid = 24, 96\nseeds = 3\nscheme = psk\n"
                          "psk_order = 4\nM = 12\ndictionary = alphabet-atom\nalpha = 0.35\n"
                          "span_symbols = 4\nf_c = 200\nR_s = 100\n");
    sweep = parse_sweep(in);
    const auto rows = run_sweep(sweep);
    REQUIRE(rows.size() == 2);
    for (const auto &r : rows) {
        CHECK(r.seeds == 3);
        CHECK(r.success_rate >= 0.0);
        CHECK(r.success_rate <= 1.0);
    }
    CHECK(rows[1].success_rate >= rows[0].success_rate);
    CHECK(rows[1].success_rate == 1.0); // K = N recovers everything noiseless
}
